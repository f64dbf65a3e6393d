#include <benchmark/benchmark.h>

#include "irsbc/baselines.hpp"
#include "irsbc/experiments.hpp"

namespace {

using namespace irsbc;

ChannelRealization make_channel(int n, std::uint64_t seed) {
  ScenarioConfig scenario;
  scenario.n_subsurfaces = n;
  SeededRng rng(seed);
  return realize_channels(scenario, rng);
}

void BM_RealizeChannels(benchmark::State& state) {
  ScenarioConfig scenario;
  scenario.n_subsurfaces = static_cast<int>(state.range(0));
  SeededRng rng(42);
  for (auto _ : state) {
    benchmark::DoNotOptimize(realize_channels(scenario, rng));
  }
}
BENCHMARK(BM_RealizeChannels)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

void BM_ProposedPipeline(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChannelRealization ch = make_channel(n, 42);
  const TrainingPlan plan = dft_training(n + 1, n);
  SeededRng rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_proposed(plan, ch, 1e-14, rng));
  }
}
BENCHMARK(BM_ProposedPipeline)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

void BM_TraceInverseGram(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const TrainingMatrix mat = build_training_matrix(dft_training(n + 1, n));
  for (auto _ : state) {
    benchmark::DoNotOptimize(trace_inverse_gram(mat.a));
  }
}
BENCHMARK(BM_TraceInverseGram)->Arg(5)->Arg(10)->Arg(20)->Arg(40);

// Exponential in N: the reason the exhaustive baseline is impractical.
void BM_Baseline3(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const ChannelRealization ch = make_channel(n, 42);
  SeededRng rng(7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(baseline3_estimate(ch, 1e-14, n, 1, rng));
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Baseline3)->DenseRange(4, 14, 2);

void BM_PhaseGridSearch(benchmark::State& state) {
  const TrainingPlan plan = dft_training(11, 10);
  for (auto _ : state) {
    benchmark::DoNotOptimize(phase_grid_search(plan.reflections, 720));
  }
}
BENCHMARK(BM_PhaseGridSearch);

}  // namespace

BENCHMARK_MAIN();
