#include "irsbc/validation.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

namespace irsbc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string fmt_sci(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

ComplexVector random_unit_vector(Eigen::Index n, SeededRng& rng) {
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    v(i) = std::polar(1.0, rng.uniform(0.0, kTwoPi));
  }
  return v;
}

ValidationEntry check_lemma1_identity(SeededRng rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng.uniform(0.0, 16.0));
    const ReflectionVector v(random_unit_vector(n, rng));
    const Complex h_d = rng.standard_complex_gaussian();
    const ComplexVector h_c = rng.complex_gaussian_vector(n);
    const ChannelRealization ch(h_d, ComplexVector::Ones(n), h_c);
    const Complex direct = reader_received(v, ch, 0.0);
    const Complex lifted = hermitian_product(lift_reflection(v).a,
                                             lift_channel(h_d, h_c).g);
    worst = std::max(worst, std::abs(direct - lifted) / std::abs(lifted));
  }
  return ValidationEntry{"lemma1_lift_identity", worst <= 1e-10,
                         "max relative gap " + fmt_sci(worst)};
}

ValidationEntry check_optimal_gram(int n) {
  const TrainingPlan plan = dft_training(n + 1, n);
  const TrainingMatrix mat = build_training_matrix(plan);
  const ComplexMatrix gram = mat.a.adjoint() * mat.a;
  const double target = 3.0 * plan.num_subblocks;
  double worst = 0.0;
  for (Eigen::Index i = 0; i < gram.rows(); ++i) {
    for (Eigen::Index j = 0; j < gram.cols(); ++j) {
      const Complex expected = i == j ? Complex(target, 0.0) : Complex(0.0);
      worst = std::max(worst, std::abs(gram(i, j) - expected));
    }
  }
  return ValidationEntry{"optimal_gram_identity", worst <= 1e-10,
                         "max |A^H A - 3K I| = " + fmt_sci(worst)};
}

ValidationEntry check_gram_closed_form(SeededRng rng) {
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    TrainingPlan plan;
    plan.n_subsurfaces = 1 + static_cast<int>(rng.uniform(0.0, 6.0));
    plan.num_subblocks =
        plan.n_subsurfaces + 1 + static_cast<int>(rng.uniform(0.0, 4.0));
    plan.phi = optimal_phase();
    plan.reflections.resize(plan.num_subblocks, plan.n_subsurfaces);
    for (int k = 0; k < plan.num_subblocks; ++k) {
      plan.reflections.row(k) =
          random_unit_vector(plan.n_subsurfaces, rng).transpose();
    }
    const TrainingMatrix mat = build_training_matrix(plan);
    const ComplexMatrix direct = mat.a.adjoint() * mat.a;
    const ComplexMatrix closed = gram_closed_form(plan);
    worst = std::max(worst, (direct - closed).cwiseAbs().maxCoeff());
  }
  return ValidationEntry{"gram_closed_form_match", worst <= 1e-12,
                         "max entry gap " + fmt_sci(worst)};
}

ValidationEntry check_noiseless_recovery(const ScenarioConfig& scenario,
                                         SeededRng rng) {
  ScenarioConfig cfg = scenario;
  if (cfg.n_subsurfaces < 1) cfg.n_subsurfaces = 10;
  const TrainingPlan plan = dft_training(cfg.n_subsurfaces + 1,
                                         cfg.n_subsurfaces);
  double worst_rel = 0.0;
  double worst_phase = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    SeededRng ch_rng = rng.derive(trial);
    const ChannelRealization ch = realize_channels(cfg, ch_rng);
    const Estimate est = run_proposed(plan, ch, 0.0, ch_rng);
    const ComplexVector truth = true_channel_head(ch);
    worst_rel = std::max(worst_rel,
                         (est.g_hat - truth).norm() / truth.norm());
    const ComplexVector v_est =
        reflection_from_estimate(est.g_hat).reflection.coefficients();
    const ComplexVector v_opt =
        optimal_reflection(ch.h_d, ch.h_c).reflection.coefficients();
    for (Eigen::Index i = 0; i < v_est.size(); ++i) {
      worst_phase = std::max(worst_phase,
                             std::abs(std::arg(v_est(i) * std::conj(v_opt(i)))));
    }
  }
  const bool pass = worst_rel <= 1e-9 && worst_phase <= 1e-8;
  return ValidationEntry{"noiseless_recovery", pass,
                         "max relative error " + fmt_sci(worst_rel) +
                             ", max phase gap " + fmt_sci(worst_phase)};
}

ValidationEntry check_mse_law(SeededRng rng) {
  const int n = 4;
  const int k = n + 1;
  const double noise_ratio = 1e-3;
  const TrainingPlan plan = dft_training(k, n);
  const TrainingMatrix mat = build_training_matrix(plan);
  SeededRng ch_rng = rng.derive(1);
  ScenarioConfig scenario;
  scenario.n_subsurfaces = n;
  const ChannelRealization ch = realize_channels(scenario, ch_rng);
  const ComplexVector truth = true_channel_head(ch);

  double sum = 0.0;
  const int draws = 10000;
  for (int d = 0; d < draws; ++d) {
    SeededRng noise_rng = rng.derive(100 + d);
    const Estimate est = run_proposed(plan, ch, noise_ratio, noise_rng);
    sum += (est.g_hat - truth).squaredNorm();
  }
  const double empirical = sum / draws;
  const double expected = theoretical_mse(mat, noise_ratio);
  const double rel = std::abs(empirical - expected) / expected;
  return ValidationEntry{"mse_matches_theory", rel <= 0.05,
                         "empirical/theory - 1 = " + fmt_sci(rel)};
}

ValidationEntry check_phase_grid_search() {
  // At N=2 the balanced phase 2 pi / 3 is the exact trace minimizer and the
  // grid search must recover it. For larger N the unconstrained minimizer
  // moves (reported in the detail); there the pinned identity is that the
  // 2 pi / 3 plan attains trace (N+1)/(3K), the balanced-diagonal optimum.
  const TrainingPlan plan2 = dft_training(3, 2);
  const double found2 = phase_grid_search(plan2.reflections, 720);
  const double gap2 = std::abs(found2 - optimal_phase());
  const bool recover_ok = gap2 <= kTwoPi / 720 + 1e-12;

  const int n = 10;
  const TrainingPlan plan10 = dft_training(n + 1, n);
  const double trace_balanced =
      trace_inverse_gram(build_training_matrix(plan10).a);
  const double expected = static_cast<double>(n + 1) / (3.0 * (n + 1));
  const bool trace_ok = std::abs(trace_balanced - expected) <= 1e-10;
  const double found10 = phase_grid_search(plan10.reflections, 720);

  return ValidationEntry{
      "phase_grid_search", recover_ok && trace_ok,
      "N=2 argmin off 2pi/3 by " + fmt_sci(gap2) + " rad; N=10 trace at "
      "2pi/3 - (N+1)/(3K) = " + fmt_sci(trace_balanced - expected) +
          " (unconstrained N=10 argmin " + fmt_sci(found10) + " rad)"};
}

ValidationEntry check_b_matrix() {
  ComplexMatrix b(2, 3);
  b << 1.0, 1.0, 1.0, 1.0, std::polar(1.0, kTwoPi / 3.0),
      std::polar(1.0, 2.0 * kTwoPi / 3.0);
  const ComplexMatrix prod = b * b.adjoint();
  const ComplexMatrix target = 3.0 * ComplexMatrix::Identity(2, 2);
  const double worst = (prod - target).cwiseAbs().maxCoeff();
  return ValidationEntry{"b_matrix_orthogonality", worst <= 1e-12,
                         "max |B B^H - 3 I| = " + fmt_sci(worst)};
}

ValidationEntry check_cancellation(SeededRng rng) {
  // The difference must depend only on (h_d^2, h_d v^H h_c): replace the
  // quadratic term with an arbitrary perturbation and the output must not
  // move.
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double phi = rng.uniform(0.0, kTwoPi);
    const Complex h_d2 = rng.standard_complex_gaussian();
    const Complex cross = rng.standard_complex_gaussian();
    const Complex w_true = rng.standard_complex_gaussian();
    const Complex w_fake = rng.standard_complex_gaussian();
    const Complex rot = std::exp(Complex(0.0, phi));
    const auto pair_for = [&](Complex w) {
      const Complex y1 = h_d2 + 2.0 * cross + w;
      const Complex y2 = h_d2 + 2.0 * rot * cross + rot * rot * w;
      return difference(y1, y2, phi);
    };
    worst = std::max(worst, std::abs(pair_for(w_true) - pair_for(w_fake)));
  }
  return ValidationEntry{"difference_cancellation", worst <= 1e-12,
                         "max output movement " + fmt_sci(worst)};
}

ValidationEntry check_training_optimality(std::optional<double> sabotage_phi) {
  TrainingPlan plan = dft_training(11, 10);
  if (sabotage_phi) plan.phi = *sabotage_phi;
  const OptimalityReport report = verify_training_optimality(plan);
  std::string detail = report.ok() ? "all conditions met" : "";
  for (const std::string& v : report.violations) {
    if (!detail.empty()) detail += "; ";
    detail += v;
  }
  return ValidationEntry{"training_optimality", report.ok(), detail};
}

ValidationEntry check_scheme_noiseless(const SchemeSpec& spec,
                                       const ScenarioConfig& scenario,
                                       SeededRng rng) {
  ScenarioConfig cfg = scenario;
  if (cfg.n_subsurfaces < 1) cfg.n_subsurfaces = 10;
  const int n = cfg.n_subsurfaces;
  SeededRng ch_rng = rng.derive(7);
  const ChannelRealization ch = realize_channels(cfg, ch_rng);
  const ComplexVector truth = true_channel_head(ch);
  const std::string name = "scheme_noiseless:" + spec.label;

  switch (spec.scheme) {
    case Scheme::kPerfectCsi: {
      const BaselineResult r = perfect_csi_design(ch);
      const double reached = std::abs(tag_received(r.reflection, ch));
      const double bound = std::abs(ch.h_d) + ch.h_c.cwiseAbs().sum();
      const double gap = std::abs(reached - bound);
      return ValidationEntry{name, gap <= 1e-12 * bound,
                             "triangle-equality gap " + fmt_sci(gap)};
    }
    case Scheme::kProposed: {
      const Estimate est =
          run_proposed(dft_training(n + 1, n), ch, 0.0, ch_rng);
      const double rel = (est.g_hat - truth).norm() / truth.norm();
      return ValidationEntry{name, rel <= 1e-9,
                             "relative error " + fmt_sci(rel)};
    }
    case Scheme::kBaseline1: {
      const BaselineResult r = baseline1_estimate(ch, 0.0, n + 1, n, ch_rng);
      const double rel = (*r.g_hat - truth).norm() / truth.norm();
      return ValidationEntry{name, rel <= 1e-8,
                             "relative error " + fmt_sci(rel)};
    }
    case Scheme::kBaseline2: {
      const BaselineResult r = baseline2_select(ch, 0.0, 2 * (n + 1), ch_rng);
      // Noiseless selection must reach the best candidate power.
      double best = 0.0;
      for (int q = 0; q < 2 * (n + 1); ++q) {
        ComplexVector v(n);
        for (int kk = 0; kk < n; ++kk) {
          v(kk) = std::polar(1.0, -kTwoPi * kk * q / (2.0 * (n + 1)));
        }
        best = std::max(best,
                        std::norm(reader_received(ReflectionVector(v), ch, 0.0)));
      }
      const double got = std::norm(reader_received(r.reflection, ch, 0.0));
      const double gap = std::abs(got - best);
      return ValidationEntry{name, gap <= 1e-9 * best,
                             "argmax power gap " + fmt_sci(gap)};
    }
    case Scheme::kBaseline3: {
      const int omega2 = spec.omega2_size == 0 ? n + 1 : spec.omega2_size;
      const BaselineResult r =
          baseline3_estimate(ch, 0.0, n, omega2, ch_rng);
      return ValidationEntry{name, r.testing_mse && *r.testing_mse <= 1e-18,
                             "testing MSE " + fmt_sci(*r.testing_mse)};
    }
  }
  return ValidationEntry{name, false, "unknown scheme"};
}

}  // namespace

bool ValidationReport::all_pass() const {
  for (const ValidationEntry& e : entries) {
    if (!e.pass) return false;
  }
  return true;
}

nlohmann::json ValidationReport::to_json() const {
  nlohmann::json checks = nlohmann::json::array();
  for (const ValidationEntry& e : entries) {
    checks.push_back({{"name", e.name}, {"pass", e.pass}, {"detail", e.detail}});
  }
  return nlohmann::json{{"all_pass", all_pass()}, {"checks", checks}};
}

ValidationReport run_validation_suite(const ExperimentConfig& config,
                                      std::optional<double> sabotage_phi) {
  config.validate();
  const SeededRng master(config.seed);
  ValidationReport report;
  report.entries.push_back(check_lemma1_identity(master.derive(11)));
  report.entries.push_back(check_optimal_gram(10));
  report.entries.push_back(check_gram_closed_form(master.derive(12)));
  report.entries.push_back(
      check_noiseless_recovery(config.scenario, master.derive(13)));
  report.entries.push_back(check_mse_law(master.derive(14)));
  report.entries.push_back(check_phase_grid_search());
  report.entries.push_back(check_b_matrix());
  report.entries.push_back(check_cancellation(master.derive(15)));
  report.entries.push_back(check_training_optimality(sabotage_phi));
  const std::vector<SchemeSpec> specs = config.scheme_specs();
  for (std::size_t s = 0; s < specs.size(); ++s) {
    report.entries.push_back(check_scheme_noiseless(
        specs[s], config.scenario, master.derive(1000 + s)));
  }
  return report;
}

}  // namespace irsbc
