#include "irsbc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace irsbc {

namespace {

// Stream ids for deriving independent RNG lanes from the master seed.
constexpr std::uint64_t kChannelStream = 0xC4A27E01;
constexpr std::uint64_t kEstimationStream = 0xE5717A7E;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct TrialEval {
  ReflectionVector reflection{ComplexVector(0)};
  std::optional<double> squared_error;  // ||g_hat - g_true||^2
  int budget = 0;
};

TrialEval evaluate_scheme(const SchemeSpec& spec, const ChannelRealization& ch,
                          double noise_ratio, SeededRng rng) {
  const int n = static_cast<int>(ch.n());
  TrialEval eval;
  switch (spec.scheme) {
    case Scheme::kPerfectCsi: {
      BaselineResult r = perfect_csi_design(ch);
      eval.reflection = std::move(r.reflection);
      eval.budget = r.training_symbols;
      break;
    }
    case Scheme::kProposed: {
      const TrainingPlan plan = dft_training(n + 1, n);
      const Estimate est = run_proposed(plan, ch, noise_ratio, rng);
      eval.reflection = reflection_from_estimate(est.g_hat).reflection;
      eval.squared_error = (est.g_hat - true_channel_head(ch)).squaredNorm();
      eval.budget = 2 * (n + 1);
      break;
    }
    case Scheme::kBaseline1: {
      BaselineResult r = baseline1_estimate(ch, noise_ratio, n + 1, n, rng);
      eval.squared_error = (*r.g_hat - true_channel_head(ch)).squaredNorm();
      eval.reflection = std::move(r.reflection);
      eval.budget = r.training_symbols;
      break;
    }
    case Scheme::kBaseline2: {
      BaselineResult r = baseline2_select(ch, noise_ratio, 2 * (n + 1), rng);
      eval.reflection = std::move(r.reflection);
      eval.budget = r.training_symbols;
      break;
    }
    case Scheme::kBaseline3: {
      const int omega2 = spec.omega2_size == 0 ? n + 1 : spec.omega2_size;
      BaselineResult r = baseline3_estimate(ch, noise_ratio, n, omega2, rng);
      eval.squared_error = (*r.g_hat - true_channel_head(ch)).squaredNorm();
      eval.reflection = std::move(r.reflection);
      eval.budget = r.training_symbols;
      break;
    }
  }
  return eval;
}

struct SnrStats {
  double mean = 0.0;
  double stderr_mean = 0.0;
};

// Mean and standard error in the configured averaging domain; the linear
// domain converts the mean back to dB with a delta-method standard error.
SnrStats snr_stats(const std::vector<double>& snr_db, bool db_domain) {
  const std::size_t n = snr_db.size();
  SnrStats out;
  if (n == 0) return out;
  if (db_domain) {
    double sum = 0.0;
    for (double v : snr_db) sum += v;
    out.mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (double v : snr_db) ss += (v - out.mean) * (v - out.mean);
    const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
    out.stderr_mean = std::sqrt(var / static_cast<double>(n));
    return out;
  }
  double sum = 0.0;
  for (double v : snr_db) sum += db_to_linear(v);
  const double mean_lin = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : snr_db) {
    const double d = db_to_linear(v) - mean_lin;
    ss += d * d;
  }
  const double var = n > 1 ? ss / static_cast<double>(n - 1) : 0.0;
  const double se_lin = std::sqrt(var / static_cast<double>(n));
  out.mean = 10.0 * std::log10(mean_lin);
  out.stderr_mean = 10.0 / std::log(10.0) * se_lin / mean_lin;
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  scenario.validate();
  if (trials < 1) throw ConfigError("trials must be >= 1");
  if (noise_ratios_db.empty()) throw ConfigError("noise_ratios_db is empty");
  if (n_values.empty()) throw ConfigError("n_values is empty");
  for (int n : n_values) {
    if (n < 0) throw ConfigError("n_values entries must be >= 0");
  }
  if (omega2_sizes.empty()) throw ConfigError("omega2_sizes is empty");
  for (int w : omega2_sizes) {
    if (w < 0) throw ConfigError("omega2_sizes entries must be >= 0 (0 = N+1)");
  }
  if (snr_average_domain != "db" && snr_average_domain != "linear") {
    throw ConfigError("snr_average_domain must be 'db' or 'linear'");
  }
  if (baseline3_sweep_n_cap < 0 ||
      baseline3_sweep_n_cap > kBaseline3MaxSubsurfaces) {
    throw ConfigError("baseline3_sweep_n_cap must be in [0, " +
                      std::to_string(kBaseline3MaxSubsurfaces) + "]");
  }
  for (const std::string& name : schemes) {
    if (!scheme_from_string(name)) {
      throw ConfigError("unknown scheme '" + name + "'");
    }
  }
}

std::vector<SchemeSpec> ExperimentConfig::scheme_specs() const {
  std::vector<SchemeSpec> specs;
  for (const std::string& name : schemes) {
    const Scheme scheme = *scheme_from_string(name);
    if (scheme != Scheme::kBaseline3) {
      specs.push_back(SchemeSpec{scheme, 1, name});
      continue;
    }
    for (int w : omega2_sizes) {
      std::string label = "baseline3";
      if (omega2_sizes.size() > 1) {
        label += w == 0 ? "_o2_np1" : "_o2_" + std::to_string(w);
      }
      specs.push_back(SchemeSpec{scheme, w, std::move(label)});
    }
  }
  return specs;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  static const std::vector<std::string> known = {
      "scenario",       "schemes",          "trials",
      "seed",           "noise_ratios_db",  "n_values",
      "omega2_sizes",   "output_dir",       "snr_average_domain",
      "record_per_trial", "baseline3_sweep_n_cap",
  };
  if (!j.is_object()) throw ConfigError("config: expected an object");
  for (const auto& item : j.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      throw ConfigError("config: unknown key '" + item.key() + "'");
    }
  }
  ExperimentConfig c;
  try {
    if (j.contains("scenario"))
      c.scenario = ScenarioConfig::from_json(j.at("scenario"));
    if (j.contains("schemes"))
      c.schemes = j.at("schemes").get<std::vector<std::string>>();
    if (j.contains("trials")) c.trials = j.at("trials");
    if (j.contains("seed")) c.seed = j.at("seed");
    if (j.contains("noise_ratios_db"))
      c.noise_ratios_db = j.at("noise_ratios_db").get<std::vector<double>>();
    if (j.contains("n_values"))
      c.n_values = j.at("n_values").get<std::vector<int>>();
    if (j.contains("omega2_sizes"))
      c.omega2_sizes = j.at("omega2_sizes").get<std::vector<int>>();
    if (j.contains("output_dir")) c.output_dir = j.at("output_dir");
    if (j.contains("snr_average_domain"))
      c.snr_average_domain = j.at("snr_average_domain");
    if (j.contains("record_per_trial"))
      c.record_per_trial = j.at("record_per_trial");
    if (j.contains("baseline3_sweep_n_cap"))
      c.baseline3_sweep_n_cap = j.at("baseline3_sweep_n_cap");
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) {
    throw ConfigError("cannot open config file " + file.string());
  }
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("cannot parse " + file.string() + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario.to_json();
  j["schemes"] = schemes;
  j["trials"] = trials;
  j["seed"] = seed;
  j["noise_ratios_db"] = noise_ratios_db;
  j["n_values"] = n_values;
  j["omega2_sizes"] = omega2_sizes;
  j["output_dir"] = output_dir;
  j["snr_average_domain"] = snr_average_domain;
  j["record_per_trial"] = record_per_trial;
  j["baseline3_sweep_n_cap"] = baseline3_sweep_n_cap;
  return j;
}

SweepResult run_snr_sweep(const ExperimentConfig& config) {
  config.validate();
  const std::vector<SchemeSpec> specs = config.scheme_specs();
  const bool db_domain = config.snr_average_domain == "db";
  const SeededRng master(config.seed);

  // One channel set, shared across all noise points and schemes.
  std::vector<ChannelRealization> channels;
  channels.reserve(config.trials);
  for (int t = 0; t < config.trials; ++t) {
    SeededRng rng = master.derive(kChannelStream).derive(t);
    channels.push_back(realize_channels(config.scenario, rng));
  }

  SweepResult result;
  result.sweep_kind = "snr-sweep";
  result.axis_name = "noise_ratio_db";

  for (std::size_t p = 0; p < config.noise_ratios_db.size(); ++p) {
    const double noise_db = config.noise_ratios_db[p];
    const double noise_ratio = db_to_linear(noise_db);
    result.axis_values.push_back(noise_db);

    double ref_sum = 0.0;
    for (const ChannelRealization& ch : channels) {
      ref_sum += reference_snr_db(noise_ratio, ch.h_d);
    }
    result.mean_reference_snr_db.push_back(ref_sum / config.trials);

    for (std::size_t s = 0; s < specs.size(); ++s) {
      std::vector<double> eff(config.trials);
      std::vector<double> sq_err;
      int budget = 0;
      for (int t = 0; t < config.trials; ++t) {
        SeededRng rng = master.derive(kEstimationStream)
                            .derive(p)
                            .derive(s)
                            .derive(t);
        const TrialEval eval =
            evaluate_scheme(specs[s], channels[t], noise_ratio, rng);
        eff[t] = effective_snr_db(noise_ratio, eval.reflection, channels[t]);
        if (eval.squared_error) sq_err.push_back(*eval.squared_error);
        budget = eval.budget;
      }
      const SnrStats stats = snr_stats(eff, db_domain);
      SweepRow row;
      row.axis = noise_db;
      row.scheme = specs[s].label;
      row.eff_snr_db_mean = stats.mean;
      row.eff_snr_db_stderr = stats.stderr_mean;
      if (!sq_err.empty()) {
        double sum = 0.0;
        for (double v : sq_err) sum += v;
        row.mse_mean = sum / static_cast<double>(sq_err.size());
      }
      row.trials = config.trials;
      row.budget = budget;
      row.point_index = static_cast<int>(p);
      result.rows.push_back(std::move(row));
      if (config.record_per_trial) {
        result.per_trial.push_back(
            TrialSeries{noise_db, specs[s].label, std::move(eff)});
      }
    }
  }
  return result;
}

SweepResult run_n_sweep(const ExperimentConfig& config) {
  config.validate();
  const std::vector<SchemeSpec> specs = config.scheme_specs();
  const bool db_domain = config.snr_average_domain == "db";
  const SeededRng master(config.seed);

  SweepResult result;
  result.sweep_kind = "n-sweep";
  result.axis_name = "n_subsurfaces";

  for (std::size_t p = 0; p < config.n_values.size(); ++p) {
    const int n = config.n_values[p];
    ScenarioConfig scenario = config.scenario;
    scenario.n_subsurfaces = n;
    result.axis_values.push_back(static_cast<double>(n));
    // Reference SNR pinned to 0 dB per realization.
    result.mean_reference_snr_db.push_back(0.0);

    std::vector<ChannelRealization> channels;
    channels.reserve(config.trials);
    std::vector<double> noise_ratios(config.trials);
    for (int t = 0; t < config.trials; ++t) {
      SeededRng rng = master.derive(kChannelStream).derive(p).derive(t);
      channels.push_back(realize_channels(scenario, rng));
      const double mag2 = std::norm(channels.back().h_d);
      noise_ratios[t] = mag2 * mag2;  // sigma^2/P_t = |h_d^2|^2
    }

    for (std::size_t s = 0; s < specs.size(); ++s) {
      if (specs[s].scheme == Scheme::kBaseline3 &&
          n > config.baseline3_sweep_n_cap) {
        continue;  // enumeration too large; row omitted
      }
      std::vector<double> eff(config.trials);
      std::vector<double> sq_err;
      int budget = 0;
      for (int t = 0; t < config.trials; ++t) {
        SeededRng rng = master.derive(kEstimationStream)
                            .derive(p)
                            .derive(s)
                            .derive(t);
        const TrialEval eval =
            evaluate_scheme(specs[s], channels[t], noise_ratios[t], rng);
        eff[t] = effective_snr_db(noise_ratios[t], eval.reflection, channels[t]);
        if (eval.squared_error) sq_err.push_back(*eval.squared_error);
        budget = eval.budget;
      }
      const SnrStats stats = snr_stats(eff, db_domain);
      SweepRow row;
      row.axis = static_cast<double>(n);
      row.scheme = specs[s].label;
      row.eff_snr_db_mean = stats.mean;
      row.eff_snr_db_stderr = stats.stderr_mean;
      if (!sq_err.empty()) {
        double sum = 0.0;
        for (double v : sq_err) sum += v;
        row.mse_mean = sum / static_cast<double>(sq_err.size());
      }
      row.trials = config.trials;
      row.budget = budget;
      row.point_index = static_cast<int>(p);
      result.rows.push_back(std::move(row));
      if (config.record_per_trial) {
        result.per_trial.push_back(TrialSeries{static_cast<double>(n),
                                               specs[s].label, std::move(eff)});
      }
    }
  }
  return result;
}

}  // namespace irsbc
