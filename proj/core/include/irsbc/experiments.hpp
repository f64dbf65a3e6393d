#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "irsbc/baselines.hpp"

namespace irsbc {

/// One sweep series: a scheme plus, for the exhaustive-search baseline, the
/// holdout-size choice (0 = use N+1 at each axis point).
struct SchemeSpec {
  Scheme scheme = Scheme::kProposed;
  int omega2_size = 1;
  std::string label;
};

/// Monte Carlo experiment description; serializable as a JSON document
/// whose missing keys fall back to these defaults.
struct ExperimentConfig {
  ScenarioConfig scenario;
  std::vector<std::string> schemes = {"perfect_csi", "proposed", "baseline1",
                                      "baseline2", "baseline3"};
  int trials = 500;
  std::uint64_t seed = 1;
  /// Normalized noise powers sigma^2/P_t in dB for the SNR sweep.
  std::vector<double> noise_ratios_db = {-120.0, -130.0, -140.0, -150.0,
                                         -160.0};
  /// Subsurface counts for the N sweep.
  std::vector<int> n_values = {5, 10, 15, 20};
  /// Holdout sizes for baseline3; 0 means N+1 at each point. Each entry
  /// spawns one baseline3 series.
  std::vector<int> omega2_sizes = {1};
  std::string output_dir = "out";
  /// "db": average per-trial SNRs in dB; "linear": average linear SNRs and
  /// report the dB of the mean.
  std::string snr_average_domain = "db";
  bool record_per_trial = false;
  /// The 2^(N+1) baseline is skipped in sweeps beyond this N.
  int baseline3_sweep_n_cap = 14;

  void validate() const;
  std::vector<SchemeSpec> scheme_specs() const;

  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& file);
  nlohmann::json to_json() const;
};

struct SweepRow {
  double axis = 0.0;
  std::string scheme;
  double eff_snr_db_mean = 0.0;
  double eff_snr_db_stderr = 0.0;
  std::optional<double> mse_mean;  // schemes that estimate a channel
  int trials = 0;
  int budget = 0;  // training symbols
  int point_index = 0;  // not serialized; links the row to axis metadata
};

/// Per-trial effective SNRs of one (axis point, scheme) cell.
struct TrialSeries {
  double axis = 0.0;
  std::string scheme;
  std::vector<double> eff_snr_db;
};

struct SweepResult {
  std::string sweep_kind;  // "snr-sweep" | "n-sweep"
  std::string axis_name;   // "noise_ratio_db"  | "n_subsurfaces"
  std::vector<double> axis_values;
  std::vector<double> mean_reference_snr_db;  // per axis point
  std::vector<SweepRow> rows;
  std::vector<TrialSeries> per_trial;  // populated when record_per_trial
};

/// Effective SNR against the normalized noise power at fixed N. The same
/// channel draws are reused at every noise point, so curves differ only
/// through the estimation noise; the per-point mean reference SNR is
/// recorded as the natural x axis.
SweepResult run_snr_sweep(const ExperimentConfig& config);

/// Effective SNR against the subsurface count, with the reference SNR held
/// at 0 dB per realization by setting sigma^2/P_t = |h_d^2|^2.
SweepResult run_n_sweep(const ExperimentConfig& config);

struct OutputPaths {
  std::filesystem::path csv;
  std::filesystem::path svg;
  std::filesystem::path meta;

  static OutputPaths for_sweep(const std::filesystem::path& dir,
                               const std::string& sweep_kind);
};

/// Writes the CSV table, an SVG line plot (one polyline per scheme), and a
/// JSON metadata sidecar carrying the full config and seed; returns the
/// written paths. Identical inputs produce byte-identical files.
std::vector<std::filesystem::path> emit_outputs(const SweepResult& result,
                                                const ExperimentConfig& config,
                                                const OutputPaths& paths);

}  // namespace irsbc
