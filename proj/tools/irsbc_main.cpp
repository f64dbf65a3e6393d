#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "irsbc/experiments.hpp"
#include "irsbc/validation.hpp"
#include "irsbc/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidationFailure = 1;
constexpr int kExitConfigError = 2;

struct CommonOptions {
  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> n_subsurfaces;
  std::string schemes_csv;
  std::string out_dir;
};

void add_common_options(CLI::App* cmd, CommonOptions* opts) {
  cmd->add_option("--config", opts->config_file, "JSON experiment config file");
  cmd->add_option("--seed", opts->seed, "Master seed");
  cmd->add_option("--trials", opts->trials, "Fading realizations per point");
  cmd->add_option("--n", opts->n_subsurfaces, "Number of IRS subsurfaces");
  cmd->add_option("--schemes", opts->schemes_csv,
                  "Comma-separated scheme list (proposed, baseline1, "
                  "baseline2, baseline3, perfect_csi)");
  cmd->add_option("--out", opts->out_dir, "Output directory");
}

irsbc::ExperimentConfig resolve_config(const CommonOptions& opts) {
  irsbc::ExperimentConfig config;
  if (!opts.config_file.empty()) {
    config = irsbc::ExperimentConfig::load(opts.config_file);
  }
  if (opts.seed) config.seed = *opts.seed;
  if (opts.trials) config.trials = *opts.trials;
  if (opts.n_subsurfaces) config.scenario.n_subsurfaces = *opts.n_subsurfaces;
  if (!opts.schemes_csv.empty()) {
    config.schemes.clear();
    std::stringstream ss(opts.schemes_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (!item.empty()) config.schemes.push_back(item);
    }
  }
  if (!opts.out_dir.empty()) config.output_dir = opts.out_dir;
  config.validate();
  return config;
}

void print_sweep(const irsbc::SweepResult& result,
                 const std::vector<std::filesystem::path>& files) {
  std::printf("%-12s %-16s %12s %10s %14s %7s %7s\n", result.axis_name.c_str(),
              "scheme", "eff_snr[dB]", "stderr", "mse", "trials", "budget");
  for (const irsbc::SweepRow& row : result.rows) {
    char mse[32] = "-";
    if (row.mse_mean) std::snprintf(mse, sizeof(mse), "%.5e", *row.mse_mean);
    std::printf("%-12g %-16s %12.3f %10.3f %14s %7d %7d\n", row.axis,
                row.scheme.c_str(), row.eff_snr_db_mean, row.eff_snr_db_stderr,
                mse, row.trials, row.budget);
  }
  for (const auto& f : files) {
    std::printf("wrote %s\n", f.string().c_str());
  }
}

int run_sweep(const CommonOptions& opts, bool snr_sweep) {
  const irsbc::ExperimentConfig config = resolve_config(opts);
  const irsbc::SweepResult result =
      snr_sweep ? irsbc::run_snr_sweep(config) : irsbc::run_n_sweep(config);
  const auto paths =
      irsbc::OutputPaths::for_sweep(config.output_dir, result.sweep_kind);
  const auto files = irsbc::emit_outputs(result, config, paths);
  print_sweep(result, files);
  return kExitOk;
}

int run_validate(const CommonOptions& opts, const std::string& report_file,
                 std::optional<double> sabotage_phi) {
  const irsbc::ExperimentConfig config = resolve_config(opts);
  const irsbc::ValidationReport report =
      irsbc::run_validation_suite(config, sabotage_phi);
  for (const irsbc::ValidationEntry& e : report.entries) {
    std::printf("%-4s %-32s %s\n", e.pass ? "PASS" : "FAIL", e.name.c_str(),
                e.detail.c_str());
  }
  if (!report_file.empty()) {
    std::ofstream out(report_file);
    out << report.to_json().dump(2) << "\n";
    if (!out) {
      std::fprintf(stderr, "error: cannot write %s\n", report_file.c_str());
      return kExitValidationFailure;
    }
    std::printf("wrote %s\n", report_file.c_str());
  }
  std::printf("%zu checks, %s\n", report.entries.size(),
              report.all_pass() ? "all passed" : "FAILURES present");
  return report.all_pass() ? kExitOk : kExitValidationFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"IRS-assisted monostatic backscatter channel estimation "
               "simulator"};
  app.set_version_flag("--version", irsbc::kVersion);
  app.require_subcommand(1);

  CommonOptions sim_opts;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Run a Monte Carlo effective-SNR sweep");
  simulate->require_subcommand(1);
  CLI::App* snr = simulate->add_subcommand(
      "snr-sweep", "Sweep the normalized noise power at fixed N");
  CLI::App* nsweep = simulate->add_subcommand(
      "n-sweep", "Sweep the subsurface count at 0 dB reference SNR");
  add_common_options(snr, &sim_opts);
  add_common_options(nsweep, &sim_opts);

  CommonOptions val_opts;
  std::string report_file;
  double sabotage_phi_value = 0.0;
  CLI::App* validate =
      app.add_subcommand("validate", "Run the numeric validation suite");
  add_common_options(validate, &val_opts);
  validate->add_option("--report", report_file,
                       "Write the machine-readable report to this JSON file");
  CLI::Option* sabotage = validate->add_option(
      "--sabotage-phi", sabotage_phi_value,
      "Override the rotation phase fed to the optimality check (negative "
      "control)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  try {
    if (snr->parsed()) return run_sweep(sim_opts, true);
    if (nsweep->parsed()) return run_sweep(sim_opts, false);
    if (validate->parsed()) {
      std::optional<double> sabotage_phi;
      if (sabotage->count() > 0) sabotage_phi = sabotage_phi_value;
      return run_validate(val_opts, report_file, sabotage_phi);
    }
  } catch (const irsbc::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitValidationFailure;
  }
  return kExitConfigError;
}
