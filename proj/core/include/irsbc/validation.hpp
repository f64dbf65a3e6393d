#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "irsbc/experiments.hpp"

namespace irsbc {

struct ValidationEntry {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationEntry> entries;

  bool all_pass() const;
  nlohmann::json to_json() const;
};

/// Runs the numeric identity checks that pin the implementation: the lifted
/// signal identity, the optimal-plan Gram 3K I, the closed-form Gram match,
/// noiseless pipeline recovery, the empirical-vs-theoretical MSE law, the
/// rotation-phase grid search, the 2x3 pilot-mixing matrix orthogonality,
/// quadratic-term cancellation, and training-plan optimality, plus one
/// noiseless sanity entry per configured scheme. Failures are reported,
/// never thrown.
///
/// sabotage_phi substitutes the rotation phase used by the optimality check
/// only; it exists as a negative control for this suite.
ValidationReport run_validation_suite(
    const ExperimentConfig& config,
    std::optional<double> sabotage_phi = std::nullopt);

}  // namespace irsbc
