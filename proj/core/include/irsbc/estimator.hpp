#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "irsbc/channel.hpp"
#include "irsbc/signal.hpp"

namespace irsbc {

/// Phase-rotated training schedule: K sub-blocks of two pilots each, the
/// second pilot rotated by the common phase phi. Row k of `reflections`
/// holds the sub-block's reflection v_k.
///
/// The derived constants t1 = e^{2j phi}, t2 = e^{2j phi} - 1 and
/// t3 = e^{2j phi} - e^{j phi} drive the pilot differencing; a plan is
/// unusable when |t2| or |t3| collapses (phi near 0 kills both, phi near pi
/// kills t2).
struct TrainingPlan {
  int num_subblocks = 0;  // K
  int n_subsurfaces = 0;  // N
  double phi = 0.0;
  ComplexMatrix reflections;  // K x N

  Complex t1() const;
  Complex t2() const;
  Complex t3() const;

  static constexpr double kDegenerateTol = 1e-6;

  /// Dimension, unit-modulus, and degeneracy checks without the sub-block
  /// count requirement; build_training_matrix()/gram_closed_form() accept
  /// such partial plans (their Gram is then rank deficient).
  void validate_structure(double tol = kDegenerateTol) const;

  /// validate_structure() plus K >= N+1, the minimum for a full-rank
  /// training matrix.
  void validate(double tol = kDegenerateTol) const;

  /// v_k of sub-block k (0-based).
  ReflectionVector reflection(int k) const;

  nlohmann::json to_json() const;
  static TrainingPlan from_json(const nlohmann::json& j);
};

/// K x (N+1) effective training matrix with rows [t2, t3 * v_k^H].
struct TrainingMatrix {
  ComplexMatrix a;

  Eigen::Index subblocks() const { return a.rows(); }
  Eigen::Index unknowns() const { return a.cols(); }
};

/// LS estimate of [h_d^2, 2 h_d h_c] with diagnostics.
struct Estimate {
  ComplexVector g_hat;  // N+1 entries
  double residual_norm = 0.0;
  double theoretical_mse = 0.0;
  // Plan metadata.
  int num_subblocks = 0;
  int n_subsurfaces = 0;
  double phi = 0.0;
};

/// The balanced common rotation phase, 2 pi / 3: the unique phase in
/// (0, pi) with |t2|^2 = |t3|^2 = 3, which makes the DFT plan's Gram the
/// scaled identity 3K I and attains the trace bound (N+1)/(3K).
double optimal_phase();

/// DFT training: v_{k,n} = exp(-j 2 pi (k-1) n / K) (1-based k, n), i.e.
/// columns 1..N of the K x K DFT matrix, paired with optimal_phase().
/// Columns are mutually orthogonal and sum to zero, which makes the Gram
/// of the training matrix 3K * I.
TrainingPlan dft_training(int num_subblocks, int n_subsurfaces);

TrainingMatrix build_training_matrix(const TrainingPlan& plan);

/// The Gram A^H A assembled entry-by-entry from its closed form
/// (K|t2|^2 head, t2^dag t3 * column sums, |t3|^2 cross sums) without
/// forming A; a structural cross-check of build_training_matrix().
ComplexMatrix gram_closed_form(const TrainingPlan& plan);

/// The two received pilots of sub-block k (0-based):
///   y1 = h_d^2 + 2 h_d v_k^H h_c + w_k + z1
///   y2 = h_d^2 + 2 e^{j phi} h_d v_k^H h_c + e^{2j phi} w_k + z2
/// with w_k = (v_k^H h_c)^2 and z1, z2 independent CN(0, noise_ratio).
std::pair<Complex, Complex> simulate_pilot_pair(const TrainingPlan& plan, int k,
                                                const ChannelRealization& ch,
                                                double noise_ratio,
                                                SeededRng& rng);

/// t1 y1 - y2. Cancels the quadratic term w_k identically for every phi and
/// leaves t2 h_d^2 + 2 t3 h_d v_k^H h_c plus noise of power 2 * noise_ratio.
Complex difference(Complex y1, Complex y2, double phi);

/// LS solve of the differenced system, with the theoretical MSE for the
/// given noise ratio attached. Rank failures propagate as
/// SingularSystemError.
Estimate estimate(const TrainingMatrix& matrix, const ComplexVector& y,
                  double noise_ratio);

/// (2 * noise_ratio) * Tr((A^H A)^{-1}), the LS error power; equals
/// (2 * noise_ratio) * (N+1) / (3K) for the optimal plan.
double theoretical_mse(const TrainingMatrix& matrix, double noise_ratio);

struct OptimalityReport {
  bool orthogonal_columns = false;
  bool zero_column_sums = false;
  bool optimal_rotation = false;
  std::vector<std::string> violations;

  bool ok() const {
    return orthogonal_columns && zero_column_sums && optimal_rotation;
  }
};

/// Checks the optimality conditions of a plan: V^H V = K I, per-subsurface
/// sums of reflections equal zero, and phi = 2 pi / 3 (all within tol,
/// scaled by K where the quantity grows with K).
OptimalityReport verify_training_optimality(const TrainingPlan& plan,
                                            double tol = 1e-9);

/// Grid search of Tr((A^H A)^{-1}) over phi = 2 pi i / grid_points,
/// i = 1..grid_points-1, skipping degenerate or rank-deficient points.
/// Ties are broken toward the first (smallest) phi that improves the
/// running minimum by more than a 1e-9 relative margin, so the canonical
/// optimum 2 pi / 3 wins over its mirror 4 pi / 3.
double phase_grid_search(const ComplexMatrix& reflections, int grid_points);

/// Full pipeline on one channel draw: simulate the K pilot pairs,
/// difference them, LS-estimate [h_d^2, 2 h_d h_c].
Estimate run_proposed(const TrainingPlan& plan, const ChannelRealization& ch,
                      double noise_ratio, SeededRng& rng);

/// The true lifted head [h_d^2, 2 h_d h_c] the estimator targets.
ComplexVector true_channel_head(const ChannelRealization& ch);

}  // namespace irsbc
