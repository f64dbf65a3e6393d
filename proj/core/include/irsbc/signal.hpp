#pragma once

#include "irsbc/channel.hpp"
#include "irsbc/linalg.hpp"

namespace irsbc {

/// Unit-modulus IRS reflection coefficients. Stored in the v convention
/// where the phase shift applied by subsurface n is theta_n = -arg(v_n),
/// so the reflected contribution enters signals as v^H h_c.
class ReflectionVector {
 public:
  static constexpr double kModulusTol = 1e-9;

  /// Throws if any |v_n| deviates from 1 by more than kModulusTol.
  explicit ReflectionVector(ComplexVector v);

  static ReflectionVector from_phase_shifts(const Eigen::VectorXd& theta);
  static ReflectionVector all_ones(Eigen::Index n);

  const ComplexVector& coefficients() const { return v_; }
  Eigen::VectorXd phase_shifts() const;
  Eigen::Index size() const { return v_.size(); }

 private:
  ComplexVector v_;
};

/// [1; v; v (x) v] lift of a reflection vector (N^2 + N + 1 entries).
struct LiftedTraining {
  ComplexVector a;
};

/// [h_d^2; 2 h_d h_c; h_c (x) h_c] lift of the channel pair.
struct LiftedChannel {
  ComplexVector g;
};

LiftedTraining lift_reflection(const ReflectionVector& v);
LiftedChannel lift_channel(Complex h_d, const ComplexVector& h_c);

/// Signal at the tag for a unit pilot: h_d + v^H h_c.
Complex tag_received(const ReflectionVector& v, const ChannelRealization& ch);

/// Round-trip signal at the reader: alpha * (h_d + v^H h_c)^2 + noise.
Complex reader_received(const ReflectionVector& v, const ChannelRealization& ch,
                        Complex noise, double alpha = 1.0);

/// A reflection design plus a flag recording whether the degenerate
/// zero-reference tie-break was taken.
struct BeamformingDesign {
  ReflectionVector reflection;
  bool used_fallback = false;
};

/// SNR-maximizing co-phasing e^{j arg(h_d^dag h_c_n)} per subsurface; the
/// composite one-way channel reaches |h_d| + sum_n |h_c_n|. When h_d == 0
/// the phases are aligned against element 1 of h_c instead (flagged).
BeamformingDesign optimal_reflection(Complex h_d, const ComplexVector& h_c);

/// The same design computed from an estimate g = [h_d^2, 2 h_d h_c];
/// invariant under rescaling of g.
BeamformingDesign reflection_from_estimate(const ComplexVector& g_hat);

/// Round-trip direct-link SNR 10 log10(|h_d^2|^2 / noise_ratio), where
/// noise_ratio = sigma^2 / P_t. A zero channel maps to -inf, never NaN.
double reference_snr_db(double noise_ratio, Complex h_d);
double reference_snr_db(const ScenarioConfig& config, Complex h_d);

/// Same with the composite channel h_d + v^H h_c under reflection v.
double effective_snr_db(double noise_ratio, const ReflectionVector& v,
                        const ChannelRealization& ch);
double effective_snr_db(const ScenarioConfig& config, const ReflectionVector& v,
                        const ChannelRealization& ch);

}  // namespace irsbc
