#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "irsbc/estimator.hpp"

namespace irsbc {

enum class Scheme { kProposed, kBaseline1, kBaseline2, kBaseline3, kPerfectCsi };

std::string to_string(Scheme s);
std::optional<Scheme> scheme_from_string(std::string_view name);

/// Outcome of one training-plus-design pass of a comparison scheme.
struct BaselineResult {
  Scheme scheme = Scheme::kProposed;
  ReflectionVector reflection{ComplexVector(0)};
  std::optional<ComplexVector> g_hat;  // schemes that produce an estimate
  int training_symbols = 0;
  std::optional<double> testing_mse;   // exhaustive-search selection diagnostic
  std::optional<double> selected_phi;  // random-rotation draw
  bool used_fallback = false;
};

/// The proposed pipeline with the rotation phase drawn uniformly from
/// (0, 2 pi), re-drawn while |t2| or |t3| <= 1e-3 (such draws leave the LS
/// system unsolvable); DFT reflections are kept.
BaselineResult baseline1_estimate(const ChannelRealization& ch,
                                  double noise_ratio, int num_subblocks,
                                  int n_subsurfaces, SeededRng& rng);

/// Power selection over the num_candidates columns of the Q x Q DFT matrix
/// truncated to N entries: one noisy power measurement per candidate,
/// argmax wins. Produces no channel estimate.
BaselineResult baseline2_select(const ChannelRealization& ch,
                                double noise_ratio, int num_candidates,
                                SeededRng& rng);

/// Both square roots of y: (principal, -principal).
std::pair<Complex, Complex> sqrt_candidates(Complex y);

/// One sign assignment of the exhaustive search: the candidate CSI it
/// implies and its testing MSE over the holdout symbols.
struct SignCandidate {
  std::uint32_t sign_mask = 0;  // bit k set: b_k negated
  Complex h_d;
  ComplexVector h_c;
  double testing_mse = 0.0;
};

/// Full enumeration record; only useful at desk scale (2^(N+1) entries).
struct Baseline3Detail {
  std::vector<SignCandidate> candidates;
  std::size_t selected_index = 0;
};

/// Hard cap on the 2^(N+1) enumeration.
inline constexpr int kBaseline3MaxSubsurfaces = 20;

/// Sign-ambiguity resolution by exhaustive search: N+1 DFT-reflection
/// symbols give 2^(N+1) candidate CSIs via +/- sqrt of each measurement and
/// a linear LS solve; the candidate whose predictions best match
/// omega2_size extra measurements (minimum testing MSE) wins. The global
/// sign flip maps a candidate to an equivalent one, so the winner is a
/// two-element class with a common beamforming design.
BaselineResult baseline3_estimate(const ChannelRealization& ch,
                                  double noise_ratio, int n_subsurfaces,
                                  int omega2_size, SeededRng& rng,
                                  Baseline3Detail* detail = nullptr);

/// Co-phasing with the true channels; the no-training upper bound.
BaselineResult perfect_csi_design(const ChannelRealization& ch);

}  // namespace irsbc
