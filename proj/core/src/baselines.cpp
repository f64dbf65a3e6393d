#include "irsbc/baselines.hpp"

#include <cmath>
#include <numbers>

namespace irsbc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRotationRedrawTol = 1e-3;

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::kProposed:
      return "proposed";
    case Scheme::kBaseline1:
      return "baseline1";
    case Scheme::kBaseline2:
      return "baseline2";
    case Scheme::kBaseline3:
      return "baseline3";
    case Scheme::kPerfectCsi:
      return "perfect_csi";
  }
  return "unknown";
}

std::optional<Scheme> scheme_from_string(std::string_view name) {
  if (name == "proposed") return Scheme::kProposed;
  if (name == "baseline1") return Scheme::kBaseline1;
  if (name == "baseline2") return Scheme::kBaseline2;
  if (name == "baseline3") return Scheme::kBaseline3;
  if (name == "perfect_csi") return Scheme::kPerfectCsi;
  return std::nullopt;
}

BaselineResult baseline1_estimate(const ChannelRealization& ch,
                                  double noise_ratio, int num_subblocks,
                                  int n_subsurfaces, SeededRng& rng) {
  TrainingPlan plan = dft_training(num_subblocks, n_subsurfaces);
  do {
    plan.phi = rng.uniform(0.0, kTwoPi);
  } while (std::abs(plan.t2()) <= kRotationRedrawTol ||
           std::abs(plan.t3()) <= kRotationRedrawTol);

  const Estimate est = run_proposed(plan, ch, noise_ratio, rng);
  BeamformingDesign design = reflection_from_estimate(est.g_hat);

  BaselineResult result;
  result.scheme = Scheme::kBaseline1;
  result.reflection = std::move(design.reflection);
  result.used_fallback = design.used_fallback;
  result.g_hat = est.g_hat;
  result.training_symbols = 2 * num_subblocks;
  result.selected_phi = plan.phi;
  return result;
}

BaselineResult baseline2_select(const ChannelRealization& ch,
                                double noise_ratio, int num_candidates,
                                SeededRng& rng) {
  if (num_candidates < 1) {
    throw std::invalid_argument("baseline2_select: need at least 1 candidate");
  }
  if (noise_ratio < 0.0) {
    throw std::invalid_argument("baseline2_select: negative noise ratio");
  }
  const Eigen::Index n = ch.n();
  const double sigma = std::sqrt(noise_ratio);

  int best_q = 0;
  double best_power = -1.0;
  for (int q = 0; q < num_candidates; ++q) {
    ComplexVector v(n);
    for (Eigen::Index k = 0; k < n; ++k) {
      v(k) = std::polar(
          1.0, -kTwoPi * static_cast<double>(k) * q / num_candidates);
    }
    const Complex z = sigma * rng.standard_complex_gaussian();
    const Complex y = reader_received(ReflectionVector(v), ch, z);
    const double power = std::norm(y);
    if (power > best_power) {
      best_power = power;
      best_q = q;
    }
  }

  ComplexVector v(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    v(k) = std::polar(
        1.0, -kTwoPi * static_cast<double>(k) * best_q / num_candidates);
  }
  BaselineResult result;
  result.scheme = Scheme::kBaseline2;
  result.reflection = ReflectionVector(std::move(v));
  result.training_symbols = num_candidates;
  return result;
}

std::pair<Complex, Complex> sqrt_candidates(Complex y) {
  const Complex root = std::sqrt(y);
  return {root, -root};
}

BaselineResult baseline3_estimate(const ChannelRealization& ch,
                                  double noise_ratio, int n_subsurfaces,
                                  int omega2_size, SeededRng& rng,
                                  Baseline3Detail* detail) {
  if (n_subsurfaces < 0 || ch.n() != n_subsurfaces) {
    throw DimensionError("baseline3_estimate: channel/subsurface mismatch");
  }
  if (n_subsurfaces > kBaseline3MaxSubsurfaces) {
    throw std::invalid_argument(
        "baseline3_estimate: N=" + std::to_string(n_subsurfaces) +
        " exceeds the 2^(N+1) enumeration cap N <= " +
        std::to_string(kBaseline3MaxSubsurfaces));
  }
  if (omega2_size < 1) {
    throw std::invalid_argument(
        "baseline3_estimate: omega2_size must be >= 1");
  }
  if (noise_ratio < 0.0) {
    throw std::invalid_argument("baseline3_estimate: negative noise ratio");
  }

  const int m = n_subsurfaces + 1;  // |Omega_1|
  const double sigma = std::sqrt(noise_ratio);

  // Omega_1: DFT reflections guarantee a full-rank linear system
  // b = [1, v_k^H] [h_d; h_c].
  const TrainingPlan omega1 = dft_training(m, n_subsurfaces);
  ComplexMatrix system(m, m);
  ComplexVector roots(m);
  for (int k = 0; k < m; ++k) {
    system(k, 0) = 1.0;
    system.row(k).tail(n_subsurfaces) =
        omega1.reflections.row(k).conjugate();
    const Complex z = sigma * rng.standard_complex_gaussian();
    const Complex y = reader_received(omega1.reflection(k), ch, z);
    roots(k) = sqrt_candidates(y).first;
  }
  const Eigen::ColPivHouseholderQR<ComplexMatrix> factor(system);

  // Omega_2 holdout: random reflections plus their noisy measurements.
  std::vector<ReflectionVector> holdout;
  holdout.reserve(omega2_size);
  ComplexVector holdout_y(omega2_size);
  for (int j = 0; j < omega2_size; ++j) {
    ComplexVector u(n_subsurfaces);
    for (int n = 0; n < n_subsurfaces; ++n) {
      u(n) = std::polar(1.0, rng.uniform(0.0, kTwoPi));
    }
    holdout.emplace_back(std::move(u));
    const Complex z = sigma * rng.standard_complex_gaussian();
    holdout_y(j) = reader_received(holdout.back(), ch, z);
  }

  const std::uint32_t combinations = 1u << m;
  std::uint32_t best_mask = 0;
  double best_mse = 0.0;
  Complex best_h_d;
  ComplexVector best_h_c;
  bool have_best = false;
  for (std::uint32_t mask = 0; mask < combinations; ++mask) {
    ComplexVector b(m);
    for (int k = 0; k < m; ++k) {
      b(k) = (mask >> k) & 1u ? -roots(k) : roots(k);
    }
    const ComplexVector x = factor.solve(b);
    const Complex h_d = x(0);
    const ComplexVector h_c = x.tail(n_subsurfaces);

    double mse = 0.0;
    for (int j = 0; j < omega2_size; ++j) {
      const Complex pred_b =
          h_d + hermitian_product(holdout[j].coefficients(), h_c);
      mse += std::norm(pred_b * pred_b - holdout_y(j));
    }
    mse /= omega2_size;

    if (detail != nullptr) {
      detail->candidates.push_back(SignCandidate{mask, h_d, h_c, mse});
    }
    if (!have_best || mse < best_mse) {
      have_best = true;
      best_mse = mse;
      best_mask = mask;
      best_h_d = h_d;
      best_h_c = h_c;
    }
  }
  if (detail != nullptr) {
    detail->selected_index = best_mask;
  }

  BeamformingDesign design = optimal_reflection(best_h_d, best_h_c);
  BaselineResult result;
  result.scheme = Scheme::kBaseline3;
  result.reflection = std::move(design.reflection);
  result.used_fallback = design.used_fallback;
  ComplexVector g_hat(m);
  g_hat(0) = best_h_d * best_h_d;
  g_hat.tail(n_subsurfaces) = 2.0 * best_h_d * best_h_c;
  result.g_hat = std::move(g_hat);
  result.training_symbols = m + omega2_size;
  result.testing_mse = best_mse;
  return result;
}

BaselineResult perfect_csi_design(const ChannelRealization& ch) {
  BeamformingDesign design = optimal_reflection(ch.h_d, ch.h_c);
  BaselineResult result;
  result.scheme = Scheme::kPerfectCsi;
  result.reflection = std::move(design.reflection);
  result.used_fallback = design.used_fallback;
  result.training_symbols = 0;
  return result;
}

}  // namespace irsbc
