#include "irsbc/signal.hpp"

#include <cmath>
#include <limits>
#include <utility>

namespace irsbc {

namespace {

BeamformingDesign cophase_against(Complex reference, const ComplexVector& tail,
                                  bool fallback) {
  ComplexVector v(tail.size());
  const Complex ref_conj = std::conj(reference);
  for (Eigen::Index i = 0; i < tail.size(); ++i) {
    v(i) = std::polar(1.0, std::arg(ref_conj * tail(i)));
  }
  return BeamformingDesign{ReflectionVector(std::move(v)), fallback};
}

}  // namespace

ReflectionVector::ReflectionVector(ComplexVector v) : v_(std::move(v)) {
  for (Eigen::Index i = 0; i < v_.size(); ++i) {
    if (std::abs(std::abs(v_(i)) - 1.0) > kModulusTol) {
      throw std::invalid_argument(
          "ReflectionVector: entry " + std::to_string(i) +
          " has modulus " + std::to_string(std::abs(v_(i))));
    }
  }
}

ReflectionVector ReflectionVector::from_phase_shifts(
    const Eigen::VectorXd& theta) {
  ComplexVector v(theta.size());
  for (Eigen::Index i = 0; i < theta.size(); ++i) {
    v(i) = std::polar(1.0, -theta(i));
  }
  return ReflectionVector(std::move(v));
}

ReflectionVector ReflectionVector::all_ones(Eigen::Index n) {
  return ReflectionVector(ComplexVector::Ones(n));
}

Eigen::VectorXd ReflectionVector::phase_shifts() const {
  Eigen::VectorXd theta(v_.size());
  for (Eigen::Index i = 0; i < v_.size(); ++i) {
    theta(i) = -std::arg(v_(i));
  }
  return theta;
}

LiftedTraining lift_reflection(const ReflectionVector& v) {
  const ComplexVector& vv = v.coefficients();
  const Eigen::Index n = vv.size();
  ComplexVector a(n * n + n + 1);
  a(0) = 1.0;
  a.segment(1, n) = vv;
  a.segment(1 + n, n * n) = kron(vv, vv);
  return LiftedTraining{std::move(a)};
}

LiftedChannel lift_channel(Complex h_d, const ComplexVector& h_c) {
  const Eigen::Index n = h_c.size();
  ComplexVector g(n * n + n + 1);
  g(0) = h_d * h_d;
  g.segment(1, n) = 2.0 * h_d * h_c;
  g.segment(1 + n, n * n) = kron(h_c, h_c);
  if (!all_finite(g)) {
    throw std::invalid_argument("lift_channel: non-finite entry");
  }
  return LiftedChannel{std::move(g)};
}

Complex tag_received(const ReflectionVector& v, const ChannelRealization& ch) {
  if (v.size() != ch.n()) {
    throw DimensionError("tag_received: reflection has " +
                         std::to_string(v.size()) + " entries, channel has " +
                         std::to_string(ch.n()));
  }
  return ch.h_d + hermitian_product(v.coefficients(), ch.h_c);
}

Complex reader_received(const ReflectionVector& v, const ChannelRealization& ch,
                        Complex noise, double alpha) {
  const Complex b = tag_received(v, ch);
  return alpha * b * b + noise;
}

BeamformingDesign optimal_reflection(Complex h_d, const ComplexVector& h_c) {
  if (h_d != 0.0) {
    return cophase_against(h_d, h_c, false);
  }
  // Eq.-style co-phasing is undefined at h_d = 0 (a probability-zero event
  // under continuous fading); align everything to element 1 instead.
  if (h_c.size() == 0) {
    return BeamformingDesign{ReflectionVector(ComplexVector(0)), false};
  }
  return cophase_against(h_c(0), h_c, true);
}

BeamformingDesign reflection_from_estimate(const ComplexVector& g_hat) {
  if (g_hat.size() < 1) {
    throw DimensionError("reflection_from_estimate: empty estimate");
  }
  const ComplexVector tail = g_hat.segment(1, g_hat.size() - 1);
  if (g_hat(0) != 0.0) {
    return cophase_against(g_hat(0), tail, false);
  }
  if (tail.size() == 0) {
    return BeamformingDesign{ReflectionVector(ComplexVector(0)), false};
  }
  return cophase_against(tail(0), tail, true);
}

double reference_snr_db(double noise_ratio, Complex h_d) {
  if (!(noise_ratio > 0.0)) {
    throw std::invalid_argument("reference_snr_db: noise_ratio must be > 0");
  }
  const double mag2 = std::norm(h_d);
  if (mag2 == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mag2 * mag2 / noise_ratio);
}

double reference_snr_db(const ScenarioConfig& config, Complex h_d) {
  return reference_snr_db(config.noise_ratio(), h_d);
}

double effective_snr_db(double noise_ratio, const ReflectionVector& v,
                        const ChannelRealization& ch) {
  if (!(noise_ratio > 0.0)) {
    throw std::invalid_argument("effective_snr_db: noise_ratio must be > 0");
  }
  const double mag2 = std::norm(tag_received(v, ch));
  if (mag2 == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(mag2 * mag2 / noise_ratio);
}

double effective_snr_db(const ScenarioConfig& config, const ReflectionVector& v,
                        const ChannelRealization& ch) {
  return effective_snr_db(config.noise_ratio(), v, ch);
}

}  // namespace irsbc
