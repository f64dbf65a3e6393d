#pragma once

#include <cstdint>
#include <random>

#include "irsbc/linalg.hpp"

namespace irsbc {

/// Deterministic random stream shared by all sampling code. The same seed
/// reproduces the same draw sequence bit-exactly within one build;
/// independent sub-streams for parallel trials come from derive().
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  /// One circularly-symmetric complex Gaussian draw, CN(0, 1).
  Complex standard_complex_gaussian();

  /// n iid CN(0, 1) draws.
  ComplexVector complex_gaussian_vector(Eigen::Index n);

  /// Uniform draw in [lo, hi).
  double uniform(double lo, double hi);

  /// Independent stream keyed by (seed, stream_id).
  SeededRng derive(std::uint64_t stream_id) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace irsbc
