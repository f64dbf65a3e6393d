#include "irsbc/rng.hpp"

#include <cmath>

namespace irsbc {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Complex SeededRng::standard_complex_gaussian() {
  const double re = normal_(engine_);
  const double im = normal_(engine_);
  return Complex(re, im) / std::sqrt(2.0);
}

ComplexVector SeededRng::complex_gaussian_vector(Eigen::Index n) {
  ComplexVector out(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out(i) = standard_complex_gaussian();
  }
  return out;
}

double SeededRng::uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(engine_);
}

SeededRng SeededRng::derive(std::uint64_t stream_id) const {
  return SeededRng(splitmix64(seed_ ^ splitmix64(stream_id)));
}

}  // namespace irsbc
