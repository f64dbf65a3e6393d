#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace irsbc {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Operand dimensions do not conform.
class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A linear system was numerically rank deficient. Carries the rank
/// estimated at the failure point.
class SingularSystemError : public std::runtime_error {
 public:
  SingularSystemError(const std::string& what, Eigen::Index estimated_rank)
      : std::runtime_error(what), rank_(estimated_rank) {}

  Eigen::Index estimated_rank() const { return rank_; }

 private:
  Eigen::Index rank_;
};

bool all_finite(const ComplexVector& v);
bool all_finite(const ComplexMatrix& m);

/// Maximum accepted input length for kron(); the N^2-sized output grows
/// quadratically, so larger inputs must opt in explicitly.
inline constexpr Eigen::Index kKronDefaultCap = 64;

/// Kronecker product of two equal-length vectors, stacked block-wise as
/// [u_1 w; u_2 w; ...; u_N w], so entry (i-1)*N + j holds u_i * w_j
/// (1-based indexing).
ComplexVector kron(const ComplexVector& u, const ComplexVector& w,
                   Eigen::Index max_len = kKronDefaultCap);

/// sum_i conj(a_i) * b_i.
Complex hermitian_product(const ComplexVector& a, const ComplexVector& b);

/// Relative rank tolerance max(rows, cols) * machine epsilon. Singular
/// values at or below tol * sigma_max count as zero.
double default_rank_tolerance(Eigen::Index rows, Eigen::Index cols);

/// Number of singular values above tol * sigma_max (tol relative).
Eigen::Index numerical_rank(const ComplexMatrix& a, double tol);
Eigen::Index numerical_rank(const ComplexMatrix& a);

/// Minimum-residual solution of A x ~ y for K >= M via column-pivoted QR
/// with an SVD fallback near the rank threshold; never forms the normal
/// equations. Throws SingularSystemError when rank(A) < M at the default
/// tolerance.
ComplexVector ls_solve(const ComplexMatrix& a, const ComplexVector& y);

/// Tr((A^H A)^{-1}) = sum_i 1/sigma_i^2, computed from the singular values
/// of A. Requires full column rank.
double trace_inverse_gram(const ComplexMatrix& a);

}  // namespace irsbc
