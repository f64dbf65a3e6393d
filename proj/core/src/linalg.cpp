#include "irsbc/linalg.hpp"

#include <cmath>
#include <limits>

namespace irsbc {

namespace {

std::string dim_str(Eigen::Index rows, Eigen::Index cols) {
  return std::to_string(rows) + "x" + std::to_string(cols);
}

Eigen::Index rank_from_singular_values(const Eigen::VectorXd& sv, double tol) {
  if (sv.size() == 0) return 0;
  const double cutoff = tol * sv(0);  // sv sorted descending
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cutoff) ++rank;
  }
  return rank;
}

}  // namespace

bool all_finite(const ComplexVector& v) { return v.allFinite(); }
bool all_finite(const ComplexMatrix& m) { return m.allFinite(); }

ComplexVector kron(const ComplexVector& u, const ComplexVector& w,
                   Eigen::Index max_len) {
  if (u.size() != w.size()) {
    throw DimensionError("kron: length mismatch " + std::to_string(u.size()) +
                         " vs " + std::to_string(w.size()));
  }
  if (u.size() > max_len) {
    throw DimensionError("kron: input length " + std::to_string(u.size()) +
                         " exceeds cap " + std::to_string(max_len));
  }
  const Eigen::Index n = u.size();
  ComplexVector out(n * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      out(i * n + j) = u(i) * w(j);
    }
  }
  return out;
}

Complex hermitian_product(const ComplexVector& a, const ComplexVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("hermitian_product: length mismatch " +
                         std::to_string(a.size()) + " vs " +
                         std::to_string(b.size()));
  }
  return a.dot(b);  // Eigen's dot conjugates the first operand
}

double default_rank_tolerance(Eigen::Index rows, Eigen::Index cols) {
  return static_cast<double>(std::max(rows, cols)) *
         std::numeric_limits<double>::epsilon();
}

Eigen::Index numerical_rank(const ComplexMatrix& a, double tol) {
  if (a.rows() == 0 || a.cols() == 0) return 0;
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  return rank_from_singular_values(svd.singularValues(), tol);
}

Eigen::Index numerical_rank(const ComplexMatrix& a) {
  return numerical_rank(a, default_rank_tolerance(a.rows(), a.cols()));
}

ComplexVector ls_solve(const ComplexMatrix& a, const ComplexVector& y) {
  if (a.rows() != y.size()) {
    throw DimensionError("ls_solve: A is " + dim_str(a.rows(), a.cols()) +
                         " but y has length " + std::to_string(y.size()));
  }
  if (a.rows() < a.cols()) {
    throw DimensionError("ls_solve: underdetermined system " +
                         dim_str(a.rows(), a.cols()));
  }
  if (a.cols() == 0) return ComplexVector(0);

  Eigen::ColPivHouseholderQR<ComplexMatrix> qr(a);
  qr.setThreshold(default_rank_tolerance(a.rows(), a.cols()));
  if (qr.rank() == a.cols()) {
    return qr.solve(y);
  }

  // Near the threshold the pivoted-QR rank estimate can disagree with the
  // singular values; resolve with the SVD and solve there when it says
  // full rank.
  Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Index rank = rank_from_singular_values(
      svd.singularValues(), default_rank_tolerance(a.rows(), a.cols()));
  if (rank < a.cols()) {
    throw SingularSystemError("ls_solve: rank " + std::to_string(rank) +
                                  " < " + std::to_string(a.cols()) +
                                  " unknowns",
                              rank);
  }
  return svd.solve(y);
}

double trace_inverse_gram(const ComplexMatrix& a) {
  if (a.cols() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  const Eigen::VectorXd& sv = svd.singularValues();
  const Eigen::Index rank = rank_from_singular_values(
      sv, default_rank_tolerance(a.rows(), a.cols()));
  if (rank < a.cols()) {
    throw SingularSystemError("trace_inverse_gram: rank " +
                                  std::to_string(rank) + " < " +
                                  std::to_string(a.cols()) + " columns",
                              rank);
  }
  double trace = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    trace += 1.0 / (sv(i) * sv(i));
  }
  return trace;
}

}  // namespace irsbc
