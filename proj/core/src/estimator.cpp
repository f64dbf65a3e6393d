#include "irsbc/estimator.hpp"

#include <cmath>
#include <numbers>

#include <nlohmann/json.hpp>

namespace irsbc {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Complex t2_for(double phi) { return std::exp(Complex(0.0, 2.0 * phi)) - 1.0; }
Complex t3_for(double phi) {
  return std::exp(Complex(0.0, 2.0 * phi)) - std::exp(Complex(0.0, phi));
}

ComplexMatrix assemble_training_matrix(const ComplexMatrix& reflections,
                                       double phi) {
  const Eigen::Index k = reflections.rows();
  const Eigen::Index n = reflections.cols();
  const Complex t2 = t2_for(phi);
  const Complex t3 = t3_for(phi);
  ComplexMatrix a(k, n + 1);
  a.col(0).setConstant(t2);
  a.rightCols(n) = t3 * reflections.conjugate();
  return a;
}

}  // namespace

Complex TrainingPlan::t1() const { return std::exp(Complex(0.0, 2.0 * phi)); }
Complex TrainingPlan::t2() const { return t2_for(phi); }
Complex TrainingPlan::t3() const { return t3_for(phi); }

void TrainingPlan::validate_structure(double tol) const {
  if (num_subblocks < 1) {
    throw ConfigError("TrainingPlan: need at least one sub-block");
  }
  if (n_subsurfaces < 0) {
    throw ConfigError("TrainingPlan: negative subsurface count");
  }
  if (reflections.rows() != num_subblocks ||
      reflections.cols() != n_subsurfaces) {
    throw DimensionError("TrainingPlan: reflections are " +
                         std::to_string(reflections.rows()) + "x" +
                         std::to_string(reflections.cols()) + ", expected " +
                         std::to_string(num_subblocks) + "x" +
                         std::to_string(n_subsurfaces));
  }
  for (Eigen::Index r = 0; r < reflections.rows(); ++r) {
    for (Eigen::Index c = 0; c < reflections.cols(); ++c) {
      if (std::abs(std::abs(reflections(r, c)) - 1.0) > 1e-9) {
        throw ConfigError("TrainingPlan: |v_{" + std::to_string(r) + "," +
                          std::to_string(c) + "}| != 1");
      }
    }
  }
  if (std::abs(t2()) < tol || std::abs(t3()) < tol) {
    throw ConfigError("TrainingPlan: degenerate rotation phase phi=" +
                      std::to_string(phi) + " (|t2|=" +
                      std::to_string(std::abs(t2())) + ", |t3|=" +
                      std::to_string(std::abs(t3())) + ")");
  }
}

void TrainingPlan::validate(double tol) const {
  validate_structure(tol);
  if (num_subblocks < n_subsurfaces + 1) {
    throw ConfigError("TrainingPlan: K=" + std::to_string(num_subblocks) +
                      " sub-blocks cannot identify N+1=" +
                      std::to_string(n_subsurfaces + 1) + " unknowns");
  }
}

ReflectionVector TrainingPlan::reflection(int k) const {
  if (k < 0 || k >= num_subblocks) {
    throw std::out_of_range("TrainingPlan: sub-block " + std::to_string(k) +
                            " out of range [0, " +
                            std::to_string(num_subblocks) + ")");
  }
  return ReflectionVector(reflections.row(k).transpose());
}

nlohmann::json TrainingPlan::to_json() const {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < reflections.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < reflections.cols(); ++c) {
      row.push_back({reflections(r, c).real(), reflections(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return nlohmann::json{{"num_subblocks", num_subblocks},
                        {"n_subsurfaces", n_subsurfaces},
                        {"phi", phi},
                        {"reflections", std::move(rows)}};
}

TrainingPlan TrainingPlan::from_json(const nlohmann::json& j) {
  TrainingPlan plan;
  try {
    plan.num_subblocks = j.at("num_subblocks");
    plan.n_subsurfaces = j.at("n_subsurfaces");
    plan.phi = j.at("phi");
    const auto& rows = j.at("reflections");
    plan.reflections.resize(plan.num_subblocks, plan.n_subsurfaces);
    if (rows.size() != static_cast<std::size_t>(plan.num_subblocks)) {
      throw ConfigError("TrainingPlan: row count mismatch");
    }
    for (int r = 0; r < plan.num_subblocks; ++r) {
      const auto& row = rows.at(r);
      if (row.size() != static_cast<std::size_t>(plan.n_subsurfaces)) {
        throw ConfigError("TrainingPlan: column count mismatch");
      }
      for (int c = 0; c < plan.n_subsurfaces; ++c) {
        plan.reflections(r, c) =
            Complex(row.at(c).at(0).get<double>(), row.at(c).at(1).get<double>());
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("TrainingPlan: ") + e.what());
  }
  plan.validate_structure();
  return plan;
}

double optimal_phase() { return kTwoPi / 3.0; }

TrainingPlan dft_training(int num_subblocks, int n_subsurfaces) {
  if (n_subsurfaces < 0) {
    throw ConfigError("dft_training: negative subsurface count");
  }
  if (num_subblocks < n_subsurfaces + 1) {
    throw ConfigError("dft_training: K=" + std::to_string(num_subblocks) +
                      " must be at least N+1=" +
                      std::to_string(n_subsurfaces + 1));
  }
  TrainingPlan plan;
  plan.num_subblocks = num_subblocks;
  plan.n_subsurfaces = n_subsurfaces;
  plan.phi = optimal_phase();
  plan.reflections.resize(num_subblocks, n_subsurfaces);
  for (int k = 0; k < num_subblocks; ++k) {
    for (int n = 0; n < n_subsurfaces; ++n) {
      plan.reflections(k, n) = std::polar(
          1.0, -kTwoPi * static_cast<double>(k) * (n + 1) / num_subblocks);
    }
  }
  plan.validate();
  return plan;
}

TrainingMatrix build_training_matrix(const TrainingPlan& plan) {
  plan.validate_structure();
  return TrainingMatrix{assemble_training_matrix(plan.reflections, plan.phi)};
}

ComplexMatrix gram_closed_form(const TrainingPlan& plan) {
  plan.validate_structure();
  const Eigen::Index k = plan.num_subblocks;
  const Eigen::Index n = plan.n_subsurfaces;
  const Complex t2 = plan.t2();
  const Complex t3 = plan.t3();
  const ComplexVector col_sums = plan.reflections.colwise().sum();

  ComplexMatrix gram(n + 1, n + 1);
  gram(0, 0) = static_cast<double>(k) * std::norm(t2);
  for (Eigen::Index j = 0; j < n; ++j) {
    gram(0, j + 1) = std::conj(t2) * t3 * std::conj(col_sums(j));
    gram(j + 1, 0) = t2 * std::conj(t3) * col_sums(j);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) {
        gram(i + 1, j + 1) = static_cast<double>(k) * std::norm(t3);
      } else {
        // sum_k v_{k,i} conj(v_{k,j}); Eigen's dot conjugates its first
        // operand, hence the swapped order.
        gram(i + 1, j + 1) =
            std::norm(t3) *
            plan.reflections.col(j).dot(plan.reflections.col(i));
      }
    }
  }
  return gram;
}

std::pair<Complex, Complex> simulate_pilot_pair(const TrainingPlan& plan, int k,
                                                const ChannelRealization& ch,
                                                double noise_ratio,
                                                SeededRng& rng) {
  plan.validate();
  if (noise_ratio < 0.0) {
    throw std::invalid_argument("simulate_pilot_pair: negative noise ratio");
  }
  if (ch.n() != plan.n_subsurfaces) {
    throw DimensionError("simulate_pilot_pair: channel has " +
                         std::to_string(ch.n()) + " subsurfaces, plan has " +
                         std::to_string(plan.n_subsurfaces));
  }
  const ReflectionVector v_k = plan.reflection(k);
  const Complex u = hermitian_product(v_k.coefficients(), ch.h_c);
  const Complex w = u * u;
  const Complex rot = std::exp(Complex(0.0, plan.phi));
  const double sigma = std::sqrt(noise_ratio);
  const Complex z1 = sigma * rng.standard_complex_gaussian();
  const Complex z2 = sigma * rng.standard_complex_gaussian();
  const Complex y1 = ch.h_d * ch.h_d + 2.0 * ch.h_d * u + w + z1;
  const Complex y2 =
      ch.h_d * ch.h_d + 2.0 * rot * ch.h_d * u + rot * rot * w + z2;
  return {y1, y2};
}

Complex difference(Complex y1, Complex y2, double phi) {
  return std::exp(Complex(0.0, 2.0 * phi)) * y1 - y2;
}

Estimate estimate(const TrainingMatrix& matrix, const ComplexVector& y,
                  double noise_ratio) {
  Estimate est;
  est.g_hat = ls_solve(matrix.a, y);
  est.residual_norm = (matrix.a * est.g_hat - y).norm();
  est.theoretical_mse = theoretical_mse(matrix, noise_ratio);
  est.num_subblocks = static_cast<int>(matrix.subblocks());
  est.n_subsurfaces = static_cast<int>(matrix.unknowns()) - 1;
  if (!all_finite(est.g_hat)) {
    throw std::invalid_argument("estimate: non-finite solution");
  }
  return est;
}

double theoretical_mse(const TrainingMatrix& matrix, double noise_ratio) {
  if (noise_ratio < 0.0) {
    throw std::invalid_argument("theoretical_mse: negative noise ratio");
  }
  return 2.0 * noise_ratio * trace_inverse_gram(matrix.a);
}

OptimalityReport verify_training_optimality(const TrainingPlan& plan,
                                            double tol) {
  OptimalityReport report;
  const double k = static_cast<double>(plan.num_subblocks);
  const double scaled_tol = tol * std::max(1.0, k);

  const ComplexMatrix gram_v =
      plan.reflections.adjoint() * plan.reflections;  // V^H V
  double worst_orth = 0.0;
  for (Eigen::Index i = 0; i < gram_v.rows(); ++i) {
    for (Eigen::Index j = 0; j < gram_v.cols(); ++j) {
      const Complex expected = (i == j) ? Complex(k, 0.0) : Complex(0.0, 0.0);
      worst_orth = std::max(worst_orth, std::abs(gram_v(i, j) - expected));
    }
  }
  report.orthogonal_columns = worst_orth <= scaled_tol;
  if (!report.orthogonal_columns) {
    report.violations.push_back(
        "columns not orthogonal: max |V^H V - K I| = " +
        std::to_string(worst_orth));
  }

  double worst_sum = 0.0;
  for (Eigen::Index n = 0; n < plan.reflections.cols(); ++n) {
    worst_sum = std::max(worst_sum, std::abs(plan.reflections.col(n).sum()));
  }
  report.zero_column_sums = worst_sum <= scaled_tol;
  if (!report.zero_column_sums) {
    report.violations.push_back("per-subsurface sums nonzero: max |sum| = " +
                                std::to_string(worst_sum));
  }

  const double phase_err = std::abs(plan.phi - optimal_phase());
  report.optimal_rotation = phase_err <= tol;
  if (!report.optimal_rotation) {
    report.violations.push_back("rotation phase off optimum by " +
                                std::to_string(phase_err) + " rad");
  }
  return report;
}

double phase_grid_search(const ComplexMatrix& reflections, int grid_points) {
  if (grid_points < 2) {
    throw std::invalid_argument("phase_grid_search: need at least 2 points");
  }
  double best_phi = -1.0;
  double best_trace = 0.0;
  bool found = false;
  for (int i = 1; i < grid_points; ++i) {
    const double phi = kTwoPi * i / grid_points;
    if (std::abs(t2_for(phi)) < TrainingPlan::kDegenerateTol ||
        std::abs(t3_for(phi)) < TrainingPlan::kDegenerateTol) {
      continue;
    }
    double trace;
    try {
      trace = trace_inverse_gram(assemble_training_matrix(reflections, phi));
    } catch (const SingularSystemError&) {
      continue;  // rank-deficient at this phi; infeasible point
    }
    if (!found || trace < best_trace * (1.0 - 1e-9)) {
      found = true;
      best_trace = trace;
      best_phi = phi;
    }
  }
  if (!found) {
    throw std::runtime_error("phase_grid_search: empty feasible grid");
  }
  return best_phi;
}

Estimate run_proposed(const TrainingPlan& plan, const ChannelRealization& ch,
                      double noise_ratio, SeededRng& rng) {
  plan.validate();
  ComplexVector y(plan.num_subblocks);
  for (int k = 0; k < plan.num_subblocks; ++k) {
    const auto [y1, y2] = simulate_pilot_pair(plan, k, ch, noise_ratio, rng);
    y(k) = difference(y1, y2, plan.phi);
  }
  return estimate(build_training_matrix(plan), y, noise_ratio);
}

ComplexVector true_channel_head(const ChannelRealization& ch) {
  ComplexVector head(ch.n() + 1);
  head(0) = ch.h_d * ch.h_d;
  head.segment(1, ch.n()) = 2.0 * ch.h_d * ch.h_c;
  return head;
}

}  // namespace irsbc
