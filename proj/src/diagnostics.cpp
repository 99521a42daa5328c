#include "robustmean/diagnostics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "robustmean/comparators.hpp"
#include "robustmean/estimator.hpp"

namespace robustmean {

double influence_statistic(const Matrix& X, const Vector& theta,
                           const ScoreFamily& score) {
  return fixed_point_residual(X, theta, score);
}

double top_eigenvalue(const Eigen::MatrixXd& M, double tol, int max_iter) {
  if (M.rows() != M.cols() || M.rows() < 1) {
    throw std::invalid_argument("matrix must be square and nonempty");
  }
  const Index d = M.rows();
  Vector v = Vector::Ones(d) / std::sqrt(static_cast<double>(d));
  double lambda = v.dot(M * v);
  for (int it = 1; it <= max_iter; ++it) {
    Vector mv = M * v;
    const double norm = mv.norm();
    if (norm == 0.0) return 0.0;
    v = mv / norm;
    const double next = v.dot(M * v);
    if (std::abs(next - lambda) <= tol * (1.0 + std::abs(next))) {
      return next;
    }
    lambda = next;
  }
  throw std::runtime_error("power iteration did not converge after " +
                           std::to_string(max_iter) + " iterations");
}

VarianceEstimates variance_estimates(const Matrix& X, const Vector& theta,
                                     const ScoreFamily& score) {
  if (X.rows() < 1 || X.cols() < 1) {
    throw std::invalid_argument("data matrix must be nonempty");
  }
  if (theta.size() != X.cols()) {
    throw std::invalid_argument("theta dimension mismatch");
  }
  const Index n = X.rows();
  const Index d = X.cols();
  const double inv_n = 1.0 / static_cast<double>(n);

  VarianceEstimates out;
  Eigen::MatrixXd directional = Eigen::MatrixXd::Zero(d, d);
  for (Index i = 0; i < n; ++i) {
    Vector diff = X.row(i).transpose() - theta;
    const double r = diff.norm();
    if (r == 0.0) continue;  // psi(0) = 0 contributes nothing
    const double s = score.psi(r);
    out.v_total += s * s * inv_n;
    const Vector u = diff / r;
    directional.noalias() += (s * s * inv_n) * u * u.transpose();
  }
  out.v_directional = top_eigenvalue(directional);

  const Vector mean = empirical_mean(X);
  Matrix centered = X.rowwise() - mean.transpose();
  out.trace_cov = centered.squaredNorm() * inv_n;
  Eigen::MatrixXd cov = (centered.transpose() * centered) * inv_n;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov,
                                                        Eigen::EigenvaluesOnly);
  out.opnorm_cov = solver.eigenvalues().maxCoeff();
  return out;
}

UnicityReport check_unicity_assumption(const Matrix& X,
                                       const ScoreFamily& score) {
  if (X.rows() < 1 || X.cols() < 1) {
    throw std::invalid_argument("data matrix must be nonempty");
  }
  const Vector mean = empirical_mean(X);
  const Index n = X.rows();
  UnicityReport report;
  for (Index i = 0; i < n; ++i) {
    report.lhs += score.rho((X.row(i).transpose() - mean).norm());
  }
  report.lhs /= static_cast<double>(n);
  report.rho_third = score.rho(score.beta() / 3.0);
  const double psi_half = score.psi(score.beta() / 2.0);
  report.half_psi_half_sq = 0.5 * psi_half * psi_half;
  report.bound = std::min(report.rho_third, report.half_psi_half_sq);
  report.passed = report.lhs < report.bound;
  return report;
}

}  // namespace robustmean
