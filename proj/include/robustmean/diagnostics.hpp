#pragma once

#include "robustmean/score.hpp"
#include "robustmean/types.hpp"

namespace robustmean {

/// Norm of the empirical score vector at theta; identical to
/// fixed_point_residual and exposed under the name used when theta is a
/// reference location rather than the estimate.
double influence_statistic(const Matrix& X, const Vector& theta,
                           const ScoreFamily& score);

struct VarianceEstimates {
  /// (1/n) sum_i psi(r_i)^2 with r_i = ||X_i - theta||.
  double v_total = 0.0;
  /// Top eigenvalue of (1/n) sum_i psi(r_i)^2 u_i u_i^T, u_i the unit
  /// directions; the directional analogue of v_total.
  double v_directional = 0.0;
  /// Trace of the empirical covariance (1/n normalization).
  double trace_cov = 0.0;
  /// Operator norm of the empirical covariance.
  double opnorm_cov = 0.0;
};

VarianceEstimates variance_estimates(const Matrix& X, const Vector& theta,
                                     const ScoreFamily& score);

/// Top eigenvalue of a symmetric PSD matrix by power iteration from the
/// normalized all-ones vector; relative Rayleigh-quotient tolerance 1e-9,
/// at most max_iter sweeps. Throws std::runtime_error naming the iteration
/// count when the tolerance is not reached.
double top_eigenvalue(const Eigen::MatrixXd& M, double tol = 1e-9,
                      int max_iter = 1000);

struct UnicityReport {
  bool passed = false;
  /// Plug-in E[rho(||X - mean||)].
  double lhs = 0.0;
  double rho_third = 0.0;
  double half_psi_half_sq = 0.0;
  /// min(rho_third, half_psi_half_sq); passed means lhs < bound.
  double bound = 0.0;
};

/// Plug-in check of the spread condition that guarantees a unique
/// M-estimator root: E[rho(||X - E X||)] < min(rho(beta/3), psi(beta/2)^2/2)
/// with empirical expectations. Advisory; failure does not stop estimation.
UnicityReport check_unicity_assumption(const Matrix& X,
                                       const ScoreFamily& score);

}  // namespace robustmean
