#pragma once

#include <optional>
#include <vector>

#include "robustmean/score.hpp"
#include "robustmean/types.hpp"

namespace robustmean {

struct EstimatorConfig {
  ScoreFamily score;
  double tol = 1e-10;
  int max_iter = 200;
  /// Empty: start from the coordinate-wise median. Otherwise a d-vector.
  std::optional<Vector> init{};
  /// Record every iterate (including the initial point); off by default to
  /// keep the hot path allocation-free.
  bool keep_iterate_history = false;
};

struct EstimateResult {
  Vector estimate;
  int iterations = 0;
  bool converged = false;
  /// Last displacement norm, the quantity tested by the stopping rule.
  double residual = 0.0;
  /// IRLS weights evaluated at the final estimate.
  Vector weights;
  /// Displacement norm per iteration.
  std::vector<double> trace;
  /// Populated only when keep_iterate_history is set; entry 0 is the init.
  std::vector<Vector> iterate_history;
};

/// Per-coordinate median of the rows; even counts average the two middle
/// order statistics.
Vector coordinatewise_median(const Matrix& X);

/// Iteratively reweighted least squares for the location M-estimator:
/// theta <- sum_i w_i X_i / sum_i w_i with w_i = weight(||X_i - theta||),
/// stopping once ||theta_next - theta|| <= tol * (1 + ||theta||).
EstimateResult irls_estimate(const Matrix& X, const EstimatorConfig& config);

/// Norm of the empirical score vector
/// (1/n) sum_i psi(||X_i - theta||) (X_i - theta) / ||X_i - theta||;
/// rows equal to theta contribute zero.
double fixed_point_residual(const Matrix& X, const Vector& theta,
                            const ScoreFamily& score);

struct Atom {
  double value = 0.0;
  double prob = 0.0;
};

/// Location of the estimator for a finite 1-D distribution, found by
/// bisection of the monotone score equation to width 1e-12.
double population_location_1d(const std::vector<Atom>& atoms,
                              const ScoreFamily& score);

}  // namespace robustmean
