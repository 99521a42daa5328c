#pragma once

#include <vector>

#include "robustmean/score.hpp"
#include "robustmean/types.hpp"

namespace robustmean {

/// Median distance to the geometric median; the scatter scale that anchors
/// the beta search grid.
double mad(const Matrix& X, double gm_tol = 1e-8);

/// Family-specific constant multiplying the squared-bias proxy mad^4/beta^2
/// in the selection criterion: 1, 5/32, 1/16 by family.
double criterion_constant(FamilyKind kind);

struct SelectBetaOptions {
  int grid_size = 40;
  /// Assumed corrupted fraction; enters the criterion as (budget * beta)^2.
  double corruption_budget = 0.05;
  /// Exponent for the Polynomial family.
  int p = 5;
  double gm_tol = 1e-8;
  double solver_tol = 1e-10;
  int solver_max_iter = 200;
  /// Reuse each grid point's estimate to initialize the next solve.
  bool warm_start = true;
};

struct GridPoint {
  double beta = 0.0;
  double criterion = 0.0;
  bool converged = false;
};

struct BetaSelection {
  double beta_hat = 0.0;
  double mad = 0.0;
  double c_psi = 0.0;
  std::vector<GridPoint> grid;
};

/// Minimizes V_hat(beta)/n + c_psi * mad^4 / beta^2 + (budget * beta)^2 over
/// a log-spaced grid on [mad sqrt(n) / 1e3, mad sqrt(n)]; ties break toward
/// the smaller beta and non-converged grid points are skipped.
BetaSelection select_beta(const Matrix& X, FamilyKind kind,
                          const SelectBetaOptions& options = {});

}  // namespace robustmean
