#pragma once

#include "robustmean/types.hpp"

namespace robustmean {

Vector empirical_mean(const Matrix& X);

struct GeometricMedianResult {
  Vector point;
  int iterations = 0;
  bool converged = false;
};

/// Weiszfeld iteration started from the coordinate-wise median. Iterates
/// landing within 1e-12 of a data point use the subgradient correction:
/// with eta the multiplicity of the anchored point and
/// R = ||sum over non-anchored i of (X_i - theta)/||X_i - theta||||,
/// the point is optimal when R <= eta, otherwise the step is damped by
/// eta / R. Stops once the displacement is <= tol.
GeometricMedianResult geometric_median(const Matrix& X, double tol = 1e-8,
                                       int max_iter = 1000);

/// Geometric median of the means of k contiguous blocks taken in input
/// order; n mod k leftover rows are absorbed one per block from the front,
/// so n = 10, k = 3 gives block sizes (4, 3, 3). k = 1 reduces to the
/// empirical mean and k = n to the geometric median.
GeometricMedianResult geometric_median_of_means(const Matrix& X, Index k,
                                                double tol = 1e-8,
                                                int max_iter = 1000);

}  // namespace robustmean
