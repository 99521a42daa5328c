#include "robustmean/comparators.hpp"

#include <cmath>
#include <stdexcept>

#include "robustmean/estimator.hpp"

namespace robustmean {
namespace {

constexpr double kAnchorRadius = 1e-12;

void require_data(const Matrix& X) {
  if (X.rows() < 1 || X.cols() < 1) {
    throw std::invalid_argument("data matrix must be nonempty");
  }
  if (!X.allFinite()) {
    throw std::invalid_argument("data matrix contains non-finite entries");
  }
}

}  // namespace

Vector empirical_mean(const Matrix& X) {
  require_data(X);
  return X.colwise().mean().transpose();
}

GeometricMedianResult geometric_median(const Matrix& X, double tol,
                                       int max_iter) {
  require_data(X);
  if (max_iter < 1) throw std::invalid_argument("max_iter must be >= 1");
  if (!(tol >= 0.0)) throw std::invalid_argument("tol must be nonnegative");
  const Index n = X.rows();
  const Index d = X.cols();

  GeometricMedianResult result;
  result.point = coordinatewise_median(X);

  Vector numer(d);
  for (int m = 1; m <= max_iter; ++m) {
    result.iterations = m;
    numer.setZero();
    double inv_sum = 0.0;
    Vector pull = Vector::Zero(d);
    Index anchored = 0;
    for (Index i = 0; i < n; ++i) {
      Vector diff = X.row(i).transpose() - result.point;
      const double r = diff.norm();
      if (r <= kAnchorRadius) {
        ++anchored;
        continue;
      }
      numer += X.row(i).transpose() / r;
      inv_sum += 1.0 / r;
      pull += diff / r;
    }
    if (inv_sum == 0.0) {
      // Every row coincides with the current point.
      result.converged = true;
      break;
    }
    Vector candidate = numer / inv_sum;
    if (anchored > 0) {
      const double pull_norm = pull.norm();
      if (pull_norm <= static_cast<double>(anchored)) {
        result.converged = true;
        break;
      }
      const double step = static_cast<double>(anchored) / pull_norm;
      candidate = (1.0 - step) * candidate + step * result.point;
    }
    const double disp = (candidate - result.point).norm();
    result.point = std::move(candidate);
    if (disp <= tol) {
      result.converged = true;
      break;
    }
  }
  return result;
}

GeometricMedianResult geometric_median_of_means(const Matrix& X, Index k,
                                                double tol, int max_iter) {
  require_data(X);
  const Index n = X.rows();
  if (k < 1 || k > n) {
    throw std::invalid_argument("block count must satisfy 1 <= k <= n");
  }
  const Index base = n / k;
  const Index rem = n % k;
  Matrix means(k, X.cols());
  Index row = 0;
  for (Index b = 0; b < k; ++b) {
    const Index size = base + (b < rem ? 1 : 0);
    means.row(b) =
        X.middleRows(row, size).colwise().sum() / static_cast<double>(size);
    row += size;
  }
  return geometric_median(means, tol, max_iter);
}

}  // namespace robustmean
