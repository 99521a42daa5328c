#include "robustmean/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace robustmean {
namespace {

void require_data(const Matrix& X) {
  if (X.rows() < 1 || X.cols() < 1) {
    throw std::invalid_argument("data matrix must be nonempty");
  }
  if (!X.allFinite()) {
    throw std::invalid_argument("data matrix contains non-finite entries");
  }
}

double median_inplace(std::vector<double>& v) {
  const size_t n = v.size();
  const size_t mid = n / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (n % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lo + hi);
}

}  // namespace

Vector coordinatewise_median(const Matrix& X) {
  require_data(X);
  const Index n = X.rows();
  const Index d = X.cols();
  Vector med(d);
  std::vector<double> col(static_cast<size_t>(n));
  for (Index j = 0; j < d; ++j) {
    for (Index i = 0; i < n; ++i) col[static_cast<size_t>(i)] = X(i, j);
    med[j] = median_inplace(col);
  }
  return med;
}

EstimateResult irls_estimate(const Matrix& X, const EstimatorConfig& config) {
  require_data(X);
  if (config.max_iter < 1) {
    throw std::invalid_argument("max_iter must be >= 1");
  }
  if (!(config.tol >= 0.0)) {
    throw std::invalid_argument("tol must be nonnegative");
  }
  const Index n = X.rows();
  const Index d = X.cols();

  Vector theta;
  if (config.init) {
    if (config.init->size() != d) {
      throw std::invalid_argument("init vector dimension mismatch");
    }
    if (!config.init->allFinite()) {
      throw std::invalid_argument("init vector contains non-finite entries");
    }
    theta = *config.init;
  } else {
    theta = coordinatewise_median(X);
  }

  EstimateResult result;
  if (config.keep_iterate_history) result.iterate_history.push_back(theta);

  Vector r(n);
  Vector w(n);
  for (int m = 1; m <= config.max_iter; ++m) {
    r = (X.rowwise() - theta.transpose()).rowwise().norm();
    for (Index i = 0; i < n; ++i) w[i] = config.score.weight(r[i]);
    const double wsum = w.sum();
    Vector theta_next = (X.transpose() * w) / wsum;
    const double disp = (theta_next - theta).norm();
    result.trace.push_back(disp);
    result.iterations = m;
    result.residual = disp;
    const bool done = disp <= config.tol * (1.0 + theta.norm());
    theta = std::move(theta_next);
    if (config.keep_iterate_history) result.iterate_history.push_back(theta);
    if (done) {
      result.converged = true;
      break;
    }
  }

  r = (X.rowwise() - theta.transpose()).rowwise().norm();
  for (Index i = 0; i < n; ++i) w[i] = config.score.weight(r[i]);
  result.estimate = std::move(theta);
  result.weights = std::move(w);
  return result;
}

double fixed_point_residual(const Matrix& X, const Vector& theta,
                            const ScoreFamily& score) {
  require_data(X);
  if (theta.size() != X.cols()) {
    throw std::invalid_argument("theta dimension mismatch");
  }
  const Index n = X.rows();
  Vector acc = Vector::Zero(X.cols());
  for (Index i = 0; i < n; ++i) {
    Vector diff = X.row(i).transpose() - theta;
    const double r = diff.norm();
    if (r > 0.0) acc += diff * (score.psi(r) / r);
  }
  return acc.norm() / static_cast<double>(n);
}

double population_location_1d(const std::vector<Atom>& atoms,
                              const ScoreFamily& score) {
  if (atoms.empty()) {
    throw std::invalid_argument("atom list must be nonempty");
  }
  double psum = 0.0;
  double lo = atoms.front().value;
  double hi = atoms.front().value;
  for (const Atom& a : atoms) {
    if (!(a.prob > 0.0)) {
      throw std::invalid_argument("atom probabilities must be positive");
    }
    if (!std::isfinite(a.value)) {
      throw std::invalid_argument("atom values must be finite");
    }
    psum += a.prob;
    lo = std::min(lo, a.value);
    hi = std::max(hi, a.value);
  }
  if (std::abs(psum - 1.0) > 1e-12) {
    throw std::invalid_argument("atom probabilities must sum to 1");
  }
  if (lo == hi) return lo;

  // g(theta) = sum_j p_j sign(x_j - theta) psi(|x_j - theta|) is strictly
  // decreasing on [lo, hi] with g(lo) >= 0 >= g(hi).
  const auto g = [&](double theta) {
    double s = 0.0;
    for (const Atom& a : atoms) {
      const double diff = a.value - theta;
      if (diff > 0.0) {
        s += a.prob * score.psi(diff);
      } else if (diff < 0.0) {
        s -= a.prob * score.psi(-diff);
      }
    }
    return s;
  };
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval at floating resolution
    if (g(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace robustmean
