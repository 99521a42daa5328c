#include "robustmean/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "robustmean/comparators.hpp"
#include "robustmean/estimator.hpp"

namespace robustmean {

double mad(const Matrix& X, double gm_tol) {
  const GeometricMedianResult gm = geometric_median(X, gm_tol);
  Vector dist = (X.rowwise() - gm.point.transpose()).rowwise().norm();
  std::vector<double> v(dist.data(), dist.data() + dist.size());
  const size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  double lo = *std::max_element(v.begin(), v.begin() + mid);
  return 0.5 * (lo + hi);
}

double criterion_constant(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Huber:
      return 1.0;
    case FamilyKind::Catoni:
      return 5.0 / 32.0;
    case FamilyKind::Polynomial:
      return 1.0 / 16.0;
  }
  throw std::logic_error("unknown family kind");
}

namespace {

ScoreFamily make_family(FamilyKind kind, double beta, int p) {
  switch (kind) {
    case FamilyKind::Huber:
      return ScoreFamily::huber(beta);
    case FamilyKind::Catoni:
      return ScoreFamily::catoni(beta);
    case FamilyKind::Polynomial:
      return ScoreFamily::polynomial(beta, p);
  }
  throw std::logic_error("unknown family kind");
}

}  // namespace

BetaSelection select_beta(const Matrix& X, FamilyKind kind,
                          const SelectBetaOptions& options) {
  if (options.grid_size < 2) {
    throw std::invalid_argument("grid_size must be >= 2");
  }
  if (!(options.corruption_budget >= 0.0)) {
    throw std::invalid_argument("corruption_budget must be nonnegative");
  }
  const Index n = X.rows();

  BetaSelection sel;
  sel.mad = mad(X, options.gm_tol);
  sel.c_psi = criterion_constant(kind);
  if (!(sel.mad > 0.0)) {
    throw std::runtime_error(
        "scatter scale is zero; beta selection needs non-degenerate data");
  }

  const double hi = sel.mad * std::sqrt(static_cast<double>(n));
  const double lo = hi / 1e3;
  const double ratio = hi / lo;
  const double inv_n = 1.0 / static_cast<double>(n);
  const double mad4 = sel.mad * sel.mad * sel.mad * sel.mad;

  std::optional<Vector> warm;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < options.grid_size; ++j) {
    GridPoint point;
    point.beta =
        lo * std::pow(ratio, static_cast<double>(j) /
                                 static_cast<double>(options.grid_size - 1));
    const ScoreFamily f = make_family(kind, point.beta, options.p);
    EstimatorConfig cfg{f, options.solver_tol, options.solver_max_iter};
    if (options.warm_start && warm) cfg.init = warm;
    const EstimateResult fit = irls_estimate(X, cfg);
    point.converged = fit.converged;
    if (fit.converged) {
      if (options.warm_start) warm = fit.estimate;
      double v_hat = 0.0;
      const Vector r =
          (X.rowwise() - fit.estimate.transpose()).rowwise().norm();
      for (Index i = 0; i < n; ++i) {
        const double s = f.psi(r[i]);
        v_hat += s * s;
      }
      v_hat *= inv_n;
      const double budget_term = options.corruption_budget * point.beta;
      point.criterion = v_hat * inv_n +
                        sel.c_psi * mad4 / (point.beta * point.beta) +
                        budget_term * budget_term;
      if (point.criterion < best) {
        best = point.criterion;
        sel.beta_hat = point.beta;
      }
    } else {
      point.criterion = std::numeric_limits<double>::quiet_NaN();
    }
    sel.grid.push_back(point);
  }
  if (!std::isfinite(best)) {
    throw std::runtime_error(
        "beta selection failed: no grid point produced a converged estimate");
  }
  return sel;
}

}  // namespace robustmean
