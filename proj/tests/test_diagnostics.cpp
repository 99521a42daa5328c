#include <cmath>
#include <random>

#include "doctest.h"
#include "robustmean/comparators.hpp"
#include "robustmean/diagnostics.hpp"
#include "robustmean/estimator.hpp"

using robustmean::Matrix;
using robustmean::ScoreFamily;
using robustmean::Vector;

namespace {

Matrix standard_normal(int n, int d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix x(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) x(i, j) = normal(rng);
  return x;
}

}  // namespace

TEST_CASE("top eigenvalue matches the dense solver") {
  std::mt19937_64 rng(301);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int rep = 0; rep < 10; ++rep) {
    const int d = 2 + static_cast<int>(rng() % 30);
    Eigen::MatrixXd g(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) g(i, j) = normal(rng);
    // PSD with a nonnegative spectrum, as in every call site.
    Eigen::MatrixXd a = g * g.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
    const double expected = es.eigenvalues().maxCoeff();
    CHECK(robustmean::top_eigenvalue(a) ==
          doctest::Approx(expected).epsilon(1e-7));
  }
}

TEST_CASE("top eigenvalue of the zero matrix is zero") {
  CHECK(robustmean::top_eigenvalue(Eigen::MatrixXd::Zero(4, 4)) == 0.0);
}

TEST_CASE("top eigenvalue of a diagonal matrix") {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3);
  a.diagonal() << 1.0, 5.0, 2.0;
  CHECK(robustmean::top_eigenvalue(a) == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("influence statistic vanishes at the estimate and not elsewhere") {
  const Matrix x = standard_normal(200, 6, 307);
  const ScoreFamily f = ScoreFamily::catoni(1.5);
  robustmean::EstimatorConfig cfg{f};
  const auto res = robustmean::irls_estimate(x, cfg);
  CHECK(robustmean::influence_statistic(x, res.estimate, f) <= 1e-9);
  Vector off = res.estimate;
  off(0) += 0.5;
  CHECK(robustmean::influence_statistic(x, off, f) > 1e-3);
}

TEST_CASE("variance estimates obey their deterministic bounds") {
  for (unsigned seed : {311u, 313u, 317u}) {
    Matrix x = standard_normal(400, 12, seed);
    x.row(0).setConstant(50.0);  // heavy row keeps the truncation active
    for (const auto& f :
         {ScoreFamily::huber(2.0), ScoreFamily::catoni(2.0),
          ScoreFamily::polynomial(2.0, 5)}) {
      robustmean::EstimatorConfig cfg{f};
      const auto res = robustmean::irls_estimate(x, cfg);
      REQUIRE(res.converged);
      const auto v = robustmean::variance_estimates(x, res.estimate, f);
      CHECK(v.v_total <= v.trace_cov * (1.0 + 1e-9));
      const Vector mean = robustmean::empirical_mean(x);
      const double slack = (mean - res.estimate).squaredNorm();
      CHECK(v.v_directional <= v.opnorm_cov + slack + 1e-9);
      CHECK(v.v_directional <= v.v_total * (1.0 + 1e-9));
      CHECK(v.v_total >= 0.0);
      CHECK(v.v_directional >= 0.0);
    }
  }
}

TEST_CASE("variance estimates against a hand-computed tiny case") {
  // Two 1-d points at 0 and 4, theta = 1, huber beta = 2:
  // residuals 1 and 3, psi values 1 and 2, so v_total = (1 + 4) / 2 = 2.5.
  // The directional matrix in 1-d is the same scalar.
  Matrix x(2, 1);
  x << 0.0, 4.0;
  Vector theta(1);
  theta << 1.0;
  const auto v =
      robustmean::variance_estimates(x, theta, ScoreFamily::huber(2.0));
  CHECK(v.v_total == doctest::Approx(2.5).epsilon(1e-12));
  CHECK(v.v_directional == doctest::Approx(2.5).epsilon(1e-9));
  // Covariance of {0, 4} is E X^2 - (E X)^2 = 8 - 4 = 4.
  CHECK(v.trace_cov == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(v.opnorm_cov == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("unicity check passes on concentrated data") {
  const Matrix x = standard_normal(500, 5, 331);
  const auto report =
      robustmean::check_unicity_assumption(x, ScoreFamily::huber(30.0));
  CHECK(report.passed);
  CHECK(report.lhs < report.bound);
  CHECK(report.bound == doctest::Approx(std::min(
                            report.rho_third, report.half_psi_half_sq)));
}

TEST_CASE("unicity check fails on spread data with tiny beta") {
  const Matrix x = standard_normal(500, 5, 337).array() * 100.0;
  const auto report =
      robustmean::check_unicity_assumption(x, ScoreFamily::huber(0.01));
  CHECK_FALSE(report.passed);
}

TEST_CASE("unicity report terms are the documented quantities") {
  Matrix x(2, 1);
  x << -1.0, 1.0;
  const ScoreFamily f = ScoreFamily::huber(6.0);
  const auto report = robustmean::check_unicity_assumption(x, f);
  // Mean is 0, both rows at distance 1, rho quadratic below beta.
  CHECK(report.lhs == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(report.rho_third == doctest::Approx(f.rho(2.0)).epsilon(1e-12));
  const double half_psi = f.psi(3.0);
  CHECK(report.half_psi_half_sq ==
        doctest::Approx(0.5 * half_psi * half_psi).epsilon(1e-12));
}
