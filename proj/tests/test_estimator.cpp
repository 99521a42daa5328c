#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "robustmean/estimator.hpp"
#include "robustmean/score.hpp"

using robustmean::Atom;
using robustmean::EstimatorConfig;
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

// 1-D oracle: the estimating equation sum_i sign(x_i - t) psi(|x_i - t|) = 0
// has a decreasing left side, so bisection brackets the root directly.
double bisect_location_1d(const std::vector<double>& xs,
                          const ScoreFamily& f) {
  auto g = [&](double t) {
    double s = 0.0;
    for (double x : xs) {
      const double r = std::abs(x - t);
      if (r > 0.0) s += (x > t ? 1.0 : -1.0) * f.psi(r);
    }
    return s;
  };
  double lo = *std::min_element(xs.begin(), xs.end());
  double hi = *std::max_element(xs.begin(), xs.end());
  if (lo == hi) return lo;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (g(mid) > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

// Objective the weighted updates descend: sum_i rho(|x_i - theta|).
double objective(const Matrix& x, const Vector& theta, const ScoreFamily& f) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.rows(); ++i)
    s += f.rho((x.row(i).transpose() - theta).norm());
  return s;
}

Matrix random_rotation(int d, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = normal(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ();
  return q;
}

}  // namespace

TEST_CASE("coordinatewise median odd and even") {
  Matrix x(4, 2);
  x << 1, 10, 2, 20, 3, 40, 100, 30;
  const Vector m = robustmean::coordinatewise_median(x);
  CHECK(m(0) == doctest::Approx(2.5));
  CHECK(m(1) == doctest::Approx(25.0));

  Matrix y(3, 1);
  y << 5, -1, 2;
  CHECK(robustmean::coordinatewise_median(y)(0) == doctest::Approx(2.0));
}

TEST_CASE("irls matches 1-d bisection oracle") {
  std::mt19937_64 rng(101);
  std::student_t_distribution<double> t3(3.0);
  std::vector<ScoreFamily> families = {ScoreFamily::huber(2.0),
                                       ScoreFamily::catoni(2.0),
                                       ScoreFamily::polynomial(2.0, 5)};
  for (int rep = 0; rep < 5; ++rep) {
    std::vector<double> xs(101);
    Matrix x(101, 1);
    for (int i = 0; i < 101; ++i) {
      xs[i] = 1.0 + t3(rng);
      x(i, 0) = xs[i];
    }
    for (const auto& f : families) {
      EstimatorConfig cfg{f};
      const auto res = robustmean::irls_estimate(x, cfg);
      CHECK(res.converged);
      const double oracle = bisect_location_1d(xs, f);
      CHECK(std::abs(res.estimate(0) - oracle) <= 1e-8);
    }
  }
}

TEST_CASE("fixed point equation is satisfied at the estimate") {
  const Matrix x = standard_normal(300, 8, 23).array() + 0.7;
  for (const auto& f : {ScoreFamily::huber(1.5), ScoreFamily::catoni(1.5),
                        ScoreFamily::polynomial(1.5, 5)}) {
    EstimatorConfig cfg{f};
    const auto res = robustmean::irls_estimate(x, cfg);
    CHECK(res.converged);
    CHECK(robustmean::fixed_point_residual(x, res.estimate, f) <= 1e-9);
  }
}

TEST_CASE("huber with large beta reproduces the empirical mean") {
  const Matrix x = standard_normal(200, 5, 31);
  const Vector mean = x.colwise().mean().transpose();
  EstimatorConfig cfg{ScoreFamily::huber(1e6)};
  const auto res = robustmean::irls_estimate(x, cfg);
  CHECK(res.converged);
  CHECK((res.estimate - mean).norm() <= 1e-10);
}

TEST_CASE("translation equivariance") {
  const Matrix x = standard_normal(150, 6, 37);
  Vector shift(6);
  shift << 3, -1, 0.5, 7, -2, 1;
  Matrix y = x;
  y.rowwise() += shift.transpose();
  EstimatorConfig cfg{ScoreFamily::catoni(1.2), 1e-12, 500};
  const auto a = robustmean::irls_estimate(x, cfg);
  const auto b = robustmean::irls_estimate(y, cfg);
  CHECK((b.estimate - (a.estimate + shift)).norm() <= 1e-9);
}

TEST_CASE("orthogonal equivariance") {
  const Matrix x = standard_normal(120, 5, 41);
  const Matrix q = random_rotation(5, 43);
  const Matrix y = x * q.transpose();
  EstimatorConfig cfg{ScoreFamily::polynomial(1.0, 5), 1e-12, 500};
  const auto a = robustmean::irls_estimate(x, cfg);
  const auto b = robustmean::irls_estimate(y, cfg);
  CHECK((b.estimate - q * a.estimate).norm() <= 1e-8);
}

TEST_CASE("objective decreases along the iterate path") {
  const Matrix x = standard_normal(80, 4, 53).array() * 2.0;
  for (const auto& f : {ScoreFamily::huber(0.8), ScoreFamily::catoni(0.8),
                        ScoreFamily::polynomial(0.8, 5)}) {
    EstimatorConfig cfg{f};
    cfg.keep_iterate_history = true;
    const auto res = robustmean::irls_estimate(x, cfg);
    REQUIRE(res.iterate_history.size() >= 2);
    double prev = objective(x, res.iterate_history.front(), f);
    for (size_t k = 1; k < res.iterate_history.size(); ++k) {
      const double cur = objective(x, res.iterate_history[k], f);
      CHECK(cur <= prev + 1e-10 * std::max(1.0, std::abs(prev)));
      prev = cur;
    }
  }
}

TEST_CASE("custom init and iteration caps are honored") {
  const Matrix x = standard_normal(60, 3, 59);
  EstimatorConfig cfg{ScoreFamily::catoni(1.0)};
  cfg.init = Vector::Constant(3, 100.0);
  cfg.max_iter = 1;
  const auto res = robustmean::irls_estimate(x, cfg);
  CHECK_FALSE(res.converged);
  CHECK(res.iterations == 1);

  cfg.max_iter = 500;
  const auto full = robustmean::irls_estimate(x, cfg);
  CHECK(full.converged);
  CHECK(robustmean::fixed_point_residual(x, full.estimate, cfg.score) <= 1e-8);
}

TEST_CASE("weights are reported at the final estimate") {
  Matrix x(4, 1);
  x << 0.0, 0.1, -0.1, 50.0;
  EstimatorConfig cfg{ScoreFamily::huber(1.0)};
  const auto res = robustmean::irls_estimate(x, cfg);
  REQUIRE(res.weights.size() == 4);
  const double r_out = std::abs(50.0 - res.estimate(0));
  CHECK(res.weights(3) == doctest::Approx(1.0 / r_out).epsilon(1e-12));
  CHECK(res.weights(0) <= 1.0 + 1e-12);
  CHECK(res.weights.minCoeff() > 0.0);
}

TEST_CASE("single observation is its own estimate") {
  Matrix x(1, 3);
  x << 4.0, -1.0, 2.5;
  EstimatorConfig cfg{ScoreFamily::catoni(3.0)};
  const auto res = robustmean::irls_estimate(x, cfg);
  CHECK(res.converged);
  CHECK((res.estimate - x.row(0).transpose()).norm() <= 1e-14);
}

TEST_CASE("empty input is rejected") {
  Matrix x(0, 3);
  EstimatorConfig cfg{ScoreFamily::huber(1.0)};
  CHECK_THROWS_AS(robustmean::irls_estimate(x, cfg), std::invalid_argument);
}

TEST_CASE("population location for discrete atoms") {
  const ScoreFamily huber = ScoreFamily::huber(2.0);
  // Symmetric atoms balance at their midpoint.
  CHECK(robustmean::population_location_1d({{0.0, 0.5}, {1.0, 0.5}}, huber) ==
        doctest::Approx(0.5).epsilon(1e-10));
  // Point mass sits at the atom.
  CHECK(robustmean::population_location_1d({{3.7, 1.0}}, huber) ==
        doctest::Approx(3.7));
  // Bernoulli(0.3) with beta large enough that psi is linear across the
  // support: the root is exactly the mean.
  CHECK(robustmean::population_location_1d({{0.0, 0.7}, {1.0, 0.3}}, huber) ==
        doctest::Approx(0.3).epsilon(1e-10));
  // Oracle by direct scan for a non-linear case.
  const ScoreFamily catoni = ScoreFamily::catoni(0.5);
  const std::vector<Atom> atoms = {{0.0, 0.7}, {1.0, 0.3}};
  auto g = [&](double t) {
    double s = 0.0;
    for (const auto& a : atoms) {
      const double r = std::abs(a.value - t);
      if (r > 0) s += a.prob * (a.value > t ? 1.0 : -1.0) * catoni.psi(r);
    }
    return s;
  };
  const double root = robustmean::population_location_1d(atoms, catoni);
  CHECK(g(root - 1e-6) > 0.0);
  CHECK(g(root + 1e-6) < 0.0);
  CHECK_THROWS_AS(
      robustmean::population_location_1d({{0.0, 0.5}, {1.0, 0.6}}, huber),
      std::invalid_argument);
}
