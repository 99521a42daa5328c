#include "robustmean/score.hpp"

#include <cmath>
#include <stdexcept>

namespace robustmean {
namespace {

// Adaptive Simpson quadrature on [a, b]. Recurses until the Richardson
// error estimate meets the per-interval tolerance share.
double simpson_step(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm,
                        double fb, double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson_step(a, m, fa, flm, fm);
  const double right = simpson_step(m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double rel_tol) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  const double whole = simpson_step(a, b, fa, fm, fb);
  // Absolute tolerance anchored to a first-pass magnitude estimate.
  const double tol = rel_tol * std::max(std::abs(whole), 1e-300);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

}  // namespace

std::string family_name(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::Huber:
      return "huber";
    case FamilyKind::Catoni:
      return "catoni";
    case FamilyKind::Polynomial:
      return "poly";
  }
  throw std::logic_error("unknown family kind");
}

FamilyKind family_from_name(const std::string& name) {
  if (name == "huber") return FamilyKind::Huber;
  if (name == "catoni") return FamilyKind::Catoni;
  if (name == "poly" || name == "polynomial") return FamilyKind::Polynomial;
  throw std::invalid_argument("unknown estimator family: " + name);
}

ScoreFamily::ScoreFamily(FamilyKind kind, double beta, int p)
    : kind_(kind), beta_(beta), p_(p) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw std::invalid_argument("beta must be positive and finite");
  }
  if (kind == FamilyKind::Polynomial && p < 1) {
    throw std::invalid_argument("polynomial exponent p must be >= 1");
  }
}

ScoreFamily ScoreFamily::huber(double beta) {
  return ScoreFamily(FamilyKind::Huber, beta, 0);
}

ScoreFamily ScoreFamily::catoni(double beta) {
  return ScoreFamily(FamilyKind::Catoni, beta, 0);
}

ScoreFamily ScoreFamily::polynomial(double beta, int p) {
  return ScoreFamily(FamilyKind::Polynomial, beta, p);
}

double ScoreFamily::psi(double x) const {
  if (x < 0.0 || std::isnan(x)) {
    throw std::domain_error("psi is defined for nonnegative x");
  }
  const double u = x / beta_;
  switch (kind_) {
    case FamilyKind::Huber:
      return x <= beta_ ? x : beta_;
    case FamilyKind::Catoni: {
      // log(1 + u + u^2/2); the argument u*(1 + u/2) would overflow for
      // u > ~1e154, where 1 + u + u^2/2 ~= u^2/2 to 1 ulp anyway.
      if (u > 1e100) return beta_ * (2.0 * std::log(u) - std::log(2.0));
      return beta_ * std::log1p(u * (1.0 + 0.5 * u));
    }
    case FamilyKind::Polynomial: {
      const double e = 1.0 - 1.0 / static_cast<double>(p_);
      return x / (1.0 + std::pow(u, e));
    }
  }
  throw std::logic_error("unknown family kind");
}

double ScoreFamily::psi_prime(double x) const {
  if (x < 0.0 || std::isnan(x)) {
    throw std::domain_error("psi_prime is defined for nonnegative x");
  }
  const double u = x / beta_;
  switch (kind_) {
    case FamilyKind::Huber:
      return x <= beta_ ? 1.0 : 0.0;
    case FamilyKind::Catoni: {
      if (u > 1e100) return 2.0 / u;
      return (1.0 + u) / (1.0 + u * (1.0 + 0.5 * u));
    }
    case FamilyKind::Polynomial: {
      const double e = 1.0 - 1.0 / static_cast<double>(p_);
      const double t = std::pow(u, e);
      const double denom = 1.0 + t;
      return (1.0 + t / static_cast<double>(p_)) / (denom * denom);
    }
  }
  throw std::logic_error("unknown family kind");
}

double ScoreFamily::rho(double x) const {
  if (x < 0.0 || std::isnan(x)) {
    throw std::domain_error("rho is defined for nonnegative x");
  }
  if (x == 0.0) return 0.0;
  if (kind_ == FamilyKind::Huber) {
    if (x <= beta_) return 0.5 * x * x;
    return beta_ * x - 0.5 * beta_ * beta_;
  }
  return integrate([this](double t) { return psi(t); }, 0.0, x, 1e-10);
}

double ScoreFamily::weight(double r) const {
  if (r < 0.0 || std::isnan(r)) {
    throw std::domain_error("weight is defined for nonnegative r");
  }
  if (r == 0.0) return psi_prime(0.0);
  return psi(r) / r;
}

double ScoreFamily::gamma() const {
  switch (kind_) {
    case FamilyKind::Huber:
      return 1.0;
    case FamilyKind::Catoni:
      return 0.8;
    case FamilyKind::Polynomial:
      return 0.25;
  }
  throw std::logic_error("unknown family kind");
}

}  // namespace robustmean
