#pragma once

#include <string>

namespace robustmean {

enum class FamilyKind { Huber, Catoni, Polynomial };

std::string family_name(FamilyKind kind);
FamilyKind family_from_name(const std::string& name);

/// A bounded-influence score function psi together with its threshold beta.
///
/// All three families satisfy psi(x) = beta * psi_1(x / beta) where psi_1 is
/// the member with beta = 1, are concave nondecreasing on [0, inf) with
/// psi(0) = 0, and behave like the identity for small x.
class ScoreFamily {
 public:
  static ScoreFamily huber(double beta);
  static ScoreFamily catoni(double beta);
  static ScoreFamily polynomial(double beta, int p = 5);

  FamilyKind kind() const { return kind_; }
  double beta() const { return beta_; }
  int p() const { return p_; }

  /// Score value at x >= 0. Throws std::domain_error for negative x.
  double psi(double x) const;

  /// One-sided derivative of psi; at the Huber kink x == beta the left
  /// derivative 1 is returned.
  double psi_prime(double x) const;

  /// Antiderivative rho(x) = integral of psi over [0, x]. Closed form for
  /// Huber, adaptive Simpson quadrature (rel tol 1e-10) otherwise.
  double rho(double x) const;

  /// IRLS weight psi(r) / r, extended continuously at r = 0 by psi_prime(0).
  double weight(double r) const;

  /// Lower bound on psi_prime over [0, beta]: 1, 4/5, 1/4 by family.
  double gamma() const;

 private:
  ScoreFamily(FamilyKind kind, double beta, int p);

  FamilyKind kind_;
  double beta_;
  int p_;
};

}  // namespace robustmean
