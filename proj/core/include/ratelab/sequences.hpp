#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ratelab/numeric.hpp"
#include "ratelab/rates.hpp"
#include "ratelab/report.hpp"

namespace ratelab {

/// A real sequence n ↦ sₙ with a declared domain that every value is checked
/// against.
class ScalarSequence {
 public:
  enum class Domain { unit_open_closed, unit_closed, nonnegative };

  ScalarSequence(std::function<double(Nat)> fn, std::string name,
                 Domain domain = Domain::unit_closed);

  /// c/(n+1)^p.
  static ScalarSequence harmonic(double c, double p, Domain domain = Domain::unit_open_closed);
  static ScalarSequence one_over_n_plus_1() { return harmonic(1.0, 1.0); }
  static ScalarSequence constant(double c, Domain domain = Domain::unit_closed);
  /// base + amp·(−1)ⁿ.
  static ScalarSequence alternating(double base, double amp);
  /// Explicit values, then `tail` forever.
  static ScalarSequence table(std::vector<double> values, double tail,
                              Domain domain = Domain::unit_closed);
  /// n ↦ aₙ·bₙ.
  static ScalarSequence product(const ScalarSequence& a, const ScalarSequence& b);

  double operator()(Nat n) const;
  const std::string& name() const noexcept { return name_; }
  Domain domain() const noexcept { return domain_; }

  Json to_json() const;
  static ScalarSequence from_json(const Json& j);

 private:
  std::function<double(Nat)> fn_;
  std::string name_;
  Domain domain_;
  Json descriptor_;
};

/// Checks Σ_{i=from}^{A(k)} sᵢ ≥ k for k = 0..k_max by direct summation up to
/// `horizon`; values of A beyond the horizon make the check inconclusive.
VerificationReport validate_divergence(const ScalarSequence& s, const DivergenceRate& A,
                                       Nat k_max, Nat horizon, Nat from = 0);

/// Checks ∏_{i=m}^{A′(m,ε)} (1−sᵢ) ≤ ε on the given grids.
VerificationReport validate_product_rate(const ScalarSequence& s, const ProductRate& A,
                                         const std::vector<Nat>& m_grid,
                                         const std::vector<double>& eps_grid, Nat horizon);

/// Checks |sₙ| ≤ ε for all n ∈ [ρ(ε), horizon] (a rate of convergence to 0).
VerificationReport validate_null_rate(const std::function<double(Nat)>& s, const std::string& name,
                                      const CauchyRate& rho, const std::vector<double>& eps_grid,
                                      Nat horizon, Nat from = 0);

}  // namespace ratelab
