#pragma once

#include <functional>
#include <string>

#include "ratelab/numeric.hpp"

namespace ratelab {

/// ρ : (0,∞) → ℕ with ∀i,j ≥ ρ(ε): d(xᵢ,xⱼ) ≤ ε.
class CauchyRate {
 public:
  CauchyRate(std::function<Nat(double)> fn, std::string name);
  Nat operator()(double eps) const;
  const std::string& name() const noexcept { return name_; }

 private:
  std::function<Nat(double)> fn_;
  std::string name_;
};

/// φ(ε, f): a bound on the start of an ε-stable window [n, f(n)].
class MetaRate {
 public:
  using Fn = std::function<Nat(double, const NatFn&)>;
  MetaRate(Fn fn, std::string name, bool f_independent = false);
  Nat operator()(double eps, const NatFn& f) const;
  bool f_independent() const noexcept { return f_independent_; }
  const std::string& name() const noexcept { return name_; }

 private:
  Fn fn_;
  std::string name_;
  bool f_independent_;
};

/// θ(ε, f, N): a bound on a window start lying in [N, θ(ε,f,N)].
/// f-independent instances cache their values per (ε, N).
class ShiftedMetaRate {
 public:
  using Fn = std::function<Nat(double, const NatFn&, Nat)>;
  ShiftedMetaRate(Fn fn, std::string name, bool monotone_in_N, bool f_independent = false);
  Nat operator()(double eps, const NatFn& f, Nat N) const;
  bool monotone_in_N() const noexcept { return monotone_; }
  bool f_independent() const noexcept { return f_independent_; }
  const std::string& name() const noexcept { return name_; }

 private:
  Fn fn_;
  std::string name_;
  bool monotone_;
  bool f_independent_;
};

/// A with Σ_{i=0}^{A(k)} λᵢ ≥ k.
class DivergenceRate {
 public:
  DivergenceRate(NatFn fn, std::string name, bool monotone = true);
  Nat operator()(Nat k) const { return fn_(k); }
  bool monotone() const noexcept { return monotone_; }
  const std::string& name() const noexcept { return name_; }
  const NatFn& fn() const noexcept { return fn_; }

 private:
  NatFn fn_;
  std::string name_;
  bool monotone_;
};

/// A′ with ∏_{i=m}^{A′(m,ε)} (1−λᵢ) ≤ ε for ε ∈ (0,1].
class ProductRate {
 public:
  ProductRate(std::function<Nat(Nat, double)> fn, std::string name);
  Nat operator()(Nat m, double eps) const;
  const std::string& name() const noexcept { return name_; }

 private:
  std::function<Nat(Nat, double)> fn_;
  std::string name_;
};

/// σ₁[A,B](ε,N) = A(N + ⌈ln(2B/ε)⌉) + 1.
Nat sigma1(const DivergenceRate& A, Nat B, double eps, Nat N);

struct Sigma2 {
  Nat value = 0;
  /// ε/(2B) exceeded 1 and was clamped to 1.
  bool clamped = false;
};

/// σ₂[A′,B](ε,N) = max{A′(N, ε/2B), N} + 1.
Sigma2 sigma2(const ProductRate& A, Nat B, double eps, Nat N);

/// k ↦ A(⌈k/δ⌉), a rate of divergence for Σ δλₙ.
DivergenceRate scale_divergence(const DivergenceRate& A, double delta);

/// φ(ε,f) := ρ(ε), flagged f-independent.
MetaRate cauchy_as_meta(const CauchyRate& rho);
/// ρ(ε) := φ(ε, ·); requires the f-independent flag (ContractError otherwise).
CauchyRate meta_const_as_cauchy(const MetaRate& phi);

/// max{N, φ(ε, f_N)} with f_N(m) = f(max{N,m}).
Nat shift_meta(const MetaRate& phi, double eps, const NatFn& f, Nat N);
/// The function (ε,f,N) ↦ shift_meta(φ,ε,f,N).
ShiftedMetaRate shifted(const MetaRate& phi);

/// θ^maj(ε,f,N) = max_{N′≤N} θ(ε,f,N′), flagged monotone.
ShiftedMetaRate monotone_majorant(const ShiftedMetaRate& theta);

/// θ(ε,f,N) = max{N, ρ(ε)}: monotone, f-independent.
ShiftedMetaRate theta_from_cauchy(const CauchyRate& rho);

/// Thread-safe per-argument cache around f.
NatFn memoize(NatFn f);

}  // namespace ratelab
