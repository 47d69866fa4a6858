#pragma once

#include <optional>

#include "ratelab/mappings.hpp"
#include "ratelab/rates.hpp"
#include "ratelab/report.hpp"

namespace ratelab {

/// Inputs shared by the rate transformers. Each transformer reads the fields
/// it needs and raises ContractError when one is missing.
struct TransformerInputs {
  Nat b = 1;
  std::optional<RakotchModulus> delta;
  /// θ_b (Browder side) or θ′_b (Halpern side); must be flagged monotone.
  std::optional<ShiftedMetaRate> theta;
  std::optional<DivergenceRate> A;
  std::optional<DivergenceRate> mu1;
  std::optional<CauchyRate> mu2;
  std::optional<CauchyRate> rho;
  std::optional<MetaRate> psi;
};

/// A bound together with the intermediate values that produced it.
struct BoundResult {
  Nat value = 0;
  Json trace = Json::object();
};

BoundResult psi_viscosity_browder(const TransformerInputs& in, double eps, const NatFn& f, Nat N);
BoundResult psi_viscosity_browder_single(const TransformerInputs& in, double eps, const NatFn& f);
BoundResult cauchy_viscosity_browder(Nat b, double delta, const CauchyRate& rho, double eps);

BoundResult psi_viscosity_halpern(const TransformerInputs& in, double eps, const NatFn& f, Nat N);
BoundResult psi_viscosity_halpern_single(const TransformerInputs& in, double eps, const NatFn& f);
BoundResult cauchy_viscosity_halpern(Nat b, double delta, const DivergenceRate& A,
                                     const CauchyRate& rho, double eps);

/// Ξ(ε) = σ₁[μ̃₁,b](ε, μ₂(δ²ε/(2b))).
BoundResult xi_vkm(Nat b, double delta, const DivergenceRate& mu1, const CauchyRate& mu2,
                   double eps);
/// max{Ξ(ε/3), Ψ(ε/3, f̂)} + 1 with f̂(n) = f(max{Ξ(ε/3), n} + 1).
BoundResult omega_vkm(Nat b, double delta, const MetaRate& psi, const DivergenceRate& mu1,
                      const CauchyRate& mu2, double eps, const NatFn& f);
/// Cauchy-rate form: Ξ with μ₂(δ²ε/(3b)) and Ψ(ε) = ρ(εδ²/8).
BoundResult cauchy_vkm(Nat b, double delta, const CauchyRate& rho, const DivergenceRate& mu1,
                       const CauchyRate& mu2, double eps);

BoundResult meta_browder_relaxed(const MetaRate& psi, const CauchyRate& rho, double delta,
                                 double eps, const NatFn& f);
/// Γ(ε) = σ₁[Ã,b](ε, ρ(δε/2)) with Ã(k) = A(⌈k/δ⌉).
BoundResult relaxed_gamma(const DivergenceRate& A, const CauchyRate& rho, double delta, Nat b,
                          double eps);
BoundResult meta_halpern_relaxed(const MetaRate& psi, const DivergenceRate& A,
                                 const CauchyRate& rho, double delta, Nat b, double eps,
                                 const NatFn& f);
/// Same shape as meta_halpern_relaxed with A a rate for Σαₙβₙ.
BoundResult meta_vkm_relaxed(const MetaRate& psi, const DivergenceRate& A, const CauchyRate& rho,
                             double delta, Nat b, double eps, const NatFn& f);

/// Wraps the single-map Browder and Halpern bounds as metastability rates.
MetaRate vb_meta_rate(const TransformerInputs& in);
MetaRate vh_meta_rate(const TransformerInputs& in);

}  // namespace ratelab
