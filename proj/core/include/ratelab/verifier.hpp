#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ratelab/counterfunction.hpp"
#include "ratelab/rates.hpp"
#include "ratelab/report.hpp"
#include "ratelab/schemes.hpp"
#include "ratelab/transformers.hpp"

namespace ratelab {

struct WindowWitness {
  Nat n = 0;
  Nat window_end = 0;
  double max_pairwise_distance = 0.0;
  /// Tolerance added to ε: twice the largest per-index error bound in the
  /// window plus 1e−12.
  double slack = 0.0;
};

struct WindowSearch {
  /// pass: witness found; fail: every start in [N, bound] was fully
  /// evaluated and exceeded ε + slack; inconclusive: a resource limit hit.
  Status status = Status::inconclusive;
  std::optional<WindowWitness> witness;
  /// Window starts evaluated.
  Nat scanned = 0;
  /// Smallest max-distance among failed starts, for diagnostics.
  double best_failed_distance = 0.0;
  std::string note;

  Json to_json() const;
};

/// Windows larger than this are only checked in ℝ¹, via running extremes.
inline constexpr Nat kMaxPairwiseWindow = 100'000;

/// Smallest n ∈ [N, bound] with max_{i,j∈[n,f(n)]} d(xᵢ,xⱼ) ≤ ε + slack.
/// f(n) < n gives the empty window, which passes.
WindowSearch find_metastable_window(Trajectory& traj, double eps, const NatFn& f, Nat bound,
                                    Nat N = 0);

/// Samples pairs i,j ≥ ρ(ε) up to ρ(ε)+tail: every (ρ(ε), j), every (j, last)
/// and `pair_budget` random pairs.
VerificationReport check_cauchy_rate(Trajectory& traj, const CauchyRate& rho,
                                     const std::vector<double>& eps_grid, Nat pair_budget,
                                     Nat tail = 1000, std::uint64_t seed = 0);

/// aᵢ₊₁ = (1−λᵢ)aᵢ + λᵢbᵢ for i < p, a₀ given.
struct XuInstance {
  std::vector<double> lambda;
  std::vector<double> b;
  double a0 = 0.0;
  Nat N = 0;
  Nat p = 0;
  Nat B = 1;
  double eps = 1.0;

  Json to_json() const;
};

/// Independent oracle for the σ₁ conclusion: verifies the premises directly
/// (bᵢ ≤ ε/2 on [N,p], aᵢ ≤ B, and Σ_{i≤A(k)} λᵢ ≥ k for the k involved) and
/// then aᵢ ≤ ε + 1e−9 on [claimed, p]. A violated or unverifiable premise is
/// inconclusive.
VerificationReport brute_force_xu(const XuInstance& in, const DivergenceRate& A, Nat claimed);

/// As brute_force_xu for the σ₂ conclusion, with the premise
/// ∏_{i=N}^{A′(N,ε/2B)} (1−λᵢ) ≤ ε/2B checked directly.
VerificationReport brute_force_xu_product(const XuInstance& in, const ProductRate& A, Nat claimed);

/// The sequence the oracles evaluate, a₀ … a_p.
std::vector<double> xu_extremal_sequence(const XuInstance& in);

using TrajectoryFactory = std::function<Trajectory()>;
using BoundFn = std::function<BoundResult(double eps, const Counterfunction& f)>;

/// For every (ε,f): evaluates the bound, runs find_metastable_window on a
/// fresh trajectory and records the witness. Cases run in parallel.
VerificationReport check_bound_soundness(const std::string& check_id,
                                         const TrajectoryFactory& make_trajectory,
                                         const BoundFn& bound, const std::vector<double>& eps_grid,
                                         const std::vector<Counterfunction>& f_grid, Nat N = 0);

}  // namespace ratelab
