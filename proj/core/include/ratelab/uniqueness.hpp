#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "ratelab/geometry.hpp"
#include "ratelab/mappings.hpp"
#include "ratelab/rates.hpp"
#include "ratelab/report.hpp"
#include "ratelab/sequences.hpp"

namespace ratelab {

/// η : (0,2] → (0,1], extended by 1 above 2. The factored form η(ε) = ε·η̃(ε)
/// with η̃ nondecreasing unlocks the improved thresholds.
class UniformConvexityModulus {
 public:
  UniformConvexityModulus(std::function<double(double)> eta, std::string name,
                          std::function<double(double)> eta_tilde = {});

  /// η(ε) = ε²/8, η̃(ε) = ε/8.
  static UniformConvexityModulus hilbert();
  /// η(ε) = ε^p/K, factored when p ≥ 1.
  static UniformConvexityModulus power(double p, double K);

  double operator()(double eps) const;
  bool factored() const noexcept { return static_cast<bool>(eta_tilde_); }
  double tilde(double eps) const;
  const std::string& name() const noexcept { return name_; }

 private:
  std::function<double(double)> eta_;
  std::function<double(double)> eta_tilde_;
  std::string name_;
};

/// Checks η(ε) = ε·η̃(ε) and that η̃ is nondecreasing on a grid of (0,2].
VerificationReport check_factored_form(const UniformConvexityModulus& eta, std::size_t grid = 200);

/// Ω(ε,b) of condition (+).
class AccretivityModulus {
 public:
  AccretivityModulus(std::function<double(double, double)> omega, std::string name);
  /// Ω(ε,b) = K·ε².
  static AccretivityModulus quadratic(double K);

  double operator()(double eps, double b) const;
  const std::string& name() const noexcept { return name_; }

 private:
  std::function<double(double, double)> omega_;
  std::string name_;
};

/// ι(ε) ≤ inf_{x∈[0,b]} (φ(x+ε) − φ(x)).
class StrictIncreaseModulus {
 public:
  StrictIncreaseModulus(std::function<double(double)> iota, std::string name);
  /// ι(ε) = k·ε, the exact modulus of φ(t) = k·t.
  static StrictIncreaseModulus linear(double k);

  double operator()(double eps) const;
  const std::string& name() const noexcept { return name_; }

 private:
  std::function<double(double)> iota_;
  std::string name_;
};

/// Ω(ε,b) = ε·ι(ε)/2.
double omega_from_phi(const StrictIncreaseModulus& iota, double eps, double b);
AccretivityModulus accretivity_from_phi(const StrictIncreaseModulus& iota);

/// Grid estimate of inf_{x∈[0,b]} (φ(x+ε) − φ(x)). Heuristic: never used in
/// assertions.
double estimate_iota_heuristic(const std::function<double(double)>& phi, double b, double eps,
                               std::size_t grid = 1000);

enum class UniquenessForm { automatic, general, improved };

/// ω_b(ε). `automatic` picks the improved form when η is factored.
double modulus_of_uniqueness(const AccretivityModulus& Omega, const UniformConvexityModulus& eta,
                             double b, double eps, UniquenessForm form = UniquenessForm::automatic);

/// β(b,ε) = (ε/2)·η(ε/b), or β′ = b·η(ε/b) when `improved`.
double beta_lemma3(const UniformConvexityModulus& eta, double b, double eps, bool improved = false);

/// ε·η(ε/2b)/4, or b·η(ε/2b) when `improved`.
double midpoint_afp_threshold(const UniformConvexityModulus& eta, double b, double eps,
                              bool improved = false);

/// Ω(ε,b)/(4b).
double lemma1_threshold(const AccretivityModulus& Omega, double b, double eps);

/// ω/(2b).
double path_cauchy_threshold(double omega, double b);

/// 2b/√(π·Σ_{i≤n} βᵢ(1−βᵢ)); +∞ when the sum vanishes.
double km_residual_bound(double b, const ScalarSequence& beta, Nat n);

inline constexpr Nat kSimulationLimit = 1'000'000;

struct RateResult {
  Nat value = 0;
  /// value ≤ kSimulationLimit.
  bool feasible = true;
  Json trace;
};

/// γ(⌈4b²/(π·ω²)⌉).
RateResult km_cauchy_rate(const DivergenceRate& gamma, double b, double omega);

/// max{θ(Dε/4b)+1, α(ε/4b)}+1 for 0 < D ≤ ∏_{n=1}^{β(ε/8b)} (1−α_{n+1}).
RateResult halpern_cauchy_rate(double eps, double b, const CauchyRate& theta,
                               const CauchyRate& alpha, const CauchyRate& beta, double D);

/// ⌈4b/ε + 32b²/ε²⌉, the αₙ = 1/(n+1) instance.
RateResult halpern_cauchy_rate_harmonic(double eps, double b);

/// T = c·I (or a rotation) on the ball of radius b about 0, with A = I − T
/// uniformly accretive and fixed point 0. ‖x − Tx‖ = residual_factor·‖x‖.
struct AccretiveTestbed {
  std::string tag;
  double c = 0.0;
  double b = 1.0;
  Space space;
  MapDescriptor T;
  /// φ(t) = slope·t in the Brezis–Sibony inequality.
  double phi_slope = 1.0;
  double residual_factor = 1.0;
  AccretivityModulus Omega;
  Point fixed_point;

  double residual(const Point& x) const;
};

/// T = c·I, φ(t) = (1−c)t, Ω(ε,b) = (1−c)ε²/2.
AccretiveTestbed make_testbed(double c, Nat b, std::size_t dimension);
/// Planar rotation by `angle`, φ(t) = (1−cos angle)t.
AccretiveTestbed rotation_testbed(double angle, Nat b);

/// ⟨Ax−Ay, x−y⟩ ≥ φ-gap on sampled pairs, and condition (+) on `eps_grid`.
VerificationReport check_testbed(const AccretiveTestbed& tb, std::uint64_t seed, std::size_t pairs,
                                 const std::vector<double>& eps_grid);

/// Residuals ≤ Ω(ε)/(4b) ⇒ |‖x₁‖−‖x₂‖| ≤ ε.
VerificationReport check_lemma1(const AccretiveTestbed& tb, double eps, std::uint64_t seed,
                                std::size_t pairs);
/// Residuals ≤ midpoint threshold ⇒ the midpoint has residual ≤ ε.
VerificationReport check_lemma2(const AccretiveTestbed& tb, const UniformConvexityModulus& eta,
                                double eps, bool improved, std::uint64_t seed, std::size_t pairs);
/// ‖x₁‖ ≥ ‖x₂‖, ‖x₁−x₂‖ > ε ⇒ ‖(x₁+x₂)/2‖ < ‖x₁‖ − β + 1e−12.
VerificationReport check_lemma3(const AccretiveTestbed& tb, const UniformConvexityModulus& eta,
                                double eps, bool improved, std::uint64_t seed, std::size_t pairs);
/// Residuals ≤ ω_b(ε) ⇒ ‖x₁−x₂‖ ≤ ε; pairs at 10·ω_b(ε) are reported only.
VerificationReport check_uniqueness(const AccretiveTestbed& tb, const UniformConvexityModulus& eta,
                                    double eps, UniquenessForm form, std::uint64_t seed,
                                    std::size_t pairs);

/// Measured ‖xₙ − Txₙ‖ ≤ km_residual_bound(b,β,n) for n = 0..n_max.
VerificationReport check_km_residual(const Space& space, const MapDescriptor& T, const Point& start,
                                     const ScalarSequence& beta, double b, Nat n_max);

/// Path points below ω_b(ε)/(2b) are ε-close. Inconclusive when the inner
/// solve for such an α exceeds the simulation limit.
VerificationReport check_path_threshold(const AccretiveTestbed& tb,
                                        const UniformConvexityModulus& eta, double eps,
                                        const Point& anchor);

/// Halpern iterates with αₙ = 1/(n+1) are ε-close beyond Φ(ω_b(ε)); when that
/// index is beyond the limit, the pair (n_max/2, n_max) is measured and the
/// check is inconclusive.
VerificationReport check_halpern_rate(const AccretiveTestbed& tb,
                                      const UniformConvexityModulus& eta, double eps,
                                      const Point& anchor, const Point& start, Nat n_max);

}  // namespace ratelab
