#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ratelab/geometry.hpp"
#include "ratelab/mappings.hpp"
#include "ratelab/sequences.hpp"

namespace ratelab {

/// Outcome of an inner fixed-point solve z ≈ F(z).
struct InnerSolve {
  Point point;
  /// d(z, F(z)) at the returned point.
  double residual = 0.0;
  Nat iterations = 0;
  Nat budget = 0;
  /// Upper bound on the distance from `point` to the exact fixed point.
  double error_bound = 0.0;
};

using TauSchedule = std::function<double(Nat)>;

/// τₙ = min{1e−10, αₙ·1e−6}.
TauSchedule default_tau(const ScalarSequence& alpha);

/// Banach iteration of F from `start` until d(z,F(z)) ≤ τ, for F contracting
/// with factor q < 1. Budget ⌈ln(τ(1−q)/b)/ln q⌉+1; SolverError beyond it.
InnerSolve solve_contraction(const Space& space, const std::function<Point(const Point&)>& F,
                             const Point& start, double tau, double q);

/// y with y ≈ (1−αₙ)Sₙ(y) ⊕ αₙu.
InnerSolve browder_point(const Space& space, const MapFamily& family, const Point& u,
                         const ScalarSequence& alpha, Nat n, double tau);

/// x with x ≈ (1−αₙ)Sₙ(x) ⊕ αₙφ(x). Constant Rakotch moduli use a single
/// Banach run; other moduli use stages on a halving threshold ε′.
InnerSolve viscosity_browder_point(const Space& space, const MapFamily& family,
                                   const MapDescriptor& phi, const ScalarSequence& alpha, Nat n,
                                   double tau);

struct TrajectoryRecord {
  Point point;
  /// Inner-solve residual (implicit schemes) or the measured per-step defect
  /// of an inexact sequence.
  double residual = 0.0;
  double injected_error = 0.0;
  /// Bound on the distance to the exact iterate the record stands for.
  double error_bound = 0.0;
  Nat iterations = 0;
  bool clamped = false;
};

/// Moves `x` a distance `magnitude` towards the ball centre (onto the centre
/// when closer than that).
Point push_toward_center(const Space& space, const Point& x, double magnitude);

using PerturbRule = std::function<Point(const Space&, const Point&, double)>;

inline constexpr Nat kDefaultHorizon = 1'000'000;

/// Lazily generated iterate sequence. Single cursor: not safe to extend from
/// several threads, independent trajectories are.
class Trajectory {
 public:
  using Step = std::function<Point(Nat, const Point&)>;
  using Solve = std::function<InnerSolve(Nat)>;

  /// x₀ = start, x_{n+1} = step(n, xₙ).
  static Trajectory explicit_scheme(Space space, std::string scheme, Point start, Step step,
                                    Json provenance);
  /// xₙ = solve(n), a fixed point of map(n, ·).
  static Trajectory implicit_scheme(Space space, std::string scheme, Step map, Solve solve,
                                    Json provenance);

  const TrajectoryRecord& record(Nat n);
  const Point& operator[](Nat n) { return record(n).point; }
  void extend_to(Nat n);

  Nat size() const noexcept { return records_.size(); }
  Nat horizon() const noexcept { return horizon_; }
  void set_horizon(Nat h) noexcept { horizon_ = h; }
  bool implicit() const noexcept { return static_cast<bool>(solve_); }
  const std::string& scheme() const noexcept { return scheme_; }
  const Json& provenance() const noexcept { return provenance_; }
  const Space& space() const noexcept { return space_; }

  /// Inexact variant: explicit schemes perturb every step by εₙ, implicit
  /// schemes perturb the solved point by εₙ/2. The measured defect is recorded
  /// in `residual` and must not exceed εₙ (plus the inner tolerance).
  Trajectory inject_errors(const ScalarSequence& eps, PerturbRule rule = push_toward_center) const;

  /// index,x0..,residual,injected_error for indices [0, count).
  void write_csv(std::ostream& out, Nat count);

 private:
  Trajectory(Space space, std::string scheme, Json provenance)
      : space_(std::move(space)), scheme_(std::move(scheme)), provenance_(std::move(provenance)) {}

  TrajectoryRecord generate(Nat n);

  Space space_;
  std::string scheme_;
  Json provenance_;
  Nat horizon_ = kDefaultHorizon;
  Point start_;
  Step step_;
  Step map_;
  Solve solve_;
  std::function<double(Nat)> errors_;
  PerturbRule perturb_;
  std::vector<TrajectoryRecord> records_;
};

Trajectory browder_traj(const Space& space, const MapFamily& family, const Point& u,
                        const ScalarSequence& alpha, TauSchedule tau = {});
Trajectory viscosity_browder_traj(const Space& space, const MapFamily& family,
                                  const MapDescriptor& phi, const ScalarSequence& alpha,
                                  TauSchedule tau = {});
Trajectory halpern_traj(const Space& space, const MapFamily& family, const Point& u,
                        const Point& start, const ScalarSequence& alpha);
Trajectory viscosity_halpern_traj(const Space& space, const MapFamily& family,
                                  const MapDescriptor& phi, const Point& start,
                                  const ScalarSequence& alpha);
Trajectory km_traj(const Space& space, const MapDescriptor& T, const Point& start,
                   const ScalarSequence& beta);
/// αₙ may be 0 here so that the reduction to km_traj can be exercised.
Trajectory vkm_traj(const Space& space, const MapDescriptor& T, const MapDescriptor& phi,
                    const Point& start, const ScalarSequence& alpha, const ScalarSequence& beta);

}  // namespace ratelab
