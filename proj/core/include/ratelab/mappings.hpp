#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ratelab/geometry.hpp"

namespace ratelab {

/// δ : (0,∞) → (0,1) with d(x,y) ≥ ε ⇒ d(φx,φy) ≤ (1−δ(ε))·d(x,y).
class RakotchModulus {
 public:
  RakotchModulus(std::function<double(double)> delta, std::string name,
                 bool nonincreasing = false);
  static RakotchModulus constant(double delta);

  /// Evaluates δ(ε); throws ModulusError when the value leaves (0,1).
  double operator()(double eps) const;

  std::optional<double> constant_value() const noexcept { return constant_; }
  bool nonincreasing() const noexcept { return nonincreasing_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::function<double(double)> delta_;
  std::string name_;
  bool nonincreasing_ = false;
  std::optional<double> constant_;
};

/// Meir–Keeler modulus specialised to threshold ε/4: σ(ε) ∈ (0,ε) with
/// d(x,y) < ε/4 + σ(ε) ⇒ d(φx,φy) ≤ ε/4. The abstract "∀ε ∃δ" form is not
/// computable, so this is the shape every MKC map is described with.
class MKCModulus {
 public:
  MKCModulus(std::function<double(double)> sigma, std::string name);
  /// σ(ε) = ratio·ε.
  static MKCModulus proportional(double ratio);

  /// Evaluates σ(ε); throws ModulusError when σ(ε) ∉ (0,ε).
  double operator()(double eps) const;

  std::optional<double> ratio() const noexcept { return ratio_; }
  const std::string& name() const noexcept { return name_; }

 private:
  std::function<double(double)> sigma_;
  std::string name_;
  std::optional<double> ratio_;
};

/// δ(ε) := σ(ε)/(4ε), the explicit witness of the MKC ⇒ Rakotch argument.
RakotchModulus rakotch_from_mkc(const MKCModulus& mkc);

/// Constant modulus δ ≡ 1−r for an r-contraction, kept inside (0,1) by
/// clamping to 1−1e−12 when r = 0.
RakotchModulus rakotch_from_contraction(double r);

inline constexpr double kMaxConstantDelta = 1.0 - 1e-12;

// ---------------------------------------------------------------------------
// Map kinds

struct ScaledIdentity {
  double c = 1.0;
  std::optional<Point> fixed;  // defaults to the ball centre
};

/// Rotation of the first two coordinates about `fixed`.
struct Rotation {
  double angle = 0.0;
  std::optional<Point> fixed;
};

struct ConstantMap {
  Point value;
};

/// x ↦ Mx + shift.
struct AffineMap {
  std::vector<std::vector<double>> matrix;
  Point shift;
};

struct MapDescriptor;

/// P_C ∘ inner, for inner maps that may leave C.
struct ProjectionComposite {
  std::shared_ptr<const MapDescriptor> inner;
};

/// One-dimensional piecewise-linear map through the given nodes, constant
/// beyond the first and last node. Validated by sampling only.
struct TableMap {
  std::vector<std::pair<double, double>> nodes;
};

using MapKind =
    std::variant<ScaledIdentity, Rotation, ConstantMap, AffineMap, ProjectionComposite, TableMap>;

struct Nonexpansive {};
struct RContraction {
  double r = 0.0;
};
struct MkcClass {
  MKCModulus modulus;
};
struct RakotchClass {
  RakotchModulus modulus;
};

using ContractionClass = std::variant<Nonexpansive, RContraction, MkcClass, RakotchClass>;

std::string class_name(const ContractionClass& c);

/// A closed-form self-map of C plus the contraction class it is claimed to
/// belong to. The claim is checked by sampling (check_class), never assumed.
struct MapDescriptor {
  MapKind kind;
  ContractionClass claimed = Nonexpansive{};
  std::string label;

  static MapDescriptor identity();
  static MapDescriptor scaled(double c, std::optional<Point> fixed = std::nullopt);
  static MapDescriptor rotation(double angle, std::optional<Point> fixed = std::nullopt);
  static MapDescriptor constant(Point value);
  static MapDescriptor affine(std::vector<std::vector<double>> matrix, Point shift,
                              ContractionClass claimed = Nonexpansive{});
  static MapDescriptor projected(MapDescriptor inner);
  static MapDescriptor table(std::vector<std::pair<double, double>> nodes,
                             ContractionClass claimed = Nonexpansive{});

  MapDescriptor with_class(ContractionClass c) const;
};

/// Rakotch modulus implied by the claimed class; nonexpansive claims carry
/// none and throw ContractError.
RakotchModulus rakotch_modulus(const MapDescriptor& map);

/// Evaluates the map. The argument must lie in C (InputError otherwise), and
/// so must the image up to round-off, which is retracted onto C.
Point apply(const Space& space, const MapDescriptor& map, const Point& x);

/// Samples pairs (half of them at short range) and checks C-invariance and the
/// inequality of the claimed class; Rakotch and MKC claims are checked at
/// every ε of `eps_grid`.
VerificationReport check_class(const Space& space, const MapDescriptor& map,
                               BallSampler& sampler, std::size_t n_samples, double tol,
                               const std::vector<double>& eps_grid = {1.0, 0.5, 0.25, 0.125});

/// n ↦ Sₙ. Most experiments use a constant family.
class MapFamily {
 public:
  static MapFamily constant(MapDescriptor map);
  static MapFamily indexed(std::function<MapDescriptor(Nat)> generator, std::string label);

  MapDescriptor at(Nat n) const;
  bool is_constant() const noexcept { return constant_.has_value(); }
  const std::string& label() const noexcept { return label_; }

 private:
  std::optional<MapDescriptor> constant_;
  std::function<MapDescriptor(Nat)> generator_;
  std::string label_;
};

/// Checks nonexpansiveness of S₀ … S_{members−1}.
VerificationReport check_family(const Space& space, const MapFamily& family, BallSampler& sampler,
                                Nat members, std::size_t n_samples, double tol);

}  // namespace ratelab
