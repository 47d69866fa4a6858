#pragma once

#include <cstddef>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include "ratelab/numeric.hpp"
#include "ratelab/report.hpp"

namespace ratelab {

/// A point of the ambient space ℝⁿ. Entries are always finite.
class Point {
 public:
  Point() = default;
  explicit Point(std::vector<double> coords);
  Point(std::initializer_list<double> coords);

  static Point zeros(std::size_t dim) { return Point(std::vector<double>(dim, 0.0)); }

  std::size_t dim() const noexcept { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  std::span<const double> coords() const noexcept { return coords_; }
  const std::vector<double>& vector() const noexcept { return coords_; }

  friend bool operator==(const Point&, const Point&) = default;

 private:
  std::vector<double> coords_;
};

// Plain vector arithmetic; the metric structure lives in Space.
Point operator+(const Point& a, const Point& b);
Point operator-(const Point& a, const Point& b);
Point operator*(double s, const Point& a);
double dot(const Point& a, const Point& b);
double euclidean_norm(const Point& a);

enum class Ambient { euclidean, weighted_euclidean, sup_norm };

/// The convexity map W. `corrupted_lambda_squared` uses λ² in place of λ and
/// exists only to exercise the axiom checker's failure path.
enum class Convexity { linear, corrupted_lambda_squared };

struct Ball {
  Point center;
  double radius = 1.0;
};

/// A W-hyperbolic space (ℝⁿ with a norm-induced metric and the linear W)
/// together with the convex subset C, always a closed ball, and an integer
/// bound b ≥ diam(C).
class Space {
 public:
  Space(std::size_t dimension, Ball ball, Nat diameter_bound,
        Ambient ambient = Ambient::euclidean, std::vector<double> weights = {},
        Convexity convexity = Convexity::linear);

  /// Euclidean ball of the given radius centred at the origin.
  static Space euclidean_ball(std::size_t dimension, double radius, Nat diameter_bound);

  std::size_t dimension() const noexcept { return dim_; }
  const Ball& ball() const noexcept { return ball_; }
  Nat diameter_bound() const noexcept { return b_; }
  Ambient ambient() const noexcept { return ambient_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  Convexity convexity() const noexcept { return convexity_; }

  double dist(const Point& x, const Point& y) const;
  /// Distance to the origin of the ambient space.
  double norm(const Point& x) const;
  /// W(x, y, λ) = (1−λ)x ⊕ λy.
  Point combine(const Point& x, const Point& y, double lambda) const;

  /// How far x lies outside C (0 when inside).
  double excess(const Point& x) const;
  bool contains(const Point& x, double slack = 1e-12) const { return excess(x) <= slack; }
  /// Radial retraction onto C along the segment towards the centre.
  Point project(const Point& x) const;

  Space with_convexity(Convexity c) const;

  Json to_json() const;
  static Space from_json(const Json& j);

 private:
  void check_dim(const Point& x) const;

  std::size_t dim_;
  Ball ball_;
  Nat b_;
  Ambient ambient_;
  std::vector<double> weights_;
  Convexity convexity_;
};

double dist(const Space& space, const Point& x, const Point& y);
Point w_combine(const Space& space, const Point& x, const Point& y, double lambda);

/// Seeded source of points distributed uniformly in a ball of the space.
class BallSampler {
 public:
  BallSampler(const Space& space, std::uint64_t seed);

  /// Uniform point of C.
  Point point();
  /// Uniform point of the ball of `radius` around `center` (Euclidean shape).
  Point point_in(const Point& center, double radius);
  double uniform(double lo, double hi);
  std::mt19937_64& engine() noexcept { return rng_; }

 private:
  const Space* space_;
  std::mt19937_64 rng_;
};

/// Samples tuples and reports the worst violation of each axiom (W1)–(W4)
/// plus ball convexity, and CN⁻ when requested. Passes iff every violation is
/// within `tol`.
VerificationReport check_w_axioms(const Space& space, BallSampler& sampler, std::size_t n_samples,
                                  double tol, bool check_cn = false);

}  // namespace ratelab
