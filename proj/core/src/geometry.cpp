#include "ratelab/geometry.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ratelab/errors.hpp"

namespace ratelab {

Point::Point(std::vector<double> coords) : coords_(std::move(coords)) {
  for (double c : coords_) {
    if (!std::isfinite(c)) throw InputError("Point: non-finite coordinate");
  }
}

Point::Point(std::initializer_list<double> coords) : Point(std::vector<double>(coords)) {}

namespace {

void require_same_dim(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) {
    throw InputError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                     std::to_string(b.dim()));
  }
}

}  // namespace

Point operator+(const Point& a, const Point& b) {
  require_same_dim(a, b);
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] + b[i];
  return Point(std::move(out));
}

Point operator-(const Point& a, const Point& b) {
  require_same_dim(a, b);
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] - b[i];
  return Point(std::move(out));
}

Point operator*(double s, const Point& a) {
  std::vector<double> out(a.dim());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = s * a[i];
  return Point(std::move(out));
}

double dot(const Point& a, const Point& b) {
  require_same_dim(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

double euclidean_norm(const Point& a) { return std::sqrt(dot(a, a)); }

Space::Space(std::size_t dimension, Ball ball, Nat diameter_bound, Ambient ambient,
             std::vector<double> weights, Convexity convexity)
    : dim_(dimension),
      ball_(std::move(ball)),
      b_(diameter_bound),
      ambient_(ambient),
      weights_(std::move(weights)),
      convexity_(convexity) {
  if (dim_ == 0) throw InputError("Space: dimension must be positive");
  if (ball_.center.dim() != dim_) throw InputError("Space: centre has wrong dimension");
  if (!(ball_.radius > 0.0)) throw InputError("Space: radius must be positive");
  if (b_ == 0) throw InputError("Space: diameter bound b must be a positive integer");
  if (static_cast<double>(b_) < 2.0 * ball_.radius) {
    throw InputError("Space: diameter bound b must be at least 2·radius");
  }
  if (ambient_ == Ambient::weighted_euclidean) {
    if (weights_.size() != dim_) throw InputError("Space: weights must match the dimension");
    for (double w : weights_) {
      if (!(w > 0.0) || !std::isfinite(w)) throw InputError("Space: weights must be positive");
    }
  } else if (!weights_.empty()) {
    throw InputError("Space: weights are only meaningful for weighted-euclidean");
  }
}

Space Space::euclidean_ball(std::size_t dimension, double radius, Nat diameter_bound) {
  return Space(dimension, Ball{Point::zeros(dimension), radius}, diameter_bound);
}

void Space::check_dim(const Point& x) const {
  if (x.dim() != dim_) {
    throw InputError("dimension mismatch: point has " + std::to_string(x.dim()) +
                     " coordinates, space has " + std::to_string(dim_));
  }
}

double Space::dist(const Point& x, const Point& y) const {
  check_dim(x);
  check_dim(y);
  switch (ambient_) {
    case Ambient::euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
      return std::sqrt(s);
    }
    case Ambient::weighted_euclidean: {
      double s = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) s += weights_[i] * (x[i] - y[i]) * (x[i] - y[i]);
      return std::sqrt(s);
    }
    case Ambient::sup_norm: {
      double m = 0.0;
      for (std::size_t i = 0; i < dim_; ++i) m = std::max(m, std::abs(x[i] - y[i]));
      return m;
    }
  }
  return 0.0;
}

double Space::norm(const Point& x) const { return dist(x, Point::zeros(dim_)); }

Point Space::combine(const Point& x, const Point& y, double lambda) const {
  check_dim(x);
  check_dim(y);
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw InputError("w_combine: λ must lie in [0,1], got " + format_double(lambda));
  }
  const double t = convexity_ == Convexity::linear ? lambda : lambda * lambda;
  std::vector<double> out(dim_);
  for (std::size_t i = 0; i < dim_; ++i) out[i] = (1.0 - t) * x[i] + t * y[i];
  return Point(std::move(out));
}

double Space::excess(const Point& x) const {
  return std::max(0.0, dist(x, ball_.center) - ball_.radius);
}

Point Space::project(const Point& x) const {
  const double d = dist(x, ball_.center);
  if (d <= ball_.radius) return x;
  return ball_.center + (ball_.radius / d) * (x - ball_.center);
}

Space Space::with_convexity(Convexity c) const {
  Space s = *this;
  s.convexity_ = c;
  return s;
}

Json Space::to_json() const {
  Json j;
  j["dimension"] = dim_;
  switch (ambient_) {
    case Ambient::euclidean: j["ambient"] = "euclidean"; break;
    case Ambient::weighted_euclidean: j["ambient"] = "weighted-euclidean"; break;
    case Ambient::sup_norm: j["ambient"] = "sup-norm"; break;
  }
  j["center"] = ball_.center.vector();
  j["radius"] = ball_.radius;
  j["b"] = b_;
  if (!weights_.empty()) j["weights"] = weights_;
  if (convexity_ != Convexity::linear) j["convexity"] = "corrupted-lambda-squared";
  return j;
}

Space Space::from_json(const Json& j) {
  if (!j.is_object()) throw InputError("space: expected an object");
  const auto dim = j.at("dimension").get<std::size_t>();
  Ambient ambient = Ambient::euclidean;
  const std::string tag = j.value("ambient", std::string("euclidean"));
  if (tag == "euclidean") {
    ambient = Ambient::euclidean;
  } else if (tag == "weighted-euclidean") {
    ambient = Ambient::weighted_euclidean;
  } else if (tag == "sup-norm") {
    ambient = Ambient::sup_norm;
  } else {
    throw InputError("space: unknown ambient '" + tag + "'");
  }
  std::vector<double> center(dim, 0.0);
  if (j.contains("center")) {
    center.clear();
    for (const auto& c : j.at("center")) center.push_back(json_scalar(c));
  }
  const double radius = json_scalar(j.at("radius"));
  const Nat b = j.at("b").get<Nat>();
  std::vector<double> weights;
  if (j.contains("weights")) {
    for (const auto& w : j.at("weights")) weights.push_back(json_scalar(w));
  }
  Convexity conv = Convexity::linear;
  if (j.value("convexity", std::string("linear")) == "corrupted-lambda-squared") {
    conv = Convexity::corrupted_lambda_squared;
  }
  return Space(dim, Ball{Point(std::move(center)), radius}, b, ambient, std::move(weights), conv);
}

double dist(const Space& space, const Point& x, const Point& y) { return space.dist(x, y); }

Point w_combine(const Space& space, const Point& x, const Point& y, double lambda) {
  return space.combine(x, y, lambda);
}

BallSampler::BallSampler(const Space& space, std::uint64_t seed) : space_(&space), rng_(seed) {}

double BallSampler::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng_);
}

Point BallSampler::point_in(const Point& center, double radius) {
  const std::size_t n = center.dim();
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> dir(n);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& d : dir) {
      d = gauss(rng_);
      norm2 += d * d;
    }
  } while (norm2 == 0.0);
  const double scale = radius * std::pow(uniform(0.0, 1.0), 1.0 / static_cast<double>(n)) /
                       std::sqrt(norm2);
  for (std::size_t i = 0; i < n; ++i) dir[i] = center[i] + scale * dir[i];
  return Point(std::move(dir));
}

Point BallSampler::point() {
  const Ball& ball = space_->ball();
  switch (space_->ambient()) {
    case Ambient::euclidean:
      return point_in(ball.center, ball.radius);
    case Ambient::weighted_euclidean: {
      Point unit = point_in(Point::zeros(space_->dimension()), ball.radius);
      std::vector<double> out(space_->dimension());
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = ball.center[i] + unit[i] / std::sqrt(space_->weights()[i]);
      }
      return Point(std::move(out));
    }
    case Ambient::sup_norm: {
      std::vector<double> out(space_->dimension());
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = ball.center[i] + uniform(-ball.radius, ball.radius);
      }
      return Point(std::move(out));
    }
  }
  return ball.center;
}

VerificationReport check_w_axioms(const Space& space, BallSampler& sampler, std::size_t n_samples,
                                  double tol, bool check_cn) {
  if (n_samples == 0) throw InputError("check_w_axioms: n_samples must be at least 1");
  const auto start = std::chrono::steady_clock::now();

  struct Worst {
    double violation = 0.0;
    Json witness;
  };
  Worst w1, w2, w3, w4, cn, convex;
  auto note = [](Worst& w, double v, Json witness) {
    if (v > w.violation) {
      w.violation = v;
      w.witness = std::move(witness);
    }
  };

  for (std::size_t s = 0; s < n_samples; ++s) {
    const Point x = sampler.point();
    const Point y = sampler.point();
    const Point z = sampler.point();
    const Point w = sampler.point();
    const double lam = sampler.uniform(0.0, 1.0);
    const double lam2 = sampler.uniform(0.0, 1.0);
    auto tuple = [&] {
      return Json{{"sample", s}, {"lambda", lam}, {"lambda2", lam2},
                  {"x", x.vector()}, {"y", y.vector()}};
    };

    const Point wxy = space.combine(x, y, lam);
    const double dxy = space.dist(x, y);

    note(w1, space.dist(z, wxy) - ((1.0 - lam) * space.dist(z, x) + lam * space.dist(z, y)),
         tuple());
    note(w2,
         std::abs(space.dist(wxy, space.combine(x, y, lam2)) - std::abs(lam - lam2) * dxy),
         tuple());
    note(w3, space.dist(wxy, space.combine(y, x, 1.0 - lam)), tuple());
    note(w4,
         space.dist(space.combine(x, z, lam), space.combine(y, w, lam)) -
             ((1.0 - lam) * dxy + lam * space.dist(z, w)),
         tuple());
    note(convex, space.excess(wxy), tuple());
    if (check_cn) {
      const Point mid = space.combine(x, y, 0.5);
      const double lhs = std::pow(space.dist(z, mid), 2);
      const double rhs = 0.5 * std::pow(space.dist(z, x), 2) +
                         0.5 * std::pow(space.dist(z, y), 2) - 0.25 * dxy * dxy;
      note(cn, lhs - rhs, tuple());
    }
  }

  VerificationReport report;
  report.check_id = "w-axioms";
  report.provenance = {{"space", space.to_json()}, {"samples", n_samples}};
  auto emit = [&](const char* name, const Worst& w) {
    report.add({name, w.violation, tol, w.violation <= tol});
    if (w.violation > tol) report.witnesses.push_back({{"axiom", name}, {"tuple", w.witness}});
  };
  emit("W1", w1);
  emit("W2", w2);
  emit("W3", w3);
  emit("W4", w4);
  emit("ball-convexity", convex);
  if (check_cn) emit("CN-", cn);
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace ratelab
