#include "ratelab/uniqueness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ratelab/errors.hpp"
#include "ratelab/schemes.hpp"

namespace ratelab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void check_positive(double x, const char* what) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw InputError(std::string(what) + " must be positive and finite, got " + format_double(x));
  }
}

Nat ceil_long(long double x) {
  if (std::isnan(x)) throw InputError("NaN in rate argument");
  if (x <= 0.0L) return 0;
  if (x >= 18446744073709551615.0L) return kNatMax;
  return static_cast<Nat>(std::ceil(x));
}

Point random_direction(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> v(dim);
  double n = 0.0;
  do {
    for (double& c : v) c = normal(rng);
    n = 0.0;
    for (double c : v) n += c * c;
  } while (n < 1e-24);
  n = std::sqrt(n);
  for (double& c : v) c /= n;
  return Point(std::move(v));
}

Point minus_T(const AccretiveTestbed& tb, const Point& x) { return x - apply(tb.space, tb.T, x); }

/// Points with ‖x‖ ≤ threshold/residual_factor, capped at the ball.
double afp_radius(const AccretiveTestbed& tb, double threshold) {
  return std::min(tb.b, threshold / tb.residual_factor);
}

struct AfpPairs {
  std::size_t evaluated = 0;
  std::size_t rejected = 0;
};

/// Samples pairs of threshold-approximate fixed points and feeds each verified
/// pair to `visit`.
template <class Visit>
AfpPairs sample_afp_pairs(const AccretiveTestbed& tb, double threshold, std::uint64_t seed,
                          std::size_t pairs, Visit&& visit) {
  BallSampler sampler(tb.space, seed);
  const double r = afp_radius(tb, threshold);
  AfpPairs out;
  for (std::size_t s = 0; s < pairs; ++s) {
    Point x1 = sampler.point_in(tb.fixed_point, r);
    Point x2 = sampler.point_in(tb.fixed_point, r);
    if (s % 4 == 0) {
      // boundary of the region
      x1 = tb.fixed_point + (r * (1.0 - 1e-12)) * random_direction(sampler.engine(), x1.dim());
    }
    if (tb.residual(x1) > threshold || tb.residual(x2) > threshold) {
      ++out.rejected;
      continue;
    }
    ++out.evaluated;
    visit(x1, x2);
  }
  return out;
}

void finish_sampling(VerificationReport& r, const AfpPairs& p) {
  r.add({"pairs-evaluated", static_cast<double>(p.evaluated), 0.0, true});
  if (p.rejected > 0) {
    r.notes.push_back(std::to_string(p.rejected) + " sampled pairs exceeded the residual threshold and were skipped");
  }
  if (p.evaluated == 0) {
    r.status = combine(r.status, Status::inconclusive);
    r.notes.push_back("no pair met the premise");
  }
}

Json point_json(const Point& x) { return x.vector(); }

}  // namespace

UniformConvexityModulus::UniformConvexityModulus(std::function<double(double)> eta,
                                                 std::string name,
                                                 std::function<double(double)> eta_tilde)
    : eta_(std::move(eta)), eta_tilde_(std::move(eta_tilde)), name_(std::move(name)) {}

UniformConvexityModulus UniformConvexityModulus::hilbert() {
  return UniformConvexityModulus([](double e) { return e * e / 8.0; }, "hilbert-eta",
                                 [](double e) { return e / 8.0; });
}

UniformConvexityModulus UniformConvexityModulus::power(double p, double K) {
  check_positive(p, "power-eta exponent");
  if (!(K >= std::pow(2.0, p))) {
    throw ModulusError("power-eta needs K ≥ 2^p so that η ≤ 1 on (0,2]");
  }
  std::function<double(double)> tilde;
  if (p >= 1.0) tilde = [p, K](double e) { return std::pow(e, p - 1.0) / K; };
  return UniformConvexityModulus([p, K](double e) { return std::pow(e, p) / K; },
                                 "power-eta " + format_double(p) + " " + format_double(K),
                                 std::move(tilde));
}

double UniformConvexityModulus::operator()(double eps) const {
  check_positive(eps, "η argument");
  if (eps > 2.0) return 1.0;
  const double v = eta_(eps);
  if (!(v > 0.0 && v <= 1.0)) {
    throw ModulusError(name_ + "(" + format_double(eps) + ") = " + format_double(v) +
                       " lies outside (0,1]");
  }
  return v;
}

double UniformConvexityModulus::tilde(double eps) const {
  if (!eta_tilde_) throw ContractError(name_ + " has no factored form η = ε·η̃");
  check_positive(eps, "η̃ argument");
  return eta_tilde_(std::min(eps, 2.0));
}

VerificationReport check_factored_form(const UniformConvexityModulus& eta, std::size_t grid) {
  VerificationReport r;
  r.check_id = "eta-factored-form";
  r.provenance = {{"eta", eta.name()}, {"grid", grid}};
  if (!eta.factored()) {
    r.status = Status::inconclusive;
    r.notes.push_back("modulus carries no factored form");
    return r;
  }
  double worst_identity = 0.0;
  double worst_decrease = 0.0;
  double prev = 0.0;
  for (std::size_t i = 1; i <= grid; ++i) {
    const double e = 2.0 * static_cast<double>(i) / static_cast<double>(grid);
    const double t = eta.tilde(e);
    worst_identity = std::max(worst_identity, std::abs(eta(e) - e * t));
    if (i > 1) worst_decrease = std::max(worst_decrease, prev - t);
    prev = t;
  }
  r.add({"identity", worst_identity, 1e-15, worst_identity <= 1e-15});
  r.add({"tilde-nondecreasing", worst_decrease, 0.0, worst_decrease <= 0.0});
  return r;
}

AccretivityModulus::AccretivityModulus(std::function<double(double, double)> omega,
                                       std::string name)
    : omega_(std::move(omega)), name_(std::move(name)) {}

AccretivityModulus AccretivityModulus::quadratic(double K) {
  check_positive(K, "quad coefficient");
  return AccretivityModulus([K](double e, double) { return K * e * e; },
                            "quad " + format_double(K));
}

double AccretivityModulus::operator()(double eps, double b) const {
  check_positive(eps, "Ω argument");
  const double v = omega_(eps, b);
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ModulusError(name_ + "(" + format_double(eps) + ") = " + format_double(v) +
                       " is not positive");
  }
  return v;
}

StrictIncreaseModulus::StrictIncreaseModulus(std::function<double(double)> iota, std::string name)
    : iota_(std::move(iota)), name_(std::move(name)) {}

StrictIncreaseModulus StrictIncreaseModulus::linear(double k) {
  check_positive(k, "slope");
  return StrictIncreaseModulus([k](double e) { return k * e; }, "phi-linear " + format_double(k));
}

double StrictIncreaseModulus::operator()(double eps) const {
  const double v = iota_(eps);
  if (!(v > 0.0)) {
    throw ModulusError(name_ + "(" + format_double(eps) + ") = " + format_double(v) +
                       " is not positive");
  }
  return v;
}

double omega_from_phi(const StrictIncreaseModulus& iota, double eps, double /*b*/) {
  check_positive(eps, "ε");
  return eps * iota(eps) / 2.0;
}

AccretivityModulus accretivity_from_phi(const StrictIncreaseModulus& iota) {
  return AccretivityModulus([iota](double e, double b) { return omega_from_phi(iota, e, b); },
                            "from-phi " + iota.name());
}

double estimate_iota_heuristic(const std::function<double(double)>& phi, double b, double eps,
                               std::size_t grid) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i <= grid; ++i) {
    const double x = b * static_cast<double>(i) / static_cast<double>(grid);
    best = std::min(best, phi(x + eps) - phi(x));
  }
  return best;
}

double modulus_of_uniqueness(const AccretivityModulus& Omega, const UniformConvexityModulus& eta,
                             double b, double eps, UniquenessForm form) {
  check_positive(b, "b");
  check_positive(eps, "ε");
  if (form == UniquenessForm::automatic) {
    form = eta.factored() ? UniquenessForm::improved : UniquenessForm::general;
  }
  if (form == UniquenessForm::improved) {
    if (!eta.factored()) throw ContractError("improved ω_b needs a factored η");
    const double inner = Omega(b * eta(eps / b), b);
    return std::min(b * eta(inner / (8.0 * b * b)), inner / (4.0 * b));
  }
  const double inner = Omega(eps / 2.0 * eta(eps / b), b);
  return inner / (16.0 * b) * eta(inner / (8.0 * b * b));
}

double beta_lemma3(const UniformConvexityModulus& eta, double b, double eps, bool improved) {
  check_positive(b, "b");
  check_positive(eps, "ε");
  if (improved) {
    if (!eta.factored()) throw ContractError("β′ needs a factored η");
    return b * eta(eps / b);
  }
  return eps / 2.0 * eta(eps / b);
}

double midpoint_afp_threshold(const UniformConvexityModulus& eta, double b, double eps,
                              bool improved) {
  check_positive(b, "b");
  check_positive(eps, "ε");
  if (improved) {
    if (!eta.factored()) throw ContractError("improved midpoint threshold needs a factored η");
    return b * eta(eps / (2.0 * b));
  }
  return eps * eta(eps / (2.0 * b)) / 4.0;
}

double lemma1_threshold(const AccretivityModulus& Omega, double b, double eps) {
  check_positive(b, "b");
  return Omega(eps, b) / (4.0 * b);
}

double path_cauchy_threshold(double omega, double b) {
  check_positive(omega, "ω");
  check_positive(b, "b");
  return omega / (2.0 * b);
}

double km_residual_bound(double b, const ScalarSequence& beta, Nat n) {
  double sum = 0.0;
  for (Nat i = 0; i <= n; ++i) {
    const double v = beta(i);
    sum += v * (1.0 - v);
  }
  if (!(sum > 0.0)) return std::numeric_limits<double>::infinity();
  return 2.0 * b / std::sqrt(std::numbers::pi * sum);
}

RateResult km_cauchy_rate(const DivergenceRate& gamma, double b, double omega) {
  check_positive(omega, "ω");
  check_positive(b, "b");
  const long double w = omega;
  const long double arg_real = 4.0L * b * b / (std::numbers::pi_v<long double> * w * w);
  const Nat arg = ceil_long(arg_real);
  RateResult r;
  r.value = gamma(arg);
  r.feasible = r.value <= kSimulationLimit;
  r.trace = {{"rate", "km-cauchy"},       {"b", b},
             {"omega", omega},            {"omega_exact", format_exact(omega)},
             {"gamma", gamma.name()},     {"gamma_argument", arg},
             {"value", r.value},          {"feasible", r.feasible}};
  return r;
}

RateResult halpern_cauchy_rate(double eps, double b, const CauchyRate& theta,
                               const CauchyRate& alpha, const CauchyRate& beta, double D) {
  check_positive(eps, "ε");
  check_positive(b, "b");
  if (!(D > 0.0)) throw InputError("D must be positive, got " + format_double(D));
  const Nat t = theta(D * eps / (4.0 * b));
  const Nat a = alpha(eps / (4.0 * b));
  RateResult r;
  r.value = sat_add(std::max(sat_add(t, 1), a), 1);
  r.feasible = r.value <= kSimulationLimit;
  r.trace = {{"rate", "phi-halpern"},
             {"eps", eps},
             {"b", b},
             {"D", D},
             {"beta(eps/8b)", beta(eps / (8.0 * b))},
             {"theta(D*eps/4b)", t},
             {"alpha(eps/4b)", a},
             {"value", r.value},
             {"feasible", r.feasible}};
  return r;
}

RateResult halpern_cauchy_rate_harmonic(double eps, double b) {
  check_positive(eps, "ε");
  check_positive(b, "b");
  const long double e = eps;
  const long double x = 4.0L * b / e + 32.0L * b * b / (e * e);
  RateResult r;
  r.value = x < 1e15L ? ceil_clamped(static_cast<double>(x)) : ceil_long(x);
  r.feasible = r.value <= kSimulationLimit;
  r.trace = {{"rate", "phi-halpern-harmonic"}, {"eps", eps},        {"b", b},
             {"value", r.value},               {"feasible", r.feasible}};
  return r;
}

double AccretiveTestbed::residual(const Point& x) const {
  return space.dist(x, apply(space, T, x));
}

AccretiveTestbed make_testbed(double c, Nat b, std::size_t dimension) {
  if (!(c >= 0.0 && c < 1.0)) throw InputError("testbed needs c ∈ [0,1)");
  if (b == 0) throw InputError("testbed needs b ≥ 1");
  const double bd = static_cast<double>(b);
  Space space = Space::euclidean_ball(dimension, bd, sat_mul(2, b));
  MapDescriptor T = MapDescriptor::scaled(c);
  const StrictIncreaseModulus iota = StrictIncreaseModulus::linear(1.0 - c);
  return AccretiveTestbed{"scaled " + format_double(c),
                          c,
                          bd,
                          std::move(space),
                          std::move(T),
                          1.0 - c,
                          1.0 - c,
                          accretivity_from_phi(iota),
                          Point::zeros(dimension)};
}

AccretiveTestbed rotation_testbed(double angle, Nat b) {
  if (b == 0) throw InputError("testbed needs b ≥ 1");
  const double slope = 1.0 - std::cos(angle);
  if (!(slope > 0.0)) throw InputError("rotation testbed needs a nonzero angle");
  const double bd = static_cast<double>(b);
  Space space = Space::euclidean_ball(2, bd, sat_mul(2, b));
  const StrictIncreaseModulus iota = StrictIncreaseModulus::linear(slope);
  return AccretiveTestbed{"rotation " + format_double(angle),
                          0.0,
                          bd,
                          std::move(space),
                          MapDescriptor::rotation(angle),
                          slope,
                          std::sqrt(2.0 * slope),
                          accretivity_from_phi(iota),
                          Point::zeros(2)};
}

VerificationReport check_testbed(const AccretiveTestbed& tb, std::uint64_t seed, std::size_t pairs,
                                 const std::vector<double>& eps_grid) {
  const auto t0 = Clock::now();
  VerificationReport r;
  r.check_id = "testbed";
  r.provenance = {{"testbed", tb.tag}, {"b", tb.b}, {"dim", tb.space.dimension()},
                  {"seed", seed},      {"pairs", pairs}};
  BallSampler sampler(tb.space, seed);
  double worst_bs = -std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < pairs; ++s) {
    const Point x = sampler.point();
    const Point y = sampler.point();
    const double nx = euclidean_norm(x);
    const double ny = euclidean_norm(y);
    const double pairing = dot(minus_T(tb, x) - minus_T(tb, y), x - y);
    const double gap = tb.phi_slope * (nx - ny) * (nx - ny);
    worst_bs = std::max(worst_bs, gap - pairing);
  }
  r.add({"brezis-sibony", worst_bs, 1e-12, worst_bs <= 1e-12});

  for (double eps : eps_grid) {
    if (eps >= tb.b) continue;
    const double omega = tb.Omega(eps, tb.b);
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < pairs; ++s) {
      const double nx = sampler.uniform(eps, tb.b);
      const double ny = sampler.uniform(0.0, nx - eps);
      const std::size_t d = tb.space.dimension();
      const Point x = nx * random_direction(sampler.engine(), d);
      const Point y = ny * random_direction(sampler.engine(), d);
      const double pairing = dot(minus_T(tb, x) - minus_T(tb, y), x - y);
      worst = std::max(worst, omega - pairing);
    }
    r.add({"condition-plus eps=" + format_double(eps), worst, 0.0, worst < 0.0});
  }
  r.runtime_seconds = seconds_since(t0);
  return r;
}

VerificationReport check_lemma1(const AccretiveTestbed& tb, double eps, std::uint64_t seed,
                                std::size_t pairs) {
  const auto t0 = Clock::now();
  const double thr = lemma1_threshold(tb.Omega, tb.b, eps);
  VerificationReport r;
  r.check_id = "norm-gap";
  r.provenance = {{"testbed", tb.tag}, {"dim", tb.space.dimension()}, {"eps", eps},
                  {"threshold", thr},  {"seed", seed}};
  double worst = 0.0;
  Json witness;
  const AfpPairs p = sample_afp_pairs(tb, thr, seed, pairs, [&](const Point& a, const Point& c) {
    const double gap = std::abs(euclidean_norm(a) - euclidean_norm(c));
    if (gap > worst) {
      worst = gap;
      witness = {{"x1", point_json(a)}, {"x2", point_json(c)}, {"gap", gap}};
    }
  });
  const double tol = eps + 1e-12;
  r.add({"max |‖x1‖−‖x2‖|", worst, tol, worst <= tol});
  if (worst > tol) r.witnesses.push_back(witness);
  finish_sampling(r, p);
  r.runtime_seconds = seconds_since(t0);
  return r;
}

VerificationReport check_lemma2(const AccretiveTestbed& tb, const UniformConvexityModulus& eta,
                                double eps, bool improved, std::uint64_t seed, std::size_t pairs) {
  const auto t0 = Clock::now();
  const double thr = midpoint_afp_threshold(eta, tb.b, eps, improved);
  VerificationReport r;
  r.check_id = improved ? "midpoint-afp-improved" : "midpoint-afp";
  r.provenance = {{"testbed", tb.tag}, {"dim", tb.space.dimension()}, {"eps", eps},
                  {"threshold", thr},  {"seed", seed}};
  double worst = 0.0;
  Json witness;
  const AfpPairs p = sample_afp_pairs(tb, thr, seed, pairs, [&](const Point& a, const Point& c) {
    const Point mid = tb.space.combine(a, c, 0.5);
    const double res = tb.residual(mid);
    if (res > worst) {
      worst = res;
      witness = {{"x1", point_json(a)}, {"x2", point_json(c)}, {"midpoint_residual", res}};
    }
  });
  const double tol = eps + 1e-12;
  r.add({"max midpoint residual", worst, tol, worst <= tol});
  if (worst > tol) r.witnesses.push_back(witness);
  finish_sampling(r, p);
  r.runtime_seconds = seconds_since(t0);
  return r;
}

VerificationReport check_lemma3(const AccretiveTestbed& tb, const UniformConvexityModulus& eta,
                                double eps, bool improved, std::uint64_t seed, std::size_t pairs) {
  const auto t0 = Clock::now();
  const double beta = beta_lemma3(eta, tb.b, eps, improved);
  VerificationReport r;
  r.check_id = improved ? "midpoint-norm-drop-improved" : "midpoint-norm-drop";
  r.provenance = {{"testbed", tb.tag}, {"dim", tb.space.dimension()}, {"eps", eps},
                  {"beta", beta},      {"seed", seed}};
  BallSampler sampler(tb.space, seed);
  std::size_t evaluated = 0;
  double worst = -std::numeric_limits<double>::infinity();
  Json witness;
  constexpr std::size_t kAttempts = 1000;
  for (std::size_t s = 0; s < pairs; ++s) {
    for (std::size_t a = 0; a < kAttempts; ++a) {
      Point x1 = sampler.point();
      Point x2 = sampler.point();
      if (tb.space.dist(x1, x2) <= eps) continue;
      if (euclidean_norm(x1) < euclidean_norm(x2)) std::swap(x1, x2);
      const double lhs = euclidean_norm(0.5 * (x1 + x2));
      const double margin = lhs - (euclidean_norm(x1) - beta);
      if (margin > worst) {
        worst = margin;
        witness = {{"x1", point_json(x1)}, {"x2", point_json(x2)}, {"margin", margin}};
      }
      ++evaluated;
      break;
    }
  }
  r.add({"max ‖mid‖ − (‖x1‖ − β)", worst, 1e-12, evaluated == 0 || worst < 1e-12});
  r.add({"pairs-evaluated", static_cast<double>(evaluated), 0.0, true});
  if (evaluated > 0 && worst >= 1e-12) r.witnesses.push_back(witness);
  if (evaluated == 0) {
    r.status = combine(r.status, Status::inconclusive);
    r.notes.push_back("no pair with ‖x1−x2‖ > ε was found");
  }
  r.runtime_seconds = seconds_since(t0);
  return r;
}

VerificationReport check_uniqueness(const AccretiveTestbed& tb, const UniformConvexityModulus& eta,
                                    double eps, UniquenessForm form, std::uint64_t seed,
                                    std::size_t pairs) {
  const auto t0 = Clock::now();
  const double omega = modulus_of_uniqueness(tb.Omega, eta, tb.b, eps, form);
  VerificationReport r;
  r.check_id = "modulus-of-uniqueness";
  r.provenance = {{"testbed", tb.tag},
                  {"dim", tb.space.dimension()},
                  {"eps", eps},
                  {"omega_b", omega},
                  {"omega_b_exact", format_exact(omega)},
                  {"seed", seed}};
  double worst = 0.0;
  Json witness;
  const AfpPairs p = sample_afp_pairs(tb, omega, seed, pairs, [&](const Point& a, const Point& c) {
    const double d = tb.space.dist(a, c);
    if (d > worst) {
      worst = d;
      witness = {{"x1", point_json(a)}, {"x2", point_json(c)}, {"distance", d}};
    }
  });
  const double tol = eps + 1e-12;
  r.add({"max ‖x1−x2‖", worst, tol, worst <= tol});
  if (worst > tol) r.witnesses.push_back(witness);
  finish_sampling(r, p);

  double slack_probe = 0.0;
  sample_afp_pairs(tb, 10.0 * omega, seed + 1, pairs, [&](const Point& a, const Point& c) {
    slack_probe = std::max(slack_probe, tb.space.dist(a, c));
  });
  r.provenance["probe_at_10_omega"] = {{"max_distance", slack_probe},
                                       {"exceeds_eps", slack_probe > eps}};
  r.runtime_seconds = seconds_since(t0);
  return r;
}

VerificationReport check_km_residual(const Space& space, const MapDescriptor& T, const Point& start,
                                     const ScalarSequence& beta, double b, Nat n_max) {
  const auto t0 = Clock::now();
  VerificationReport r;
  r.check_id = "km-residual";
  r.provenance = {{"map", T.label}, {"beta", beta.to_json()}, {"b", b}, {"n_max", n_max},
                  {"start", start.vector()}};
  Trajectory traj = km_traj(space, T, start, beta);
  double sum = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  Json witness;
  Nat checked = 0;
  for (Nat n = 0; n <= n_max; ++n) {
    const double v = beta(n);
    sum += v * (1.0 - v);
    if (!(sum > 0.0)) continue;
    const double bound = 2.0 * b / std::sqrt(std::numbers::pi * sum);
    const Point& x = traj[n];
    const double res = space.dist(x, apply(space, T, x));
    ++checked;
    if (res - bound > worst) {
      worst = res - bound;
      witness = {{"n", n}, {"residual", res}, {"bound", bound}};
    }
    if (n == 99) {
      r.add({"residual n=99", res, bound, res <= bound + 1e-12});
      r.add({"bound n=99", bound, 0.0, true});
    }
  }
  r.add({"max residual − bound", worst, 1e-12, checked == 0 || worst <= 1e-12});
  r.add({"indices-checked", static_cast<double>(checked), 0.0, true});
  r.witnesses.push_back(witness);
  r.runtime_seconds = seconds_since(t0);
  return r;
}

VerificationReport check_path_threshold(const AccretiveTestbed& tb,
                                        const UniformConvexityModulus& eta, double eps,
                                        const Point& anchor) {
  const auto t0 = Clock::now();
  const double omega = modulus_of_uniqueness(tb.Omega, eta, tb.b, eps);
  const double thr = path_cauchy_threshold(omega, tb.b);
  VerificationReport r;
  r.check_id = "path-cauchy";
  r.provenance = {{"testbed", tb.tag},   {"eps", eps},
                  {"omega_b", omega},    {"omega_b_exact", format_exact(omega)},
                  {"threshold", thr},    {"threshold_exact", format_exact(thr)},
                  {"anchor", anchor.vector()}};
  const std::vector<double> alphas{thr, thr / 2.0};
  const double diam = static_cast<double>(tb.space.diameter_bound());
  std::vector<Point> points;
  double err = 0.0;
  for (double a : alphas) {
    const double tau = std::min(1e-10, a * 1e-6);
    const double budget_real = std::log(tau * a / diam) / std::log1p(-a) + 1.0;
    if (!(budget_real <= static_cast<double>(kSimulationLimit))) {
      r.status = Status::inconclusive;
      r.add({"inner-solve budget alpha=" + format_exact(a), budget_real,
             static_cast<double>(kSimulationLimit), true});
      r.notes.push_back("untestable at scale: the path point for α = " + format_exact(a) +
                        " needs about " + format_double(std::ceil(budget_real)) +
                        " inner iterations");
      r.runtime_seconds = seconds_since(t0);
      return r;
    }
    const InnerSolve s = browder_point(tb.space, MapFamily::constant(tb.T), anchor,
                                       ScalarSequence::constant(a), 0, tau);
    err += s.error_bound;
    points.push_back(s.point);
  }
  const double d = tb.space.dist(points[0], points[1]);
  r.add({"‖x_a1 − x_a2‖", d, eps + err + 1e-12, d <= eps + err + 1e-12});
  r.runtime_seconds = seconds_since(t0);
  return r;
}

VerificationReport check_halpern_rate(const AccretiveTestbed& tb,
                                      const UniformConvexityModulus& eta, double eps,
                                      const Point& anchor, const Point& start, Nat n_max) {
  const auto t0 = Clock::now();
  const double omega = modulus_of_uniqueness(tb.Omega, eta, tb.b, eps);
  const RateResult phi = halpern_cauchy_rate_harmonic(omega, tb.b);
  VerificationReport r;
  r.check_id = "halpern-cauchy";
  r.provenance = {{"testbed", tb.tag}, {"eps", eps}, {"omega_b", omega}, {"rate", phi.trace},
                  {"n_max", n_max}};
  Trajectory traj = halpern_traj(tb.space, MapFamily::constant(tb.T), anchor, start,
                                 ScalarSequence::one_over_n_plus_1());
  traj.set_horizon(std::max<Nat>(n_max + 1, kDefaultHorizon));
  if (phi.value > n_max) {
    const Nat lo = n_max / 2;
    const double d = tb.space.dist(traj[lo], traj[n_max]);
    r.status = Status::inconclusive;
    r.add({"distance at (n_max/2, n_max)", d, eps, true});
    r.notes.push_back("untestable at scale: rate index " + std::to_string(phi.value) +
                      " exceeds the checked horizon " + std::to_string(n_max));
    r.runtime_seconds = seconds_since(t0);
    return r;
  }
  double worst = 0.0;
  Json witness;
  auto probe = [&](Nat i, Nat j) {
    const double d = tb.space.dist(traj[i], traj[j]);
    if (d > worst) {
      worst = d;
      witness = {{"i", i}, {"j", j}, {"distance", d}};
    }
  };
  for (Nat j = phi.value; j <= n_max; ++j) {
    probe(phi.value, j);
    probe(j, n_max);
  }
  const double tol = eps + 1e-12;
  r.add({"max tail distance", worst, tol, worst <= tol});
  if (worst > tol) r.witnesses.push_back(witness);
  r.runtime_seconds = seconds_since(t0);
  return r;
}

}  // namespace ratelab
