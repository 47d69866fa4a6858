#include "ratelab/verifier.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "ratelab/errors.hpp"
#include "ratelab/parallel.hpp"

namespace ratelab {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr Nat kExactPairwiseWindow = 2000;

struct WindowEval {
  bool ok = false;
  bool resolved = true;
  double distance = 0.0;
  double slack = 0.0;
};

/// Evaluates [n, e] on an already extended trajectory.
WindowEval eval_window(Trajectory& traj, Nat n, Nat e, double eps) {
  WindowEval w;
  double worst_err = 0.0;
  for (Nat i = n; i <= e; ++i) worst_err = std::max(worst_err, traj.record(i).error_bound);
  w.slack = 2.0 * worst_err + 1e-12;
  const double thr = eps + w.slack;
  const Space& space = traj.space();
  const Nat size = e - n + 1;

  if (space.dimension() == 1) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (Nat i = n; i <= e; ++i) {
      const double v = traj.record(i).point[0];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    w.distance = space.dist(Point{lo}, Point{hi});
    w.ok = w.distance <= thr;
    return w;
  }

  double radius = 0.0;
  const Point& xn = traj.record(n).point;
  for (Nat i = n; i <= e; ++i) radius = std::max(radius, space.dist(xn, traj.record(i).point));
  if (radius > thr) {
    w.distance = radius;
    return w;
  }
  if (size > kExactPairwiseWindow && 2.0 * radius <= thr) {
    w.distance = 2.0 * radius;
    w.ok = true;
    return w;
  }
  if (size > kMaxPairwiseWindow) {
    w.resolved = false;
    return w;
  }
  double worst = 0.0;
  for (Nat i = n; i <= e && worst <= thr; ++i) {
    const Point& xi = traj.record(i).point;
    for (Nat j = i + 1; j <= e; ++j) {
      worst = std::max(worst, space.dist(xi, traj.record(j).point));
      if (worst > thr) break;
    }
  }
  w.distance = worst;
  w.ok = worst <= thr;
  return w;
}

}  // namespace

Json WindowSearch::to_json() const {
  Json j;
  j["status"] = to_string(status);
  j["scanned"] = scanned;
  if (witness) {
    j["witness"] = {{"n", witness->n},
                    {"window_end", witness->window_end},
                    {"max_pairwise_distance", witness->max_pairwise_distance},
                    {"slack", witness->slack}};
  } else if (scanned > 0) {
    j["best_failed_distance"] = best_failed_distance;
  }
  if (!note.empty()) j["note"] = note;
  return j;
}

WindowSearch find_metastable_window(Trajectory& traj, double eps, const NatFn& f, Nat bound,
                                    Nat N) {
  if (!(eps > 0.0)) throw InputError("ε must be positive");
  WindowSearch out;
  out.best_failed_distance = std::numeric_limits<double>::infinity();
  if (N > bound) {
    out.status = Status::fail;
    out.note = "empty search range: N > bound";
    return out;
  }
  for (Nat n = N;; ++n) {
    const Nat fn = f(n);
    ++out.scanned;
    if (fn < n) {
      out.status = Status::pass;
      out.witness = WindowWitness{n, fn, 0.0, 0.0};
      return out;
    }
    try {
      traj.extend_to(fn);
    } catch (const HorizonExceeded& e) {
      out.status = Status::inconclusive;
      out.note = e.what();
      return out;
    }
    const WindowEval w = eval_window(traj, n, fn, eps);
    if (!w.resolved) {
      out.status = Status::inconclusive;
      out.note = "window [" + std::to_string(n) + "," + std::to_string(fn) +
                 "] is too large for a pairwise check outside ℝ¹";
      return out;
    }
    if (w.ok) {
      out.status = Status::pass;
      out.witness = WindowWitness{n, fn, w.distance, w.slack};
      return out;
    }
    out.best_failed_distance = std::min(out.best_failed_distance, w.distance);
    if (n == bound) break;
  }
  out.status = Status::fail;
  out.note = "no window start in [" + std::to_string(N) + "," + std::to_string(bound) +
             "] is ε-stable";
  return out;
}

VerificationReport check_cauchy_rate(Trajectory& traj, const CauchyRate& rho,
                                     const std::vector<double>& eps_grid, Nat pair_budget,
                                     Nat tail, std::uint64_t seed) {
  const auto t0 = Clock::now();
  VerificationReport report;
  report.check_id = "cauchy-rate";
  report.provenance = {{"trajectory", traj.provenance()}, {"rho", rho.name()},
                       {"pair_budget", pair_budget},      {"tail", tail},
                       {"seed", seed}};
  std::mt19937_64 rng(seed);
  for (double eps : eps_grid) {
    const Nat start = rho(eps);
    const Nat last = sat_add(start, tail);
    try {
      traj.extend_to(last);
    } catch (const HorizonExceeded& e) {
      report.status = combine(report.status, Status::inconclusive);
      report.notes.push_back("eps=" + format_double(eps) + ": " + e.what());
      continue;
    }
    double worst_err = 0.0;
    for (Nat i = start; i <= last; ++i) worst_err = std::max(worst_err, traj.record(i).error_bound);
    const double slack = 2.0 * worst_err + 1e-12;
    double worst = 0.0;
    Nat wi = start;
    Nat wj = start;
    auto probe = [&](Nat i, Nat j) {
      const double d = traj.space().dist(traj.record(i).point, traj.record(j).point);
      if (d > worst) {
        worst = d;
        wi = i;
        wj = j;
      }
    };
    for (Nat j = start; j <= last; ++j) {
      probe(start, j);
      probe(j, last);
    }
    std::uniform_int_distribution<Nat> pick(start, last);
    for (Nat k = 0; k < pair_budget; ++k) probe(pick(rng), pick(rng));
    const bool ok = worst <= eps + slack;
    report.add({"eps=" + format_double(eps) + " max distance", worst, eps + slack, ok});
    if (!ok) {
      report.witnesses.push_back(
          {{"eps", eps}, {"rho", start}, {"i", wi}, {"j", wj}, {"distance", worst}});
    }
  }
  report.runtime_seconds = seconds_since(t0);
  return report;
}

Json XuInstance::to_json() const {
  return {{"N", N}, {"p", p}, {"B", B}, {"eps", eps}, {"a0", a0}, {"lambda_size", lambda.size()}};
}

std::vector<double> xu_extremal_sequence(const XuInstance& in) {
  if (in.lambda.size() < in.p || in.b.size() < in.p) {
    throw InputError("λ and b must cover indices 0..p−1");
  }
  std::vector<double> a(in.p + 1);
  a[0] = in.a0;
  for (Nat i = 0; i < in.p; ++i) {
    a[i + 1] = (1.0 - in.lambda[i]) * a[i] + in.lambda[i] * in.b[i];
  }
  return a;
}

namespace {

/// Premises shared by both oracles; returns false (and notes why) when one is
/// violated.
bool xu_common_premises(const XuInstance& in, const std::vector<double>& a,
                        VerificationReport& r) {
  bool ok = true;
  for (double l : in.lambda) {
    if (!(l >= 0.0 && l <= 1.0)) {
      r.notes.push_back("premise violated: λ outside [0,1]");
      ok = false;
      break;
    }
  }
  const double B = static_cast<double>(in.B);
  for (Nat i = 0; i <= in.p; ++i) {
    if (a[i] > B) {
      r.notes.push_back("premise violated: a_" + std::to_string(i) + " exceeds B");
      ok = false;
      break;
    }
  }
  for (Nat i = in.N; i < in.p && i < in.b.size(); ++i) {
    if (in.b[i] > in.eps / 2.0) {
      r.notes.push_back("premise violated: b_" + std::to_string(i) + " exceeds ε/2");
      ok = false;
      break;
    }
  }
  return ok;
}

void xu_conclusion(const XuInstance& in, const std::vector<double>& a, Nat claimed,
                   VerificationReport& r) {
  double worst = -std::numeric_limits<double>::infinity();
  Nat at = claimed;
  for (Nat i = claimed; i <= in.p; ++i) {
    if (a[i] - in.eps > worst) {
      worst = a[i] - in.eps;
      at = i;
    }
  }
  if (claimed > in.p) {
    r.add({"max a_i − ε on [claimed,p]", 0.0, 1e-9, true});
    r.notes.push_back("claimed index beyond p: conclusion vacuous");
    return;
  }
  const bool ok = worst <= 1e-9;
  r.add({"max a_i − ε on [claimed,p]", worst, 1e-9, ok});
  if (!ok) r.witnesses.push_back({{"i", at}, {"a_i", a[at]}, {"eps", in.eps}});
}

}  // namespace

VerificationReport brute_force_xu(const XuInstance& in, const DivergenceRate& A, Nat claimed) {
  VerificationReport r;
  r.check_id = "xu-sum";
  r.provenance = in.to_json();
  r.provenance["A"] = A.name();
  r.provenance["claimed"] = claimed;
  const std::vector<double> a = xu_extremal_sequence(in);
  if (!xu_common_premises(in, a, r)) {
    r.status = Status::inconclusive;
    return r;
  }
  // Divergence premise for every k the lemma's proof consumes.
  const double ln_term = std::log(2.0 * static_cast<double>(in.B) / in.eps);
  const Nat k_max = sat_add(in.N, ceil_clamped(ln_term));
  std::vector<double> partial(in.lambda.size());
  double s = 0.0;
  for (std::size_t i = 0; i < in.lambda.size(); ++i) partial[i] = (s += in.lambda[i]);
  for (Nat k = 0; k <= k_max; ++k) {
    const Nat ak = A(k);
    if (ak >= partial.size()) {
      if (claimed <= in.p) {
        r.status = Status::inconclusive;
        r.notes.push_back("premise unverifiable: A(" + std::to_string(k) +
                          ") lies beyond the supplied λ");
        return r;
      }
      break;
    }
    if (partial[ak] < static_cast<double>(k) - 1e-12) {
      r.status = Status::inconclusive;
      r.notes.push_back("premise violated: Σ_{i≤A(" + std::to_string(k) + ")} λ_i < " +
                        std::to_string(k));
      return r;
    }
  }
  xu_conclusion(in, a, claimed, r);
  return r;
}

VerificationReport brute_force_xu_product(const XuInstance& in, const ProductRate& A,
                                          Nat claimed) {
  VerificationReport r;
  r.check_id = "xu-product";
  r.provenance = in.to_json();
  r.provenance["A'"] = A.name();
  r.provenance["claimed"] = claimed;
  const std::vector<double> a = xu_extremal_sequence(in);
  if (!xu_common_premises(in, a, r)) {
    r.status = Status::inconclusive;
    return r;
  }
  const double target = std::min(1.0, in.eps / (2.0 * static_cast<double>(in.B)));
  const Nat end = A(in.N, target);
  if (end >= in.lambda.size()) {
    if (claimed <= in.p) {
      r.status = Status::inconclusive;
      r.notes.push_back("premise unverifiable: A'(N, ε/2B) lies beyond the supplied λ");
      return r;
    }
  } else {
    double prod = 1.0;
    for (Nat i = in.N; i <= end; ++i) prod *= 1.0 - in.lambda[i];
    if (prod > target + 1e-12) {
      r.status = Status::inconclusive;
      r.notes.push_back("premise violated: ∏ (1−λ_i) over [N, A'(N,ε/2B)] exceeds ε/2B");
      return r;
    }
  }
  xu_conclusion(in, a, claimed, r);
  return r;
}

VerificationReport check_bound_soundness(const std::string& check_id,
                                         const TrajectoryFactory& make_trajectory,
                                         const BoundFn& bound, const std::vector<double>& eps_grid,
                                         const std::vector<Counterfunction>& f_grid, Nat N) {
  const auto t0 = Clock::now();
  struct Case {
    double eps;
    const Counterfunction* f;
    VerificationReport report;
  };
  std::vector<Case> cases;
  for (double eps : eps_grid) {
    for (const auto& f : f_grid) cases.push_back({eps, &f, {}});
  }
  parallel_for(cases.size(), [&](std::size_t k) {
    Case& c = cases[k];
    VerificationReport& r = c.report;
    r.check_id = "eps=" + format_exact(c.eps) + " f=" + c.f->str();
    const BoundResult b = bound(c.eps, *c.f);
    Trajectory traj = make_trajectory();
    const WindowSearch w = find_metastable_window(traj, c.eps, c.f->fn(), b.value, N);
    r.provenance = {{"eps", c.eps}, {"f", c.f->str()}, {"bound", b.value},
                    {"bound_trace", b.trace}, {"search", w.to_json()}};
    r.status = w.status;
    if (w.witness) {
      r.add({"witness n", static_cast<double>(w.witness->n), static_cast<double>(b.value),
             w.witness->n <= b.value});
      r.add({"window max distance", w.witness->max_pairwise_distance, c.eps + w.witness->slack,
             true});
      r.witnesses.push_back(w.to_json()["witness"]);
    } else if (!w.note.empty()) {
      r.notes.push_back(w.note);
    }
  });
  VerificationReport report;
  report.check_id = check_id;
  Trajectory probe = make_trajectory();
  report.provenance = {{"trajectory", probe.provenance()}, {"scheme", probe.scheme()},
                       {"N", N}};
  for (const auto& c : cases) report.merge(c.report);
  report.runtime_seconds = seconds_since(t0);
  return report;
}

}  // namespace ratelab
