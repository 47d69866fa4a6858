#include "ratelab/schemes.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "ratelab/errors.hpp"

namespace ratelab {

TauSchedule default_tau(const ScalarSequence& alpha) {
  return [alpha](Nat n) { return std::min(1e-10, alpha(n) * 1e-6); };
}

namespace {

Nat contraction_budget(double tau, double q, double b) {
  if (q <= 0.0) return 1;
  return sat_add(ceil_log(tau * (1.0 - q) / b, q), 1);
}

double checked_alpha(const ScalarSequence& alpha, Nat n) {
  const double a = alpha(n);
  if (!(a > 0.0 && a <= 1.0)) {
    throw InputError("implicit scheme needs alpha_n in (0,1], got " + format_double(a) +
                     " at n=" + std::to_string(n));
  }
  return a;
}

void check_tau(double tau) {
  if (!(tau > 0.0)) throw InputError("inner tolerance must be positive");
}

}  // namespace

InnerSolve solve_contraction(const Space& space, const std::function<Point(const Point&)>& F,
                             const Point& start, double tau, double q) {
  check_tau(tau);
  if (!(q >= 0.0 && q < 1.0)) throw InputError("contraction factor must lie in [0,1)");
  InnerSolve out;
  out.budget = contraction_budget(tau, q, static_cast<double>(space.diameter_bound()));
  Point z = start;
  Point fz = F(z);
  double r = space.dist(z, fz);
  while (r > tau) {
    if (out.iterations >= out.budget) {
      throw SolverError("inner solve exceeded its budget of " + std::to_string(out.budget) +
                            " iterations",
                        r);
    }
    z = std::move(fz);
    fz = F(z);
    r = space.dist(z, fz);
    ++out.iterations;
  }
  out.point = std::move(z);
  out.residual = r;
  out.error_bound = r / (1.0 - q);
  return out;
}

InnerSolve browder_point(const Space& space, const MapFamily& family, const Point& u,
                         const ScalarSequence& alpha, Nat n, double tau) {
  check_tau(tau);
  const double a = checked_alpha(alpha, n);
  const MapDescriptor S = family.at(n);
  auto F = [&](const Point& x) { return space.combine(apply(space, S, x), u, a); };
  return solve_contraction(space, F, u, tau, 1.0 - a);
}

InnerSolve viscosity_browder_point(const Space& space, const MapFamily& family,
                                   const MapDescriptor& phi, const ScalarSequence& alpha, Nat n,
                                   double tau) {
  check_tau(tau);
  const double a = checked_alpha(alpha, n);
  const MapDescriptor S = family.at(n);
  const RakotchModulus delta = rakotch_modulus(phi);
  auto F = [&](const Point& x) {
    return space.combine(apply(space, S, x), apply(space, phi, x), a);
  };
  const Point start = apply(space, phi, space.ball().center);

  if (auto d = delta.constant_value()) return solve_contraction(space, F, start, tau, 1.0 - a * *d);

  // Staged solve on a halving threshold ε′; successive iterates at least ε′
  // apart contract by 1 − αδ(ε′).
  const double b = static_cast<double>(space.diameter_bound());
  InnerSolve out;
  Point z = start;
  Point fz = F(z);
  double r = space.dist(z, fz);
  double eps_stage = b;
  double ceiling = b;
  while (r > tau) {
    while (r < eps_stage && eps_stage > tau) {
      ceiling = eps_stage;
      eps_stage /= 2.0;
    }
    const double target = std::max(eps_stage, tau);
    const double q = 1.0 - a * delta(eps_stage);
    const Nat stage_budget = sat_add(ceil_log(target / ceiling, q), 1);
    out.budget = sat_add(out.budget, stage_budget);
    for (Nat used = 0; r >= target && r > tau; ++used) {
      if (used >= stage_budget) {
        throw SolverError("staged inner solve exceeded its budget at eps'=" +
                              format_double(eps_stage),
                          r);
      }
      z = std::move(fz);
      fz = F(z);
      r = space.dist(z, fz);
      ++out.iterations;
    }
    ceiling = eps_stage;
    eps_stage /= 2.0;
  }
  out.point = std::move(z);
  out.residual = r;
  // d(z, z*) ≥ ε′ forces d(z, z*) ≤ r/(αδ(ε′)); take the best ε′ on the grid.
  double bound = b;
  for (double e = b; e >= 1e-300; e /= 2.0) {
    bound = std::min(bound, std::max(e, r / (a * delta(e))));
    if (e < r) break;
  }
  out.error_bound = r == 0.0 ? 0.0 : bound;
  return out;
}

Point push_toward_center(const Space& space, const Point& x, double magnitude) {
  if (magnitude <= 0.0) return x;
  const Point& c = space.ball().center;
  const double d = euclidean_norm(x - c);
  if (d <= magnitude) return c;
  return x + (-magnitude / d) * (x - c);
}

Trajectory Trajectory::explicit_scheme(Space space, std::string scheme, Point start, Step step,
                                       Json provenance) {
  if (!space.contains(start)) throw InputError(scheme + ": start point lies outside C");
  Trajectory t(std::move(space), std::move(scheme), std::move(provenance));
  t.start_ = std::move(start);
  t.step_ = std::move(step);
  return t;
}

Trajectory Trajectory::implicit_scheme(Space space, std::string scheme, Step map, Solve solve,
                                       Json provenance) {
  Trajectory t(std::move(space), std::move(scheme), std::move(provenance));
  t.map_ = std::move(map);
  t.solve_ = std::move(solve);
  return t;
}

TrajectoryRecord Trajectory::generate(Nat n) {
  TrajectoryRecord rec;
  const double eps = errors_ ? errors_(n) : 0.0;
  if (solve_) {
    InnerSolve s = solve_(n);
    rec.iterations = s.iterations;
    rec.error_bound = s.error_bound;
    rec.residual = s.residual;
    rec.point = std::move(s.point);
    if (errors_) {
      rec.injected_error = eps;
      rec.point = perturb_(space_, rec.point, eps / 2.0);
      rec.residual = space_.dist(rec.point, map_(n, rec.point));
    }
  } else if (n == 0) {
    rec.point = start_;
  } else {
    const Point& prev = records_[n - 1].point;
    rec.point = step_(n - 1, prev);
    if (errors_) {
      const double e = errors_(n - 1);
      rec.injected_error = e;
      const Point exact = rec.point;
      rec.point = perturb_(space_, exact, e);
      rec.residual = space_.dist(rec.point, exact);
    }
  }
  if (space_.excess(rec.point) > 0.0) {
    rec.clamped = space_.excess(rec.point) > 1e-12;
    rec.point = space_.project(rec.point);
  }
  return rec;
}

void Trajectory::extend_to(Nat n) {
  if (n >= horizon_) {
    throw HorizonExceeded(scheme_ + ": index " + std::to_string(n) + " is beyond the horizon " +
                          std::to_string(horizon_));
  }
  while (records_.size() <= n) records_.push_back(generate(records_.size()));
}

const TrajectoryRecord& Trajectory::record(Nat n) {
  extend_to(n);
  return records_[n];
}

Trajectory Trajectory::inject_errors(const ScalarSequence& eps, PerturbRule rule) const {
  Trajectory t(space_, scheme_ + "+errors", provenance_);
  t.provenance_["errors"] = eps.to_json();
  t.horizon_ = horizon_;
  t.start_ = start_;
  t.step_ = step_;
  t.map_ = map_;
  t.solve_ = solve_;
  t.errors_ = [eps](Nat n) { return eps(n); };
  t.perturb_ = std::move(rule);
  return t;
}

void Trajectory::write_csv(std::ostream& out, Nat count) {
  if (count > 0) extend_to(count - 1);
  out << "index";
  for (std::size_t i = 0; i < space_.dimension(); ++i) out << ",x" << i;
  out << ",residual,injected_error\n";
  for (Nat n = 0; n < count; ++n) {
    const auto& r = records_[n];
    out << n;
    for (double c : r.point.coords()) out << ',' << format_double(c);
    out << ',' << format_double(r.residual) << ',' << format_double(r.injected_error) << '\n';
  }
}

namespace {

Json family_json(const MapFamily& f) { return f.label(); }

}  // namespace

Trajectory browder_traj(const Space& space, const MapFamily& family, const Point& u,
                        const ScalarSequence& alpha, TauSchedule tau) {
  if (!tau) tau = default_tau(alpha);
  Json prov = {{"scheme", "browder"}, {"family", family_json(family)}, {"anchor", u.vector()},
               {"alpha", alpha.to_json()}};
  auto map = [space, family, u, alpha](Nat n, const Point& x) {
    return space.combine(apply(space, family.at(n), x), u, alpha(n));
  };
  auto solve = [space, family, u, alpha, tau](Nat n) {
    return browder_point(space, family, u, alpha, n, tau(n));
  };
  return Trajectory::implicit_scheme(space, "browder", map, solve, std::move(prov));
}

Trajectory viscosity_browder_traj(const Space& space, const MapFamily& family,
                                  const MapDescriptor& phi, const ScalarSequence& alpha,
                                  TauSchedule tau) {
  if (!tau) tau = default_tau(alpha);
  Json prov = {{"scheme", "viscosity-browder"}, {"family", family_json(family)},
               {"phi", phi.label}, {"alpha", alpha.to_json()}};
  auto map = [space, family, phi, alpha](Nat n, const Point& x) {
    return space.combine(apply(space, family.at(n), x), apply(space, phi, x), alpha(n));
  };
  auto solve = [space, family, phi, alpha, tau](Nat n) {
    return viscosity_browder_point(space, family, phi, alpha, n, tau(n));
  };
  return Trajectory::implicit_scheme(space, "viscosity-browder", map, solve, std::move(prov));
}

Trajectory halpern_traj(const Space& space, const MapFamily& family, const Point& u,
                        const Point& start, const ScalarSequence& alpha) {
  if (!space.contains(u)) throw InputError("halpern: anchor lies outside C");
  Json prov = {{"scheme", "halpern"}, {"family", family_json(family)}, {"anchor", u.vector()},
               {"start", start.vector()}, {"alpha", alpha.to_json()}};
  auto step = [space, family, u, alpha](Nat n, const Point& x) {
    return space.combine(apply(space, family.at(n), x), u, alpha(n));
  };
  return Trajectory::explicit_scheme(space, "halpern", start, step, std::move(prov));
}

Trajectory viscosity_halpern_traj(const Space& space, const MapFamily& family,
                                  const MapDescriptor& phi, const Point& start,
                                  const ScalarSequence& alpha) {
  Json prov = {{"scheme", "viscosity-halpern"}, {"family", family_json(family)},
               {"phi", phi.label}, {"start", start.vector()}, {"alpha", alpha.to_json()}};
  auto step = [space, family, phi, alpha](Nat n, const Point& x) {
    return space.combine(apply(space, family.at(n), x), apply(space, phi, x), alpha(n));
  };
  return Trajectory::explicit_scheme(space, "viscosity-halpern", start, step, std::move(prov));
}

Trajectory km_traj(const Space& space, const MapDescriptor& T, const Point& start,
                   const ScalarSequence& beta) {
  Json prov = {{"scheme", "km"}, {"T", T.label}, {"start", start.vector()},
               {"beta", beta.to_json()}};
  auto step = [space, T, beta](Nat n, const Point& x) {
    return space.combine(x, apply(space, T, x), beta(n));
  };
  return Trajectory::explicit_scheme(space, "km", start, step, std::move(prov));
}

Trajectory vkm_traj(const Space& space, const MapDescriptor& T, const MapDescriptor& phi,
                    const Point& start, const ScalarSequence& alpha, const ScalarSequence& beta) {
  Json prov = {{"scheme", "vkm"}, {"T", T.label}, {"phi", phi.label}, {"start", start.vector()},
               {"alpha", alpha.to_json()}, {"beta", beta.to_json()}};
  auto step = [space, T, phi, alpha, beta](Nat n, const Point& x) {
    const Point inner = space.combine(apply(space, T, x), apply(space, phi, x), alpha(n));
    return space.combine(x, inner, beta(n));
  };
  return Trajectory::explicit_scheme(space, "vkm", start, step, std::move(prov));
}

}  // namespace ratelab
