#include "ratelab/mappings.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "ratelab/errors.hpp"

namespace ratelab {

RakotchModulus::RakotchModulus(std::function<double(double)> delta, std::string name,
                               bool nonincreasing)
    : delta_(std::move(delta)), name_(std::move(name)), nonincreasing_(nonincreasing) {}

RakotchModulus RakotchModulus::constant(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw ModulusError("Rakotch modulus must lie in (0,1), got " + format_double(delta));
  }
  RakotchModulus m([delta](double) { return delta; }, "const " + format_exact(delta), true);
  m.constant_ = delta;
  return m;
}

double RakotchModulus::operator()(double eps) const {
  if (!(eps > 0.0)) throw InputError("Rakotch modulus evaluated at non-positive ε");
  const double d = delta_(eps);
  if (!(d > 0.0 && d < 1.0)) {
    throw ModulusError("Rakotch modulus '" + name_ + "' left (0,1): δ(" + format_double(eps) +
                       ") = " + format_double(d));
  }
  return d;
}

MKCModulus::MKCModulus(std::function<double(double)> sigma, std::string name)
    : sigma_(std::move(sigma)), name_(std::move(name)) {}

MKCModulus MKCModulus::proportional(double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) {
    throw ModulusError("MKC ratio must lie in (0,1), got " + format_double(ratio));
  }
  MKCModulus m([ratio](double eps) { return ratio * eps; }, "ratio " + format_exact(ratio));
  m.ratio_ = ratio;
  return m;
}

double MKCModulus::operator()(double eps) const {
  if (!(eps > 0.0)) throw InputError("MKC modulus evaluated at non-positive ε");
  const double s = sigma_(eps);
  if (!(s > 0.0 && s < eps)) {
    throw ModulusError("MKC modulus '" + name_ + "' left (0,ε): σ(" + format_double(eps) +
                       ") = " + format_double(s));
  }
  return s;
}

RakotchModulus rakotch_from_mkc(const MKCModulus& mkc) {
  if (auto ratio = mkc.ratio()) {
    if (!(*ratio > 0.0 && *ratio < 1.0)) {
      throw ModulusError("MKC ratio must lie in (0,1), got " + format_double(*ratio));
    }
    return RakotchModulus::constant(*ratio / 4.0);
  }
  return RakotchModulus([mkc](double eps) { return mkc(eps) / (4.0 * eps); },
                        "mkc/4ε(" + mkc.name() + ")");
}

RakotchModulus rakotch_from_contraction(double r) {
  if (!(r >= 0.0 && r < 1.0)) {
    throw InputError("contraction factor must lie in [0,1), got " + format_double(r));
  }
  return RakotchModulus::constant(std::min(1.0 - r, kMaxConstantDelta));
}

std::string class_name(const ContractionClass& c) {
  struct Visitor {
    std::string operator()(const Nonexpansive&) const { return "nonexpansive"; }
    std::string operator()(const RContraction& k) const {
      return "r-contraction(" + format_double(k.r) + ")";
    }
    std::string operator()(const MkcClass& k) const { return "mkc(" + k.modulus.name() + ")"; }
    std::string operator()(const RakotchClass& k) const {
      return "rakotch(" + k.modulus.name() + ")";
    }
  };
  return std::visit(Visitor{}, c);
}

MapDescriptor MapDescriptor::identity() { return scaled(1.0); }

MapDescriptor MapDescriptor::scaled(double c, std::optional<Point> fixed) {
  if (!(std::abs(c) <= 1.0)) throw InputError("scaled-identity: |c| must be at most 1");
  MapDescriptor m;
  m.kind = ScaledIdentity{c, std::move(fixed)};
  if (std::abs(c) < 1.0) m.claimed = RContraction{std::abs(c)};
  m.label = c == 1.0 ? "identity" : "scaled-identity(" + format_exact(c) + ")";
  return m;
}

MapDescriptor MapDescriptor::rotation(double angle, std::optional<Point> fixed) {
  MapDescriptor m;
  m.kind = Rotation{angle, std::move(fixed)};
  m.label = "rotation(" + format_double(angle) + ")";
  return m;
}

MapDescriptor MapDescriptor::constant(Point value) {
  MapDescriptor m;
  m.kind = ConstantMap{std::move(value)};
  m.claimed = RContraction{0.0};
  m.label = "constant";
  return m;
}

MapDescriptor MapDescriptor::affine(std::vector<std::vector<double>> matrix, Point shift,
                                    ContractionClass claimed) {
  const std::size_t n = shift.dim();
  if (matrix.size() != n) throw InputError("affine: matrix rows must match the shift dimension");
  for (const auto& row : matrix) {
    if (row.size() != n) throw InputError("affine: matrix must be square");
  }
  MapDescriptor m;
  m.kind = AffineMap{std::move(matrix), std::move(shift)};
  m.claimed = std::move(claimed);
  m.label = "affine";
  return m;
}

MapDescriptor MapDescriptor::projected(MapDescriptor inner) {
  MapDescriptor m;
  m.claimed = inner.claimed;
  m.label = "project(" + inner.label + ")";
  m.kind = ProjectionComposite{std::make_shared<const MapDescriptor>(std::move(inner))};
  return m;
}

MapDescriptor MapDescriptor::table(std::vector<std::pair<double, double>> nodes,
                                   ContractionClass claimed) {
  if (nodes.empty()) throw InputError("table map: at least one node is required");
  std::sort(nodes.begin(), nodes.end());
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    if (nodes[i].first == nodes[i - 1].first) throw InputError("table map: duplicate abscissa");
  }
  MapDescriptor m;
  m.kind = TableMap{std::move(nodes)};
  m.claimed = std::move(claimed);
  m.label = "table";
  return m;
}

MapDescriptor MapDescriptor::with_class(ContractionClass c) const {
  MapDescriptor m = *this;
  m.claimed = std::move(c);
  return m;
}

RakotchModulus rakotch_modulus(const MapDescriptor& map) {
  struct Visitor {
    RakotchModulus operator()(const Nonexpansive&) const {
      throw ContractError("map is only claimed nonexpansive; a Rakotch modulus is required");
    }
    RakotchModulus operator()(const RContraction& k) const {
      return rakotch_from_contraction(k.r);
    }
    RakotchModulus operator()(const MkcClass& k) const { return rakotch_from_mkc(k.modulus); }
    RakotchModulus operator()(const RakotchClass& k) const { return k.modulus; }
  };
  return std::visit(Visitor{}, map.claimed);
}

namespace {

Point evaluate(const Space& space, const MapDescriptor& map, const Point& x) {
  struct Visitor {
    const Space& space;
    const Point& x;

    Point operator()(const ScaledIdentity& k) const {
      const Point& p = k.fixed ? *k.fixed : space.ball().center;
      return p + k.c * (x - p);
    }
    Point operator()(const Rotation& k) const {
      if (x.dim() < 2) throw InputError("rotation needs dimension at least 2");
      const Point& p = k.fixed ? *k.fixed : space.ball().center;
      std::vector<double> out = x.vector();
      const double u = x[0] - p[0];
      const double v = x[1] - p[1];
      out[0] = p[0] + std::cos(k.angle) * u - std::sin(k.angle) * v;
      out[1] = p[1] + std::sin(k.angle) * u + std::cos(k.angle) * v;
      return Point(std::move(out));
    }
    Point operator()(const ConstantMap& k) const {
      if (k.value.dim() != x.dim()) throw InputError("constant map: dimension mismatch");
      return k.value;
    }
    Point operator()(const AffineMap& k) const {
      if (k.shift.dim() != x.dim()) throw InputError("affine map: dimension mismatch");
      std::vector<double> out(x.dim());
      for (std::size_t i = 0; i < out.size(); ++i) {
        double s = k.shift[i];
        for (std::size_t j = 0; j < out.size(); ++j) s += k.matrix[i][j] * x[j];
        out[i] = s;
      }
      return Point(std::move(out));
    }
    Point operator()(const ProjectionComposite& k) const {
      return space.project(evaluate(space, *k.inner, x));
    }
    Point operator()(const TableMap& k) const {
      if (x.dim() != 1) throw InputError("table map is one-dimensional");
      const double t = x[0];
      const auto& n = k.nodes;
      if (t <= n.front().first) return Point{n.front().second};
      if (t >= n.back().first) return Point{n.back().second};
      auto hi = std::upper_bound(n.begin(), n.end(), std::make_pair(t, -HUGE_VAL));
      auto lo = std::prev(hi);
      const double w = (t - lo->first) / (hi->first - lo->first);
      return Point{(1.0 - w) * lo->second + w * hi->second};
    }
  };
  return std::visit(Visitor{space, x}, map.kind);
}

// Round-off allowance for C membership, scaled with the ball.
double membership_slack(const Space& space) { return 1e-12 * std::max(1.0, space.ball().radius); }

}  // namespace

Point apply(const Space& space, const MapDescriptor& map, const Point& x) {
  const double slack = membership_slack(space);
  if (space.excess(x) > slack) {
    throw InputError("apply(" + map.label + "): argument lies outside C by " +
                     format_double(space.excess(x)));
  }
  Point y = evaluate(space, map, x);
  const double out = space.excess(y);
  if (out > 1e-9 * std::max(1.0, space.ball().radius)) {
    throw InputError("apply(" + map.label + "): image leaves C by " + format_double(out));
  }
  return out > 0.0 ? space.project(y) : y;
}

VerificationReport check_class(const Space& space, const MapDescriptor& map,
                               BallSampler& sampler, std::size_t n_samples, double tol,
                               const std::vector<double>& eps_grid) {
  const auto start = std::chrono::steady_clock::now();
  VerificationReport report;
  report.check_id = "map-class";
  report.provenance = {{"map", map.label},
                       {"claimed", class_name(map.claimed)},
                       {"samples", n_samples}};

  double worst_invariance = 0.0;
  double worst = 0.0;
  Json worst_witness;
  std::size_t premise_hits = 0;

  auto record = [&](double violation, const Point& x, const Point& y, double eps) {
    if (violation > worst) {
      worst = violation;
      worst_witness = {{"x", x.vector()}, {"y", y.vector()}, {"eps", eps},
                       {"violation", violation}};
    }
  };

  for (std::size_t s = 0; s < n_samples; ++s) {
    const Point x = sampler.point();
    Point y = sampler.point();
    if (s % 2 == 1) {
      // short-range partner
      const double scale = eps_grid.empty() ? 0.1 : eps_grid[s / 2 % eps_grid.size()];
      y = space.project(sampler.point_in(x, scale));
    }
    const Point tx = evaluate(space, map, x);
    const Point ty = evaluate(space, map, y);
    worst_invariance = std::max({worst_invariance, space.excess(tx), space.excess(ty)});
    const double d = space.dist(x, y);
    const double dt = space.dist(tx, ty);

    std::visit(
        [&](const auto& k) {
          using K = std::decay_t<decltype(k)>;
          if constexpr (std::is_same_v<K, Nonexpansive>) {
            ++premise_hits;
            record(dt - d, x, y, 0.0);
          } else if constexpr (std::is_same_v<K, RContraction>) {
            ++premise_hits;
            record(dt - k.r * d, x, y, 0.0);
          } else if constexpr (std::is_same_v<K, RakotchClass>) {
            for (double eps : eps_grid) {
              if (d >= eps) {
                ++premise_hits;
                record(dt - (1.0 - k.modulus(eps)) * d, x, y, eps);
              }
            }
          } else if constexpr (std::is_same_v<K, MkcClass>) {
            for (double eps : eps_grid) {
              if (d < eps / 4.0 + k.modulus(eps)) {
                ++premise_hits;
                record(dt - eps / 4.0, x, y, eps);
              }
            }
          }
        },
        map.claimed);
  }

  const double inv_tol = std::max(tol, 1e-9 * std::max(1.0, space.ball().radius));
  report.add({"C-invariance", worst_invariance, inv_tol, worst_invariance <= inv_tol});
  report.add({class_name(map.claimed), worst, tol, worst <= tol});
  report.add({"pairs-meeting-premise", static_cast<double>(premise_hits), 0.0, true});
  if (worst > tol) report.witnesses.push_back(worst_witness);
  if (premise_hits == 0) {
    report.status = combine(report.status, Status::inconclusive);
    report.notes.push_back("no sampled pair met the premise of the claimed class");
  }
  report.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

MapFamily MapFamily::constant(MapDescriptor map) {
  MapFamily f;
  f.label_ = "constant(" + map.label + ")";
  f.constant_ = std::move(map);
  return f;
}

MapFamily MapFamily::indexed(std::function<MapDescriptor(Nat)> generator, std::string label) {
  MapFamily f;
  f.generator_ = std::move(generator);
  f.label_ = std::move(label);
  return f;
}

MapDescriptor MapFamily::at(Nat n) const { return constant_ ? *constant_ : generator_(n); }

VerificationReport check_family(const Space& space, const MapFamily& family, BallSampler& sampler,
                                Nat members, std::size_t n_samples, double tol) {
  VerificationReport report;
  report.check_id = "family-nonexpansive";
  report.provenance = {{"family", family.label()}, {"members", members}};
  for (Nat n = 0; n < members; ++n) {
    MapDescriptor m = family.at(n).with_class(Nonexpansive{});
    VerificationReport r = check_class(space, m, sampler, n_samples, tol);
    r.check_id = "S_" + std::to_string(n);
    report.merge(r);
    if (family.is_constant()) break;
  }
  return report;
}

}  // namespace ratelab
