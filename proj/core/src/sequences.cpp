#include "ratelab/sequences.hpp"

#include <cmath>

#include "ratelab/errors.hpp"

namespace ratelab {

namespace {

const char* domain_name(ScalarSequence::Domain d) {
  switch (d) {
    case ScalarSequence::Domain::unit_open_closed:
      return "(0,1]";
    case ScalarSequence::Domain::unit_closed:
      return "[0,1]";
    case ScalarSequence::Domain::nonnegative:
      return "[0,inf)";
  }
  return "?";
}

ScalarSequence::Domain domain_from(const std::string& s) {
  if (s == "(0,1]") return ScalarSequence::Domain::unit_open_closed;
  if (s == "[0,1]") return ScalarSequence::Domain::unit_closed;
  if (s == "[0,inf)") return ScalarSequence::Domain::nonnegative;
  throw InputError("unknown sequence domain '" + s + "'");
}

}  // namespace

ScalarSequence::ScalarSequence(std::function<double(Nat)> fn, std::string name, Domain domain)
    : fn_(std::move(fn)), name_(std::move(name)), domain_(domain) {
  descriptor_ = {{"kind", "opaque"}, {"name", name_}};
}

ScalarSequence ScalarSequence::harmonic(double c, double p, Domain domain) {
  ScalarSequence s(
      [c, p](Nat n) { return c / std::pow(static_cast<double>(n) + 1.0, p); },
      format_double(c) + "/(n+1)^" + format_double(p), domain);
  s.descriptor_ = {{"kind", "harmonic"}, {"c", c}, {"p", p}, {"domain", domain_name(domain)}};
  return s;
}

ScalarSequence ScalarSequence::constant(double c, Domain domain) {
  ScalarSequence s([c](Nat) { return c; }, "const " + format_double(c), domain);
  s.descriptor_ = {{"kind", "constant"}, {"c", c}, {"domain", domain_name(domain)}};
  return s;
}

ScalarSequence ScalarSequence::alternating(double base, double amp) {
  ScalarSequence s([base, amp](Nat n) { return n % 2 == 0 ? base + amp : base - amp; },
                   format_double(base) + "+" + format_double(amp) + "(-1)^n");
  s.descriptor_ = {{"kind", "alternating"}, {"base", base}, {"amp", amp}};
  return s;
}

ScalarSequence ScalarSequence::table(std::vector<double> values, double tail, Domain domain) {
  Json desc = {{"kind", "table"}, {"values", values}, {"tail", tail},
               {"domain", domain_name(domain)}};
  ScalarSequence s(
      [values = std::move(values), tail](Nat n) { return n < values.size() ? values[n] : tail; },
      "table", domain);
  s.descriptor_ = std::move(desc);
  return s;
}

ScalarSequence ScalarSequence::product(const ScalarSequence& a, const ScalarSequence& b) {
  ScalarSequence s([a, b](Nat n) { return a(n) * b(n); }, "(" + a.name() + ")*(" + b.name() + ")",
                   a.domain() == Domain::nonnegative || b.domain() == Domain::nonnegative
                       ? Domain::nonnegative
                       : Domain::unit_closed);
  s.descriptor_ = {{"kind", "product"}, {"a", a.to_json()}, {"b", b.to_json()}};
  return s;
}

double ScalarSequence::operator()(Nat n) const {
  const double v = fn_(n);
  bool ok = std::isfinite(v);
  switch (domain_) {
    case Domain::unit_open_closed:
      ok = ok && v > 0.0 && v <= 1.0;
      break;
    case Domain::unit_closed:
      ok = ok && v >= 0.0 && v <= 1.0;
      break;
    case Domain::nonnegative:
      ok = ok && v >= 0.0;
      break;
  }
  if (!ok) {
    throw InputError("sequence " + name_ + " left " + domain_name(domain_) + " at n=" +
                     std::to_string(n) + ": " + format_double(v));
  }
  return v;
}

Json ScalarSequence::to_json() const { return descriptor_; }

ScalarSequence ScalarSequence::from_json(const Json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  auto domain = [&](Domain fallback) {
    return j.contains("domain") ? domain_from(j.at("domain").get<std::string>()) : fallback;
  };
  if (kind == "harmonic") {
    return harmonic(json_scalar(j.at("c")), json_scalar(j.at("p")),
                    domain(Domain::unit_open_closed));
  }
  if (kind == "constant") return constant(json_scalar(j.at("c")), domain(Domain::unit_closed));
  if (kind == "alternating") {
    return alternating(json_scalar(j.at("base")), json_scalar(j.at("amp")));
  }
  if (kind == "table") {
    std::vector<double> values;
    for (const auto& v : j.at("values")) values.push_back(json_scalar(v));
    return table(std::move(values), json_scalar(j.at("tail")), domain(Domain::unit_closed));
  }
  if (kind == "product") return product(from_json(j.at("a")), from_json(j.at("b")));
  throw InputError("unknown sequence kind '" + kind + "'");
}

VerificationReport validate_divergence(const ScalarSequence& s, const DivergenceRate& A,
                                       Nat k_max, Nat horizon, Nat from) {
  VerificationReport report;
  report.check_id = "divergence-rate";
  report.provenance = {{"sequence", s.name()}, {"rate", A.name()}, {"k_max", k_max},
                       {"horizon", horizon}, {"from", from}};
  double worst = 0.0;  // largest shortfall k − Σ
  Nat checked = 0;
  double partial = 0.0;
  Nat summed_to = from;  // partial = Σ_{i=from}^{summed_to−1}
  for (Nat k = 0; k <= k_max; ++k) {
    const Nat ak = A(k);
    if (ak >= horizon) {
      report.status = combine(report.status, Status::inconclusive);
      report.notes.push_back("A(" + std::to_string(k) + ") = " + std::to_string(ak) +
                             " lies beyond the horizon");
      break;
    }
    if (ak + 1 < summed_to) {
      partial = 0.0;
      summed_to = from;
    }
    while (summed_to <= ak) partial += s(summed_to++);
    const double shortfall = static_cast<double>(k) - partial;
    if (shortfall > worst) {
      worst = shortfall;
      report.witnesses.push_back({{"k", k}, {"A(k)", ak}, {"partial_sum", partial}});
    }
    ++checked;
  }
  const double tol = 1e-9;
  report.add({"max shortfall k - sum", worst, tol, worst <= tol});
  report.add({"k checked", static_cast<double>(checked), 0.0, true});
  return report;
}

VerificationReport validate_product_rate(const ScalarSequence& s, const ProductRate& A,
                                         const std::vector<Nat>& m_grid,
                                         const std::vector<double>& eps_grid, Nat horizon) {
  VerificationReport report;
  report.check_id = "product-rate";
  report.provenance = {{"sequence", s.name()}, {"rate", A.name()}, {"horizon", horizon}};
  double worst = 0.0;
  for (Nat m : m_grid) {
    for (double eps : eps_grid) {
      const Nat end = A(m, eps);
      if (end >= horizon) {
        report.status = combine(report.status, Status::inconclusive);
        report.notes.push_back("A'(" + std::to_string(m) + "," + format_double(eps) +
                               ") beyond the horizon");
        continue;
      }
      double prod = 1.0;
      for (Nat i = m; i <= end; ++i) prod *= 1.0 - s(i);
      const double excess = prod - eps;
      if (excess > worst) {
        worst = excess;
        report.witnesses.push_back({{"m", m}, {"eps", eps}, {"product", prod}});
      }
    }
  }
  const double tol = 1e-12;
  report.add({"max product excess", worst, tol, worst <= tol});
  return report;
}

VerificationReport validate_null_rate(const std::function<double(Nat)>& s, const std::string& name,
                                      const CauchyRate& rho, const std::vector<double>& eps_grid,
                                      Nat horizon, Nat from) {
  VerificationReport report;
  report.check_id = "null-rate";
  report.provenance = {{"sequence", name}, {"rate", rho.name()}, {"horizon", horizon}};
  double worst = 0.0;
  for (double eps : eps_grid) {
    const Nat start = std::max(rho(eps), from);
    if (start > horizon) {
      report.status = combine(report.status, Status::inconclusive);
      report.notes.push_back("rho(" + format_double(eps) + ") beyond the horizon");
      continue;
    }
    for (Nat n = start; n <= horizon; ++n) {
      const double excess = std::abs(s(n)) - eps;
      if (excess > worst) {
        worst = excess;
        report.witnesses.push_back({{"n", n}, {"eps", eps}, {"value", s(n)}});
      }
    }
  }
  const double tol = 1e-12;
  report.add({"max excess |s_n| - eps", worst, tol, worst <= tol});
  return report;
}

}  // namespace ratelab
