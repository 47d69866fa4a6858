#include "ratelab/descriptors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <sstream>

#include "ratelab/errors.hpp"

namespace ratelab {

namespace {

std::vector<std::string> words(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string join(const std::vector<std::string>& w, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < w.size(); ++i) {
    if (!out.empty()) out += ' ';
    out += w[i];
  }
  return out;
}

double number(const std::string& s) { return parse_rational(s).value(); }

bool looks_numeric(std::string_view s) {
  return !s.empty() && (std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == '.' ||
                        s.front() == '-' || s.front() == '+');
}

void arity(const std::vector<std::string>& w, std::size_t n, std::string_view kind) {
  if (w.size() != n) {
    throw InputError(std::string(kind) + " preset '" + join(w, 0) + "' expects " +
                     std::to_string(n - 1) + " parameter(s)");
  }
}

[[noreturn]] void unknown(std::string_view kind, std::string_view text) {
  throw InputError("unknown " + std::string(kind) + " preset '" + std::string(text) + "'");
}

}  // namespace

CauchyRate parse_cauchy(std::string_view text) {
  const auto w = words(text);
  if (w.empty()) unknown("cauchy", text);
  const std::string name = join(w, 0);
  const std::string& k = w[0];
  if (k == "zero") {
    arity(w, 1, "cauchy");
    return CauchyRate([](double) -> Nat { return 0; }, name);
  }
  if (k == "const") {
    arity(w, 2, "cauchy");
    const Nat K = ceil_clamped(number(w[1]));
    return CauchyRate([K](double) { return K; }, name);
  }
  if (k == "inv") {
    arity(w, 2, "cauchy");
    const double C = number(w[1]);
    return CauchyRate([C](double e) { return ceil_clamped(C / e); }, name);
  }
  if (k == "invsq") {
    arity(w, 2, "cauchy");
    const double C = number(w[1]);
    return CauchyRate([C](double e) { return ceil_clamped(C / (e * e)); }, name);
  }
  if (k == "log2") {
    arity(w, 2, "cauchy");
    const double C = number(w[1]);
    return CauchyRate([C](double e) { return ceil_clamped(std::log2(C / e)); }, name);
  }
  if (k == "ceil-pow") {
    arity(w, 4, "cauchy");
    const double P = number(w[1]);
    const double C = number(w[2]);
    const Nat S = ceil_clamped(number(w[3]));
    return CauchyRate(
        [P, C, S](double e) {
          const Nat v = ceil_clamped(std::pow(C / e, P));
          return v > S ? v - S : 0;
        },
        name);
  }
  unknown("cauchy", text);
}

ShiftedMetaRate parse_theta(std::string_view text) {
  const auto w = words(text);
  if (w.size() >= 2 && w[0] == "from-cauchy") return theta_from_cauchy(parse_cauchy(join(w, 1)));
  unknown("theta", text);
}

MetaRate parse_meta(std::string_view text) {
  const auto w = words(text);
  if (w.size() >= 2 && w[0] == "from-cauchy") return cauchy_as_meta(parse_cauchy(join(w, 1)));
  if (!w.empty() && w[0] == "const") {
    arity(w, 2, "meta");
    const Nat K = ceil_clamped(number(w[1]));
    return MetaRate([K](double, const NatFn&) { return K; }, join(w, 0), true);
  }
  unknown("meta", text);
}

DivergenceRate parse_divergence(std::string_view text) {
  const auto w = words(text);
  if (!w.empty() && w[0] == "shifted-pow") {
    arity(w, 3, "divergence");
    const double P = number(w[1]);
    const double S = number(w[2]);
    return DivergenceRate(
        [P, S](Nat k) { return ceil_clamped(std::pow(static_cast<double>(k) + S, P)); },
        join(w, 0));
  }
  try {
    const Counterfunction cf = Counterfunction::parse(text);
    return DivergenceRate(cf.fn(), cf.str());
  } catch (const InputError&) {
    unknown("divergence", text);
  }
}

ProductRate parse_product(std::string_view text) {
  const auto w = words(text);
  if (!w.empty() && w[0] == "shift-inv") {
    arity(w, 2, "product");
    const double C = number(w[1]);
    return ProductRate([C](Nat m, double e) { return sat_add(m, ceil_clamped(C / e)); },
                       join(w, 0));
  }
  if (!w.empty() && w[0] == "identity") {
    arity(w, 1, "product");
    return ProductRate([](Nat m, double) { return m; }, "identity");
  }
  unknown("product", text);
}

RakotchModulus parse_delta(std::string_view text) {
  const auto w = words(text);
  if (w.size() == 1 && looks_numeric(w[0])) return RakotchModulus::constant(number(w[0]));
  if (w.size() == 2 && w[0] == "const") return RakotchModulus::constant(number(w[1]));
  if (w.size() == 2 && w[0] == "from-contraction") return rakotch_from_contraction(number(w[1]));
  if (w.size() == 2 && w[0] == "from-mkc-ratio") {
    return rakotch_from_mkc(MKCModulus::proportional(number(w[1])));
  }
  unknown("delta", text);
}

AccretivityModulus parse_omega(std::string_view text) {
  const auto w = words(text);
  if (w.size() == 2 && w[0] == "quad") return AccretivityModulus::quadratic(number(w[1]));
  if (w.size() == 2 && w[0] == "phi-linear") {
    return accretivity_from_phi(StrictIncreaseModulus::linear(number(w[1])));
  }
  unknown("omega", text);
}

UniformConvexityModulus parse_eta(std::string_view text) {
  const auto w = words(text);
  if (w.size() == 1 && w[0] == "hilbert-eta") return UniformConvexityModulus::hilbert();
  if (w.size() == 3 && w[0] == "power-eta") {
    return UniformConvexityModulus::power(number(w[1]), number(w[2]));
  }
  unknown("eta", text);
}

ScalarSequence parse_sequence(const Json& j) {
  if (j.is_number() || j.is_string()) return ScalarSequence::constant(json_scalar(j));
  return ScalarSequence::from_json(j);
}

Point parse_point(const Json& j, std::size_t dimension) {
  if (!j.is_array()) throw InputError("point: expected an array");
  std::vector<double> c;
  for (const auto& v : j) c.push_back(json_scalar(v));
  if (c.size() != dimension) {
    throw InputError("point: expected " + std::to_string(dimension) + " coordinates, got " +
                     std::to_string(c.size()));
  }
  return Point(std::move(c));
}

namespace {

ContractionClass parse_class(const Json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "nonexpansive") return Nonexpansive{};
    throw InputError("unknown contraction class '" + j.get<std::string>() + "'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "nonexpansive") return Nonexpansive{};
  if (kind == "contraction") return RContraction{json_scalar(j.at("r"))};
  if (kind == "rakotch") return RakotchClass{parse_delta(j.at("delta").get<std::string>())};
  if (kind == "mkc") return MkcClass{MKCModulus::proportional(json_scalar(j.at("ratio")))};
  throw InputError("unknown contraction class '" + kind + "'");
}

}  // namespace

MapDescriptor parse_map(const Json& j, std::size_t dimension) {
  if (!j.is_object()) throw InputError("map: expected an object");
  const std::string kind = j.at("kind").get<std::string>();
  std::optional<Point> fixed;
  if (j.contains("fixed")) fixed = parse_point(j.at("fixed"), dimension);
  MapDescriptor m;
  if (kind == "identity") {
    m = MapDescriptor::identity();
  } else if (kind == "scaled") {
    m = MapDescriptor::scaled(json_scalar(j.at("c")), fixed);
  } else if (kind == "rotation") {
    m = MapDescriptor::rotation(json_scalar(j.at("angle")), fixed);
  } else if (kind == "constant") {
    m = MapDescriptor::constant(parse_point(j.at("value"), dimension));
  } else if (kind == "affine") {
    std::vector<std::vector<double>> matrix;
    for (const auto& row : j.at("matrix")) {
      std::vector<double> r;
      for (const auto& v : row) r.push_back(json_scalar(v));
      matrix.push_back(std::move(r));
    }
    m = MapDescriptor::affine(std::move(matrix), parse_point(j.at("shift"), dimension));
  } else if (kind == "projected") {
    m = MapDescriptor::projected(parse_map(j.at("inner"), dimension));
  } else if (kind == "table") {
    std::vector<std::pair<double, double>> nodes;
    for (const auto& n : j.at("nodes")) nodes.emplace_back(json_scalar(n.at(0)), json_scalar(n.at(1)));
    m = MapDescriptor::table(std::move(nodes));
  } else {
    throw InputError("unknown map kind '" + kind + "'");
  }
  if (j.contains("class")) m = m.with_class(parse_class(j.at("class")));
  return m;
}

std::string Evaluation::text() const {
  if (integral) return std::to_string(nat);
  if (std::isinf(real)) return "inf";
  return format_exact(real);
}

namespace {

const Json& arg(const Json& req, const char* key) {
  if (!req.contains(key)) throw InputError(std::string("missing argument '") + key + "'");
  return req.at(key);
}

double scalar(const Json& req, const char* key) { return json_scalar(arg(req, key)); }

Nat nat(const Json& req, const char* key, std::optional<Nat> fallback = std::nullopt) {
  if (!req.contains(key)) {
    if (fallback) return *fallback;
    throw InputError(std::string("missing argument '") + key + "'");
  }
  const Json& v = req.at(key);
  if (v.is_number_unsigned()) return v.get<Nat>();
  if (v.is_number_integer() && v.get<long long>() >= 0) return static_cast<Nat>(v.get<long long>());
  if (v.is_string()) {
    const Rational r = parse_rational(v.get<std::string>());
    if (r.den == 1 && r.num >= 0) return static_cast<Nat>(r.num);
  }
  throw InputError(std::string("argument '") + key + "' must be a natural number");
}

std::string text(const Json& req, const char* key, const char* fallback = nullptr) {
  if (!req.contains(key)) {
    if (fallback) return fallback;
    throw InputError(std::string("missing argument '") + key + "'");
  }
  const Json& v = req.at(key);
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool flag(const Json& req, const char* key) {
  if (!req.contains(key)) return false;
  const Json& v = req.at(key);
  if (v.is_boolean()) return v.get<bool>();
  if (v.is_string()) return v.get<std::string>() == "true" || v.get<std::string>() == "1";
  return v.is_number() && v.get<double>() != 0.0;
}

double constant_delta(const Json& req) {
  const RakotchModulus d = parse_delta(text(req, "delta"));
  if (!d.constant_value()) throw ContractError("this formula needs a constant δ");
  return *d.constant_value();
}

Counterfunction counterfunction(const Json& req) {
  return Counterfunction::parse(text(req, "f", "const 0"));
}

double omega_value(const Json& req) {
  if (req.contains("w")) return scalar(req, "w");
  const UniquenessForm form = flag(req, "general")    ? UniquenessForm::general
                              : flag(req, "improved") ? UniquenessForm::improved
                                                      : UniquenessForm::automatic;
  return modulus_of_uniqueness(parse_omega(text(req, "omega")), parse_eta(text(req, "eta")),
                               scalar(req, "b"), scalar(req, "eps"), form);
}

Evaluation integral(Nat v, Json detail = Json::object()) {
  Evaluation e;
  e.nat = v;
  e.trace["detail"] = std::move(detail);
  return e;
}

Evaluation real(double v, Json detail = Json::object()) {
  Evaluation e;
  e.integral = false;
  e.real = v;
  e.trace["detail"] = std::move(detail);
  return e;
}

Evaluation from_bound(const BoundResult& b) { return integral(b.value, b.trace); }

TransformerInputs inputs(const Json& req, bool halpern) {
  TransformerInputs in;
  in.b = nat(req, "b", 1);
  in.delta = parse_delta(text(req, "delta"));
  in.theta = parse_theta(text(req, "theta"));
  if (halpern) in.A = parse_divergence(text(req, "A"));
  return in;
}

using Handler = Evaluation (*)(const Json&);

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> table{
      {"ceil", [](const Json& r) { return integral(ceil_clamped(scalar(r, "x"))); }},
      {"sigma1",
       [](const Json& r) {
         return integral(sigma1(parse_divergence(text(r, "A")), nat(r, "B"), scalar(r, "eps"),
                                nat(r, "N", 0)));
       }},
      {"sigma2",
       [](const Json& r) {
         const Sigma2 s = sigma2(parse_product(text(r, "A")), nat(r, "B"), scalar(r, "eps"),
                                 nat(r, "N", 0));
         return integral(s.value, {{"clamped", s.clamped}});
       }},
      {"psi-vb",
       [](const Json& r) {
         return from_bound(psi_viscosity_browder(inputs(r, false), scalar(r, "eps"),
                                                 counterfunction(r).fn(), nat(r, "N", 0)));
       }},
      {"psi-vb-single",
       [](const Json& r) {
         return from_bound(psi_viscosity_browder_single(inputs(r, false), scalar(r, "eps"),
                                                        counterfunction(r).fn()));
       }},
      {"cauchy-vb",
       [](const Json& r) {
         return from_bound(cauchy_viscosity_browder(nat(r, "b", 1), constant_delta(r),
                                                    parse_cauchy(text(r, "rho")),
                                                    scalar(r, "eps")));
       }},
      {"psi-vh",
       [](const Json& r) {
         return from_bound(psi_viscosity_halpern(inputs(r, true), scalar(r, "eps"),
                                                 counterfunction(r).fn(), nat(r, "N", 0)));
       }},
      {"psi-vh-single",
       [](const Json& r) {
         return from_bound(psi_viscosity_halpern_single(inputs(r, true), scalar(r, "eps"),
                                                        counterfunction(r).fn()));
       }},
      {"cauchy-vh",
       [](const Json& r) {
         return from_bound(cauchy_viscosity_halpern(
             nat(r, "b", 1), constant_delta(r), parse_divergence(text(r, "A")),
             parse_cauchy(text(r, "rho")), scalar(r, "eps")));
       }},
      {"xi-vkm",
       [](const Json& r) {
         return from_bound(xi_vkm(nat(r, "b", 1), constant_delta(r),
                                  parse_divergence(text(r, "mu1")), parse_cauchy(text(r, "mu2")),
                                  scalar(r, "eps")));
       }},
      {"omega-vkm",
       [](const Json& r) {
         return from_bound(omega_vkm(nat(r, "b", 1), constant_delta(r), parse_meta(text(r, "psi")),
                                     parse_divergence(text(r, "mu1")),
                                     parse_cauchy(text(r, "mu2")), scalar(r, "eps"),
                                     counterfunction(r).fn()));
       }},
      {"cauchy-vkm",
       [](const Json& r) {
         return from_bound(cauchy_vkm(nat(r, "b", 1), constant_delta(r),
                                      parse_cauchy(text(r, "rho")),
                                      parse_divergence(text(r, "mu1")),
                                      parse_cauchy(text(r, "mu2")), scalar(r, "eps")));
       }},
      {"meta-browder-relaxed",
       [](const Json& r) {
         return from_bound(meta_browder_relaxed(parse_meta(text(r, "psi")),
                                                parse_cauchy(text(r, "rho")), constant_delta(r),
                                                scalar(r, "eps"), counterfunction(r).fn()));
       }},
      {"relaxed-gamma",
       [](const Json& r) {
         return from_bound(relaxed_gamma(parse_divergence(text(r, "A")),
                                         parse_cauchy(text(r, "rho")), constant_delta(r),
                                         nat(r, "b", 1), scalar(r, "eps")));
       }},
      {"meta-halpern-relaxed",
       [](const Json& r) {
         return from_bound(meta_halpern_relaxed(
             parse_meta(text(r, "psi")), parse_divergence(text(r, "A")),
             parse_cauchy(text(r, "rho")), constant_delta(r), nat(r, "b", 1), scalar(r, "eps"),
             counterfunction(r).fn()));
       }},
      {"meta-vkm-relaxed",
       [](const Json& r) {
         return from_bound(meta_vkm_relaxed(
             parse_meta(text(r, "psi")), parse_divergence(text(r, "A")),
             parse_cauchy(text(r, "rho")), constant_delta(r), nat(r, "b", 1), scalar(r, "eps"),
             counterfunction(r).fn()));
       }},
      {"shift-meta",
       [](const Json& r) {
         return integral(shift_meta(parse_meta(text(r, "psi")), scalar(r, "eps"),
                                    counterfunction(r).fn(), nat(r, "N", 0)));
       }},
      {"omega-from-phi",
       [](const Json& r) {
         const StrictIncreaseModulus iota = [&] {
           const auto w = words(text(r, "iota"));
           if (w.size() == 2 && w[0] == "phi-linear") {
             return StrictIncreaseModulus::linear(number(w[1]));
           }
           unknown("iota", text(r, "iota"));
         }();
         return real(omega_from_phi(iota, scalar(r, "eps"), scalar(r, "b")));
       }},
      {"omega-b", [](const Json& r) { return real(omega_value(r)); }},
      {"beta-lemma3",
       [](const Json& r) {
         return real(beta_lemma3(parse_eta(text(r, "eta")), scalar(r, "b"), scalar(r, "eps"),
                                 flag(r, "improved")));
       }},
      {"midpoint-threshold",
       [](const Json& r) {
         return real(midpoint_afp_threshold(parse_eta(text(r, "eta")), scalar(r, "b"),
                                            scalar(r, "eps"), flag(r, "improved")));
       }},
      {"lemma1-threshold",
       [](const Json& r) {
         return real(
             lemma1_threshold(parse_omega(text(r, "omega")), scalar(r, "b"), scalar(r, "eps")));
       }},
      {"path-threshold",
       [](const Json& r) {
         const double w = omega_value(r);
         return real(path_cauchy_threshold(w, scalar(r, "b")), {{"omega_b", w}});
       }},
      {"km-residual",
       [](const Json& r) {
         return real(km_residual_bound(scalar(r, "b"), parse_sequence(arg(r, "beta")),
                                       nat(r, "n")));
       }},
      {"km-rate",
       [](const Json& r) {
         const RateResult k =
             km_cauchy_rate(parse_divergence(text(r, "gamma")), scalar(r, "b"), omega_value(r));
         return integral(k.value, k.trace);
       }},
      {"phi-halpern",
       [](const Json& r) {
         if (!r.contains("theta")) {
           const RateResult k = halpern_cauchy_rate_harmonic(scalar(r, "eps"), scalar(r, "b"));
           return integral(k.value, k.trace);
         }
         const RateResult k = halpern_cauchy_rate(
             scalar(r, "eps"), scalar(r, "b"), parse_cauchy(text(r, "theta")),
             parse_cauchy(text(r, "alpha")), parse_cauchy(text(r, "beta")), scalar(r, "D"));
         return integral(k.value, k.trace);
       }},
  };
  return table;
}

}  // namespace

std::vector<std::string> rate_formulas() {
  std::vector<std::string> out;
  for (const auto& [name, _] : handlers()) out.push_back(name);
  return out;
}

Evaluation evaluate_rate(const Json& request) {
  if (!request.is_object()) throw InputError("rate request must be an object");
  const std::string formula = text(request, "formula");
  const auto it = handlers().find(formula);
  if (it == handlers().end()) throw InputError("unknown formula '" + formula + "'");
  Evaluation e = it->second(request);
  Json detail = std::move(e.trace["detail"]);
  e.trace = Json::object();
  e.trace["formula"] = formula;
  e.trace["request"] = request;
  if (e.integral) {
    e.trace["value"] = e.nat;
  } else if (std::isinf(e.real)) {
    e.trace["value"] = "inf";
  } else {
    e.trace["value"] = e.real;
    e.trace["value_exact"] = format_exact(e.real);
  }
  e.trace["detail"] = std::move(detail);
  return e;
}

bool replay_trace(const Json& trace) {
  const Evaluation e = evaluate_rate(trace.at("request"));
  return e.trace.at("value") == trace.at("value");
}

}  // namespace ratelab
