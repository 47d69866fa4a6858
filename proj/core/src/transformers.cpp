#include "ratelab/transformers.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ratelab/errors.hpp"

namespace ratelab {

namespace {

constexpr std::size_t kChainTraceLimit = 256;

void check_delta(double d) {
  if (!(d > 0.0 && d < 1.0)) throw ModulusError("δ must lie in (0,1), got " + format_double(d));
}

void check_eps(double eps) {
  if (!(eps > 0.0)) throw InputError("ε must be positive, got " + format_double(eps));
}

const ShiftedMetaRate& require_theta(const TransformerInputs& in) {
  if (!in.theta) throw ContractError("transformer needs θ");
  if (!in.theta->monotone_in_N()) {
    throw ContractError("θ '" + in.theta->name() +
                        "' is not flagged monotone in N; wrap it with monotone_majorant");
  }
  return *in.theta;
}

const RakotchModulus& require_delta(const TransformerInputs& in) {
  if (!in.delta) throw ContractError("transformer needs a Rakotch modulus δ");
  return *in.delta;
}

double require_constant_delta(const TransformerInputs& in) {
  const auto d = require_delta(in).constant_value();
  if (!d) throw ContractError("this corollary needs a constant modulus δ");
  check_delta(*d);
  return *d;
}

const DivergenceRate& require_A(const TransformerInputs& in) {
  if (!in.A) throw ContractError("transformer needs a rate of divergence A");
  if (!in.A->monotone()) throw ContractError("rate of divergence A must be monotone");
  return *in.A;
}

Json chain_json(const std::vector<Nat>& chain) {
  Json j = Json::array();
  if (chain.size() <= kChainTraceLimit) {
    for (Nat v : chain) j.push_back(v);
    return j;
  }
  for (std::size_t i = 0; i < kChainTraceLimit / 2; ++i) j.push_back(chain[i]);
  j.push_back("...");
  for (std::size_t i = chain.size() - kChainTraceLimit / 2; i < chain.size(); ++i) {
    j.push_back(chain[i]);
  }
  return j;
}

struct Chain {
  std::vector<Nat> psi;  // Ψ₀ … Ψ_{M+1}
};

/// Ψ_{m+1} = θ(ε₀, f_{M−m}, Ψ_m) for m = 0..M, where f_{m+1}(p) =
/// max{base(p), θ(ε₀, f_m, p)}. The f_m are built bottom-up and memoized.
Chain run_chain(const ShiftedMetaRate& theta, double eps0, Nat M, Nat psi0, NatFn f0,
                NatFn base) {
  std::vector<NatFn> fs;
  if (!theta.f_independent()) {
    fs.reserve(M + 1);
    fs.push_back(memoize(std::move(f0)));
    for (Nat m = 0; m < M; ++m) {
      fs.push_back(memoize([theta, eps0, base, prev = fs.back()](Nat p) {
        return std::max(base(p), theta(eps0, prev, p));
      }));
    }
  }
  const NatFn unused = [](Nat n) { return n; };
  Chain c;
  c.psi.push_back(psi0);
  for (Nat m = 0; m <= M; ++m) {
    const NatFn& fm = theta.f_independent() ? unused : fs[M - m];
    c.psi.push_back(theta(eps0, fm, c.psi.back()));
  }
  return c;
}

Nat xi_impl(Nat b, double delta, const DivergenceRate& mu1, const CauchyRate& mu2, double eps,
            double divisor, Json& trace) {
  const DivergenceRate mu1t = scale_divergence(mu1, delta);
  const double arg = delta * delta * eps / (divisor * static_cast<double>(b));
  const Nat m2 = mu2(arg);
  const Nat v = sigma1(mu1t, b, eps, m2);
  trace = {{"eps", eps}, {"mu2_arg", arg}, {"mu2", m2},
           {"ln_shift", ceil_clamped(std::log(2.0 * static_cast<double>(b) / eps))},
           {"value", v}};
  return v;
}

}  // namespace

BoundResult psi_viscosity_browder(const TransformerInputs& in, double eps, const NatFn& f, Nat N) {
  check_eps(eps);
  const ShiftedMetaRate& theta = require_theta(in);
  const RakotchModulus& delta = require_delta(in);
  const double d_half = delta(eps / 2.0);
  const double eps_t = eps * d_half / 4.0;
  const double d_t = delta(eps_t);
  const double eps0 = eps_t * d_t / 2.0;
  const Nat M = ceil_log(eps_t / (2.0 * static_cast<double>(in.b)), 1.0 - d_t);
  const Chain c = run_chain(theta, eps0, M, N, f, f);
  BoundResult r;
  r.value = c.psi.back();
  r.trace = {{"transformer", "psi-vb"}, {"eps", eps},         {"N", N},
             {"b", in.b},               {"delta(eps/2)", d_half}, {"eps_tilde", eps_t},
             {"delta(eps_tilde)", d_t}, {"eps0", eps0},       {"M", M},
             {"psi_chain", chain_json(c.psi)}, {"f_depth", M + 1}, {"value", r.value}};
  return r;
}

BoundResult psi_viscosity_browder_single(const TransformerInputs& in, double eps, const NatFn& f) {
  check_eps(eps);
  const ShiftedMetaRate& theta = require_theta(in);
  const double d = require_constant_delta(in);
  const double eps0 = eps * d * d / 8.0;
  const Nat M = ceil_log(eps * d / (8.0 * static_cast<double>(in.b)), 1.0 - d);
  const Chain c = run_chain(theta, eps0, M, 0, f, f);
  BoundResult r;
  r.value = c.psi.back();
  r.trace = {{"transformer", "psi-vb-single"},
             {"eps", eps},
             {"b", in.b},
             {"delta", d},
             {"eps0", eps0},
             {"M", M},
             {"psi_chain", chain_json(c.psi)},
             {"f_depth", M + 1},
             {"value", r.value}};
  return r;
}

BoundResult cauchy_viscosity_browder(Nat b, double delta, const CauchyRate& rho, double eps) {
  check_eps(eps);
  check_delta(delta);
  const double eps0 = eps * delta * delta / 8.0;
  BoundResult r;
  r.value = rho(eps0);
  r.trace = {{"transformer", "cauchy-vb"}, {"eps", eps},  {"b", b},
             {"delta", delta},             {"eps0", eps0}, {"value", r.value}};
  return r;
}

BoundResult psi_viscosity_halpern(const TransformerInputs& in, double eps, const NatFn& f, Nat N) {
  check_eps(eps);
  const ShiftedMetaRate& theta = require_theta(in);
  const RakotchModulus& delta = require_delta(in);
  const DivergenceRate& A = require_A(in);
  const double d_third = delta(eps / 3.0);
  const DivergenceRate At = scale_divergence(A, d_third);
  const double eps_t = 2.0 * eps * d_third / 15.0;
  const double d_t = delta(eps_t);
  const double eps0 = eps_t * d_t / 4.0;
  const Nat M = ceil_log(eps_t / (2.0 * static_cast<double>(in.b)), 1.0 - d_t / 2.0);
  const Nat psi0 = std::max(N, sat_add(A(1), 1));
  const Nat b = in.b;
  NatFn f0 = [At, b, eps, f](Nat p) {
    const Nat s = sigma1(At, b, eps / 3.0, p);
    return std::max(f(s), s);
  };
  const NatFn f0m = memoize(f0);
  const Chain c = run_chain(theta, eps0, M, psi0, f0m, f0m);
  BoundResult r;
  r.value = sigma1(At, b, eps / 3.0, c.psi.back());
  r.trace = {{"transformer", "psi-vh"},
             {"eps", eps},
             {"N", N},
             {"b", b},
             {"delta(eps/3)", d_third},
             {"eps_tilde", eps_t},
             {"delta(eps_tilde)", d_t},
             {"eps0", eps0},
             {"M", M},
             {"psi0", psi0},
             {"psi_chain", chain_json(c.psi)},
             {"f_depth", M + 1},
             {"sigma1_N", c.psi.back()},
             {"value", r.value}};
  return r;
}

BoundResult psi_viscosity_halpern_single(const TransformerInputs& in, double eps, const NatFn& f) {
  check_eps(eps);
  const ShiftedMetaRate& theta = require_theta(in);
  const double d = require_constant_delta(in);
  const DivergenceRate& A = require_A(in);
  const DivergenceRate At = scale_divergence(A, d);
  const double eps0 = eps * d * d / 30.0;
  const Nat M = ceil_log(eps * d / (15.0 * static_cast<double>(in.b)), 1.0 - d / 2.0);
  const Nat psi0 = sat_add(A(1), 1);
  const Nat b = in.b;
  const NatFn f0 = memoize([At, b, eps, f](Nat p) { return f(sigma1(At, b, eps / 3.0, p)); });
  const Chain c = run_chain(theta, eps0, M, psi0, f0, f0);
  BoundResult r;
  r.value = sigma1(At, b, eps / 3.0, c.psi.back());
  r.trace = {{"transformer", "psi-vh-single"},
             {"eps", eps},
             {"b", b},
             {"delta", d},
             {"eps0", eps0},
             {"M", M},
             {"psi0", psi0},
             {"psi_chain", chain_json(c.psi)},
             {"f_depth", M + 1},
             {"sigma1_N", c.psi.back()},
             {"value", r.value}};
  return r;
}

BoundResult cauchy_viscosity_halpern(Nat b, double delta, const DivergenceRate& A,
                                     const CauchyRate& rho, double eps) {
  check_eps(eps);
  check_delta(delta);
  const double eps0 = eps * delta * delta / 30.0;
  const Nat start = std::max(rho(eps0), sat_add(A(1), 1));
  BoundResult r;
  r.value = sigma1(scale_divergence(A, delta), b, eps / 3.0, start);
  r.trace = {{"transformer", "cauchy-vh"}, {"eps", eps},       {"b", b},
             {"delta", delta},             {"eps0", eps0},     {"rho(eps0)", rho(eps0)},
             {"A(1)+1", sat_add(A(1), 1)}, {"sigma1_N", start}, {"value", r.value}};
  return r;
}

BoundResult xi_vkm(Nat b, double delta, const DivergenceRate& mu1, const CauchyRate& mu2,
                   double eps) {
  check_eps(eps);
  check_delta(delta);
  BoundResult r;
  Json t;
  r.value = xi_impl(b, delta, mu1, mu2, eps, 2.0, t);
  r.trace = {{"transformer", "xi-vkm"}, {"b", b}, {"delta", delta}, {"xi", t},
             {"value", r.value}};
  return r;
}

BoundResult omega_vkm(Nat b, double delta, const MetaRate& psi, const DivergenceRate& mu1,
                      const CauchyRate& mu2, double eps, const NatFn& f) {
  check_eps(eps);
  check_delta(delta);
  Json xt;
  const Nat xi = xi_impl(b, delta, mu1, mu2, eps / 3.0, 2.0, xt);
  const NatFn fhat = [&f, xi](Nat n) { return f(sat_add(std::max(xi, n), 1)); };
  const Nat p = psi(eps / 3.0, fhat);
  BoundResult r;
  r.value = sat_add(std::max(xi, p), 1);
  r.trace = {{"transformer", "omega-vkm"}, {"eps", eps},  {"b", b},
             {"delta", delta},             {"xi", xt},    {"psi", psi.name()},
             {"psi(eps/3,fhat)", p},       {"value", r.value}};
  return r;
}

BoundResult cauchy_vkm(Nat b, double delta, const CauchyRate& rho, const DivergenceRate& mu1,
                       const CauchyRate& mu2, double eps) {
  check_eps(eps);
  check_delta(delta);
  Json xt;
  const Nat xi = xi_impl(b, delta, mu1, mu2, eps / 3.0, 3.0, xt);
  const BoundResult vb = cauchy_viscosity_browder(b, delta, rho, eps / 3.0);
  BoundResult r;
  r.value = sat_add(std::max(xi, vb.value), 1);
  r.trace = {{"transformer", "cauchy-vkm"}, {"eps", eps}, {"b", b},           {"delta", delta},
             {"xi", xt},                    {"psi", vb.trace}, {"value", r.value}};
  return r;
}

BoundResult meta_browder_relaxed(const MetaRate& psi, const CauchyRate& rho, double delta,
                                 double eps, const NatFn& f) {
  check_eps(eps);
  check_delta(delta);
  const Nat rd = rho(eps / 3.0 * delta);
  const NatFn shifted_f = [&f, rd](Nat n) { return f(std::max(rd, n)); };
  const Nat p = psi(eps / 3.0, shifted_f);
  BoundResult r;
  r.value = std::max(rd, p);
  r.trace = {{"transformer", "meta-browder-relaxed"},
             {"eps", eps},
             {"delta", delta},
             {"rho_delta(eps/3)", rd},
             {"psi(eps/3,f_shift)", p},
             {"value", r.value}};
  return r;
}

BoundResult relaxed_gamma(const DivergenceRate& A, const CauchyRate& rho, double delta, Nat b,
                          double eps) {
  check_eps(eps);
  check_delta(delta);
  const Nat start = rho(delta * eps / 2.0);
  BoundResult r;
  r.value = sigma1(scale_divergence(A, delta), b, eps, start);
  r.trace = {{"transformer", "relaxed-gamma"}, {"eps", eps},          {"b", b},
             {"delta", delta},                 {"rho(delta*eps/2)", start}, {"value", r.value}};
  return r;
}

namespace {

BoundResult relaxed_meta(const char* name, const MetaRate& psi, const DivergenceRate& A,
                         const CauchyRate& rho, double delta, Nat b, double eps, const NatFn& f) {
  const BoundResult g = relaxed_gamma(A, rho, delta, b, eps / 3.0);
  const Nat gamma = g.value;
  const NatFn shifted_f = [&f, gamma](Nat n) { return f(std::max(gamma, n)); };
  const Nat p = psi(eps / 3.0, shifted_f);
  BoundResult r;
  r.value = std::max(gamma, p);
  r.trace = {{"transformer", name}, {"eps", eps}, {"gamma", g.trace},
             {"psi(eps/3,f_shift)", p}, {"value", r.value}};
  return r;
}

}  // namespace

BoundResult meta_halpern_relaxed(const MetaRate& psi, const DivergenceRate& A,
                                 const CauchyRate& rho, double delta, Nat b, double eps,
                                 const NatFn& f) {
  return relaxed_meta("meta-halpern-relaxed", psi, A, rho, delta, b, eps, f);
}

BoundResult meta_vkm_relaxed(const MetaRate& psi, const DivergenceRate& A, const CauchyRate& rho,
                             double delta, Nat b, double eps, const NatFn& f) {
  return relaxed_meta("meta-vkm-relaxed", psi, A, rho, delta, b, eps, f);
}

MetaRate vb_meta_rate(const TransformerInputs& in) {
  const bool indep = in.theta && in.theta->f_independent();
  return MetaRate(
      [in](double eps, const NatFn& f) { return psi_viscosity_browder_single(in, eps, f).value; },
      "psi-vb-single", indep);
}

MetaRate vh_meta_rate(const TransformerInputs& in) {
  const bool indep = in.theta && in.theta->f_independent();
  return MetaRate(
      [in](double eps, const NatFn& f) { return psi_viscosity_halpern_single(in, eps, f).value; },
      "psi-vh-single", indep);
}

}  // namespace ratelab
