#include "ratelab/rates.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>

#include "ratelab/errors.hpp"

namespace ratelab {

namespace {

void require_positive(double eps, const std::string& who) {
  if (!(eps > 0.0)) throw InputError(who + ": ε must be positive, got " + format_double(eps));
}

struct ThetaCache {
  std::mutex mu;
  std::map<std::pair<std::uint64_t, Nat>, Nat> values;
};

}  // namespace

CauchyRate::CauchyRate(std::function<Nat(double)> fn, std::string name)
    : fn_(std::move(fn)), name_(std::move(name)) {}

Nat CauchyRate::operator()(double eps) const {
  require_positive(eps, "Cauchy rate " + name_);
  return fn_(eps);
}

MetaRate::MetaRate(Fn fn, std::string name, bool f_independent)
    : fn_(std::move(fn)), name_(std::move(name)), f_independent_(f_independent) {}

Nat MetaRate::operator()(double eps, const NatFn& f) const {
  require_positive(eps, "metastability rate " + name_);
  return fn_(eps, f);
}

ShiftedMetaRate::ShiftedMetaRate(Fn fn, std::string name, bool monotone_in_N, bool f_independent)
    : name_(std::move(name)), monotone_(monotone_in_N), f_independent_(f_independent) {
  if (!f_independent_) {
    fn_ = std::move(fn);
    return;
  }
  auto cache = std::make_shared<ThetaCache>();
  fn_ = [inner = std::move(fn), cache](double eps, const NatFn& f, Nat N) {
    const auto key = std::make_pair(std::bit_cast<std::uint64_t>(eps), N);
    {
      std::lock_guard lock(cache->mu);
      if (auto it = cache->values.find(key); it != cache->values.end()) return it->second;
    }
    const Nat v = inner(eps, f, N);
    std::lock_guard lock(cache->mu);
    cache->values.emplace(key, v);
    return v;
  };
}

Nat ShiftedMetaRate::operator()(double eps, const NatFn& f, Nat N) const {
  require_positive(eps, "shifted rate " + name_);
  return fn_(eps, f, N);
}

DivergenceRate::DivergenceRate(NatFn fn, std::string name, bool monotone)
    : fn_(std::move(fn)), name_(std::move(name)), monotone_(monotone) {}

ProductRate::ProductRate(std::function<Nat(Nat, double)> fn, std::string name)
    : fn_(std::move(fn)), name_(std::move(name)) {}

Nat ProductRate::operator()(Nat m, double eps) const {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw InputError("product rate " + name_ + ": ε must lie in (0,1], got " + format_double(eps));
  }
  return fn_(m, eps);
}

Nat sigma1(const DivergenceRate& A, Nat B, double eps, Nat N) {
  if (B < 1) throw InputError("sigma1: B must be a positive integer");
  require_positive(eps, "sigma1");
  const Nat shift = ceil_clamped(std::log(2.0 * static_cast<double>(B) / eps));
  return sat_add(A(sat_add(N, shift)), 1);
}

Sigma2 sigma2(const ProductRate& A, Nat B, double eps, Nat N) {
  if (B < 1) throw InputError("sigma2: B must be a positive integer");
  require_positive(eps, "sigma2");
  Sigma2 out;
  double arg = eps / (2.0 * static_cast<double>(B));
  if (arg > 1.0) {
    arg = 1.0;
    out.clamped = true;
  }
  out.value = sat_add(std::max(A(N, arg), N), 1);
  return out;
}

DivergenceRate scale_divergence(const DivergenceRate& A, double delta) {
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw ModulusError("scale_divergence: δ must lie in (0,1], got " + format_double(delta));
  }
  return DivergenceRate(
      [A, delta](Nat k) { return A(ceil_clamped(static_cast<double>(k) / delta)); },
      A.name() + "∘⌈k/" + format_double(delta) + "⌉", A.monotone());
}

MetaRate cauchy_as_meta(const CauchyRate& rho) {
  return MetaRate([rho](double eps, const NatFn&) { return rho(eps); }, rho.name(), true);
}

CauchyRate meta_const_as_cauchy(const MetaRate& phi) {
  if (!phi.f_independent()) {
    throw ContractError("metastability rate '" + phi.name() + "' is not flagged f-independent");
  }
  return CauchyRate(
      [phi](double eps) {
        const NatFn any = [](Nat n) { return n; };
        return phi(eps, any);
      },
      phi.name());
}

Nat shift_meta(const MetaRate& phi, double eps, const NatFn& f, Nat N) {
  const NatFn fN = [&f, N](Nat m) { return f(std::max(N, m)); };
  return std::max(N, phi(eps, fN));
}

ShiftedMetaRate shifted(const MetaRate& phi) {
  return ShiftedMetaRate(
      [phi](double eps, const NatFn& f, Nat N) { return shift_meta(phi, eps, f, N); },
      "shift(" + phi.name() + ")", false, phi.f_independent());
}

ShiftedMetaRate monotone_majorant(const ShiftedMetaRate& theta) {
  if (theta.monotone_in_N()) return theta;
  return ShiftedMetaRate(
      [theta](double eps, const NatFn& f, Nat N) {
        Nat best = 0;
        for (Nat n = 0;; ++n) {
          best = std::max(best, theta(eps, f, n));
          if (n == N) break;
        }
        return best;
      },
      "maj(" + theta.name() + ")", true, theta.f_independent());
}

ShiftedMetaRate theta_from_cauchy(const CauchyRate& rho) {
  return ShiftedMetaRate(
      [rho](double eps, const NatFn&, Nat N) { return std::max(N, rho(eps)); },
      "from-cauchy " + rho.name(), true, true);
}

NatFn memoize(NatFn f) {
  struct Cache {
    std::mutex mu;
    std::unordered_map<Nat, Nat> values;
  };
  auto cache = std::make_shared<Cache>();
  return [f = std::move(f), cache](Nat n) {
    {
      std::lock_guard lock(cache->mu);
      if (auto it = cache->values.find(n); it != cache->values.end()) return it->second;
    }
    const Nat v = f(n);
    std::lock_guard lock(cache->mu);
    cache->values.emplace(n, v);
    return v;
  };
}

}  // namespace ratelab
