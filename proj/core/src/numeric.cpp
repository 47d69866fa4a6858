#include "ratelab/numeric.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numeric>

#include "ratelab/errors.hpp"

namespace ratelab {

Nat sat_add(Nat a, Nat b) noexcept { return a > kNatMax - b ? kNatMax : a + b; }

Nat sat_mul(Nat a, Nat b) noexcept {
  if (a == 0 || b == 0) return 0;
  return a > kNatMax / b ? kNatMax : a * b;
}

Nat ceil_clamped(double x) {
  if (std::isnan(x)) throw InputError("ceil_clamped: NaN argument");
  if (x <= 0.0) return 0;
  // 2^64 as a double; anything at or beyond it saturates.
  if (x >= 18446744073709551616.0) return kNatMax;
  const double nearest = std::round(x);
  if (std::abs(x - nearest) <= std::min(kCeilSnap * std::max(1.0, x), kCeilSnapCap)) {
    return nearest <= 0.0 ? 0 : static_cast<Nat>(nearest);
  }
  const double c = std::ceil(x);
  if (c >= 18446744073709551616.0) return kNatMax;
  return static_cast<Nat>(c);
}

Nat ceil_log(double target, double base) {
  if (!(base > 0.0 && base < 1.0)) throw InputError("ceil_log: base must lie in (0,1)");
  if (!(target > 0.0)) throw InputError("ceil_log: target must be positive");
  if (target >= 1.0) return 0;
  return ceil_clamped(std::log(target) / std::log(base));
}

std::string Rational::str() const {
  if (den == 1) return std::to_string(num);
  return std::to_string(num) + "/" + std::to_string(den);
}

namespace {

std::int64_t parse_int(std::string_view s) {
  std::int64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InputError("not an integer: '" + std::string(s) + "'");
  }
  return v;
}

Rational reduced(std::int64_t p, std::int64_t q) {
  if (q == 0) throw InputError("rational with zero denominator");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const std::int64_t g = std::gcd(p < 0 ? -p : p, q);
  return {p / (g == 0 ? 1 : g), q / (g == 0 ? 1 : g)};
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw InputError("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    return reduced(parse_int(trim(text.substr(0, slash))), parse_int(trim(text.substr(slash + 1))));
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    const bool negative = text.front() == '-';
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    if (frac.size() > 17) throw InputError("too many decimal digits: '" + std::string(text) + "'");
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t w = (whole.empty() || whole == "-") ? 0 : parse_int(whole);
    const std::int64_t f = frac.empty() ? 0 : parse_int(frac);
    const std::int64_t mag = (w < 0 ? -w : w) * den + f;
    return reduced(negative ? -mag : mag, den);
  }
  return {parse_int(text), 1};
}

std::optional<Rational> exact_dyadic(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  if (x == 0.0) return Rational{0, 1};
  int exp = 0;
  double mant = std::frexp(x, &exp);  // x = mant * 2^exp, |mant| ∈ [0.5, 1)
  // Scale the mantissa to a 53-bit integer.
  auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  while (m % 2 == 0 && exp < 0) {
    m /= 2;
    ++exp;
  }
  if (exp >= 0) {
    if (exp > 62 - 53) return std::nullopt;
    return Rational{m << exp, 1};
  }
  if (-exp > 62) return std::nullopt;
  return Rational{m, std::int64_t{1} << (-exp)};
}

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) return std::to_string(x);
  return std::string(buf, ptr);
}

std::string format_exact(double x) {
  auto r = exact_dyadic(x);
  if (!r || r->den == 1 || r->den > (std::int64_t{1} << 48)) return format_double(x);
  return r->str() + " (" + format_double(x) + ")";
}

}  // namespace ratelab
