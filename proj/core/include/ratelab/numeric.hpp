#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

namespace ratelab {

/// Natural numbers as used by every rate functional. Arithmetic on Nat that
/// may overflow goes through the saturating helpers below; a saturated value
/// is read as "astronomically large" rather than wrapped.
using Nat = std::uint64_t;
inline constexpr Nat kNatMax = std::numeric_limits<Nat>::max();

/// f : ℕ → ℕ. Counterfunctions and divergence rates both have this shape.
using NatFn = std::function<Nat(Nat)>;

Nat sat_add(Nat a, Nat b) noexcept;
Nat sat_mul(Nat a, Nat b) noexcept;
inline bool saturated(Nat n) noexcept { return n == kNatMax; }

/// max{0, ⌈x⌉}. Values within a relative 1e-10 (at most 1e-6 absolute) of an
/// integer snap to that integer first, so that ⌈1/(1/3)⌉ is 3 and not 4. +∞ and anything beyond
/// the Nat range saturate. NaN throws InputError.
Nat ceil_clamped(double x);

/// Relative snap tolerance used by ceil_clamped.
inline constexpr double kCeilSnap = 1e-10;
inline constexpr double kCeilSnapCap = 1e-6;

/// log_base(target) for base in (0,1), clamped with ceil_clamped. A target
/// ≥ 1 gives 0.
Nat ceil_log(double target, double base);

/// Exact rational p/q parsed from configs ("3/8", "0.25", "2").
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const;
};

Rational parse_rational(std::string_view text);

/// Every finite double is a dyadic rational; returns "p/2^k" when the
/// denominator fits in 63 bits, otherwise nullopt.
std::optional<Rational> exact_dyadic(double x);

/// Shortest round-trip decimal form of x.
std::string format_double(double x);

/// "p/q (decimal)" when x is a dyadic rational with denominator ≤ 2^48,
/// else the decimal form alone.
std::string format_exact(double x);

}  // namespace ratelab
