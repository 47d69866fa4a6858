#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "ratelab/numeric.hpp"

namespace ratelab {

/// Serializable counterfunction f : ℕ → ℕ.
///
///   cf := const K | affine A C | pow P C | max cf cf
///
/// with nonnegative integer parameters; `affine A C` is A·n+C and `pow P C`
/// is n^P+C. Evaluation saturates at kNatMax. Every expression is monotone.
class Counterfunction {
 public:
  static Counterfunction parse(std::string_view text);
  static Counterfunction constant(Nat k);
  static Counterfunction affine(Nat a, Nat c);
  static Counterfunction power(Nat p, Nat c);
  static Counterfunction max(Counterfunction a, Counterfunction b);

  Nat operator()(Nat n) const;
  /// Canonical text; parse(str()) reproduces the same function.
  std::string str() const;
  NatFn fn() const;

  struct Node;

 private:
  explicit Counterfunction(std::shared_ptr<const Node> root) : root_(std::move(root)) {}
  std::shared_ptr<const Node> root_;
};

}  // namespace ratelab
