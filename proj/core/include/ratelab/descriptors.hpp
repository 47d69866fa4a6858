#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ratelab/counterfunction.hpp"
#include "ratelab/geometry.hpp"
#include "ratelab/mappings.hpp"
#include "ratelab/rates.hpp"
#include "ratelab/report.hpp"
#include "ratelab/sequences.hpp"
#include "ratelab/transformers.hpp"
#include "ratelab/uniqueness.hpp"

namespace ratelab {

// Named presets, written as whitespace-separated words. Unknown names throw
// InputError.
//
//   cauchy:     zero | const K | inv C | invsq C | log2 C | ceil-pow P C S
//               (ceil-pow is max{0, ⌈(C/ε)^P⌉ − S})
//   theta:      from-cauchy <cauchy>
//   meta:       from-cauchy <cauchy> | const K
//   divergence: shifted-pow P S (⌈(k+S)^P⌉) | <counterfunction>
//   product:    shift-inv C (m + ⌈C/ε⌉) | identity
//   delta:      const d | from-contraction r | from-mkc-ratio s
//   omega:      quad K | phi-linear k
//   eta:        hilbert-eta | power-eta P K
CauchyRate parse_cauchy(std::string_view text);
ShiftedMetaRate parse_theta(std::string_view text);
MetaRate parse_meta(std::string_view text);
DivergenceRate parse_divergence(std::string_view text);
ProductRate parse_product(std::string_view text);
RakotchModulus parse_delta(std::string_view text);
AccretivityModulus parse_omega(std::string_view text);
UniformConvexityModulus parse_eta(std::string_view text);

/// A number, a rational string ("3/8") or a sequence object; a bare scalar is
/// a constant sequence.
ScalarSequence parse_sequence(const Json& j);
Point parse_point(const Json& j, std::size_t dimension);
/// {"kind": "scaled"|"identity"|"rotation"|"constant"|"affine"|"projected"|"table", ...}
/// with an optional "class": "nonexpansive" | {"kind": "contraction", "r"}
/// | {"kind": "rakotch", "delta"} | {"kind": "mkc", "ratio"}.
MapDescriptor parse_map(const Json& j, std::size_t dimension);

/// Result of a single formula evaluation.
struct Evaluation {
  bool integral = true;
  Nat nat = 0;
  double real = 0.0;
  /// {"formula", "request", "value", "detail"}; "request" alone reproduces
  /// the value.
  Json trace;

  /// Integers in decimal; reals as "p/q (decimal)" when exactly dyadic.
  std::string text() const;
};

/// Evaluates {"formula": name, ...arguments}. Arguments are numbers or
/// strings (rationals for reals, preset text for rates).
Evaluation evaluate_rate(const Json& request);
std::vector<std::string> rate_formulas();

/// Re-evaluates trace["request"] and reports whether the value matches.
bool replay_trace(const Json& trace);

}  // namespace ratelab
