#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

#include "ratelab/counterfunction.hpp"
#include "ratelab/errors.hpp"
#include "ratelab/rates.hpp"
#include "ratelab/sequences.hpp"

namespace ratelab {
namespace {

DivergenceRate times(Nat k) {
  return DivergenceRate([k](Nat x) { return k * x; }, std::to_string(k) + "k");
}

CauchyRate inv() {
  return CauchyRate([](double e) { return ceil_clamped(1.0 / e); }, "inv");
}

TEST(Sigma, FirstFormTriple) {
  EXPECT_EQ(sigma1(times(2), 1, 2.0, 0), 1u);
  EXPECT_EQ(sigma1(times(2), 1, 1.0, 0), 3u);
  EXPECT_EQ(sigma1(times(1), 4, 1.0, 2), 6u);
}

TEST(Sigma, SecondForm) {
  const ProductRate shift([](Nat m, double e) { return m + ceil_clamped(1.0 / e); }, "shift");
  const Sigma2 s = sigma2(shift, 1, 2.0, 5);
  EXPECT_EQ(s.value, 7u);
  EXPECT_FALSE(s.clamped);
  EXPECT_TRUE(sigma2(shift, 1, 4.0, 5).clamped);
  const Sigma2 t = sigma2(shift, 1, 0.5, 5);
  EXPECT_EQ(t.value, 5u + 4u + 1u);
  EXPECT_FALSE(t.clamped);
}

TEST(Rates, ScaleDivergence) {
  const DivergenceRate scaled = scale_divergence(times(2), 0.5);
  EXPECT_EQ(scaled(3), 12u);
  EXPECT_EQ(scaled(0), 0u);
}

TEST(Rates, CauchyMetaRoundTrip) {
  const MetaRate phi = cauchy_as_meta(inv());
  EXPECT_TRUE(phi.f_independent());
  EXPECT_EQ(phi(0.25, [](Nat n) { return n; }), 4u);
  EXPECT_EQ(meta_const_as_cauchy(phi)(0.1), 10u);
  const MetaRate dependent([](double, const NatFn& f) { return f(0); }, "f0");
  EXPECT_THROW(meta_const_as_cauchy(dependent), ContractError);
}

TEST(Rates, ShiftMeta) {
  const MetaRate phi([](double, const NatFn& f) { return f(0); }, "f(0)");
  const NatFn f = [](Nat n) { return n + 3; };
  EXPECT_EQ(shift_meta(phi, 1.0, f, 10), 13u);
  EXPECT_EQ(shift_meta(phi, 1.0, f, 0), 3u);
  const MetaRate small = cauchy_as_meta(inv());
  EXPECT_EQ(shift_meta(small, 1.0, f, 10), 10u);
}

TEST(Rates, ThetaFromCauchyIsMonotone) {
  const ShiftedMetaRate theta = theta_from_cauchy(inv());
  EXPECT_TRUE(theta.monotone_in_N());
  EXPECT_TRUE(theta.f_independent());
  const NatFn id = [](Nat n) { return n; };
  EXPECT_EQ(theta(0.25, id, 0), 4u);
  EXPECT_EQ(theta(0.25, id, 9), 9u);
}

TEST(Rates, MonotoneMajorant) {
  const ShiftedMetaRate bumpy(
      [](double, const NatFn&, Nat N) { return N == 2 ? Nat{50} : N; }, "bumpy", false);
  const ShiftedMetaRate maj = monotone_majorant(bumpy);
  EXPECT_TRUE(maj.monotone_in_N());
  const NatFn id = [](Nat n) { return n; };
  EXPECT_EQ(maj(1.0, id, 1), 1u);
  EXPECT_EQ(maj(1.0, id, 3), 50u);
  EXPECT_EQ(maj(1.0, id, 60), 60u);
}

TEST(Rates, MemoizeCallsOncePerArgument) {
  auto calls = std::make_shared<std::atomic<int>>(0);
  const NatFn f = memoize([calls](Nat n) {
    ++*calls;
    return n * n;
  });
  EXPECT_EQ(f(7), 49u);
  EXPECT_EQ(f(7), 49u);
  EXPECT_EQ(f(3), 9u);
  EXPECT_EQ(calls->load(), 2);
}

TEST(Sequences, DomainsAreEnforced) {
  const ScalarSequence h = ScalarSequence::one_over_n_plus_1();
  EXPECT_DOUBLE_EQ(h(0), 1.0);
  EXPECT_DOUBLE_EQ(h(3), 0.25);
  const ScalarSequence bad = ScalarSequence::constant(1.5);
  EXPECT_THROW(bad(0), InputError);
  const ScalarSequence alt = ScalarSequence::alternating(0.5, 0.25);
  EXPECT_DOUBLE_EQ(alt(0), 0.75);
  EXPECT_DOUBLE_EQ(alt(1), 0.25);
}

TEST(Sequences, JsonRoundTrip) {
  const ScalarSequence h = ScalarSequence::harmonic(1.0, 2.0);
  const ScalarSequence back = ScalarSequence::from_json(h.to_json());
  for (Nat n : {0u, 1u, 10u}) EXPECT_DOUBLE_EQ(h(n), back(n));
}

TEST(Sequences, ValidateDivergence) {
  const ScalarSequence half = ScalarSequence::constant(0.5);
  EXPECT_EQ(validate_divergence(half, times(2), 50, 1000).status, Status::pass);
  EXPECT_EQ(validate_divergence(half, times(1), 50, 1000).status, Status::fail);
  const ScalarSequence harmonic_half =
      ScalarSequence::product(ScalarSequence::one_over_n_plus_1(), half);
  EXPECT_EQ(validate_divergence(harmonic_half, times(4), 10, 1'000'000).status, Status::fail);
  EXPECT_EQ(validate_divergence(half, times(1000), 50, 100).status, Status::inconclusive);
}

TEST(Sequences, ValidateNullRate) {
  const auto s = [](Nat n) { return 1.0 / static_cast<double>(n + 1); };
  const CauchyRate good([](double e) { return ceil_clamped(1.0 / e); }, "inv");
  const CauchyRate bad([](double) { return Nat{0}; }, "zero");
  EXPECT_EQ(validate_null_rate(s, "1/(n+1)", good, {1.0, 0.5, 0.1}, 1000).status, Status::pass);
  EXPECT_EQ(validate_null_rate(s, "1/(n+1)", bad, {0.5}, 1000).status, Status::fail);
}

TEST(Sequences, ValidateProductRate) {
  const ScalarSequence half = ScalarSequence::constant(0.5);
  const ProductRate good(
      [](Nat m, double e) { return m + ceil_clamped(std::log2(1.0 / e)); }, "log2");
  const ProductRate bad([](Nat m, double) { return m; }, "m");
  EXPECT_EQ(validate_product_rate(half, good, {0, 3}, {0.5, 0.01}, 1000).status, Status::pass);
  EXPECT_EQ(validate_product_rate(half, bad, {0}, {0.01}, 1000).status, Status::fail);
}

}  // namespace
}  // namespace ratelab
