#include <gtest/gtest.h>

#include "ratelab/counterfunction.hpp"
#include "ratelab/descriptors.hpp"
#include "ratelab/errors.hpp"
#include "ratelab/transformers.hpp"

namespace ratelab {
namespace {

const CauchyRate kInv = parse_cauchy("inv 1");
const DivergenceRate kTwoK = parse_divergence("affine 2 0");
const std::vector<double> kEps{8.0, 3.0, 1.0, 0.5, 0.25, 0.125};
const std::vector<std::string> kFs{"const 0", "const 10", "affine 1 5", "affine 2 0", "pow 2 1"};

TransformerInputs browder_inputs(double delta = 0.5) {
  TransformerInputs in;
  in.b = 1;
  in.delta = RakotchModulus::constant(delta);
  in.theta = theta_from_cauchy(kInv);
  return in;
}

TransformerInputs halpern_inputs() {
  TransformerInputs in = browder_inputs();
  in.A = kTwoK;
  return in;
}

NatFn f(const std::string& text) { return Counterfunction::parse(text).fn(); }

TEST(ViscosityBrowder, Examples) {
  const TransformerInputs in = browder_inputs();
  EXPECT_EQ(psi_viscosity_browder_single(in, 1.0, f("const 0")).value, 32u);
  EXPECT_EQ(psi_viscosity_browder(in, 1.0, f("affine 2 0"), 0).value, 32u);
  EXPECT_EQ(cauchy_viscosity_browder(1, 0.5, kInv, 1.0).value, 32u);
  EXPECT_EQ(cauchy_viscosity_browder(1, kMaxConstantDelta, kInv, 1.0).value, 8u);
  EXPECT_EQ(cauchy_viscosity_browder(1, 0.5, parse_cauchy("zero"), 1.0).value, 0u);
  TransformerInputs zero = in;
  zero.theta = theta_from_cauchy(parse_cauchy("zero"));
  EXPECT_EQ(psi_viscosity_browder_single(zero, 1.0, f("const 0")).value, 0u);
}

TEST(ViscosityBrowder, TraceRecordsTheChain) {
  const BoundResult r = psi_viscosity_browder_single(browder_inputs(), 1.0, f("const 0"));
  EXPECT_DOUBLE_EQ(r.trace.at("eps0").get<double>(), 1.0 / 32);
  EXPECT_EQ(r.trace.at("M").get<Nat>(), 4u);
}

TEST(ViscosityBrowder, CauchyFormCollapsesTheMetastableForm) {
  const TransformerInputs in = browder_inputs();
  for (double eps : kEps) {
    const Nat cauchy = cauchy_viscosity_browder(1, 0.5, kInv, eps).value;
    for (const auto& fs : kFs) {
      EXPECT_EQ(psi_viscosity_browder_single(in, eps, f(fs)).value, cauchy) << eps << " " << fs;
    }
  }
}

TEST(ViscosityBrowder, MissingInputsAreContractErrors) {
  TransformerInputs in;
  EXPECT_THROW(psi_viscosity_browder_single(in, 1.0, f("const 0")), ContractError);
  in = browder_inputs();
  in.theta = ShiftedMetaRate([](double, const NatFn&, Nat N) { return N; }, "raw", false);
  EXPECT_THROW(psi_viscosity_browder(in, 1.0, f("const 0"), 0), ContractError);
}

TEST(ViscosityHalpern, Examples) {
  const TransformerInputs in = halpern_inputs();
  EXPECT_EQ(psi_viscosity_halpern_single(in, 3.0, f("const 0")).value, 165u);
  EXPECT_EQ(psi_viscosity_halpern(in, 3.0, f("const 0"), 0).value, 165u);
  EXPECT_EQ(cauchy_viscosity_halpern(1, 0.5, kTwoK, kInv, 3.0).value, 165u);
  EXPECT_EQ(cauchy_viscosity_halpern(1, 0.5, kTwoK, parse_cauchy("zero"), 3.0).value, 17u);
  TransformerInputs zero = in;
  zero.theta = theta_from_cauchy(parse_cauchy("zero"));
  EXPECT_EQ(psi_viscosity_halpern_single(zero, 3.0, f("const 0")).value, 17u);
}

TEST(ViscosityHalpern, CauchyFormCollapsesTheMetastableForm) {
  const TransformerInputs in = halpern_inputs();
  for (double eps : kEps) {
    const Nat cauchy = cauchy_viscosity_halpern(1, 0.5, kTwoK, kInv, eps).value;
    for (const auto& fs : kFs) {
      EXPECT_EQ(psi_viscosity_halpern_single(in, eps, f(fs)).value, cauchy) << eps << " " << fs;
    }
  }
}

TEST(Transformers, NonincreasingInEps) {
  const TransformerInputs vb = browder_inputs();
  const TransformerInputs vh = halpern_inputs();
  const MetaRate psi = parse_meta("const 5");
  const DivergenceRate mu1 = parse_divergence("affine 1 0");
  for (const auto& fs : kFs) {
    Nat prev_vb = kNatMax, prev_vh = kNatMax, prev_xi = kNatMax, prev_om = kNatMax;
    for (double eps = 0.05; eps < 10.0; eps *= 1.3) {
      const Nat a = psi_viscosity_browder(vb, eps, f(fs), 0).value;
      const Nat b = psi_viscosity_halpern(vh, eps, f(fs), 0).value;
      const Nat c = xi_vkm(1, 0.5, mu1, kInv, eps).value;
      const Nat d = omega_vkm(1, 0.5, psi, mu1, kInv, eps, f(fs)).value;
      EXPECT_LE(a, prev_vb);
      EXPECT_LE(b, prev_vh);
      EXPECT_LE(c, prev_xi);
      EXPECT_LE(d, prev_om);
      prev_vb = a;
      prev_vh = b;
      prev_xi = c;
      prev_om = d;
    }
  }
}

TEST(Vkm, Examples) {
  const DivergenceRate mu1 = parse_divergence("affine 1 0");
  EXPECT_EQ(xi_vkm(1, 0.5, mu1, kInv, 1.0).value, 19u);
  EXPECT_EQ(cauchy_vkm(1, 0.5, kInv, mu1, kInv, 3.0).value, 33u);
  const Nat xi_third = xi_vkm(1, 0.5, mu1, kInv, 1.0 / 3).value;
  EXPECT_EQ(omega_vkm(1, 0.5, parse_meta("const 5"), mu1, kInv, 1.0, f("const 0")).value,
            std::max<Nat>(xi_third, 5) + 1);
  EXPECT_EQ(xi_vkm(1, 0.5, mu1, parse_cauchy("zero"), 1.0).value,
            sigma1(scale_divergence(mu1, 0.5), 1, 1.0, 0));
  EXPECT_GE(cauchy_vkm(1, 0.5, parse_cauchy("zero"), mu1, parse_cauchy("zero"), 100.0).value,
            1u);
}

TEST(Relaxed, Examples) {
  EXPECT_EQ(meta_browder_relaxed(parse_meta("const 5"), kInv, 0.5, 3.0, f("const 0")).value, 5u);
  EXPECT_EQ(meta_browder_relaxed(parse_meta("const 0"), parse_cauchy("zero"), 0.5, 3.0,
                                 f("const 0"))
                .value,
            0u);
  EXPECT_EQ(relaxed_gamma(kTwoK, kInv, 0.5, 1, 1.0).value, 21u);
  EXPECT_EQ(meta_halpern_relaxed(parse_meta("const 0"), kTwoK, kInv, 0.5, 1, 3.0, f("const 0"))
                .value,
            21u);
  EXPECT_EQ(meta_vkm_relaxed(parse_meta("const 0"), kTwoK, kInv, 0.5, 1, 3.0, f("const 0")).value,
            21u);
  EXPECT_EQ(
      meta_halpern_relaxed(parse_meta("const 500"), kTwoK, kInv, 0.5, 1, 3.0, f("const 0")).value,
      500u);
}

TEST(Relaxed, CounterfunctionIsShifted) {
  const MetaRate reads_f([](double, const NatFn& g) { return g(0); }, "f(0)");
  // rho_delta(1) = rho(1/2) = 2, so the shifted f at 0 is f(2) = 4.
  EXPECT_EQ(meta_browder_relaxed(reads_f, kInv, 0.5, 3.0, f("affine 2 0")).value, 4u);
}

TEST(MetaRates, WrapSingleMapBounds) {
  const MetaRate vb = vb_meta_rate(browder_inputs());
  EXPECT_EQ(vb(1.0, f("const 0")), 32u);
  const MetaRate vh = vh_meta_rate(halpern_inputs());
  EXPECT_EQ(vh(3.0, f("const 0")), 165u);
}

}  // namespace
}  // namespace ratelab
