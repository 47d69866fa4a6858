#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ratelab/errors.hpp"
#include "ratelab/schemes.hpp"

namespace ratelab {
namespace {

const Space kSpace = Space::euclidean_ball(2, 0.5, 1);
const MapFamily kHalf = MapFamily::constant(MapDescriptor::scaled(0.5));
const Point kU{0.5, 0.0};

TEST(Schemes, ContractionSolverMeetsTolerance) {
  const auto F = [](const Point& z) { return 0.5 * z + Point{0.1, 0.0}; };
  const InnerSolve s = solve_contraction(kSpace, F, Point{0.0, 0.0}, 1e-12, 0.5);
  EXPECT_NEAR(s.point[0], 0.2, 1e-11);
  EXPECT_LE(s.residual, 1e-12);
  EXPECT_LE(s.iterations, s.budget);
  EXPECT_GE(s.error_bound, s.residual);
}

TEST(Schemes, ContractionSolverReportsExhaustion) {
  const auto F = [](const Point& z) { return Point{-z[0], z[1]}; };
  EXPECT_THROW(solve_contraction(kSpace, F, Point{0.3, 0.0}, 1e-12, 0.5), SolverError);
}

TEST(Schemes, BrowderMatchesClosedForm) {
  const ScalarSequence alpha = ScalarSequence::one_over_n_plus_1();
  Trajectory traj = browder_traj(kSpace, kHalf, kU, alpha);
  for (Nat n : {0u, 1u, 5u, 40u}) {
    const double expected = 2.0 * 0.5 / static_cast<double>(n + 2);
    EXPECT_NEAR(traj[n][0], expected, 1e-9) << n;
    EXPECT_LE(traj.record(n).residual, default_tau(alpha)(n) + 1e-15);
  }
}

TEST(Schemes, ViscosityBrowderWithConstantAnchorEqualsBrowder) {
  const ScalarSequence alpha = ScalarSequence::one_over_n_plus_1();
  Trajectory a = viscosity_browder_traj(kSpace, kHalf, MapDescriptor::constant(kU), alpha);
  Trajectory b = browder_traj(kSpace, kHalf, kU, alpha);
  for (Nat n = 0; n < 20; ++n) EXPECT_NEAR(kSpace.dist(a[n], b[n]), 0.0, 1e-9);
}

TEST(Schemes, HalpernRecursion) {
  const ScalarSequence alpha = ScalarSequence::constant(0.5, ScalarSequence::Domain::unit_open_closed);
  Trajectory t = halpern_traj(kSpace, kHalf, kU, Point{-0.5, 0.0}, alpha);
  double expected = -0.5;
  for (Nat n = 0; n < 30; ++n) {
    EXPECT_NEAR(t[n][0], expected, 1e-14);
    expected = 0.25 * expected + 0.25;
  }
}

TEST(Schemes, VkmWithZeroAlphaIsKm) {
  const MapDescriptor rot = MapDescriptor::rotation(M_PI / 2);
  const ScalarSequence beta = ScalarSequence::constant(0.5);
  const ScalarSequence zero = ScalarSequence::constant(0.0);
  Trajectory km = km_traj(kSpace, rot, kU, beta);
  Trajectory vkm = vkm_traj(kSpace, rot, MapDescriptor::scaled(0.5), kU, zero, beta);
  for (Nat n = 0; n < 50; ++n) EXPECT_EQ(km[n], vkm[n]);
}

TEST(Schemes, InjectedErrorsStayWithinSchedule) {
  const ScalarSequence alpha = ScalarSequence::constant(0.5, ScalarSequence::Domain::unit_open_closed);
  const ScalarSequence errors = ScalarSequence::harmonic(1.0, 2.0);
  Trajectory t = viscosity_halpern_traj(kSpace, kHalf, MapDescriptor::scaled(0.5), kU, alpha)
                     .inject_errors(errors);
  for (Nat n = 1; n < 100; ++n) {
    EXPECT_LE(t.record(n).residual, errors(n - 1) + 1e-12) << n;
    EXPECT_TRUE(kSpace.contains(t[n]));
  }
}

TEST(Schemes, HorizonIsEnforced) {
  Trajectory t = km_traj(kSpace, MapDescriptor::scaled(0.5), kU, ScalarSequence::constant(0.5));
  t.set_horizon(10);
  EXPECT_NO_THROW(t.extend_to(9));
  EXPECT_THROW(t.extend_to(10), HorizonExceeded);
}

TEST(Schemes, CsvHasOneRowPerIndex) {
  Trajectory t = km_traj(kSpace, MapDescriptor::scaled(0.5), kU, ScalarSequence::constant(0.5));
  std::ostringstream out;
  t.write_csv(out, 5);
  const std::string csv = out.str();
  EXPECT_EQ(csv.rfind("index,x0,x1,residual,injected_error", 0), 0u);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 6);
}

}  // namespace
}  // namespace ratelab
