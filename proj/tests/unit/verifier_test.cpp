#include <gtest/gtest.h>

#include <atomic>
#include <cmath>

#include "ratelab/counterfunction.hpp"
#include "ratelab/parallel.hpp"
#include "ratelab/verifier.hpp"

namespace ratelab {
namespace {

const Space kLine = Space::euclidean_ball(1, 1.0, 2);
const Space kPlane = Space::euclidean_ball(2, 1.0, 2);

Trajectory geometric(const Space& space, Point start) {
  return Trajectory::explicit_scheme(space, "halving", std::move(start),
                                     [](Nat, const Point& x) { return 0.5 * x; }, Json::object());
}

Trajectory flip(const Space& space, Point start) {
  return Trajectory::explicit_scheme(space, "flip", std::move(start),
                                     [](Nat, const Point& x) { return -1.0 * x; }, Json::object());
}

NatFn f(const std::string& text) { return Counterfunction::parse(text).fn(); }

TEST(WindowSearch, FindsTheFirstStableWindow) {
  for (const Space* s : {&kLine, &kPlane}) {
    Trajectory t = geometric(*s, s->dimension() == 1 ? Point{1.0} : Point{1.0, 0.0});
    const WindowSearch w = find_metastable_window(t, 0.1, f("affine 2 1"), 100);
    ASSERT_EQ(w.status, Status::pass);
    // d(x_n, x_m) ≤ 2^-n, first ≤ 0.1 at n = 4.
    EXPECT_EQ(w.witness->n, 4u);
    EXPECT_EQ(w.witness->window_end, 9u);
    EXPECT_LE(w.witness->max_pairwise_distance, 0.1);
  }
}

TEST(WindowSearch, FailsWhenTheBoundIsTooSmall) {
  Trajectory t = geometric(kPlane, Point{1.0, 0.0});
  const WindowSearch w = find_metastable_window(t, 0.1, f("affine 2 1"), 3);
  EXPECT_EQ(w.status, Status::fail);
  EXPECT_FALSE(w.witness.has_value());
  EXPECT_EQ(w.scanned, 4u);
}

TEST(WindowSearch, OscillationIsNeverStable) {
  Trajectory t = flip(kPlane, Point{0.5, 0.0});
  const WindowSearch w = find_metastable_window(t, 0.1, f("affine 1 1"), 50);
  EXPECT_EQ(w.status, Status::fail);
  EXPECT_NEAR(w.best_failed_distance, 1.0, 1e-15);
}

TEST(WindowSearch, EmptyWindowPasses) {
  Trajectory t = flip(kPlane, Point{0.5, 0.0});
  const WindowSearch w = find_metastable_window(t, 0.1, f("const 0"), 50, 3);
  EXPECT_EQ(w.status, Status::pass);
  EXPECT_EQ(w.witness->n, 3u);
}

TEST(WindowSearch, HorizonGivesInconclusive) {
  Trajectory t = flip(kPlane, Point{0.5, 0.0});
  t.set_horizon(100);
  const WindowSearch w = find_metastable_window(t, 0.1, f("affine 10 1"), 50);
  EXPECT_EQ(w.status, Status::inconclusive);
}

TEST(WindowSearch, StartAboveBoundFails) {
  Trajectory t = geometric(kPlane, Point{1.0, 0.0});
  EXPECT_EQ(find_metastable_window(t, 0.1, f("const 0"), 2, 5).status, Status::fail);
}

TEST(WindowSearch, LargeLineWindowsUseExtremes) {
  Trajectory t = Trajectory::explicit_scheme(
      kLine, "harmonic", Point{1.0},
      [](Nat n, const Point&) { return Point{1.0 / static_cast<double>(n + 2)}; }, Json::object());
  const WindowSearch w = find_metastable_window(t, 1e-3, f("affine 1 200000"), 5000);
  ASSERT_EQ(w.status, Status::pass);
  EXPECT_GE(w.witness->n, 990u);
  EXPECT_LE(w.witness->n, 1000u);
}

TEST(CauchyRate, SoundAndUnsoundRates) {
  Trajectory t = geometric(kPlane, Point{1.0, 0.0});
  const CauchyRate good([](double e) { return ceil_log(e, 0.5); }, "log2");
  const CauchyRate bad([](double) { return Nat{0}; }, "zero");
  EXPECT_EQ(check_cauchy_rate(t, good, {0.5, 0.1, 0.01}, 200, 100).status, Status::pass);
  Trajectory u = geometric(kPlane, Point{1.0, 0.0});
  EXPECT_EQ(check_cauchy_rate(u, bad, {0.1}, 200, 100).status, Status::fail);
}

XuInstance constant_instance(double lambda, Nat p) {
  XuInstance in;
  in.lambda.assign(p, lambda);
  in.b.assign(p, 0.05);
  in.a0 = 1.0;
  in.N = 0;
  in.p = p;
  in.B = 1;
  in.eps = 0.2;
  return in;
}

TEST(XuOracle, ExtremalSequence) {
  const XuInstance in = constant_instance(0.5, 3);
  const std::vector<double> a = xu_extremal_sequence(in);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_DOUBLE_EQ(a[1], 0.525);
  EXPECT_DOUBLE_EQ(a[2], 0.2875);
}

TEST(XuOracle, ConfirmsAndRefutesClaims) {
  const XuInstance in = constant_instance(0.5, 200);
  const DivergenceRate A([](Nat k) { return 2 * k; }, "2k");
  const Nat claimed = sigma1(A, in.B, in.eps, in.N);
  EXPECT_EQ(brute_force_xu(in, A, claimed).status, Status::pass);
  EXPECT_EQ(brute_force_xu(in, A, 0).status, Status::fail);
  const DivergenceRate wrong([](Nat k) { return k / 4; }, "k/4");
  EXPECT_EQ(brute_force_xu(in, wrong, 1).status, Status::inconclusive);
  XuInstance large_b = in;
  large_b.b[5] = 0.5;
  EXPECT_EQ(brute_force_xu(large_b, A, claimed).status, Status::inconclusive);
}

TEST(XuOracle, ProductForm) {
  const XuInstance in = constant_instance(0.5, 200);
  const ProductRate good([](Nat m, double e) { return m + ceil_log(e, 0.5); }, "log");
  const Nat claimed = sigma2(good, in.B, in.eps, in.N).value;
  EXPECT_EQ(brute_force_xu_product(in, good, claimed).status, Status::pass);
  EXPECT_EQ(brute_force_xu_product(in, good, 0).status, Status::fail);
  const ProductRate bad([](Nat m, double) { return m; }, "m");
  EXPECT_EQ(brute_force_xu_product(in, bad, 2).status, Status::inconclusive);
}

TEST(BoundSoundness, PassesAndFails) {
  const TrajectoryFactory make = [] { return geometric(kPlane, Point{1.0, 0.0}); };
  const std::vector<Counterfunction> fs{Counterfunction::parse("affine 2 1")};
  const BoundFn sound = [](double eps, const Counterfunction&) {
    return BoundResult{ceil_log(eps, 0.5), Json::object()};
  };
  const BoundFn corrupt = [](double, const Counterfunction&) {
    return BoundResult{0, Json::object()};
  };
  EXPECT_EQ(check_bound_soundness("sound", make, sound, {0.5, 0.01}, fs).status, Status::pass);
  EXPECT_EQ(check_bound_soundness("corrupt", make, corrupt, {0.5, 0.01}, fs).status,
            Status::fail);
}

TEST(Parallel, EveryIndexRunsOnce) {
  std::vector<std::atomic<int>> hits(500);
  parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  EXPECT_GE(thread_count(), 1u);
  EXPECT_THROW(parallel_for(10,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

}  // namespace
}  // namespace ratelab
