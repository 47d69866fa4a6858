#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "ratelab/counterfunction.hpp"
#include "ratelab/descriptors.hpp"
#include "ratelab/geometry.hpp"
#include "ratelab/mappings.hpp"
#include "ratelab/rates.hpp"
#include "ratelab/schemes.hpp"
#include "ratelab/sequences.hpp"
#include "ratelab/transformers.hpp"
#include "ratelab/uniqueness.hpp"
#include "ratelab/verifier.hpp"

using namespace ratelab;

namespace {

struct Outcome {
  bool ok = true;
  std::vector<std::string> failures;
  std::vector<std::string> info;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      failures.push_back(what);
    }
  }
};

using Criterion = std::function<void(Outcome&)>;

const std::vector<double> kEpsGrid{1.0, 0.5, 0.25, 0.125};

std::vector<Counterfunction> f_grid() {
  return {Counterfunction::parse("const 10"), Counterfunction::parse("affine 1 5"),
          Counterfunction::parse("affine 2 0")};
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

std::string run_rates(const std::vector<std::string>& args) {
  std::vector<std::string> full{"ratelab", "rates"};
  full.insert(full.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : full) argv.push_back(a.data());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run_main(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) return "exit " + std::to_string(code) + ": " + err.str();
  return first_line(out.str());
}

std::string status_of(const VerificationReport& r) { return to_string(r.status); }

void record_report(Outcome& o, const VerificationReport& r, const std::string& label) {
  o.expect(r.status == Status::pass, label + " -> " + status_of(r));
}

// 1 -------------------------------------------------------------------------

void formula_fidelity(Outcome& o) {
  struct Case {
    std::vector<std::string> args;
    std::string expected;
  };
  const std::vector<Case> integral{
      {{"phi-halpern", "--b", "1", "--eps", "1"}, "36"},
      {{"phi-halpern", "--b", "1", "--eps", "2"}, "10"},
      {{"phi-halpern", "--b", "2", "--eps", "1"}, "136"},
      {{"sigma1", "--A", "affine 2 0", "--B", "1", "--eps", "2", "--N", "0"}, "1"},
      {{"sigma1", "--A", "affine 2 0", "--B", "1", "--eps", "1", "--N", "0"}, "3"},
      {{"sigma1", "--A", "affine 1 0", "--B", "4", "--eps", "1", "--N", "2"}, "6"},
      {{"sigma2", "--A", "shift-inv 1", "--B", "1", "--eps", "2", "--N", "5"}, "7"},
      {{"psi-vb-single", "--b", "1", "--delta", "const 1/2", "--theta", "from-cauchy inv 1",
        "--eps", "1"},
       "32"},
      {{"psi-vb", "--b", "1", "--delta", "const 1/2", "--theta", "from-cauchy inv 1", "--eps",
        "1", "--f", "affine 2 0"},
       "32"},
      {{"cauchy-vb", "--b", "1", "--delta", "1/2", "--rho", "inv 1", "--eps", "1"}, "32"},
      {{"psi-vh-single", "--b", "1", "--delta", "const 1/2", "--theta", "from-cauchy inv 1",
        "--A", "affine 2 0", "--eps", "3"},
       "165"},
      {{"psi-vh", "--b", "1", "--delta", "const 1/2", "--theta", "from-cauchy inv 1", "--A",
        "affine 2 0", "--eps", "3"},
       "165"},
      {{"psi-vh-single", "--b", "1", "--delta", "const 1/2", "--theta", "from-cauchy zero",
        "--A", "affine 2 0", "--eps", "3"},
       "17"},
      {{"cauchy-vh", "--b", "1", "--delta", "1/2", "--rho", "inv 1", "--A", "affine 2 0",
        "--eps", "3"},
       "165"},
      {{"cauchy-vh", "--b", "1", "--delta", "1/2", "--rho", "zero", "--A", "affine 2 0", "--eps",
        "3"},
       "17"},
      {{"xi-vkm", "--b", "1", "--delta", "1/2", "--mu1", "affine 1 0", "--mu2", "inv 1", "--eps",
        "1"},
       "19"},
      {{"cauchy-vkm", "--b", "1", "--delta", "1/2", "--rho", "inv 1", "--mu1", "affine 1 0",
        "--mu2", "inv 1", "--eps", "3"},
       "33"},
      {{"meta-browder-relaxed", "--psi", "const 5", "--rho", "inv 1", "--delta", "1/2", "--eps",
        "3"},
       "5"},
      {{"relaxed-gamma", "--b", "1", "--delta", "1/2", "--rho", "inv 1", "--A", "affine 2 0",
        "--eps", "1"},
       "21"},
      {{"meta-halpern-relaxed", "--psi", "const 0", "--b", "1", "--delta", "1/2", "--rho",
        "inv 1", "--A", "affine 2 0", "--eps", "3"},
       "21"},
      {{"meta-vkm-relaxed", "--psi", "const 0", "--b", "1", "--delta", "1/2", "--rho", "inv 1",
        "--A", "affine 2 0", "--eps", "3"},
       "21"},
      {{"cauchy-vb", "--b", "1", "--delta", "from-contraction 0", "--rho", "inv 1", "--eps",
        "1"},
       "8"},
  };
  for (const auto& c : integral) {
    const std::string got = run_rates(c.args);
    o.expect(got == c.expected, c.args.front() + ": expected " + c.expected + ", got " + got);
  }

  struct RealCase {
    std::vector<std::string> args;
    double expected;
  };
  const std::vector<RealCase> reals{
      {{"omega-b", "--eta", "hilbert-eta", "--omega", "quad 1/2", "--b", "1", "--eps", "1",
        "--improved"},
       std::ldexp(1.0, -23)},
      {{"omega-b", "--eta", "hilbert-eta", "--omega", "quad 1/2", "--b", "1", "--eps", "1",
        "--general"},
       std::ldexp(1.0, -40)},
      {{"beta-lemma3", "--eta", "hilbert-eta", "--b", "1", "--eps", "1"}, 1.0 / 16},
      {{"midpoint-threshold", "--eta", "hilbert-eta", "--b", "1", "--eps", "1"}, 1.0 / 128},
      {{"lemma1-threshold", "--omega", "quad 1/2", "--b", "1", "--eps", "1"}, 1.0 / 8},
      {{"path-threshold", "--w", "1/8388608", "--b", "1"}, std::ldexp(1.0, -24)},
  };
  for (const auto& c : reals) {
    std::vector<std::string> args = c.args;
    args.insert(args.begin(), "--json");
    std::vector<std::string> full{"ratelab", "rates"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : full) argv.push_back(a.data());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run_main(static_cast<int>(argv.size()), argv.data(), out, err);
    double got = std::nan("");
    if (code == 0) got = Json::parse(out.str()).at("value").get<double>();
    const bool close = std::abs(got - c.expected) <= 1e-12 * std::abs(c.expected);
    o.expect(close, c.args.front() + ": expected " + format_double(c.expected) + ", got " +
                        format_double(got));
  }
}

// 2 -------------------------------------------------------------------------

void axiom_suite(Outcome& o) {
  for (std::size_t dim : {1u, 2u, 5u}) {
    const Space space = Space::euclidean_ball(dim, 1.0, 2);
    BallSampler sampler(space, 1000 + dim);
    const VerificationReport r = check_w_axioms(space, sampler, 10000, 1e-9, true);
    record_report(o, r, "euclidean ball dim " + std::to_string(dim));
  }
  const Space corrupted = Space::euclidean_ball(2, 1.0, 2).with_convexity(
      Convexity::corrupted_lambda_squared);
  BallSampler sampler(corrupted, 7);
  const VerificationReport r = check_w_axioms(corrupted, sampler, 10000, 1e-9, true);
  bool w2_failed = false;
  for (const auto& m : r.measurements) {
    if (m.name == "W2" && !m.ok) w2_failed = true;
  }
  o.expect(r.status == Status::fail, "corrupted W must fail, got " + status_of(r));
  o.expect(w2_failed, "corrupted W must violate W2");
}

// 3 -------------------------------------------------------------------------

void xu_oracle(Outcome& o) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int confirmed = 0;
  int attempts = 0;
  while (confirmed < 100 && attempts < 1000) {
    ++attempts;
    XuInstance in;
    const double lo = 0.05 + 0.5 * unit(rng);
    const bool alternating = unit(rng) < 0.5;
    const double amp = alternating ? lo * unit(rng) * 0.9 : 0.0;
    const double base = lo;
    const double floor_lambda = base - amp;
    in.B = 1 + static_cast<Nat>(4 * unit(rng));
    in.eps = 0.05 + 1.5 * unit(rng);
    in.N = static_cast<Nat>(20 * unit(rng));
    in.a0 = in.B * unit(rng);

    const DivergenceRate A(
        [floor_lambda](Nat k) { return ceil_clamped(static_cast<double>(k) / floor_lambda); },
        "ceil(k/lambda_min)");
    const ProductRate Aprime(
        [floor_lambda](Nat m, double e) {
          const Nat len = ceil_clamped(std::log(e) / std::log1p(-floor_lambda));
          return len == 0 ? m : m + len - 1;
        },
        "m+len(eps)-1");
    const Nat c1 = sigma1(A, in.B, in.eps, in.N);
    const Nat c2 = sigma2(Aprime, in.B, in.eps, in.N).value;
    const Nat need = std::max({c1, c2, A(in.N + 8), in.N + 1});
    if (need > 9000) continue;
    in.p = std::min<Nat>(10000, need + 1 + static_cast<Nat>(1000 * unit(rng)));

    in.lambda.resize(in.p);
    in.b.resize(in.p);
    for (Nat i = 0; i < in.p; ++i) {
      in.lambda[i] = base + (i % 2 == 0 ? amp : -amp);
      const double cap = i >= in.N ? in.eps / 2 : static_cast<double>(in.B);
      in.b[i] = unit(rng) < 0.2 ? cap : cap * (2.0 * unit(rng) - 1.0);
    }

    const VerificationReport r1 = brute_force_xu(in, A, c1);
    const VerificationReport r2 = brute_force_xu_product(in, Aprime, c2);
    o.expect(r1.status == Status::pass,
             "sigma1 instance " + std::to_string(confirmed) + " -> " + status_of(r1));
    o.expect(r2.status == Status::pass,
             "sigma2 instance " + std::to_string(confirmed) + " -> " + status_of(r2));
    ++confirmed;
  }
  o.expect(confirmed == 100, "generated only " + std::to_string(confirmed) + " instances");
  o.info.push_back(std::to_string(confirmed) + " instances");
}

// Contraction testbed shared by criteria 4 and 5.

Space contraction_space() { return Space::euclidean_ball(2, 0.5, 1); }

struct Anchor {
  std::string label;
  MapDescriptor phi;
  double delta;
};

std::vector<Anchor> anchors() {
  return {{"phi=I/2", MapDescriptor::scaled(0.5), 0.5},
          {"phi=const", MapDescriptor::constant(Point{0.5, 0.0}), kMaxConstantDelta}};
}

std::string fmt_delta(double d) { return format_double(d); }

void check_soundness(Outcome& o, const std::string& id, const TrajectoryFactory& make,
                     const BoundFn& bound) {
  const VerificationReport r = check_bound_soundness(id, make, bound, kEpsGrid, f_grid());
  Nat worst = 0;
  for (const auto& child : r.children) {
    for (const auto& m : child.at("measurements")) {
      if (m.at("name") == "witness n") worst = std::max<Nat>(worst, std::stoull(m.at("value").get<std::string>()));
    }
  }
  record_report(o, r, id);
  o.info.push_back(id + " max witness " + std::to_string(worst));
}

// 4 -------------------------------------------------------------------------

void browder_side(Outcome& o) {
  const Space space = contraction_space();
  const MapFamily T = MapFamily::constant(MapDescriptor::scaled(0.5));
  const ScalarSequence alpha = ScalarSequence::one_over_n_plus_1();
  const CauchyRate rho = parse_cauchy("inv 1");

  for (const Anchor& a : anchors()) {
    const TrajectoryFactory make = [=] { return viscosity_browder_traj(space, T, a.phi, alpha); };

    TransformerInputs in;
    in.b = 1;
    in.delta = RakotchModulus::constant(a.delta);
    in.theta = theta_from_cauchy(rho);
    check_soundness(o, "viscosity-browder " + a.label, make, [in](double eps, const Counterfunction& f) {
      return psi_viscosity_browder_single(in, eps, f.fn());
    });
    check_soundness(o, "viscosity-browder cauchy " + a.label, make,
                    [rho, d = a.delta](double eps, const Counterfunction&) {
                      return cauchy_viscosity_browder(1, d, rho, eps);
                    });

    // Relaxed: errors (n+1)^-2, so errors/alpha = 1/(n+1) with rate ceil(1/eps)-1.
    const ScalarSequence errors = ScalarSequence::harmonic(1.0, 2.0);
    const TrajectoryFactory make_relaxed = [=] {
      return viscosity_browder_traj(space, T, a.phi, alpha).inject_errors(errors);
    };
    const MetaRate psi = vb_meta_rate(in);
    const CauchyRate rho_err = parse_cauchy("ceil-pow 1 1 1");
    check_soundness(o, "relaxed browder " + a.label, make_relaxed,
                    [=, d = a.delta](double eps, const Counterfunction& f) {
                      return meta_browder_relaxed(psi, rho_err, d, eps, f.fn());
                    });
  }

  // vKM. The literal parameters (alpha = 1/(n+1), mu1 = 4k) break the premise
  // on mu2: the ratio |a_n - a_{n-1}|/(a_n^2 b_n) tends to 2. The premise
  // validation is reported, and the soundness run uses alpha = (n+1)^{-1/2}.
  {
    const ScalarSequence beta = ScalarSequence::constant(0.5);
    const DivergenceRate literal_mu1 = parse_divergence("affine 4 0");
    const VerificationReport literal_sum = validate_divergence(
        ScalarSequence::product(alpha, beta), literal_mu1, 20, 2'000'000);
    auto ratio = [](const ScalarSequence& a, const ScalarSequence& b) {
      return [a, b](Nat n) {
        if (n == 0) return 0.0;
        return std::abs(a(n) - a(n - 1)) / (a(n) * a(n) * b(n));
      };
    };
    const VerificationReport literal_ratio = validate_null_rate(
        ratio(alpha, beta), "literal ratio", parse_cauchy("invsq 4"), kEpsGrid, 100000, 1);
    o.info.push_back("vKM literal mu1 premise: " + status_of(literal_sum) +
                     ", literal mu2 premise: " + status_of(literal_ratio));
    o.expect(literal_ratio.status == Status::fail,
             "literal vKM ratio unexpectedly admits a null rate");

    const ScalarSequence root = ScalarSequence::harmonic(1.0, 0.5);
    const DivergenceRate mu1 = parse_divergence("shifted-pow 2 1.5");
    const CauchyRate mu2 = parse_cauchy("invsq 4");
    const VerificationReport mu1_ok =
        validate_divergence(ScalarSequence::product(root, beta), mu1, 40, 5'000'000);
    const VerificationReport mu2_ok =
        validate_null_rate(ratio(root, beta), "ratio", mu2, kEpsGrid, 200000, 1);
    record_report(o, mu1_ok, "vKM mu1 premise");
    record_report(o, mu2_ok, "vKM mu2 premise");

    const CauchyRate rho_root = parse_cauchy("invsq 1");
    const MapDescriptor Tmap = MapDescriptor::scaled(0.5);
    for (const Anchor& a : anchors()) {
      TransformerInputs in;
      in.b = 1;
      in.delta = RakotchModulus::constant(a.delta);
      in.theta = theta_from_cauchy(rho_root);
      const MetaRate psi = vb_meta_rate(in);
      const TrajectoryFactory make = [=] {
        return vkm_traj(space, Tmap, a.phi, Point{0.5, 0.0}, root, beta);
      };
      check_soundness(o, "vkm " + a.label, make,
                      [=, d = a.delta](double eps, const Counterfunction& f) {
                        return omega_vkm(1, d, psi, mu1, mu2, eps, f.fn());
                      });
    }
  }
}

// 5 -------------------------------------------------------------------------

void halpern_side(Outcome& o) {
  const Space space = contraction_space();
  const MapFamily T = MapFamily::constant(MapDescriptor::scaled(0.5));
  const ScalarSequence alpha = ScalarSequence::constant(0.5, ScalarSequence::Domain::unit_open_closed);
  const DivergenceRate A = parse_divergence("affine 2 0");
  const CauchyRate rho = parse_cauchy("inv 1");
  const VerificationReport a_ok = validate_divergence(alpha, A, 50, 1000);
  record_report(o, a_ok, "A(k)=2k premise");

  const std::vector<double> eps_grid{3.0, 1.0, 0.5};
  for (const Anchor& a : anchors()) {
    TransformerInputs in;
    in.b = 1;
    in.delta = RakotchModulus::constant(a.delta);
    in.theta = theta_from_cauchy(rho);
    in.A = A;
    const TrajectoryFactory make = [=] {
      return viscosity_halpern_traj(space, T, a.phi, Point{0.5, 0.0}, alpha);
    };
    const BoundFn vh = [in](double eps, const Counterfunction& f) {
      return psi_viscosity_halpern_single(in, eps, f.fn());
    };
    if (a.delta == 0.5) {
      const Nat at3 = vh(3.0, Counterfunction::constant(0)).value;
      o.expect(at3 == 165, "viscosity-halpern bound at eps=3 is " + std::to_string(at3));
    }
    const VerificationReport r =
        check_bound_soundness("viscosity-halpern " + a.label, make, vh, eps_grid, f_grid());
    record_report(o, r, "viscosity-halpern " + a.label);

    const ScalarSequence errors = ScalarSequence::harmonic(1.0, 2.0);
    const TrajectoryFactory make_relaxed = [=] {
      return viscosity_halpern_traj(space, T, a.phi, Point{0.5, 0.0}, alpha)
          .inject_errors(errors);
    };
    const MetaRate psi = vh_meta_rate(in);
    const CauchyRate rho_err = parse_cauchy("ceil-pow 0.5 2 1");
    check_soundness(o, "relaxed halpern " + a.label, make_relaxed,
                    [=, d = a.delta](double eps, const Counterfunction& f) {
                      return meta_halpern_relaxed(psi, A, rho_err, d, 1, eps, f.fn());
                    });
  }
}

// 6 -------------------------------------------------------------------------

void lemma_battery(Outcome& o) {
  const UniformConvexityModulus eta = UniformConvexityModulus::hilbert();
  std::uint64_t seed = 100;
  for (double c : {0.0, 0.5}) {
    for (std::size_t dim : {1u, 2u, 5u}) {
      const AccretiveTestbed tb = make_testbed(c, 1, dim);
      const std::string tag = tb.tag;
      record_report(o, check_testbed(tb, seed++, 1000, kEpsGrid), tag + " testbed");
      for (double eps : {1.0, 0.5}) {
        const std::string at = tag + " eps=" + format_double(eps);
        record_report(o, check_lemma1(tb, eps, seed++, 1000), at + " norm gap");
        for (bool improved : {false, true}) {
          const std::string form = improved ? " improved" : " general";
          record_report(o, check_lemma2(tb, eta, eps, improved, seed++, 1000),
                        at + " midpoint residual" + form);
          record_report(o, check_lemma3(tb, eta, eps, improved, seed++, 1000),
                        at + " midpoint depth" + form);
        }
        for (UniquenessForm form : {UniquenessForm::general, UniquenessForm::improved}) {
          record_report(o, check_uniqueness(tb, eta, eps, form, seed++, 1000),
                        at + " uniqueness");
        }
      }
    }
  }
}

// 7 -------------------------------------------------------------------------

void km_residual(Outcome& o) {
  const std::vector<ScalarSequence> betas{ScalarSequence::constant(0.5),
                                          ScalarSequence::alternating(0.5, 0.25)};
  std::vector<AccretiveTestbed> beds{rotation_testbed(M_PI / 2, 1), make_testbed(0.0, 1, 2),
                                     make_testbed(0.5, 1, 2)};
  for (const auto& tb : beds) {
    for (const auto& beta : betas) {
      const Point start{1.0, 0.0};
      const VerificationReport r = check_km_residual(tb.space, tb.T, start, beta, 1.0, 10000);
      record_report(o, r, tb.tag + " " + beta.name());
    }
  }
  const double pinned = km_residual_bound(1.0, ScalarSequence::constant(0.5), 99);
  o.expect(std::abs(pinned - 0.22568) <= 1e-5, "n=99 bound is " + format_double(pinned));
  o.info.push_back("n=99 bound " + format_double(pinned));
}

// 8 -------------------------------------------------------------------------

void infeasibility(Outcome& o) {
  const double omega = std::ldexp(1.0, -23);
  const RateResult km = km_cauchy_rate(parse_divergence("affine 4 0"), 1.0, omega);
  o.expect(!km.feasible, "km_cauchy_rate flagged feasible");
  o.info.push_back("km rate " + std::to_string(km.value));
  const Nat expected_km = 4 * static_cast<Nat>(std::ceil(4.0L / (M_PIl * omega * omega)));
  o.expect(km.value == expected_km, "km rate " + std::to_string(km.value) + " != " +
                                         std::to_string(expected_km));

  const double threshold = path_cauchy_threshold(omega, 1.0);
  o.expect(threshold == std::ldexp(1.0, -24), "path threshold is " + format_double(threshold));

  const AccretiveTestbed tb = make_testbed(0.0, 1, 2);
  const UniformConvexityModulus eta = UniformConvexityModulus::hilbert();
  const VerificationReport path = check_path_threshold(tb, eta, 1.0, Point{0.5, 0.0});
  o.expect(path.status == Status::inconclusive, "path check -> " + status_of(path));
  const VerificationReport halpern =
      check_halpern_rate(tb, eta, 1.0, Point{0.5, 0.0}, Point{-0.5, 0.0}, 10000);
  o.expect(halpern.status == Status::inconclusive, "halpern rate check -> " + status_of(halpern));
}

}  // namespace

int main() {
  struct Entry {
    int id;
    Criterion run;
    double limit_seconds;
  };
  const std::vector<Entry> entries{
      {1, formula_fidelity, 1.0},  {2, axiom_suite, 5.0},    {3, xu_oracle, 10.0},
      {4, browder_side, 120.0},    {5, halpern_side, 120.0}, {6, lemma_battery, 30.0},
      {7, km_residual, 10.0},      {8, infeasibility, 1.0},
  };
  bool all = true;
  for (const auto& e : entries) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      e.run(o);
    } catch (const std::exception& ex) {
      o.expect(false, std::string("exception: ") + ex.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream time;
    time.precision(3);
    time << secs;
    o.expect(secs < e.limit_seconds, "runtime " + time.str() + " s over the limit");
    std::cout << "criterion " << e.id << ": " << (o.ok ? "pass" : "fail") << " (" << time.str()
              << " s)\n";
    for (const auto& line : o.info) std::cout << "    " << line << '\n';
    for (const auto& line : o.failures) std::cout << "    FAILED " << line << '\n';
    all = all && o.ok;
  }
  return all ? 0 : 1;
}
