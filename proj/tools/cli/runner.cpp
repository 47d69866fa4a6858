#include "runner.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "ratelab/descriptors.hpp"
#include "ratelab/errors.hpp"
#include "ratelab/verifier.hpp"

namespace ratelab::cli {

namespace fs = std::filesystem;

namespace {

constexpr Nat kDefaultCsvPoints = 200;

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw InputError(where + ": missing field '" + key + "'");
  }
  return j.at(key);
}

std::vector<double> eps_grid(const Json& check, const std::string& where) {
  std::vector<double> out;
  for (const auto& e : field(check, "eps_grid", where)) out.push_back(json_scalar(e));
  if (out.empty()) throw InputError(where + ": eps_grid is empty");
  for (double e : out) {
    if (!(e > 0.0)) throw InputError(where + ": eps_grid entries must be positive");
  }
  return out;
}

std::vector<Counterfunction> f_grid(const Json& check, const std::string& where) {
  std::vector<Counterfunction> out;
  for (const auto& f : field(check, "f_grid", where)) {
    out.push_back(Counterfunction::parse(f.get<std::string>()));
  }
  if (out.empty()) throw InputError(where + ": f_grid is empty");
  return out;
}

Json with_eps_f(Json request, double eps, const Counterfunction* f) {
  request["eps"] = eps;
  if (f) request["f"] = f->str();
  return request;
}

struct CheckResult {
  VerificationReport report;
  Json bounds = Json::array();
  std::string csv;
};

std::string dump_csv(Trajectory traj, Nat count) {
  std::ostringstream out;
  traj.write_csv(out, std::min(count, traj.horizon()));
  return out.str();
}

CheckResult run_bound_soundness(const Json& check, const Space& space, const std::string& id) {
  const Json scheme = field(check, "scheme", id);
  const Json request = field(check, "bound", id);
  const auto grid_e = eps_grid(check, id);
  const auto grid_f = f_grid(check, id);
  const Nat N = check.value("N", Nat{0});
  std::optional<Nat> override_value;
  if (check.contains("bound_override")) override_value = check.at("bound_override").get<Nat>();

  CheckResult out;
  for (double e : grid_e) {
    for (const auto& f : grid_f) {
      Json entry = {{"check", id}, {"eps", e}, {"f", f.str()}};
      if (override_value) {
        entry["override"] = *override_value;
      } else {
        entry["trace"] = evaluate_rate(with_eps_f(request, e, &f)).trace;
      }
      out.bounds.push_back(std::move(entry));
    }
  }
  const BoundFn bound = [&](double e, const Counterfunction& f) {
    if (override_value) {
      return BoundResult{*override_value, {{"override", *override_value}}};
    }
    const Evaluation ev = evaluate_rate(with_eps_f(request, e, &f));
    return BoundResult{ev.nat, ev.trace};
  };
  const TrajectoryFactory factory = [&] { return build_trajectory(scheme, space); };
  out.report = check_bound_soundness(id, factory, bound, grid_e, grid_f, N);
  out.csv = dump_csv(factory(), check.value("csv_points", kDefaultCsvPoints));
  return out;
}

CheckResult run_cauchy_rate(const Json& check, const Space& space, const std::string& id) {
  const Json scheme = field(check, "scheme", id);
  const Json request = field(check, "rate", id);
  const auto grid_e = eps_grid(check, id);
  CheckResult out;
  for (double e : grid_e) {
    out.bounds.push_back(
        {{"check", id}, {"eps", e}, {"trace", evaluate_rate(with_eps_f(request, e, nullptr)).trace}});
  }
  const CauchyRate rho(
      [request](double e) { return evaluate_rate(with_eps_f(request, e, nullptr)).nat; },
      request.value("formula", std::string("rate")));
  Trajectory traj = build_trajectory(scheme, space);
  out.report = check_cauchy_rate(traj, rho, grid_e, check.value("pairs", Nat{1000}),
                                 check.value("tail", Nat{1000}), check.value("seed", Nat{0}));
  out.report.check_id = id;
  out.csv = dump_csv(build_trajectory(scheme, space), check.value("csv_points", kDefaultCsvPoints));
  return out;
}

CheckResult run_axioms(const Json& check, const Space& space, std::uint64_t seed,
                       const std::string& id) {
  Space s = space;
  if (check.value("convexity", std::string("linear")) == "corrupted-lambda-squared") {
    s = space.with_convexity(Convexity::corrupted_lambda_squared);
  }
  BallSampler sampler(s, check.value("seed", seed));
  CheckResult out;
  out.report = check_w_axioms(s, sampler, check.value("samples", std::size_t{10000}),
                              check.value("tol", 1e-9), check.value("cn", false));
  out.report.check_id = id;
  return out;
}

CheckResult run_map_class(const Json& check, const Space& space, std::uint64_t seed,
                          const std::string& id) {
  const MapDescriptor map = parse_map(field(check, "map", id), space.dimension());
  BallSampler sampler(space, check.value("seed", seed));
  CheckResult out;
  out.report = check_class(space, map, sampler, check.value("samples", std::size_t{2000}),
                           check.value("tol", 1e-9));
  out.report.check_id = id;
  return out;
}

CheckResult run_divergence(const Json& check, const std::string& id) {
  const ScalarSequence s = parse_sequence(field(check, "sequence", id));
  const DivergenceRate A = parse_divergence(field(check, "rate", id).get<std::string>());
  CheckResult out;
  out.report = validate_divergence(s, A, check.value("k_max", Nat{10}),
                                   check.value("horizon", kDefaultHorizon),
                                   check.value("from", Nat{0}));
  out.report.check_id = id;
  return out;
}

CheckResult run_null_rate(const Json& check, const std::string& id) {
  const ScalarSequence s = parse_sequence(field(check, "sequence", id));
  const CauchyRate rho = parse_cauchy(field(check, "rate", id).get<std::string>());
  CheckResult out;
  out.report = validate_null_rate([s](Nat n) { return s(n); }, s.name(), rho, eps_grid(check, id),
                                  check.value("horizon", Nat{100000}), check.value("from", Nat{0}));
  out.report.check_id = id;
  return out;
}

const std::set<std::string> kKinds{"axioms",     "map-class", "bound-soundness",
                                   "cauchy-rate", "divergence", "null-rate"};

/// Everything that can be rejected without running a check.
void validate(const Json& config, const Space& space) {
  const Json& checks = field(config, "checks", "config");
  if (!checks.is_array() || checks.empty()) throw InputError("config: 'checks' must be a non-empty array");
  std::set<std::string> ids;
  for (const auto& check : checks) {
    const std::string id = field(check, "id", "check").get<std::string>();
    if (!ids.insert(id).second) throw InputError("duplicate check id '" + id + "'");
    const std::string kind = field(check, "kind", id).get<std::string>();
    if (!kKinds.count(kind)) throw InputError(id + ": unknown check kind '" + kind + "'");
    if (check.contains("scheme")) build_trajectory(check.at("scheme"), space);
    if (kind == "bound-soundness") {
      const auto e = eps_grid(check, id);
      const auto f = f_grid(check, id);
      if (!check.contains("bound_override")) {
        evaluate_rate(with_eps_f(field(check, "bound", id), e.front(), &f.front()));
      }
    } else if (kind == "cauchy-rate") {
      evaluate_rate(with_eps_f(field(check, "rate", id), eps_grid(check, id).front(), nullptr));
    } else if (kind == "map-class") {
      parse_map(field(check, "map", id), space.dimension());
    } else if (kind == "divergence") {
      parse_sequence(field(check, "sequence", id));
      parse_divergence(field(check, "rate", id).get<std::string>());
    } else if (kind == "null-rate") {
      parse_sequence(field(check, "sequence", id));
      parse_cauchy(field(check, "rate", id).get<std::string>());
    }
  }
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  out << content;
}

}  // namespace

Json load_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot read config " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw InputError("config " + path.string() + " is not valid JSON: " + e.what());
  }
}

Space config_space(const Json& config) { return Space::from_json(field(config, "space", "config")); }

Trajectory build_trajectory(const Json& scheme, const Space& space) {
  const std::string where = "scheme";
  const std::string kind = field(scheme, "kind", where).get<std::string>();
  const std::size_t dim = space.dimension();
  const MapDescriptor T = parse_map(field(scheme, "T", where), dim);
  const MapFamily family = MapFamily::constant(T);
  auto point = [&](const char* key) { return parse_point(field(scheme, key, where), dim); };
  auto seq = [&](const char* key) { return parse_sequence(field(scheme, key, where)); };
  auto phi = [&] { return parse_map(field(scheme, "phi", where), dim); };
  TauSchedule tau;
  if (scheme.contains("tau")) {
    const double t = json_scalar(scheme.at("tau"));
    tau = [t](Nat) { return t; };
  }

  std::optional<Trajectory> traj;
  if (kind == "browder") {
    traj.emplace(browder_traj(space, family, point("u"), seq("alpha"), tau));
  } else if (kind == "viscosity-browder") {
    traj.emplace(viscosity_browder_traj(space, family, phi(), seq("alpha"), tau));
  } else if (kind == "halpern") {
    traj.emplace(halpern_traj(space, family, point("u"), point("start"), seq("alpha")));
  } else if (kind == "viscosity-halpern") {
    traj.emplace(viscosity_halpern_traj(space, family, phi(), point("start"), seq("alpha")));
  } else if (kind == "km") {
    traj.emplace(km_traj(space, T, point("start"), seq("beta")));
  } else if (kind == "vkm") {
    traj.emplace(vkm_traj(space, T, phi(), point("start"), seq("alpha"), seq("beta")));
  } else {
    throw InputError("unknown scheme kind '" + kind + "'");
  }
  if (scheme.contains("errors")) traj.emplace(traj->inject_errors(seq("errors")));
  if (scheme.contains("horizon")) traj->set_horizon(scheme.at("horizon").get<Nat>());
  return std::move(*traj);
}

RunOutcome run_config(const Json& config, const fs::path& out_dir, bool include_timing) {
  RunOutcome outcome;
  std::optional<Space> space;
  try {
    space.emplace(config_space(config));
    validate(config, *space);
  } catch (const Error& e) {
    outcome.exit_code = kExitBadConfig;
    outcome.diagnostics.push_back(e.what());
    return outcome;
  } catch (const Json::exception& e) {
    outcome.exit_code = kExitBadConfig;
    outcome.diagnostics.push_back(std::string("config schema: ") + e.what());
    return outcome;
  }

  const std::uint64_t seed = config.value("seed", std::uint64_t{0});
  VerificationReport summary;
  summary.check_id = config.value("name", std::string("experiment"));
  summary.provenance = {{"seed", seed}, {"space", space->to_json()}};
  Json bounds = Json::array();
  std::ostringstream csv;
  csv << "check,status\n";
  std::vector<std::pair<std::string, std::string>> trajectories;

  for (const auto& check : config.at("checks")) {
    const std::string id = check.at("id").get<std::string>();
    const std::string kind = check.at("kind").get<std::string>();
    CheckResult r;
    try {
      if (kind == "bound-soundness") {
        r = run_bound_soundness(check, *space, id);
      } else if (kind == "cauchy-rate") {
        r = run_cauchy_rate(check, *space, id);
      } else if (kind == "axioms") {
        r = run_axioms(check, *space, seed, id);
      } else if (kind == "map-class") {
        r = run_map_class(check, *space, seed, id);
      } else if (kind == "divergence") {
        r = run_divergence(check, id);
      } else {
        r = run_null_rate(check, id);
      }
    } catch (const SolverError& e) {
      r.report.check_id = id;
      r.report.status = Status::inconclusive;
      r.report.notes.push_back(std::string("solver budget exhausted: ") + e.what());
    }
    if (check.value("expect", std::string("pass")) == "fail") {
      r.report.notes.push_back("expected to fail; status inverted");
      r.report.status = r.report.status == Status::fail   ? Status::pass
                        : r.report.status == Status::pass ? Status::fail
                                                          : Status::inconclusive;
    }
    csv << id << ',' << to_string(r.report.status) << '\n';
    if (r.report.status == Status::inconclusive) {
      outcome.diagnostics.push_back(id + ": inconclusive");
    } else if (r.report.status == Status::fail) {
      outcome.diagnostics.push_back(id + ": FAILED");
    }
    for (auto& b : r.bounds) bounds.push_back(std::move(b));
    if (!r.csv.empty()) trajectories.emplace_back(id, std::move(r.csv));
    summary.merge(r.report);
  }

  outcome.report = summary.to_json(include_timing);
  outcome.exit_code = summary.status == Status::fail ? kExitCheckFailed : kExitPass;

  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(out_dir / "report.json", outcome.report.dump(2) + "\n");
    write_file(out_dir / "bounds.json", bounds.dump(2) + "\n");
    write_file(out_dir / "summary.csv", csv.str());
    for (const auto& [id, content] : trajectories) {
      write_file(out_dir / ("trajectory_" + id + ".csv"), content);
    }
  }
  return outcome;
}

}  // namespace ratelab::cli
