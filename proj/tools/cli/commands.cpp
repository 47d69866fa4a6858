#include "commands.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

#include "ratelab/descriptors.hpp"
#include "ratelab/errors.hpp"
#include "ratelab/geometry.hpp"
#include "runner.hpp"

namespace ratelab::cli {

namespace fs = std::filesystem;

Json rates_request(const std::string& formula, const std::vector<std::string>& args) {
  Json req;
  req["formula"] = formula;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& tok = args[i];
    if (tok.rfind("--", 0) != 0 || tok.size() <= 2) {
      throw InputError("unexpected argument '" + tok + "'");
    }
    std::string key = tok.substr(2);
    if (key == "preset") key = "eta";
    if (i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0) {
      req[key] = args[++i];
    } else {
      req[key] = true;
    }
  }
  return req;
}

namespace {

int cmd_rates(const std::vector<std::string>& tail, bool list, const std::string& replay,
              bool json_only, std::ostream& out, std::ostream& err) {
  if (list) {
    for (const auto& f : rate_formulas()) out << f << '\n';
    return kExitPass;
  }
  if (!replay.empty()) {
    const Json trace = load_config(replay);
    const bool ok = replay_trace(trace);
    out << (ok ? "replay matches" : "replay MISMATCH") << '\n';
    return ok ? kExitPass : kExitCheckFailed;
  }
  if (tail.empty()) {
    err << "rates: missing formula (see `ratelab rates --list`)\n";
    return kExitBadConfig;
  }
  const Json req = rates_request(tail.front(), {tail.begin() + 1, tail.end()});
  const Evaluation e = evaluate_rate(req);
  if (!json_only) out << e.text() << '\n';
  out << e.trace.dump(2) << '\n';
  return kExitPass;
}

int cmd_run(const fs::path& config, const fs::path& out_dir, bool timing, std::ostream& out,
            std::ostream& err) {
  const RunOutcome r = run_config(load_config(config), out_dir, timing);
  for (const auto& d : r.diagnostics) err << d << '\n';
  if (r.exit_code != kExitBadConfig) {
    out << "status: " << r.report.at("status").get<std::string>() << '\n';
    if (!out_dir.empty()) out << "report: " << (out_dir / "report.json").string() << '\n';
  }
  return r.exit_code;
}

int cmd_check_axioms(const std::string& config, std::size_t dim, const std::string& radius,
                     Nat b, std::size_t samples, double tol, bool cn, bool corrupted,
                     std::uint64_t seed, std::ostream& out) {
  Space space = config.empty() ? Space::euclidean_ball(dim, parse_rational(radius).value(), b)
                               : config_space(load_config(config));
  if (corrupted) space = space.with_convexity(Convexity::corrupted_lambda_squared);
  BallSampler sampler(space, seed);
  const VerificationReport r = check_w_axioms(space, sampler, samples, tol, cn);
  out << r.to_json().dump(2) << '\n';
  return r.status == Status::fail ? kExitCheckFailed : kExitPass;
}

int cmd_dump_traj(const fs::path& config, const std::string& check_id, Nat count,
                  const std::string& out_path, std::ostream& out) {
  const Json cfg = load_config(config);
  const Space space = config_space(cfg);
  for (const auto& check : cfg.at("checks")) {
    if (check.value("id", std::string()) != check_id) continue;
    if (!check.contains("scheme")) throw InputError("check '" + check_id + "' has no scheme");
    Trajectory traj = build_trajectory(check.at("scheme"), space);
    if (out_path.empty()) {
      traj.write_csv(out, count);
    } else {
      std::ofstream f(out_path);
      if (!f) throw InputError("cannot write " + out_path);
      traj.write_csv(f, count);
    }
    return kExitPass;
  }
  throw InputError("no check with id '" + check_id + "'");
}

}  // namespace

int run_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ratelab: viscosity iteration schemes and their quantitative rates"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment config");
  std::string run_config_path;
  std::string run_out;
  bool run_timing = false;
  run->add_option("config", run_config_path, "Experiment config (JSON)")->required();
  run->add_option("--out", run_out, "Directory for report.json, bounds.json and CSVs");
  run->add_flag("--timing", run_timing, "Include runtimes in the report");

  auto* rates = app.add_subcommand("rates", "Evaluate one formula: rates <formula> --key value ...");
  rates->prefix_command();
  bool rates_list = false;
  bool rates_json = false;
  std::string rates_replay;
  rates->add_flag("--list", rates_list, "List formulas");
  rates->add_flag("--json", rates_json, "Print only the JSON trace");
  rates->add_option("--replay", rates_replay, "Re-evaluate a saved trace");

  auto* axioms = app.add_subcommand("check-axioms", "Sample the W-hyperbolic axioms");
  std::string ax_config;
  std::size_t ax_dim = 2;
  std::string ax_radius = "1";
  Nat ax_b = 2;
  std::size_t ax_samples = 10000;
  double ax_tol = 1e-9;
  bool ax_cn = false;
  bool ax_corrupted = false;
  std::uint64_t ax_seed = 0;
  axioms->add_option("--config", ax_config, "Take the space from this config");
  axioms->add_option("--dim", ax_dim, "Dimension of the Euclidean ball");
  axioms->add_option("--radius", ax_radius, "Ball radius");
  axioms->add_option("--b", ax_b, "Diameter bound");
  axioms->add_option("--samples", ax_samples, "Sampled tuples");
  axioms->add_option("--tol", ax_tol, "Violation tolerance");
  axioms->add_option("--seed", ax_seed, "Sampler seed");
  axioms->add_flag("--cn", ax_cn, "Also check CN-");
  axioms->add_flag("--corrupted", ax_corrupted, "Use the corrupted convexity map");

  auto* dump = app.add_subcommand("dump-traj", "Write the trajectory of a config check as CSV");
  std::string dump_config;
  std::string dump_check;
  std::string dump_out;
  Nat dump_count = 100;
  dump->add_option("config", dump_config, "Experiment config (JSON)")->required();
  dump->add_option("--check", dump_check, "Check id whose scheme is dumped")->required();
  dump->add_option("--count", dump_count, "Number of iterates");
  dump->add_option("--out", dump_out, "Output file (stdout when absent)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitPass : kExitBadConfig;
  }

  try {
    if (*run) return cmd_run(run_config_path, run_out, run_timing, out, err);
    if (*rates) {
      return cmd_rates(rates->remaining(), rates_list, rates_replay, rates_json, out, err);
    }
    if (*axioms) {
      return cmd_check_axioms(ax_config, ax_dim, ax_radius, ax_b, ax_samples, ax_tol, ax_cn,
                              ax_corrupted, ax_seed, out);
    }
    if (*dump) return cmd_dump_traj(dump_config, dump_check, dump_count, dump_out, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const Json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadConfig;
  }
  return kExitBadConfig;
}

}  // namespace ratelab::cli
