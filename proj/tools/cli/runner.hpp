#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ratelab/report.hpp"
#include "ratelab/schemes.hpp"

namespace ratelab::cli {

/// Exit codes of `ratelab run`.
inline constexpr int kExitPass = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitBadConfig = 2;

/// Parses a JSON config file; InputError on unreadable or malformed input.
Json load_config(const std::filesystem::path& path);

/// Builds the space described by config["space"].
Space config_space(const Json& config);

/// Builds the trajectory described by a scheme object:
///   {"kind": "browder"|"viscosity-browder"|"halpern"|"viscosity-halpern"|"km"|"vkm",
///    "T", "phi", "u", "start", "alpha", "beta", "errors", "tau", "horizon"}
Trajectory build_trajectory(const Json& scheme, const Space& space);

struct RunOutcome {
  int exit_code = kExitPass;
  Json report;
  std::vector<std::string> diagnostics;
};

/// Validates the whole config, then runs every entry of config["checks"].
/// Writes report.json, bounds.json, summary.csv and one trajectory CSV per
/// scheme-based check into `out_dir` (skipped when empty). Inconclusive
/// checks are listed but do not fail the run.
RunOutcome run_config(const Json& config, const std::filesystem::path& out_dir,
                      bool include_timing = false);

}  // namespace ratelab::cli
