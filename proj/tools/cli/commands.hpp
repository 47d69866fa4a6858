#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ratelab/report.hpp"

namespace ratelab::cli {

/// Turns `--key value` and bare `--flag` tokens into a rate request.
/// `--preset` is accepted as an alias of `--eta`.
Json rates_request(const std::string& formula, const std::vector<std::string>& args);

/// Parses argv and dispatches to run, rates, check-axioms or dump-traj.
int run_main(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace ratelab::cli
