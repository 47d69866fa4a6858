#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace ratelab {

using Json = nlohmann::ordered_json;

/// Falsification and resource exhaustion are different outcomes: a check is
/// only `fail` when a fully evaluated witness contradicts it.
enum class Status { pass, fail, inconclusive };

std::string to_string(Status s);

/// Reads a scalar written either as a JSON number or as an exact rational
/// string such as "3/8".
double json_scalar(const Json& j);
Status combine(Status a, Status b) noexcept;

/// One measured quantity compared against a tolerance.
struct Measurement {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool ok = true;
};

/// Structured outcome of a check. Never a bare boolean: every report carries
/// what was measured, the tolerances used, and enough provenance to replay it.
struct VerificationReport {
  std::string check_id;
  Status status = Status::pass;
  std::vector<Measurement> measurements;
  Json witnesses = Json::array();
  Json children = Json::array();
  Json provenance = Json::object();
  std::vector<std::string> notes;
  double runtime_seconds = 0.0;

  bool passed() const noexcept { return status == Status::pass; }
  void add(Measurement m);
  /// Folds a sub-check in: statuses combine, the child is kept verbatim.
  void merge(const VerificationReport& child);

  /// Runtime is left out unless requested so that reports stay byte-identical
  /// across runs with the same seed.
  Json to_json(bool include_timing = false) const;
};

}  // namespace ratelab
