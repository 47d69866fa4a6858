#include "ratelab/report.hpp"

#include "ratelab/errors.hpp"
#include "ratelab/numeric.hpp"

namespace ratelab {

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::inconclusive: return "inconclusive";
  }
  return "unknown";
}

double json_scalar(const Json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) return parse_rational(j.get<std::string>()).value();
  throw InputError("expected a number or a rational string, got " + j.dump());
}

Status combine(Status a, Status b) noexcept {
  if (a == Status::fail || b == Status::fail) return Status::fail;
  if (a == Status::inconclusive || b == Status::inconclusive) return Status::inconclusive;
  return Status::pass;
}

void VerificationReport::add(Measurement m) {
  if (!m.ok) status = Status::fail;
  measurements.push_back(std::move(m));
}

void VerificationReport::merge(const VerificationReport& child) {
  status = combine(status, child.status);
  children.push_back(child.to_json());
  runtime_seconds += child.runtime_seconds;
}

Json VerificationReport::to_json(bool include_timing) const {
  Json j;
  j["check"] = check_id;
  j["status"] = to_string(status);
  Json ms = Json::array();
  for (const auto& m : measurements) {
    ms.push_back({{"name", m.name},
                  {"value", format_double(m.value)},
                  {"tolerance", format_double(m.tolerance)},
                  {"ok", m.ok}});
  }
  j["measurements"] = std::move(ms);
  j["witnesses"] = witnesses;
  j["provenance"] = provenance;
  if (!children.empty()) j["children"] = children;
  if (!notes.empty()) j["notes"] = notes;
  if (include_timing) j["runtime_seconds"] = runtime_seconds;
  return j;
}

}  // namespace ratelab
