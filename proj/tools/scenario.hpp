#pragma once

// Scenario files: the domain, its punctures and per-command parameters as JSON.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "qh/analysis.hpp"
#include "qh/domains.hpp"
#include "qh/error.hpp"
#include "qh/qh_metric.hpp"

namespace qh::cli {

using Json = nlohmann::ordered_json;

/// Malformed scenario or flag value; maps to exit code 2.
class UsageError : public Error {
 public:
  using Error::Error;
};

struct Scenario {
  Json raw;  // the file as read
  Domain domain;
  std::uint64_t seed = 0;
  GraphParams graph;
  QuadratureParams quad;
};

NormSpec parse_space(const Json& j);
BaseDomain parse_base(const Json& j, const NormSpec& space);
Vector parse_vector(const Json& j, const NormSpec& space);
/// "x,y,..." as given on the command line.
Vector parse_vector_flag(const std::string& text, const NormSpec& space);

/// Builds the domain. "punctures": {"kappa", "points"} or {"kappa", "generate": N}; generated
/// sets are drawn with the scenario seed.
Scenario parse_scenario(const Json& j);
Scenario load_scenario(const std::string& path);

Json to_json(const Domain& domain);
Json number(double x);  // non-finite values become "inf", "-inf" or "nan"

}  // namespace qh::cli
