#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "entlab/experiments.hpp"
#include "json.hpp"

namespace entlab::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
  std::string command;
  Json params = Json::object();
  std::uint64_t seed = 0;
  std::string tool_version = kToolVersion;
  std::string started;
  std::string finished;
  Json results = Json::array();
};

Json to_json(const RunManifest& m);
RunManifest manifest_from_json(const Json& j);

/// Rounds to 12 significant digits so the JSON text carries no more.
double round12(double x);
/// A rounded number, or null for an absent value.
Json number_or_null(const std::optional<double>& x);

Json to_json(const CampaignResult& r);

/// UTC timestamp, ISO 8601 with seconds.
std::string utc_now();

/// One row per entry of `results`; nested objects flatten to dotted column
/// names. RFC-4180 quoting, header row first.
std::string results_csv(const Json& results);

}  // namespace entlab::cli
