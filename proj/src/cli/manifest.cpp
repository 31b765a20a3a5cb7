#include "cli/manifest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <stdexcept>
#include <vector>

#include "entlab/fixtures.hpp"

namespace entlab::cli {

double round12(double x) {
  if (!std::isfinite(x)) return x;
  return std::stod(format_sig12(x));
}

Json number_or_null(const std::optional<double>& x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return round12(*x);
}

Json to_json(const RunManifest& m) {
  return Json{{"command", m.command},           {"params", m.params},
              {"seed", m.seed},                 {"tool_version", m.tool_version},
              {"started", m.started},           {"finished", m.finished},
              {"results", m.results}};
}

RunManifest manifest_from_json(const Json& j) {
  RunManifest m;
  m.command = j.at("command").get<std::string>();
  m.params = j.at("params");
  m.seed = j.at("seed").get<std::uint64_t>();
  m.tool_version = j.at("tool_version").get<std::string>();
  m.started = j.at("started").get<std::string>();
  m.finished = j.at("finished").get<std::string>();
  m.results = j.at("results");
  return m;
}

Json to_json(const CampaignResult& r) {
  Json details = Json::object();
  for (const auto& [k, v] : r.details) details[k] = number_or_null(v);
  return Json{{"name", r.name},
              {"estimate", number_or_null(r.estimate)},
              {"bound_or_law", number_or_null(r.bound_or_law)},
              {"margin_sigmas", number_or_null(r.margin_sigmas)},
              {"pass", r.pass},
              {"samples_used", r.samples_used},
              {"wall_time", number_or_null(r.wall_time)},
              {"details", details}};
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

void flatten(const Json& value, const std::string& prefix,
             std::vector<std::pair<std::string, const Json*>>& out) {
  if (value.is_object()) {
    for (auto it = value.begin(); it != value.end(); ++it) {
      flatten(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
    return;
  }
  out.emplace_back(prefix, &value);
}

std::string csv_cell(const Json* v) {
  if (v == nullptr || v->is_null()) return "";
  std::string raw = v->is_string() ? v->get<std::string>() : v->dump();
  if (raw.find_first_of(",\"\r\n") == std::string::npos) return raw;
  std::string quoted = "\"";
  for (char c : raw) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

}  // namespace

std::string results_csv(const Json& results) {
  std::vector<std::string> columns;
  std::vector<std::vector<std::pair<std::string, const Json*>>> rows;
  for (const auto& r : results) {
    auto& cells = rows.emplace_back();
    flatten(r, "", cells);
    for (const auto& [name, v] : cells) {
      if (std::find(columns.begin(), columns.end(), name) == columns.end()) {
        columns.push_back(name);
      }
    }
  }
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c > 0) out += ',';
    Json name = columns[c];
    out += csv_cell(&name);
  }
  out += "\r\n";
  for (const auto& cells : rows) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c > 0) out += ',';
      const auto it = std::find_if(cells.begin(), cells.end(),
                                   [&](const auto& cell) { return cell.first == columns[c]; });
      out += csv_cell(it == cells.end() ? nullptr : it->second);
    }
    out += "\r\n";
  }
  return out;
}

}  // namespace entlab::cli
