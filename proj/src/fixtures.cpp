#include "entlab/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "entlab/bounds.hpp"

namespace entlab {

namespace {

constexpr const char* kHeader = "d\th_d11\tgamma_m";

double live_violation(int d) {
  return bounds::violation_lower(d, bounds::h_d(1.0, 1.0, d).value).value;
}

}  // namespace

std::string format_sig12(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string hd_fixtures_text(const std::vector<HdFixtureRow>& rows) {
  std::string out = std::string(kHeader) + "\n";
  for (const auto& r : rows) {
    out += std::to_string(r.d) + "\t" + format_sig12(r.h_d11) + "\t" +
           format_sig12(r.gamma_m) + "\n";
  }
  return out;
}

std::vector<HdFixtureRow> parse_hd_fixtures(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw std::runtime_error("fixture table: missing or wrong header");
  }
  std::vector<HdFixtureRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream fields(line);
    HdFixtureRow r{};
    if (!(fields >> r.d >> r.h_d11 >> r.gamma_m)) {
      throw std::runtime_error("fixture table: malformed line " + std::to_string(lineno));
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<HdFixtureRow> load_hd_fixtures(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open fixture table " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_hd_fixtures(buf.str());
}

void write_hd_fixtures(const std::string& path, const std::vector<HdFixtureRow>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write fixture table " + path);
  out << hd_fixtures_text(rows);
}

double fixture_drift(const std::vector<HdFixtureRow>& a,
                     const std::vector<HdFixtureRow>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].d != b[i].d) return std::numeric_limits<double>::infinity();
    worst = std::max({worst, std::abs(a[i].h_d11 - b[i].h_d11),
                      std::abs(a[i].gamma_m - b[i].gamma_m)});
  }
  return worst;
}

std::vector<ViolationRow> violation_table(const std::vector<HdFixtureRow>& rows) {
  std::vector<ViolationRow> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    const auto v = bounds::violation_lower(r.d, r.h_d11);
    out.push_back({r.d, r.h_d11, v.value, v.threshold, v.positive});
  }
  return out;
}

std::optional<FirstViolation> first_violating_d(const std::vector<HdFixtureRow>& rows,
                                                int d_cap) {
  int last = 1;
  for (const auto& r : rows) {
    const auto v = bounds::violation_lower(r.d, r.h_d11);
    if (v.positive) return FirstViolation{r.d, r.h_d11, v.threshold, true};
    last = std::max(last, r.d);
  }
  int lo = std::max(last, 2);
  int hi = lo;
  while (live_violation(hi) <= 0.0) {
    lo = hi;
    if (hi >= d_cap / 2) return std::nullopt;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (live_violation(mid) > 0.0 ? hi : lo) = mid;
  }
  const auto hd = bounds::h_d(1.0, 1.0, hi);
  return FirstViolation{hi, hd.value, std::exp(2.0 * hd.value + 1.0), false};
}

}  // namespace entlab
