#include "cli/ranges.hpp"

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace entlab::cli {

namespace {

constexpr std::size_t kMaxRangeLength = 100000;

long long to_int(const std::string& s, const std::string& whole) {
  if (s.empty()) throw UsageError("empty number in '" + whole + "'");
  char* end = nullptr;
  errno = 0;
  const long long v = std::strtoll(s.c_str(), &end, 10);
  if (*end != '\0' || errno != 0) throw UsageError("not an integer: '" + s + "' in '" + whole + "'");
  return v;
}

double to_real(const std::string& s, const std::string& whole) {
  if (s.empty()) throw UsageError("empty number in '" + whole + "'");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (*end != '\0' || errno != 0 || !std::isfinite(v)) {
    throw UsageError("not a number: '" + s + "' in '" + whole + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

std::vector<long long> parse_int_range(const std::string& text) {
  const auto colon = split(text, ':');
  if (colon.size() == 1) {
    std::vector<long long> out;
    for (const auto& p : split(text, ',')) out.push_back(to_int(p, text));
    if (out.empty()) throw UsageError("empty range");
    return out;
  }
  if (colon.size() != 3 || colon[2].size() < 2 ||
      (colon[2][0] != '*' && colon[2][0] != '+')) {
    throw UsageError("range must look like lo:hi:*k or lo:hi:+k, got '" + text + "'");
  }
  const long long lo = to_int(colon[0], text);
  const long long hi = to_int(colon[1], text);
  const long long k = to_int(colon[2].substr(1), text);
  if (hi < lo) throw UsageError("range '" + text + "' has hi < lo");
  std::vector<long long> out;
  if (colon[2][0] == '*') {
    if (k < 2 || lo < 1) throw UsageError("geometric range needs lo >= 1 and factor >= 2");
    for (long long v = lo; v <= hi; v *= k) {
      out.push_back(v);
      if (v > hi / k) break;
    }
  } else {
    if (k < 1) throw UsageError("arithmetic range needs step >= 1");
    for (long long v = lo; v <= hi; v += k) {
      out.push_back(v);
      if (out.size() > kMaxRangeLength) throw UsageError("range '" + text + "' is too long");
    }
  }
  return out;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& p : split(text, ',')) out.push_back(to_real(p, text));
  if (out.empty()) throw UsageError("empty list");
  return out;
}

}  // namespace entlab::cli
