#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace entlab::cli {

/// Malformed flags or inputs outside a command's preconditions; maps to
/// exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Accepts "k", "a,b,c", "lo:hi:*k" (geometric, k >= 2) and "lo:hi:+k"
/// (arithmetic, k >= 1). Ranges include hi when it is hit exactly.
std::vector<long long> parse_int_range(const std::string& text);
/// Same grammar for reals; a comma list or a single value.
std::vector<double> parse_real_list(const std::string& text);

}  // namespace entlab::cli
