#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "cli/manifest.hpp"
#include "entlab/bounds.hpp"

namespace entlab::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailed = 1;
inline constexpr int kExitUsage = 2;

/// Parses argv, runs one subcommand and writes its manifest (JSON or CSV)
/// to `out`; diagnostics go to `err`. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

Json bound_report_json(const bounds::BoundReport& r, double s, int n, int d);

/// Directory holding the checked-in fixture tables.
std::string default_data_dir();

}  // namespace entlab::cli
