#pragma once

// The h_d(1,1) regression table and the violation estimates derived from it.

#include <optional>
#include <string>
#include <vector>

namespace entlab {

struct HdFixtureRow {
  int d;
  double h_d11;
  double gamma_m;
};

/// Plain-text table: header `d\th_d11\tgamma_m`, one row per d.
std::vector<HdFixtureRow> load_hd_fixtures(const std::string& path);
void write_hd_fixtures(const std::string& path, const std::vector<HdFixtureRow>& rows);
std::string hd_fixtures_text(const std::vector<HdFixtureRow>& rows);
std::vector<HdFixtureRow> parse_hd_fixtures(const std::string& text);

/// Fixed-width decimal with 12 significant digits, as used by every output.
std::string format_sig12(double x);

/// Largest |difference| of h_d11 and gamma_m between two tables with the same
/// rows; infinity when the row sets differ.
double fixture_drift(const std::vector<HdFixtureRow>& a,
                     const std::vector<HdFixtureRow>& b);

struct ViolationRow {
  int d;
  double h_d11;
  double value;      ///< (1/d)[log d - 2 h_d(1,1) - 1]
  double threshold;  ///< exp(2 h_d(1,1) + 1)
  bool positive;
};

std::vector<ViolationRow> violation_table(const std::vector<HdFixtureRow>& rows);

struct FirstViolation {
  int d;
  double h_d11;
  double threshold;
  bool from_table;  ///< false when found by evaluating h_d past the table
};

/// Smallest d with a positive violation lower bound. Looks in the table
/// first; past its end, brackets with live h_d(1,1,d) by doubling and then
/// bisects over integers. Empty if nothing is found below `d_cap`.
std::optional<FirstViolation> first_violating_d(const std::vector<HdFixtureRow>& rows,
                                                int d_cap = 1 << 24);

}  // namespace entlab
