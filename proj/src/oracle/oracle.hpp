#pragma once

// Brute-force reference tables, kept apart from the library code paths they
// are used to check.

#include <string>
#include <vector>

#include "entlab/fixtures.hpp"

namespace entlab::oracle {

/// h_d(1,1) by scanning the constraint curve z in (1, d) on a dense grid and
/// zooming twice around the best point. Along the curve the constraint is
/// active, so gamma follows from z and only a 1-D scan is needed.
HdFixtureRow hd11_grid(int d, int grid_points = 100000, int zoom_points = 1000);

/// Rows for d = d_lo..d_hi.
std::vector<HdFixtureRow> hd11_table(int d_lo = 2, int d_hi = 200);

struct MuCdfPoint {
  double w;
  double cdf;
};

/// CDF of the largest eigenvalue under the induced measure, by midpoint
/// sums of the density over a uniform grid of the simplex; d in {2, 3}.
std::vector<MuCdfPoint> mu_cdf_grid(int d, int n, int table_points = 201,
                                    int cells = 4000);

/// (d, n) pairs whose CDF tables are regenerated with the fixtures.
std::vector<std::pair<int, int>> mu_table_cases();

std::string mu_table_text(const std::vector<MuCdfPoint>& table);
std::vector<MuCdfPoint> parse_mu_table(const std::string& text);
std::string mu_table_filename(int d, int n);

inline constexpr const char* kHdFixtureFile = "h_d_fixtures.tsv";

}  // namespace entlab::oracle
