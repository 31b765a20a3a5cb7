#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "entlab/bounds.hpp"
#include "entlab/fixtures.hpp"
#include "entlab/randq.hpp"
#include "oracle/oracle.hpp"

using namespace entlab;

namespace {

std::string data_file(const std::string& name) {
  return (std::filesystem::path(cli::default_data_dir()) / name).string();
}

}  // namespace

TEST(Fixtures, CheckedInTableCoversRange) {
  const auto rows = load_hd_fixtures(data_file(oracle::kHdFixtureFile));
  ASSERT_EQ(rows.size(), 199u);
  EXPECT_EQ(rows.front().d, 2);
  EXPECT_EQ(rows.back().d, 200);
  EXPECT_TRUE(std::isfinite(rows.front().h_d11));
  EXPECT_GT(rows.front().h_d11, 0.0);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_GT(rows[i].h_d11, rows[i - 1].h_d11);
}

TEST(Fixtures, LiveHdMatchesOracleTable) {
  const auto rows = load_hd_fixtures(data_file(oracle::kHdFixtureFile));
  for (const auto& r : rows) {
    if (r.d > 10 && r.d % 19 != 0) continue;
    const auto live = bounds::h_d(1.0, 1.0, r.d);
    EXPECT_NEAR(live.value, r.h_d11, 1e-6) << "d=" << r.d;
  }
}

TEST(Fixtures, OracleGridIsIndependentOfLiveSearch) {
  // The oracle scans a different parametrization of the same curve.
  for (int d : {2, 3, 7}) {
    const auto row = oracle::hd11_grid(d, 20000, 1000);
    EXPECT_NEAR(row.h_d11, bounds::h_d(1.0, 1.0, d).value, 1e-8);
  }
}

TEST(Fixtures, TextRoundTrip) {
  const std::vector<HdFixtureRow> rows{{2, 1.5, 0.25}, {3, 2.123456789012345, 0.9}};
  const std::string text = hd_fixtures_text(rows);
  EXPECT_EQ(text.substr(0, text.find('\n')), "d\th_d11\tgamma_m");
  const auto back = parse_hd_fixtures(text);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[1].h_d11, std::stod(format_sig12(2.123456789012345)));
  EXPECT_EQ(hd_fixtures_text(back), text);
  EXPECT_LT(fixture_drift(rows, back), 1e-11);
  EXPECT_TRUE(std::isinf(fixture_drift(rows, {rows[0]})));
  EXPECT_THROW(parse_hd_fixtures("nope\n1\t2\t3\n"), std::runtime_error);
  EXPECT_THROW(load_hd_fixtures("/nonexistent/file.tsv"), std::runtime_error);
}

TEST(Fixtures, Sig12Format) {
  EXPECT_EQ(format_sig12(3.3509188715123), "3.35091887151");
  EXPECT_EQ(format_sig12(0.5), "0.5");
}

TEST(Violation, TableNegativeThroughout) {
  const auto rows = load_hd_fixtures(data_file(oracle::kHdFixtureFile));
  const auto table = violation_table(rows);
  ASSERT_EQ(table.size(), rows.size());
  for (const auto& v : table) {
    EXPECT_FALSE(v.positive) << "d=" << v.d;
    EXPECT_LT(static_cast<double>(v.d), v.threshold);
    EXPECT_NEAR(v.value, (std::log(static_cast<double>(v.d)) - 2.0 * v.h_d11 - 1.0) / v.d, 1e-15);
  }
}

TEST(Violation, FirstCrossingConsistentWithThreshold) {
  const auto rows = load_hd_fixtures(data_file(oracle::kHdFixtureFile));
  const auto first = first_violating_d(rows);
  ASSERT_TRUE(first.has_value());
  EXPECT_FALSE(first->from_table);
  EXPECT_GT(first->d, 200);
  // d crosses exp(2 h_d(1,1) + 1) within one integer step.
  EXPECT_GT(static_cast<double>(first->d), first->threshold);
  const double hprev = bounds::h_d(1.0, 1.0, first->d - 1).value;
  EXPECT_LE(static_cast<double>(first->d - 1), std::exp(2.0 * hprev + 1.0));
}

TEST(Violation, SyntheticTableFindsFirstRow) {
  // A table whose h values are small enough for d = 5 to cross.
  const std::vector<HdFixtureRow> rows{{2, 1.0, 0.5}, {3, 1.0, 0.5}, {4, 0.2, 0.5}, {5, 0.2, 0.5}};
  const auto first = first_violating_d(rows);
  ASSERT_TRUE(first.has_value());
  EXPECT_TRUE(first->from_table);
  EXPECT_EQ(first->d, 5);
}

TEST(Oracle, MuTablesMatchQuadrature) {
  for (const auto& [d, n] : oracle::mu_table_cases()) {
    std::ifstream in(data_file(oracle::mu_table_filename(d, n)));
    ASSERT_TRUE(in) << d << " " << n;
    std::stringstream buf;
    buf << in.rdbuf();
    const auto table = oracle::parse_mu_table(buf.str());
    const MuCdfTable live = mu_cdf_numeric(d, n, 4000);
    double worst = 0.0;
    for (const auto& p : table) worst = std::max(worst, std::abs(live(p.w) - p.cdf));
    EXPECT_LT(worst, d == 2 ? 1e-5 : 2e-3) << "d=" << d << " n=" << n;
  }
}

TEST(Oracle, ClosedFormCdfD2N2) {
  for (const auto& p : oracle::mu_cdf_grid(2, 2)) {
    EXPECT_NEAR(p.cdf, std::pow(2.0 * p.w - 1.0, 3), 1e-6);
  }
}
