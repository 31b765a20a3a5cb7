#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/manifest.hpp"
#include "cli/ranges.hpp"
#include "entlab/channels.hpp"
#include "entlab/randq.hpp"
#include "oracle/oracle.hpp"

using namespace entlab;
using namespace entlab::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Outcome invoke(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("entlab_cli_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST(Ranges, Syntax) {
  EXPECT_EQ(parse_int_range("7"), (std::vector<long long>{7}));
  EXPECT_EQ(parse_int_range("3,5,9"), (std::vector<long long>{3, 5, 9}));
  EXPECT_EQ(parse_int_range("4:64:*2"), (std::vector<long long>{4, 8, 16, 32, 64}));
  EXPECT_EQ(parse_int_range("2:10:+4"), (std::vector<long long>{2, 6, 10}));
  for (const char* bad : {"", "x", "4:2:+1", "1:8:*1", "1:8:+0", "1:8", "2:8:/2"}) {
    EXPECT_THROW(parse_int_range(bad), UsageError) << bad;
  }
  EXPECT_EQ(parse_real_list("0.1,0.5"), (std::vector<double>{0.1, 0.5}));
  EXPECT_THROW(parse_real_list("0.1,,"), UsageError);
}

TEST(Manifest, JsonRoundTrip) {
  RunManifest m;
  m.command = "bounds";
  m.params = Json{{"d", 2}, {"s", "4:64:*2"}};
  m.seed = 123456789012345ULL;
  m.started = "2026-01-01T00:00:00Z";
  m.finished = "2026-01-01T00:00:01Z";
  m.results = Json::array({Json{{"x", 0.1}, {"y", nullptr}}});
  const Json j = to_json(m);
  const RunManifest back = manifest_from_json(Json::parse(j.dump()));
  EXPECT_EQ(to_json(back), j);
  EXPECT_EQ(back.seed, m.seed);
  EXPECT_EQ(back.tool_version, kToolVersion);
}

TEST(Manifest, CsvQuotingAndFlattening) {
  const Json rows = Json::array({Json{{"name", "a,\"b\""}, {"v", Json{{"x", 1}}}},
                                 Json{{"name", "plain"}, {"w", true}}});
  EXPECT_EQ(results_csv(rows), "name,v.x,w\r\n\"a,\"\"b\"\"\",1,\r\nplain,,true\r\n");
}

TEST(Bounds, SingleRow) {
  const auto r = invoke({"bounds", "--d", "2", "--n", "16", "--s", "16"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["command"], "bounds");
  ASSERT_EQ(j["results"].size(), 1u);
  const Json& row = j["results"][0];
  EXPECT_EQ(row["p_ratio"].get<double>(), 0.5);
  EXPECT_NEAR(row["prod_upper"].get<double>(), 1.24245, 1e-5);
  EXPECT_TRUE(row["hlw"].is_null());
  EXPECT_TRUE(row["vacuous"]["thm2"].is_boolean());
  for (const char* key : {"command", "params", "seed", "tool_version", "started", "finished", "results"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
}

TEST(Bounds, RangeAndCsv) {
  const auto r = invoke({"--format", "csv", "bounds", "--d", "3", "--n", "8,16", "--s", "4:16:*2"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  std::size_t lines = 0;
  for (std::size_t pos = 0; (pos = r.out.find("\r\n", pos)) != std::string::npos; pos += 2) ++lines;
  EXPECT_EQ(lines, 1u + 6u);
  EXPECT_EQ(r.out.rfind("kind,s,n,d,p_ratio", 0), 0u);
  EXPECT_NE(r.out.find("hlw_crossover_ratio"), std::string::npos);
}

TEST(Bounds, NullFieldsWhenPreconditionsFail) {
  const auto r = invoke({"bounds", "--d", "2", "--n", "16", "--s", "4"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.json()["results"][0]["prod_upper"].is_null());
}

TEST(Bounds, UsageErrors) {
  EXPECT_EQ(invoke({"bounds", "--d", "3", "--n", "8", "--s", "100"}).code, kExitUsage);
  EXPECT_EQ(invoke({"bounds", "--d", "3", "--n", "8"}).code, kExitUsage);
  EXPECT_EQ(invoke({"bounds", "--d", "x", "--n", "8", "--s", "2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"bounds", "--d", "3", "--n", "8", "--s", "2", "--gamma", "1.5"}).code, kExitUsage);
  EXPECT_EQ(invoke({"bounds", "--d", "3", "--n", "8", "--s", "2", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(invoke({"--format", "xml", "bounds", "--d", "3", "--n", "8", "--s", "2"}).code, kExitUsage);
  EXPECT_EQ(invoke({}).code, kExitUsage);
  EXPECT_EQ(invoke({"--help"}).code, kExitOk);
}

TEST(Bounds, ViolationTable) {
  const auto r = invoke({"bounds", "--d", "2:64:*2", "--violation"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json doc = r.json();
  const Json& rows = doc["results"];
  ASSERT_EQ(rows.size(), 7u);
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    EXPECT_EQ(rows[i]["kind"], "violation");
    EXPECT_EQ(rows[i]["source"], "fixture");
    EXPECT_FALSE(rows[i]["positive"].get<bool>());
    EXPECT_FALSE(rows[i]["first_positive"].get<bool>());
  }
  const Json& summary = rows.back();
  EXPECT_EQ(summary["kind"], "first_violation");
  EXPECT_GT(summary["d"].get<int>(), 200);
  EXPECT_EQ(summary["source"], "live");
}

TEST(Bounds, ViolationHighlightsFirstPositive) {
  const fs::path dir = temp_dir("violation");
  const fs::path table = dir / "table.tsv";
  // h = 0.01 puts the threshold at e^1.02 < 3, so d = 3 and d = 4 both cross.
  std::ofstream(table) << "d\th_d11\tgamma_m\n2\t1\t0.5\n3\t0.01\t0.5\n4\t0.01\t0.5\n";
  const auto r = invoke({"bounds", "--d", "2:4:+1", "--violation", "--fixtures", table.string()});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json doc = r.json();
  const Json& rows = doc["results"];
  EXPECT_FALSE(rows[0]["positive"].get<bool>());
  EXPECT_TRUE(rows[1]["first_positive"].get<bool>());
  EXPECT_TRUE(rows[2]["positive"].get<bool>());
  EXPECT_FALSE(rows[2]["first_positive"].get<bool>());
  EXPECT_EQ(rows[3]["d"], 3);
  EXPECT_EQ(rows[3]["source"], "fixture");
}

TEST(Verify, OverlapPasses) {
  const auto r = invoke({"verify", "--suite", "overlap", "--s", "8", "--trials", "100000", "--seed", "7"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json j = r.json();
  EXPECT_EQ(j["seed"], 7);
  EXPECT_EQ(j["results"].size(), 5u);
  for (const auto& row : j["results"]) EXPECT_TRUE(row["pass"].get<bool>());
}

TEST(Verify, UsageErrors) {
  EXPECT_EQ(invoke({"verify", "--suite", "spectrum", "--d", "5", "--seed", "1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"verify", "--suite", "overlap"}).code, kExitUsage);
  EXPECT_EQ(invoke({"verify", "--suite", "nope", "--seed", "1"}).code, kExitUsage);
  EXPECT_EQ(invoke({"verify", "--suite", "overlap", "--seed", "1", "--t", "1.5"}).code, kExitUsage);
  EXPECT_EQ(invoke({"verify", "--suite", "overlap", "--seed", "1", "--trials", "0"}).code, kExitUsage);
}

TEST(Verify, GradientSuiteIncludesNegativeControl) {
  const auto r = invoke({"verify", "--suite", "gradient", "--seed", "3", "--trials", "20"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  bool saw_control = false;
  const Json doc = r.json();
  for (const auto& row : doc["results"]) {
    if (row["name"].get<std::string>().rfind("negative control", 0) == 0) {
      saw_control = true;
      EXPECT_EQ(row["details"]["underlying_pass"], 0.0);
    }
  }
  EXPECT_TRUE(saw_control);
}

TEST(Minent, SingleImageState) {
  const auto r = invoke({"minent", "--s", "1", "--n", "5", "--d", "3", "--channels", "10", "--restarts", "2",
                         "--probes", "10"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json doc = r.json();
  const Json& rows = doc["results"];
  ASSERT_EQ(rows.size(), 11u);
  CVector one(1);
  one(0) = 1.0;
  for (int c = 0; c < 10; ++c) {
    RngStream rng(0, static_cast<std::uint64_t>(c));
    const ChannelPair ch(random_isometry(1, 5, 3, rng));
    const double expect = von_neumann_entropy(apply_conjugate(ch, PureState(one)));
    EXPECT_NEAR(rows[c]["E_C"].get<double>(), expect, 1e-10);
  }
  EXPECT_EQ(rows.back()["kind"], "summary");
}

TEST(Minent, SummaryWithinRange) {
  const auto r = invoke({"minent", "--s", "4", "--n", "8", "--d", "2", "--channels", "50", "--seed", "3"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json doc = r.json();
  const Json& summary = doc["results"].back();
  EXPECT_GE(summary["median"].get<double>(), 0.0);
  EXPECT_LE(summary["median"].get<double>(), std::log(2.0));
  EXPECT_LE(summary["min"].get<double>(), summary["median"].get<double>());
  EXPECT_TRUE(summary.contains("thm1_rhs"));
  EXPECT_TRUE(summary.contains("hlw"));
}

TEST(Minent, ProductAndBits) {
  const auto r = invoke({"minent", "--s", "4", "--n", "4", "--d", "2", "--product", "--bits", "--restarts", "4",
                         "--probes", "100"});
  ASSERT_EQ(r.code, kExitOk) << r.err;
  const Json doc = r.json();
  const Json& rows = doc["results"];
  EXPECT_TRUE(rows[0]["prod_upper_holds"].get<bool>());
  EXPECT_TRUE(rows[0].contains("delta_s"));
  EXPECT_NEAR(rows[0]["prod_upper"].get<double>(), 1.24245332489 / std::log(2.0), 1e-9);
  EXPECT_EQ(rows.back()["unit"], "bits");
  EXPECT_TRUE(rows.back().contains("ineq3_lower"));
}

TEST(Minent, UsageErrors) {
  EXPECT_EQ(invoke({"minent", "--s", "17", "--n", "9", "--d", "2", "--product"}).code, kExitUsage);
  EXPECT_EQ(invoke({"minent", "--s", "9", "--n", "2", "--d", "2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"minent", "--s", "2", "--n", "2"}).code, kExitUsage);
  EXPECT_EQ(invoke({"minent", "--s", "2", "--n", "2", "--d", "2", "--restarts", "0"}).code, kExitUsage);
}

TEST(Oracle, RegenIsDeterministicAndDetectsTampering) {
  const fs::path dir = temp_dir("oracle");
  const auto first = invoke({"oracle", "--regen-fixtures", "--data-dir", dir.string(), "--d-max", "12"});
  ASSERT_EQ(first.code, kExitOk) << first.err;
  for (const auto& row : first.json()["results"]) EXPECT_EQ(row["status"], "written");
  const std::string before = slurp(dir / oracle::kHdFixtureFile);

  const auto second = invoke({"oracle", "--regen-fixtures", "--data-dir", dir.string(), "--d-max", "12"});
  ASSERT_EQ(second.code, kExitOk);
  for (const auto& row : second.json()["results"]) EXPECT_EQ(row["status"], "identical");
  EXPECT_EQ(slurp(dir / oracle::kHdFixtureFile), before);

  auto rows = parse_hd_fixtures(before);
  ASSERT_FALSE(rows.empty());
  EXPECT_EQ(rows.front().d, 2);
  EXPECT_TRUE(std::isfinite(rows.front().h_d11));
  rows[3].h_d11 += 1e-6;
  write_hd_fixtures((dir / oracle::kHdFixtureFile).string(), rows);
  const auto tampered = invoke({"oracle", "--regen-fixtures", "--data-dir", dir.string(), "--d-max", "12"});
  EXPECT_EQ(tampered.code, kExitFailed);

  const auto forced =
      invoke({"oracle", "--regen-fixtures", "--force", "--data-dir", dir.string(), "--d-max", "12"});
  EXPECT_EQ(forced.code, kExitOk);
  EXPECT_EQ(slurp(dir / oracle::kHdFixtureFile), before);
}

TEST(Oracle, RequiresFlag) {
  EXPECT_EQ(invoke({"oracle"}).code, kExitUsage);
}

TEST(Output, WritesFile) {
  const fs::path dir = temp_dir("output");
  const fs::path file = dir / "report.json";
  const auto r = invoke({"--output", file.string(), "bounds", "--d", "2", "--n", "4", "--s", "4"});
  ASSERT_EQ(r.code, kExitOk);
  EXPECT_TRUE(r.out.empty());
  const Json j = Json::parse(slurp(file));
  EXPECT_EQ(j["params"]["d"], 2);
  EXPECT_EQ(manifest_from_json(j).command, "bounds");
}
