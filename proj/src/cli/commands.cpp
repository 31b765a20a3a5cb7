#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "cli/ranges.hpp"
#include "entlab/experiments.hpp"
#include "entlab/fixtures.hpp"
#include "entlab/parallel.hpp"
#include "entlab/randq.hpp"
#include "entlab/stats.hpp"
#include "oracle/oracle.hpp"

#ifndef ENTLAB_DATA_DIR
#define ENTLAB_DATA_DIR "data"
#endif

namespace entlab::cli {

namespace fs = std::filesystem;

std::string default_data_dir() { return ENTLAB_DATA_DIR; }

namespace {

constexpr double kDriftTolerance = 1e-9;

int to_dim(long long v, const char* flag) {
  if (v < 1 || v > 1000000) {
    throw UsageError(std::string(flag) + " must lie in [1, 1000000], got " + std::to_string(v));
  }
  return static_cast<int>(v);
}

std::vector<int> dims_from(const std::string& text, const char* flag) {
  std::vector<int> out;
  for (long long v : parse_int_range(text)) out.push_back(to_dim(v, flag));
  return out;
}

// Numbers stay numbers in the manifest; range strings like 2:8:*2 stay text.
Json scalar(const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) return text;
  if (text.find_first_of(".eE") == std::string::npos && std::abs(v) < 9e15) {
    return static_cast<long long>(v);
  }
  return v;
}

Json params_of(const CLI::App& sub) {
  Json params = Json::object();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_name(false, true);
    if (name.empty() || name == "--help" || name == "-h") continue;
    const std::string key = opt->get_lnames().empty() ? name : opt->get_lnames().front();
    if (opt->get_items_expected_max() == 0) {
      params[key] = opt->count() > 0;
    } else if (opt->count() > 0) {
      const auto& res = opt->results();
      params[key] = res.size() == 1 ? scalar(res.front()) : Json(res);
    } else if (!opt->get_default_str().empty()) {
      params[key] = scalar(opt->get_default_str());
    }
  }
  return params;
}

// -- bounds ---------------------------------------------------------------

struct BoundsFlags {
  std::string d;
  std::string n;
  std::string s;
  std::optional<double> gamma;
  std::optional<double> h;
  std::optional<double> eps;
  bool violation = false;
  std::string fixtures;
};

Json vacuity(const std::optional<double>& v) {
  if (!v) return nullptr;
  return *v <= 0.0;
}

int cmd_bounds(const BoundsFlags& f, RunManifest& m) {
  if (f.d.empty()) throw UsageError("bounds requires --d");
  if (f.gamma && !(*f.gamma > 0.0 && *f.gamma < 1.0)) throw UsageError("--gamma must lie in (0, 1)");
  if (f.h && !(*f.h > 0.0)) throw UsageError("--h must be positive");
  if (f.eps && !(*f.eps > 0.0 && *f.eps < 0.5)) throw UsageError("--eps must lie in (0, 1/2)");
  const std::vector<int> ds = dims_from(f.d, "--d");

  if (f.violation) {
    const std::string path =
        f.fixtures.empty() ? (fs::path(default_data_dir()) / oracle::kHdFixtureFile).string()
                           : f.fixtures;
    const std::vector<HdFixtureRow> table = load_hd_fixtures(path);
    std::map<int, HdFixtureRow> by_d;
    for (const auto& r : table) by_d[r.d] = r;
    bool marked = false;
    for (int d : ds) {
      if (d < 2) throw UsageError("--violation needs d >= 2");
      const auto it = by_d.find(d);
      const bool from_table = it != by_d.end();
      const double h = from_table ? it->second.h_d11 : bounds::h_d(1.0, 1.0, d).value;
      const auto v = bounds::violation_lower(d, h);
      const bool first = v.positive && !marked;
      marked = marked || v.positive;
      m.results.push_back(Json{{"kind", "violation"},
                               {"d", d},
                               {"h_d11", round12(h)},
                               {"source", from_table ? "fixture" : "live"},
                               {"violation_lower", round12(v.value)},
                               {"threshold", round12(v.threshold)},
                               {"positive", v.positive},
                               {"first_positive", first}});
    }
    const auto first = first_violating_d(table);
    Json summary{{"kind", "first_violation"}};
    if (first) {
      summary["d"] = first->d;
      summary["h_d11"] = round12(first->h_d11);
      summary["threshold"] = round12(first->threshold);
      summary["source"] = first->from_table ? "fixture" : "live";
    } else {
      summary["d"] = nullptr;
    }
    double h_max = 0.0;
    for (const auto& r : table) h_max = std::max(h_max, r.h_d11);
    summary["max_h_d11_in_table"] = round12(h_max);
    m.results.push_back(summary);
    return kExitOk;
  }

  if (f.n.empty() || f.s.empty()) throw UsageError("bounds requires --d, --n and --s");
  const std::vector<int> ns = dims_from(f.n, "--n");
  const std::vector<int> ss = dims_from(f.s, "--s");
  for (int d : ds) {
    for (int n : ns) {
      for (int s : ss) {
        if (static_cast<long long>(s) > static_cast<long long>(n) * d) {
          throw UsageError("s = " + std::to_string(s) + " exceeds n d = " +
                           std::to_string(static_cast<long long>(n) * d));
        }
      }
    }
  }
  for (int d : ds) {
    for (int n : ns) {
      for (int s : ss) {
        const auto r = bounds::bound_report({static_cast<double>(s), n, d, f.gamma, f.h, f.eps});
        m.results.push_back(bound_report_json(r, s, n, d));
      }
    }
  }
  return kExitOk;
}

// -- verify ---------------------------------------------------------------

struct VerifyFlags {
  std::string suite;
  std::uint64_t seed = 0;
  std::string s;
  std::string n;
  std::string d;
  std::optional<int> trials;
  std::string t;
  std::optional<double> gamma;
  std::optional<int> channels;
};

std::vector<int> dims_or(const std::string& text, const char* flag, std::vector<int> fallback) {
  return text.empty() ? fallback : dims_from(text, flag);
}

int first_or(const std::string& text, const char* flag, int fallback) {
  return text.empty() ? fallback : dims_from(text, flag).front();
}

using Results = std::vector<CampaignResult>;

CampaignResult negative_control(CampaignResult r) {
  r.name = "negative control: " + r.name;
  r.details.emplace_back("underlying_pass", r.pass ? 1.0 : 0.0);
  r.pass = !r.pass;
  return r;
}

Results suite_overlap(const VerifyFlags& f) {
  const auto ss = dims_or(f.s, "--s", {2, 4, 8, 16});
  const auto ts = f.t.empty() ? std::vector<double>{0.1, 0.3, 0.5, 0.7} : parse_real_list(f.t);
  for (double t : ts) {
    if (!(t >= 0.0 && t <= 1.0)) throw UsageError("--t values must lie in [0, 1]");
  }
  Results out;
  for (int s : ss) {
    for (auto& r : overlap_law_campaign(s, ts, f.trials.value_or(100000), f.seed)) {
      out.push_back(std::move(r));
    }
  }
  return out;
}

void check_spectrum_dims(const std::vector<int>& ds, const std::vector<int>& ns) {
  for (int d : ds) {
    if (d != 2 && d != 3) throw UsageError("spectrum suite supports d in {2, 3}, got " + std::to_string(d));
    for (int n : ns) {
      if (n < d) throw UsageError("spectrum suite needs n >= d");
    }
  }
}

Results suite_spectrum(const VerifyFlags& f) {
  const auto ds = dims_or(f.d, "--d", {2});
  const auto ns = dims_or(f.n, "--n", {2, 4});
  check_spectrum_dims(ds, ns);
  const int trials = f.trials.value_or(20000);
  Results out;
  for (int d : ds) {
    for (int n : ns) out.push_back(spectrum_law_campaign(d, n, trials, f.seed));
  }
  out.push_back(negative_control(
      spectrum_law_campaign(ds.front(), ns.back(), trials, f.seed, ns.back() + 1)));
  return out;
}

Results suite_pushforward(const VerifyFlags& f) {
  std::vector<Dims> cases{{3, 4, 2}, {2, 3, 3}};
  if (!f.s.empty() || !f.n.empty() || !f.d.empty()) {
    cases = {{first_or(f.s, "--s", 3), first_or(f.n, "--n", 4), first_or(f.d, "--d", 2)}};
  }
  for (const auto& c : cases) {
    if (static_cast<long long>(c.s) > static_cast<long long>(c.n) * c.d) throw UsageError("pushforward needs s <= n d");
  }
  Results out;
  for (const auto& c : cases) {
    out.push_back(pushforward_campaign(c.s, c.n, c.d, f.trials.value_or(20000), f.seed));
  }
  return out;
}

Results suite_tube(const VerifyFlags& f) {
  const int s = first_or(f.s, "--s", 16);
  const int n = first_or(f.n, "--n", 16);
  const int d = first_or(f.d, "--d", 2);
  const double gamma = f.gamma.value_or(0.1);
  if (!(gamma > 0.0 && gamma < 1.0)) throw UsageError("--gamma must lie in (0, 1)");
  if (s < 2 || static_cast<long long>(s) > static_cast<long long>(n) * d) throw UsageError("tube suite needs 2 <= s <= n d");
  if (!bounds::tube_feasibility(d, s).feasible) {
    throw UsageError("tube suite: feasibility condition fails for this (d, s)");
  }
  return {tube_fraction_campaign(s, n, d, gamma, f.trials.value_or(20000), f.seed)};
}

Results suite_typicality(const VerifyFlags& f) {
  const int s = first_or(f.s, "--s", 8);
  const int n = first_or(f.n, "--n", 200);
  const int d = first_or(f.d, "--d", 2);
  if (n <= d) throw UsageError("typicality suite needs n > d");
  if (static_cast<long long>(s) > static_cast<long long>(n) * d) throw UsageError("typicality suite needs s <= n d");
  return {typicality_campaign(s, n, d, f.channels.value_or(200), f.trials.value_or(2000), f.seed)};
}

Results suite_inequalities(const VerifyFlags& f) {
  Results out = inequality_suite(f.trials.value_or(100000), f.seed);
  for (const Dims& c : {Dims{4, 4, 2}, Dims{6, 4, 2}, Dims{4, 8, 2}}) {
    out.push_back(product_bound_campaign(c.s, c.n, c.d, f.channels.value_or(200), f.seed));
  }
  return out;
}

CampaignResult zero_entropy_check(const std::string& name, const ChannelPair& ch,
                                  std::uint64_t seed) {
  TrialConfig cfg;
  cfg.seed = seed;
  const auto res = estimate_min_output_entropy(ch, Side::conjugate, cfg);
  CampaignResult r{name, res.value, 0.0, 0.0, std::abs(res.value) <= 1e-6, cfg.optimizer.probes,
                   0.0, {}};
  r.details = {{"aborted_restarts", res.aborted_restarts}};
  return r;
}

Results suite_gradient(const VerifyFlags& f) {
  const Dims dims{first_or(f.s, "--s", 4), first_or(f.n, "--n", 6), first_or(f.d, "--d", 2)};
  if (static_cast<long long>(dims.s) > static_cast<long long>(dims.n) * dims.d) throw UsageError("gradient suite needs s <= n d");
  const int trials = f.trials.value_or(100);
  Results out{gradient_check(dims, trials, f.seed),
              negative_control(gradient_check(dims, trials, f.seed, true))};
  RngStream rng(f.seed, 0);
  out.push_back(zero_entropy_check("min entropy s=nd (4,2,2)",
                                   ChannelPair(random_isometry(4, 2, 2, rng)), f.seed));
  out.push_back(zero_entropy_check("min entropy s=1 product image (1,5,3)",
                                   ChannelPair(coordinate_embedding(1, 5, 3)), f.seed));
  return out;
}

const std::map<std::string, std::function<Results(const VerifyFlags&)>>& suites() {
  static const std::map<std::string, std::function<Results(const VerifyFlags&)>> table{
      {"overlap", suite_overlap},         {"spectrum", suite_spectrum},
      {"pushforward", suite_pushforward}, {"tube", suite_tube},
      {"typicality", suite_typicality},   {"inequalities", suite_inequalities},
      {"gradient", suite_gradient}};
  return table;
}

int cmd_verify(const VerifyFlags& f, RunManifest& m) {
  if (f.trials && *f.trials < 1) throw UsageError("--trials must be >= 1");
  if (f.channels && *f.channels < 1) throw UsageError("--channels must be >= 1");
  std::vector<std::string> names;
  if (f.suite == "all") {
    names = {"overlap", "spectrum", "pushforward", "tube", "typicality", "inequalities", "gradient"};
  } else {
    names = {f.suite};
  }
  if (f.suite == "spectrum") check_spectrum_dims(dims_or(f.d, "--d", {2}), dims_or(f.n, "--n", {2, 4}));
  bool all_pass = true;
  for (const auto& name : names) {
    for (const auto& r : suites().at(name)(f)) {
      Json j = to_json(r);
      j["suite"] = name;
      m.results.push_back(std::move(j));
      all_pass = all_pass && r.pass;
    }
  }
  return all_pass ? kExitOk : kExitFailed;
}

// -- minent ---------------------------------------------------------------

struct MinentFlags {
  int s = 0;
  int n = 0;
  int d = 0;
  int restarts = 20;
  int probes = 1000;
  int channels = 1;
  int max_iters = 500;
  double grad_tol = 1e-8;
  std::uint64_t seed = 0;
  bool product = false;
  bool bits = false;
};

int cmd_minent(const MinentFlags& f, RunManifest& m) {
  if (f.s < 1 || f.n < 1 || f.d < 1) throw UsageError("--s, --n and --d must be >= 1");
  if (static_cast<long long>(f.s) > static_cast<long long>(f.n) * f.d) throw UsageError("minent needs s <= n d");
  if (f.restarts < 1 || f.probes < 1 || f.channels < 1) {
    throw UsageError("--restarts, --probes and --channels must be >= 1");
  }
  if (!(f.grad_tol > 0.0)) throw UsageError("--grad-tol must be positive");
  if (f.product && static_cast<long long>(f.s) * f.s > kProductDimCap) {
    throw UsageError("--product needs s^2 <= " + std::to_string(kProductDimCap));
  }
  const double unit = f.bits ? std::log(2.0) : 1.0;
  TrialConfig cfg;
  cfg.dims = {f.s, f.n, f.d};
  cfg.optimizer.restarts = f.restarts;
  cfg.optimizer.probes = f.probes;
  cfg.optimizer.max_iters = f.max_iters;
  cfg.optimizer.grad_tol = f.grad_tol;

  const double p = static_cast<double>(f.s) / (static_cast<double>(f.n) * f.d);
  std::optional<double> prod_upper;
  if (static_cast<long long>(f.s) * f.d >= f.n) prod_upper = bounds::prod_entropy_upper(f.s, f.d, f.n);

  std::vector<double> values;
  for (int c = 0; c < f.channels; ++c) {
    // Channel c uses stream (seed, c) for W and seed + c + 1 for its optimizer.
    RngStream rng(f.seed, static_cast<std::uint64_t>(c));
    const Isometry w = random_isometry(f.s, f.n, f.d, rng);
    cfg.seed = f.seed + static_cast<std::uint64_t>(c) + 1;
    const auto res = estimate_min_output_entropy(ChannelPair(w), Side::conjugate, cfg);
    values.push_back(res.value);
    Json row{{"kind", "channel"},
             {"index", c},
             {"E_C", round12(res.value / unit)},
             {"probe_min", round12(res.probe_min / unit)},
             {"restarts_run", res.restarts_run},
             {"aborted_restarts", res.aborted_restarts}};
    if (f.product) {
      const auto pe = estimate_product_entropy(w, cfg);
      row["product_at_max_entangled"] = round12(pe.value_at_max_entangled / unit);
      row["product_optimized"] = round12(pe.optimized_value / unit);
      row["delta_s"] = round12((2.0 * res.value - pe.optimized_value) / unit);
      row["largest_eigenvalue"] = round12(pe.largest_eigenvalue);
      row["largest_eigenvalue_bound_holds"] = pe.largest_eigenvalue >= p - 1e-9;
      row["prod_upper"] = number_or_null(prod_upper ? std::optional<double>(*prod_upper / unit)
                                                    : std::nullopt);
      row["prod_upper_holds"] =
          prod_upper ? Json(pe.value_at_max_entangled <= *prod_upper + 1e-9) : Json(nullptr);
    }
    m.results.push_back(std::move(row));
  }

  Json summary{{"kind", "summary"},
               {"unit", f.bits ? "bits" : "nats"},
               {"min", round12(*std::min_element(values.begin(), values.end()) / unit)},
               {"median", round12(stats::median(values) / unit)},
               {"max", round12(*std::max_element(values.begin(), values.end()) / unit)},
               {"log_d", round12(std::log(static_cast<double>(f.d)) / unit)}};
  const auto report = bounds::bound_report({static_cast<double>(f.s), f.n, f.d, {}, {}, {}});
  const auto scaled = [unit](const std::optional<double>& v) {
    return number_or_null(v ? std::optional<double>(*v / unit) : std::nullopt);
  };
  summary["thm1_rhs"] = scaled(report.thm1_rhs);
  summary["thm2_rhs"] = scaled(report.thm2_rhs);
  summary["hlw"] = scaled(report.hlw);
  summary["h_d_value"] = number_or_null(report.h_d_value);
  summary["h0_value"] = round12(report.h0_value);
  // Reported for trend plots over n only; the bounds are asymptotic.
  const double e_min = *std::min_element(values.begin(), values.end());
  summary["gap_min_minus_thm1"] = scaled(report.thm1_rhs ? std::optional<double>(e_min - *report.thm1_rhs)
                                                         : std::nullopt);
  summary["gap_min_minus_thm2"] = scaled(report.thm2_rhs ? std::optional<double>(e_min - *report.thm2_rhs)
                                                         : std::nullopt);
  if (f.product && f.d >= 2) {
    const double hd11 = bounds::h_d(1.0, 1.0, f.d).value;
    summary["ineq3_lower"] = round12(bounds::violation_lower(f.d, hd11).value / unit);
    summary["delta_s_lower_general"] = scaled(report.delta_s_lower);
  }
  m.results.push_back(std::move(summary));
  return kExitOk;
}

// -- oracle ---------------------------------------------------------------

struct OracleFlags {
  bool regen = false;
  std::string data_dir;
  std::string out_dir;
  bool force = false;
  int d_max = 200;
};

std::optional<std::string> read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

double mu_drift(const std::vector<oracle::MuCdfPoint>& a,
                const std::vector<oracle::MuCdfPoint>& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max({worst, std::abs(a[i].w - b[i].w), std::abs(a[i].cdf - b[i].cdf)});
  }
  return worst;
}

int cmd_oracle(const OracleFlags& f, RunManifest& m) {
  if (!f.regen) throw UsageError("oracle requires --regen-fixtures");
  if (f.d_max < 2) throw UsageError("--d-max must be >= 2");
  const fs::path dir = f.data_dir.empty() ? fs::path(default_data_dir()) : fs::path(f.data_dir);
  bool drift_found = false;

  const auto handle = [&](const std::string& file, const std::string& text,
                          const std::function<double(const std::string&)>& drift_of) {
    const fs::path path = dir / file;
    const auto existing = read_file(path);
    Json row{{"file", file}};
    if (existing && !f.force) {
      double drift = 0.0;
      try {
        drift = drift_of(*existing);
      } catch (const std::exception&) {
        drift = std::numeric_limits<double>::infinity();
      }
      const bool identical = *existing == text;
      row["status"] = identical ? "identical" : (drift <= kDriftTolerance ? "within_tolerance" : "drift");
      row["max_drift"] = std::isfinite(drift) ? Json(round12(drift)) : Json("unparseable");
      drift_found = drift_found || drift > kDriftTolerance;
    } else {
      write_file(path, text);
      row["status"] = existing ? "overwritten" : "written";
      row["max_drift"] = nullptr;
    }
    if (!f.out_dir.empty()) write_file(fs::path(f.out_dir) / file, text);
    m.results.push_back(std::move(row));
  };

  const auto rows = oracle::hd11_table(2, f.d_max);
  const std::string hd_text = hd_fixtures_text(rows);
  handle(oracle::kHdFixtureFile, hd_text, [&](const std::string& existing) {
    return fixture_drift(parse_hd_fixtures(existing), parse_hd_fixtures(hd_text));
  });
  for (const auto& [d, n] : oracle::mu_table_cases()) {
    const auto table = oracle::mu_cdf_grid(d, n);
    const std::string text = oracle::mu_table_text(table);
    handle(oracle::mu_table_filename(d, n), text, [&](const std::string& existing) {
      return mu_drift(oracle::parse_mu_table(existing), oracle::parse_mu_table(text));
    });
  }
  return drift_found ? kExitFailed : kExitOk;
}

void emit(const RunManifest& m, const std::string& format, const std::string& output,
          std::ostream& out) {
  const std::string text =
      format == "csv" ? results_csv(m.results) : to_json(m).dump(2) + "\n";
  if (output.empty()) {
    out << text;
  } else {
    std::ofstream file(output, std::ios::binary | std::ios::trunc);
    if (!file) throw UsageError("cannot open --output " + output);
    file << text;
  }
}

}  // namespace

Json bound_report_json(const bounds::BoundReport& r, double s, int n, int d) {
  Json j{{"kind", "bounds"},
         {"s", s},
         {"n", n},
         {"d", d},
         {"p_ratio", round12(r.p_ratio)},
         {"hlw", number_or_null(r.hlw)},
         {"thm1_rhs", number_or_null(r.thm1_rhs)},
         {"thm2_rhs", number_or_null(r.thm2_rhs)},
         {"prod_upper", number_or_null(r.prod_upper)},
         {"delta_s_lower", number_or_null(r.delta_s_lower)},
         {"h_d_value", number_or_null(r.h_d_value)},
         {"h_d_gamma", number_or_null(r.h_d_gamma)},
         {"h0_value", round12(r.h0_value)},
         {"eta", number_or_null(r.eta)},
         {"eps_m", number_or_null(r.eps_m)},
         {"tube_radius", round12(r.tube_radius)},
         {"hastings_lhs", number_or_null(r.hastings_lhs)},
         {"hlw_crossover_ratio", number_or_null(r.hlw_crossover_ratio)},
         {"crossover_h", round12(r.crossover_h)},
         {"corollary_value", number_or_null(r.corollary_value)},
         {"corollary_n", r.corollary_n ? Json(*r.corollary_n) : Json(nullptr)},
         {"h_thm1", round12(r.h_thm1)},
         {"h_thm2", round12(r.h_thm2)},
         {"gamma", number_or_null(r.gamma_used)}};
  j["vacuous"] = Json{{"hlw", vacuity(r.hlw)},
                      {"thm1", vacuity(r.thm1_rhs)},
                      {"thm2", vacuity(r.thm2_rhs)}};
  j["hlw_constants_approximate"] = true;
  return j;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bounds and Monte Carlo checks for entanglement of random subspaces"};
  app.name("entlab");
  // --h is a bounds flag, so help is long-form only.
  app.set_help_flag("--help", "print this help");
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  std::string output;
  app.add_option("--format", format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  app.add_option("--output", output, "write the report here instead of stdout");

  BoundsFlags bf;
  auto* bounds_cmd = app.add_subcommand("bounds", "bound table over (s, n, d)");
  bounds_cmd->add_option("--d", bf.d, "d or a range lo:hi:*k / lo:hi:+k");
  bounds_cmd->add_option("--n", bf.n, "n or a range");
  bounds_cmd->add_option("--s", bf.s, "s or a range");
  bounds_cmd->add_option("--gamma", bf.gamma);
  bounds_cmd->add_option("--h", bf.h);
  bounds_cmd->add_option("--eps", bf.eps);
  bounds_cmd->add_flag("--violation", bf.violation, "violation lower bound per d");
  bounds_cmd->add_option("--fixtures", bf.fixtures, "h_d(1,1) table to read");

  VerifyFlags vf;
  auto* verify_cmd = app.add_subcommand("verify", "Monte Carlo verification suites");
  verify_cmd->add_option("--suite", vf.suite)
      ->required()
      ->check(CLI::IsMember({"overlap", "spectrum", "pushforward", "tube", "typicality",
                             "inequalities", "gradient", "all"}));
  verify_cmd->add_option("--seed", vf.seed)->required();
  verify_cmd->add_option("--s", vf.s);
  verify_cmd->add_option("--n", vf.n);
  verify_cmd->add_option("--d", vf.d);
  verify_cmd->add_option("--trials", vf.trials);
  verify_cmd->add_option("--t", vf.t, "comma list of thresholds");
  verify_cmd->add_option("--gamma", vf.gamma);
  verify_cmd->add_option("--channels", vf.channels, "embeddings per campaign");

  MinentFlags mf;
  auto* minent_cmd = app.add_subcommand("minent", "minimal output entropy of sampled channels");
  minent_cmd->add_option("--s", mf.s)->required();
  minent_cmd->add_option("--n", mf.n)->required();
  minent_cmd->add_option("--d", mf.d)->required();
  minent_cmd->add_option("--restarts", mf.restarts)->capture_default_str();
  minent_cmd->add_option("--probes", mf.probes)->capture_default_str();
  minent_cmd->add_option("--channels", mf.channels)->capture_default_str();
  minent_cmd->add_option("--max-iters", mf.max_iters)->capture_default_str();
  minent_cmd->add_option("--grad-tol", mf.grad_tol)->capture_default_str();
  minent_cmd->add_option("--seed", mf.seed)->capture_default_str();
  minent_cmd->add_flag("--product", mf.product, "also estimate the product channel");
  minent_cmd->add_flag("--bits", mf.bits, "report entropies in bits");

  OracleFlags of;
  auto* oracle_cmd = app.add_subcommand("oracle", "regenerate reference tables");
  oracle_cmd->add_flag("--regen-fixtures", of.regen);
  oracle_cmd->add_option("--data-dir", of.data_dir, "directory of the checked-in tables");
  oracle_cmd->add_option("--out", of.out_dir, "also write regenerated tables here");
  oracle_cmd->add_flag("--force", of.force, "overwrite instead of comparing");
  oracle_cmd->add_option("--d-max", of.d_max)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  RunManifest m;
  m.started = utc_now();
  int code = kExitOk;
  try {
    if (bounds_cmd->parsed()) {
      m.command = "bounds";
      m.params = params_of(*bounds_cmd);
      code = cmd_bounds(bf, m);
    } else if (verify_cmd->parsed()) {
      m.command = "verify";
      m.params = params_of(*verify_cmd);
      m.seed = vf.seed;
      code = cmd_verify(vf, m);
    } else if (minent_cmd->parsed()) {
      m.command = "minent";
      m.params = params_of(*minent_cmd);
      m.seed = mf.seed;
      code = cmd_minent(mf, m);
    } else {
      m.command = "oracle";
      m.params = params_of(*oracle_cmd);
      code = cmd_oracle(of, m);
    }
    m.params["format"] = format;
    m.params["LAB_THREADS"] = static_cast<int>(worker_count());
  } catch (const UsageError& e) {
    err << "entlab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "entlab: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "entlab: " << e.what() << "\n";
    return kExitFailed;
  }
  m.finished = utc_now();
  try {
    emit(m, format, output, out);
  } catch (const UsageError& e) {
    err << "entlab: " << e.what() << "\n";
    return kExitUsage;
  }
  return code;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv{"entlab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace entlab::cli
