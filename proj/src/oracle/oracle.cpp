#include "oracle/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "entlab/bounds.hpp"
#include "entlab/randq.hpp"

namespace entlab::oracle {

namespace {

// z = 1 + (d-1)/(1 + e^-tau), so that both z - 1 and d - z are formed
// without cancellation.
struct CurveSample {
  double h;
  double g;
};

double log1p_exp(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

CurveSample sample(double tau, int d) {
  const double dm1 = d - 1.0;
  const double a = dm1 / (1.0 + std::exp(-tau));
  const double log_z = std::log1p(a);
  const double log_rel = -log1p_exp(tau);
  const double b = dm1 * std::exp(log_rel);
  return {(1.0 + a) * log_z + b * log_rel, -log_z - dm1 * log_rel};
}

double objective(double tau, int d) {
  const CurveSample p = sample(tau, d);
  const double f = -std::expm1(-p.g) - p.g * std::exp(-p.g);
  return p.h / f;
}

double tau_for_g(double target, int d) {
  double lo = -60.0;
  double hi = 60.0;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (sample(mid, d).g < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct Scan {
  double value;
  double tau;
  double lo;
  double hi;
};

Scan scan(int d, double lo, double hi, int points) {
  const double step = (hi - lo) / (points - 1);
  int best = 0;
  double best_val = objective(lo, d);
  for (int i = 1; i < points; ++i) {
    const double v = objective(i + 1 == points ? hi : lo + i * step, d);
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  const double tau = best + 1 == points ? hi : lo + best * step;
  return {best_val, tau, std::max(lo, tau - step), std::min(hi, tau + step)};
}

}  // namespace

HdFixtureRow hd11_grid(int d, int grid_points, int zoom_points) {
  if (d < 2) throw std::invalid_argument("hd11_grid requires d >= 2");
  const double tau_lo = tau_for_g(-std::log1p(-bounds::kGammaMin), d);
  const double tau_hi = tau_for_g(-std::log1p(-bounds::kGammaMax), d);
  Scan s = scan(d, tau_lo, tau_hi, grid_points);
  for (int stage = 0; stage < 2; ++stage) {
    const Scan z = scan(d, s.lo, s.hi, zoom_points);
    if (z.value <= s.value) s = z;
  }
  const double g = sample(s.tau, d).g;
  return {d, s.value, -std::expm1(-g)};
}

std::vector<HdFixtureRow> hd11_table(int d_lo, int d_hi) {
  std::vector<HdFixtureRow> rows;
  for (int d = d_lo; d <= d_hi; ++d) rows.push_back(hd11_grid(d));
  return rows;
}

std::vector<MuCdfPoint> mu_cdf_grid(int d, int n, int table_points, int cells) {
  if (d != 2 && d != 3) throw std::invalid_argument("mu_cdf_grid supports d in {2, 3}");
  if (n < d) throw std::invalid_argument("mu_cdf_grid requires n >= d");
  const double w0 = 1.0 / d;
  const double span = 1.0 - w0;
  const int bins = table_points - 1;
  std::vector<double> mass(static_cast<std::size_t>(bins), 0.0);
  const auto deposit = [&](double largest, double density) {
    int k = static_cast<int>(std::ceil((largest - w0) / span * bins)) - 1;
    k = std::clamp(k, 0, bins - 1);
    mass[static_cast<std::size_t>(k)] += density;
  };
  const double h = 1.0 / cells;
  if (d == 2) {
    for (int i = 0; i < cells; ++i) {
      const double x = (i + 0.5) * h;
      const double dens = std::exp(mu_log_density(std::vector<double>{x, 1.0 - x}, n));
      deposit(std::max(x, 1.0 - x), dens);
    }
  } else {
    for (int i = 0; i < cells; ++i) {
      const double x = (i + 0.5) * h;
      for (int j = 0; i + j + 1 < cells; ++j) {
        const double y = (j + 0.5) * h;
        const double w = 1.0 - x - y;
        if (w <= 0.0) continue;
        const double dens = std::exp(mu_log_density(std::vector<double>{x, y, w}, n));
        deposit(std::max({x, y, w}), dens);
      }
    }
  }
  double total = 0.0;
  for (double m : mass) total += m;
  std::vector<MuCdfPoint> table;
  table.reserve(static_cast<std::size_t>(table_points));
  table.push_back({w0, 0.0});
  double acc = 0.0;
  for (int k = 0; k < bins; ++k) {
    acc += mass[static_cast<std::size_t>(k)];
    const double w = k + 1 == bins ? 1.0 : w0 + span * (k + 1) / bins;
    table.push_back({w, k + 1 == bins ? 1.0 : acc / total});
  }
  return table;
}

std::vector<std::pair<int, int>> mu_table_cases() {
  return {{2, 2}, {2, 3}, {2, 4}, {3, 3}, {3, 4}};
}

std::string mu_table_text(const std::vector<MuCdfPoint>& table) {
  std::string out = "w\tcdf\n";
  for (const auto& p : table) {
    out += format_sig12(p.w) + "\t" + format_sig12(p.cdf) + "\n";
  }
  return out;
}

std::vector<MuCdfPoint> parse_mu_table(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "w\tcdf") {
    throw std::runtime_error("mu table: missing or wrong header");
  }
  std::vector<MuCdfPoint> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    MuCdfPoint p{};
    if (!(fields >> p.w >> p.cdf)) throw std::runtime_error("mu table: malformed line");
    out.push_back(p);
  }
  return out;
}

std::string mu_table_filename(int d, int n) {
  return "mu_cdf_d" + std::to_string(d) + "_n" + std::to_string(n) + ".tsv";
}

}  // namespace entlab::oracle
