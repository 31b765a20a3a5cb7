#include "entlab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace entlab::bounds {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEndpointGap = 1e-14;
constexpr int kBisectionCap = 200;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::domain_error(what);
}

// Points on the constraint curve are parameterized by
// q = log((d - z)/(d - 1)) in (-inf, 0], which resolves both ends of [1, d)
// to full relative precision. Both h and g decrease in q.
struct CurvePoint {
  double z;
  double h;
  double g;
};

CurvePoint curve_point(double q, int d) {
  const double dm1 = d - 1.0;
  const double z = 1.0 - dm1 * std::expm1(q);
  const double log_z = std::log1p(-dm1 * std::expm1(q));
  return {z, z * log_z + dm1 * std::exp(q) * q, -log_z - dm1 * q};
}

double q_of_z(double z, int d) { return std::log1p(-(z - 1.0) / (d - 1.0)); }
double q_near_one(int d) { return q_of_z(1.0 + kEndpointGap, d); }
double q_near_d(int d) { return std::log(kEndpointGap / (d - 1.0)); }

// Solves value(q) = target for decreasing value() on [q_near_d, q_near_one]
// by bisection until the interval stops shrinking.
template <typename Value>
double bisect_curve(int d, double target, Value value) {
  double lo = q_near_d(d);
  double hi = q_near_one(d);
  for (int it = 0; it < kBisectionCap; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (value(curve_point(mid, d)) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// f(1 - gamma) with u = -log(1 - gamma).
double f_of_one_minus_gamma(double u) {
  return -std::expm1(-u) - u * std::exp(-u);
}

double u_of_gamma(double gamma) { return -std::log1p(-gamma); }
double gamma_of_u(double u) { return -std::expm1(-u); }

}  // namespace

double f_func(double x) {
  require(x >= 0.0, "f_func requires x >= 0");
  if (x == 0.0) return 1.0;
  return x * std::log(x) - x + 1.0;
}

double F_func(double x) {
  require(x > 0.0, "F_func requires x > 0");
  return -std::log(x) + x - 1.0;
}

double h_constraint(double z, int d) {
  require(d >= 2, "h_constraint requires d >= 2");
  require(z >= 1.0 && z < d, "h_constraint requires 1 <= z < d");
  const double t = z - 1.0;
  return z * std::log1p(t) + (d - z) * std::log1p(-t / (d - 1.0));
}

double g_objective(double z, int d) {
  require(d >= 2, "g_objective requires d >= 2");
  require(z >= 1.0 && z < d, "g_objective requires 1 <= z < d");
  const double t = z - 1.0;
  return -std::log1p(t) - (d - 1.0) * std::log1p(-t / (d - 1.0));
}

double m_d(double y, int d) {
  require(d >= 2, "m_d requires d >= 2");
  require(y >= 0.0 && y < d * std::log(static_cast<double>(d)),
          "m_d: y = " + std::to_string(y) + " outside [0, d log d)");
  if (y == 0.0) return 0.0;
  const double q = bisect_curve(d, y, [](const CurvePoint& p) { return p.h; });
  return curve_point(q, d).g;
}

double m_d_inv_max(int d) { return curve_point(q_near_d(d), d).g; }

double m_d_inv(double w, int d) {
  require(d >= 2, "m_d_inv requires d >= 2");
  require(w >= 0.0 && w <= m_d_inv_max(d),
          "m_d_inv: w = " + std::to_string(w) + " outside the range of g");
  if (w == 0.0) return 0.0;
  const double q = bisect_curve(d, w, [](const CurvePoint& p) { return p.g; });
  return curve_point(q, d).h;
}

Minimum minimize_grid_golden(const std::function<double(double)>& objective,
                             double lo, double hi, int grid_points, double tol) {
  require(lo > 0.0 && hi > lo, "minimize_grid_golden needs 0 < lo < hi");
  require(grid_points >= 3, "minimize_grid_golden needs at least 3 points");
  const auto eval = [&](double x) {
    const double v = objective(x);
    return std::isfinite(v) ? v : kInf;
  };
  const double log_ratio = std::log(hi / lo);
  const auto grid_x = [&](int i) {
    if (i == 0) return lo;
    if (i == grid_points - 1) return hi;
    return lo * std::exp(log_ratio * i / (grid_points - 1));
  };
  int best = 0;
  double best_val = kInf;
  for (int i = 0; i < grid_points; ++i) {
    const double v = eval(grid_x(i));
    if (v < best_val) {
      best_val = v;
      best = i;
    }
  }
  Minimum result{best_val, grid_x(best)};
  if (!std::isfinite(best_val)) return result;

  double a = grid_x(std::max(best - 1, 0));
  double b = grid_x(std::min(best + 1, grid_points - 1));
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double e = a + inv_phi * (b - a);
  double fc = eval(c);
  double fe = eval(e);
  for (int it = 0; it < 500 && b - a > tol; ++it) {
    if (fc <= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - inv_phi * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + inv_phi * (b - a);
      fe = eval(e);
    }
  }
  for (const double x : {c, e, 0.5 * (a + b)}) {
    const double v = eval(x);
    if (v < result.value) result = {v, x};
  }
  return result;
}

HdResult h_d(double x, double y, int d) {
  require(x > 0.0 && y > 0.0, "h_d requires x, y > 0");
  require(d >= 2, "h_d requires d >= 2");
  const double w_max = m_d_inv_max(d);
  const auto phi = [&](double u) {
    const double w = u * y;
    if (w > w_max) return kInf;
    return m_d_inv(w, d) / (x * f_of_one_minus_gamma(u));
  };
  const double u_lo = u_of_gamma(kGammaMin);
  const double u_hi = u_of_gamma(kGammaMax);
  const Minimum m = minimize_grid_golden(phi, u_lo, u_hi);
  const double edge = 1e-6 * (u_hi - u_lo);
  const bool boundary = m.argmin - u_lo < edge || u_hi - m.argmin < edge;
  return {m.value, gamma_of_u(m.argmin), boundary};
}

double h0_objective(double gamma) {
  require(gamma > 0.0 && gamma < 1.0, "h0 objective needs gamma in (0, 1)");
  const double u = u_of_gamma(gamma);
  return u / f_of_one_minus_gamma(u);
}

Minimum h0() {
  const auto obj = [](double u) { return u / f_of_one_minus_gamma(u); };
  const Minimum m =
      minimize_grid_golden(obj, u_of_gamma(kGammaMin), u_of_gamma(kGammaMax));
  return {m.value, gamma_of_u(m.argmin)};
}

double hlw_bound(double s, int d, int n) {
  require(d >= 3 && d <= n, "hlw_bound requires 3 <= d <= n");
  require(s >= 1.0, "hlw_bound requires s >= 1");
  const double log_d = std::log(static_cast<double>(d));
  return log_d - kHlwC1 * d / n -
         kHlwC2 * std::pow((s + 1.0) / (static_cast<double>(d) * n), 0.4) * log_d;
}

double thm1_rhs(double s, int d, int n, double h) {
  return std::log(static_cast<double>(d)) - h * s / (static_cast<double>(n) * d);
}

double thm2_rhs(double s, int d, int n, double h) { return thm1_rhs(s, d, n, h); }

std::optional<double> hlw_crossover_ratio(int d, int n, double h, double p_max) {
  require(d >= 3 && d <= n, "hlw crossover requires 3 <= d <= n");
  const double dn = static_cast<double>(d) * n;
  const auto diff = [&](double p) {
    return thm1_rhs(p * dn, d, n, h) - hlw_bound(std::max(p * dn, 1.0), d, n);
  };
  // Scan a log grid from the smallest meaningful ratio for the first sign
  // change, then bisect.
  const double p_min = 1.0 / dn;
  if (p_min >= p_max) return std::nullopt;
  constexpr int kScan = 2000;
  double prev_p = p_min;
  double prev = diff(prev_p);
  if (prev <= 0.0) return prev_p;
  for (int i = 1; i <= kScan; ++i) {
    const double p = p_min * std::pow(p_max / p_min, static_cast<double>(i) / kScan);
    const double cur = diff(p);
    if (cur <= 0.0) {
      double lo = prev_p;
      double hi = p;
      for (int it = 0; it < kBisectionCap && hi - lo > 1e-15 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (diff(mid) > 0.0 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    prev_p = p;
    prev = cur;
  }
  return std::nullopt;
}

CorollaryBound corollary_bound(double s, int d, double h, double eps) {
  require(eps > 0.0 && eps < 0.5, "corollary_bound requires 0 < eps < 1/2");
  require(s >= 1.0 && d >= 1, "corollary_bound requires s >= 1, d >= 1");
  const double value = std::log(static_cast<double>(d)) -
                       h / (std::pow(s, 0.5 - eps) * d);
  const auto n = static_cast<long long>(std::ceil(std::pow(s, 1.5 - eps)));
  return {value, n};
}

double prod_entropy_upper_p(double p, int d) {
  require(d >= 1, "prod_entropy_upper requires d >= 1");
  require(p > 0.0 && p <= 1.0, "prod_entropy_upper requires p in (0, 1]");
  if (p == 1.0) return 0.0;
  require(d >= 2, "prod_entropy_upper: p < 1 needs d >= 2");
  const double q = 1.0 - p;
  return q * std::log(static_cast<double>(d) * d - 1.0) - p * std::log(p) -
         q * std::log(q);
}

double prod_entropy_upper(double s, int d, int n) {
  require(s * d >= n, "prod_entropy_upper requires s d >= n");
  require(s <= static_cast<double>(d) * n, "prod_entropy_upper requires s <= d n");
  return prod_entropy_upper_p(s / (static_cast<double>(d) * n), d);
}

ViolationLower violation_lower(int d, double hd11) {
  require(d >= 2, "violation_lower requires d >= 2");
  const double value = (std::log(static_cast<double>(d)) - 2.0 * hd11 - 1.0) / d;
  return {value, std::exp(2.0 * hd11 + 1.0), value > 0.0};
}

double violation_lower_general(double s, int n, int d, double h) {
  const double p = s / (static_cast<double>(d) * n);
  require(p > 0.0 && p < 1.0, "violation_lower_general requires p in (0, 1)");
  return p * std::log(p * d * d) + (1.0 - p) * std::log1p(-p) - 2.0 * h * p;
}

double fannes_eta(double eps_m, int d) {
  require(eps_m > 0.0 && eps_m < 1.0,
          "fannes_eta requires 0 < eps_m < 1, got " + std::to_string(eps_m));
  return d * eps_m * (std::log(static_cast<double>(d)) - std::log(eps_m));
}

double eps_m_bound(double s, double n, int d) {
  require(s >= 2.0 && n >= 2.0, "eps_m_bound requires s, n >= 2");
  return 2.0 * d * std::sqrt(std::log(n) / n) +
         13.0 * d * d * std::sqrt(std::log(static_cast<double>(d)) / s);
}

double hastings_lhs(double s, double n, int d, double gamma, double m_bound) {
  require(gamma > 0.0 && gamma < 1.0, "hastings_lhs requires gamma in (0, 1)");
  const double dd = d;
  return dd * dd * std::log(n) + n * dd * std::log(dd) + (n - dd) * m_bound -
         s * std::log1p(-gamma);
}

double m_bound_chain(double s, double n, int d, double gamma, double h) {
  require(gamma > 0.0 && gamma < 1.0, "m_bound_chain requires gamma in (0, 1)");
  const double eta = fannes_eta(eps_m_bound(s, n, d), d);
  const double arg = h * f_func(1.0 - gamma) * (s / n) - eta;
  require(arg >= 0.0 && arg < d * std::log(static_cast<double>(d)),
          "m_bound_chain: argument " + std::to_string(arg) +
              " outside the domain of m_d");
  return -m_d(arg, d);
}

double hastings_lhs_composed(double s, double n, int d, double gamma, double h) {
  const double chain = m_bound_chain(s, n, d, gamma, h);
  return hastings_lhs(s, n, d, gamma, chain - d * std::log(static_cast<double>(d)));
}

double md_series_k(int d) {
  require(d >= 2, "md_series_k requires d >= 2");
  const double dd = d;
  return ((dd * dd - 2.0 * dd) / (3.0 * (dd - 1.0) * (dd - 1.0))) *
         std::pow(2.0 * (dd - 1.0) / dd, 1.5);
}

double mu_tail_upper(double s, int n, int d, double sup_log_sum) {
  (void)s;
  require(n > d && d >= 1, "mu_tail_upper requires n > d");
  const double dd = d;
  require(sup_log_sum <= -dd * std::log(dd) + 1e-12,
          "mu_tail_upper: sup of sum log w cannot exceed -d log d");
  const double log_val = -std::lgamma(dd) + dd * dd * std::log(static_cast<double>(n)) +
                         (n - dd) * dd * std::log(dd) + (n - dd) * sup_log_sum;
  return std::clamp(std::exp(std::min(log_val, 0.0)), 0.0, 1.0);
}

double typicality_alpha(int n, int d) {
  return 4.0 * (n - d) / (3.0 * n) - 1.0;
}

double prob_Tc_upper(double s, int n, int d) {
  (void)s;
  require(n > d && d >= 1, "prob_Tc_upper requires n > d");
  const double dd = d;
  const double log_val = std::log(2.0 * dd) - std::lgamma(dd) -
                         typicality_alpha(n, d) * dd * dd * std::log(static_cast<double>(n));
  return std::clamp(std::exp(std::min(log_val, 0.0)), 0.0, 1.0);
}

double tube_fraction_lower(int s, double gamma) {
  require(s >= 2, "tube_fraction_lower requires s >= 2");
  require(gamma > 0.0 && gamma < 1.0, "tube_fraction_lower requires gamma in (0, 1)");
  return 0.25 * std::pow(1.0 - gamma, s - 1);
}

Feasibility tube_feasibility(int d, int s) {
  require(d >= 1 && s >= 2, "tube_feasibility requires d >= 1, s >= 2");
  const double dd = d;
  const double lhs = (dd * dd + 2.0) *
                     std::pow(1.0 - 6.0 * std::log(dd) / s, s - 1);
  return {lhs, lhs <= 0.25};
}

namespace {

template <typename F>
auto guarded(F fn) -> std::optional<decltype(fn())> {
  try {
    return fn();
  } catch (const std::domain_error&) {
    return std::nullopt;
  }
}

}  // namespace

BoundReport bound_report(const BoundParams& p) {
  require(p.n >= 1 && p.d >= 1 && p.s >= 1.0, "bound_report requires s, n, d >= 1");
  require(p.s <= static_cast<double>(p.n) * p.d, "bound_report requires s <= n d");
  const double ratio = p.s / p.n;
  BoundReport r{};
  r.p_ratio = p.s / (static_cast<double>(p.d) * p.n);
  r.h0_value = h0().value;
  if (p.d >= 2) {
    const HdResult hd = h_d(ratio, ratio, p.d);
    r.h_d_value = hd.value;
    r.h_d_gamma = hd.gamma_m;
  }
  r.h_thm1 = p.h ? *p.h : r.h_d_value.value_or(0.0);
  r.h_thm2 = p.h ? *p.h : r.h0_value;
  r.hlw = guarded([&] { return hlw_bound(p.s, p.d, p.n); });
  r.thm1_rhs = thm1_rhs(p.s, p.d, p.n, r.h_thm1);
  r.thm2_rhs = thm2_rhs(p.s, p.d, p.n, r.h_thm2);
  if (p.s * p.d >= p.n) r.prod_upper = guarded([&] { return prod_entropy_upper(p.s, p.d, p.n); });
  r.delta_s_lower = guarded([&] { return violation_lower_general(p.s, p.n, p.d, r.h_thm1); });
  r.eps_m = guarded([&] { return eps_m_bound(p.s, p.n, p.d); });
  if (r.eps_m) r.eta = guarded([&] { return fannes_eta(*r.eps_m, p.d); });
  r.tube_radius = 2.0 * std::sqrt(std::log(static_cast<double>(p.n)) / p.n) +
                  13.0 * p.d * std::sqrt(std::log(static_cast<double>(p.d)) / p.s);
  r.gamma_used = p.gamma ? p.gamma : r.h_d_gamma;
  if (r.gamma_used && p.d >= 2) {
    r.hastings_lhs = guarded(
        [&] { return hastings_lhs_composed(p.s, p.n, p.d, *r.gamma_used, r.h_thm1); });
  }
  r.crossover_h = p.h ? *p.h : 4.0;
  if (p.d >= 3 && p.d <= p.n) {
    r.hlw_crossover_ratio = hlw_crossover_ratio(p.d, p.n, r.crossover_h, 1e6);
  }
  if (p.eps) {
    const auto c = guarded([&] { return corollary_bound(p.s, p.d, r.h_thm2, *p.eps); });
    if (c) {
      r.corollary_value = c->value;
      r.corollary_n = c->n;
    }
  }
  return r;
}

}  // namespace entlab::bounds
