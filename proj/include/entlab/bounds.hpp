#pragma once

// Scalar functions and closed-form entanglement bounds. All logarithms are
// natural. Precondition violations throw std::domain_error.

#include <functional>
#include <optional>

namespace entlab::bounds {

/// Constants of the Hayden-Leung-Winter bound, quoted to two decimals in the
/// source and treated here as exact inputs.
inline constexpr double kHlwC1 = 1.44;
inline constexpr double kHlwC2 = 19.84;

/// Interior range searched for gamma by h_d and h0.
inline constexpr double kGammaMin = 1e-8;
inline constexpr double kGammaMax = 1.0 - 1e-8;

// f(x) = x log x - x + 1 with f(0) = 1.
double f_func(double x);
// F(x) = -log x + x - 1, x > 0.
double F_func(double x);

/// z log z + (d - z) log((d - z)/(d - 1)) for z in [1, d).
double h_constraint(double z, int d);
/// -log z - (d - 1) log((d - z)/(d - 1)) for z in [1, d).
double g_objective(double z, int d);

/// Minimum of sum F(x_i) subject to sum x_i = d and sum f(x_i) >= y, for
/// 0 <= y < d log d.
double m_d(double y, int d);
/// Inverse of m_d on [0, g(d - 1e-14)].
double m_d_inv(double w, int d);

/// Upper end of the domain of m_d_inv resolvable in double precision.
double m_d_inv_max(int d);

struct Minimum {
  double value;
  double argmin;
};

/// Deterministic 1-D minimizer: `grid_points` log-spaced samples of [lo, hi]
/// followed by golden-section refinement around the best sample down to
/// `tol` in the argument. Non-finite objective values are treated as +inf.
Minimum minimize_grid_golden(const std::function<double(double)>& objective,
                             double lo, double hi, int grid_points = 1000,
                             double tol = 1e-11);

struct HdResult {
  double value;
  double gamma_m;
  /// The minimum sits at the edge of the searched gamma range.
  bool at_boundary;
};

/// inf over gamma of m_d_inv(-log(1 - gamma) y) / (x f(1 - gamma)), searched
/// over gamma in [kGammaMin, kGammaMax].
HdResult h_d(double x, double y, int d);

/// inf over gamma of -log(1 - gamma) / (gamma + (1 - gamma) log(1 - gamma)).
Minimum h0();

/// Objective minimized by h0(), as a function of gamma.
double h0_objective(double gamma);

/// log d - c1 d/n - c2 ((s+1)/(dn))^(2/5) log d; requires 3 <= d <= n.
double hlw_bound(double s, int d, int n);

/// log d - h s/(nd). Both linear bounds share the form; callers enforce the
/// threshold on h.
double thm1_rhs(double s, int d, int n, double h);
double thm2_rhs(double s, int d, int n, double h);

/// Ratio p = s/(nd), s treated as continuous, where the linear bound
/// log d - h p meets hlw_bound. Empty when the linear bound stays above the
/// HLW bound for every p in (0, p_max].
std::optional<double> hlw_crossover_ratio(int d, int n, double h,
                                          double p_max = 1.0);

struct CorollaryBound {
  double value;
  long long n;  ///< ceil(s^(3/2 - eps))
};

/// log d - h / (s^(1/2 - eps) d); requires 0 < eps < 1/2.
CorollaryBound corollary_bound(double s, int d, double h, double eps);

/// (1 - p) log(d^2 - 1) - p log p - (1 - p) log(1 - p) with p = s/(dn);
/// requires s d >= n.
double prod_entropy_upper(double s, int d, int n);
double prod_entropy_upper_p(double p, int d);

struct ViolationLower {
  double value;      ///< (1/d)[log d - 2 h_d(1,1) - 1]
  double threshold;  ///< exp(2 h_d(1,1) + 1)
  bool positive;
};

/// Lower bound on the additivity violation at s = n, given h_d(1,1).
ViolationLower violation_lower(int d, double hd11);
/// p log(p d^2) + (1 - p) log(1 - p) - 2 h p, p = s/(dn) in (0, 1).
double violation_lower_general(double s, int n, int d, double h);

/// d eps_m (log d + log(1/eps_m)); requires 0 < eps_m < 1.
double fannes_eta(double eps_m, int d);
/// 2 d sqrt(log n / n) + 13 d^2 sqrt(log d / s).
double eps_m_bound(double s, double n, int d);

/// d^2 log n + n d log d + (n - d) m_bound - s log(1 - gamma).
double hastings_lhs(double s, double n, int d, double gamma, double m_bound);
/// Upper bound on d log d + M(gamma, n):
/// -m_d(h f(1 - gamma) s/n - fannes_eta(eps_m_bound(s, n, d), d)).
double m_bound_chain(double s, double n, int d, double gamma, double h);
/// hastings_lhs evaluated with M replaced by its chain bound.
double hastings_lhs_composed(double s, double n, int d, double gamma, double h);

/// Coefficient k in m_d(y)/y ~ 1 - k sqrt(y), as stated in closed form:
/// ((d^2 - 2d)/(3 (d-1)^2)) (2 (d-1)/d)^(3/2).
double md_series_k(int d);

/// (1/(d-1)!) exp[d^2 log n + (n-d) d log d + (n-d) sup_log_sum], in [0, 1].
double mu_tail_upper(double s, int n, int d, double sup_log_sum);
/// (2d/(d-1)!) exp(-alpha d^2 log n), alpha = 4(n-d)/(3n) - 1, in [0, 1].
double prob_Tc_upper(double s, int n, int d);
double typicality_alpha(int n, int d);

/// (1/4)(1 - gamma)^(s-1).
double tube_fraction_lower(int s, double gamma);

struct Feasibility {
  double lhs;  ///< (d^2 + 2)(1 - 6 log d / s)^(s-1)
  bool feasible;
};
Feasibility tube_feasibility(int d, int s);

struct BoundParams {
  double s;
  int n;
  int d;
  /// Defaults to the argmin of h_d(s/n, s/n, d).
  std::optional<double> gamma;
  /// Defaults to h_d(s/n, s/n, d) for the first linear bound and h0 for the
  /// second; the HLW crossover defaults to h = 4.
  std::optional<double> h;
  std::optional<double> eps;
};

/// Every scalar bound for one (s, n, d). Entries whose preconditions fail
/// are empty.
struct BoundReport {
  double p_ratio;
  std::optional<double> hlw;
  std::optional<double> thm1_rhs;
  std::optional<double> thm2_rhs;
  std::optional<double> prod_upper;
  std::optional<double> delta_s_lower;
  std::optional<double> h_d_value;
  std::optional<double> h_d_gamma;
  double h0_value;
  std::optional<double> eta;
  std::optional<double> eps_m;
  double tube_radius;
  std::optional<double> hastings_lhs;
  /// Searched over p in (0, 1e6]; a value above 1 means the linear bound
  /// stays above the HLW bound for every admissible s.
  std::optional<double> hlw_crossover_ratio;
  double crossover_h;
  std::optional<double> corollary_value;
  std::optional<long long> corollary_n;
  double h_thm1;
  double h_thm2;
  std::optional<double> gamma_used;
};

/// Throws std::domain_error unless 1 <= s <= n d and n, d >= 1.
BoundReport bound_report(const BoundParams& params);

}  // namespace entlab::bounds
