#pragma once

// Goodness-of-fit helpers for the Monte Carlo campaigns.

#include <functional>
#include <vector>

namespace entlab::stats {

/// Kolmogorov distribution P(K <= x), by its alternating series.
double kolmogorov_cdf(double x);
/// Inverse of kolmogorov_cdf; kolmogorov_quantile(0.999) ~ 1.9495.
double kolmogorov_quantile(double p);

/// sup |F_n - F| for a sample against a continuous CDF. Sorts a copy.
double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
/// sup |F_n - G_m| between two samples.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

/// Critical values at level p with the Stephens small-sample correction
/// for the one-sample case.
double ks_critical_one_sample(std::size_t n, double p = 0.999);
double ks_critical_two_sample(std::size_t n, std::size_t m, double p = 0.999);

/// sqrt(p (1 - p) / trials).
double binomial_sigma(double p, std::size_t trials);

/// Pearson correlation; 0 when either sample is constant.
double correlation(const std::vector<double>& a, const std::vector<double>& b);

double median(std::vector<double> v);

}  // namespace entlab::stats
