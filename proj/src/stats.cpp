#include "entlab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace entlab::stats {

double kolmogorov_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x < 1.0) {
    // Small-x form converges faster here.
    const double c = std::sqrt(2.0 * std::numbers::pi) / x;
    double acc = 0.0;
    for (int k = 1; k <= 50; ++k) {
      const double a = (2.0 * k - 1.0) * std::numbers::pi / x;
      acc += std::exp(-a * a / 8.0);
    }
    return c * acc;
  }
  double acc = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    acc += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return 1.0 - 2.0 * acc;
}

double kolmogorov_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("kolmogorov_quantile needs p in (0, 1)");
  double lo = 0.0;
  double hi = 10.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (kolmogorov_cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double worst = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    worst = std::max({worst, (i + 1) / n - f, f - i / n});
  }
  return worst;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double worst = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    worst = std::max(worst, std::abs(i / na - j / nb));
  }
  return worst;
}

double ks_critical_one_sample(std::size_t n, double p) {
  const double rn = std::sqrt(static_cast<double>(n));
  return kolmogorov_quantile(p) / (rn + 0.12 + 0.11 / rn);
}

double ks_critical_two_sample(std::size_t n, std::size_t m, double p) {
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return kolmogorov_quantile(p) * std::sqrt((nn + mm) / (nn * mm));
}

double binomial_sigma(double p, std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("binomial_sigma: zero trials");
  return std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trials));
}

double correlation(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) {
    throw std::invalid_argument("correlation: samples must be non-empty and equal length");
  }
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

double median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("median: empty sample");
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace entlab::stats
