#include "entlab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "entlab/bounds.hpp"
#include "entlab/parallel.hpp"
#include "entlab/randq.hpp"
#include "entlab/stats.hpp"

namespace entlab {

namespace {

// Stream indices are split by campaign tag so that no two campaigns sharing
// a seed ever consume the same stream.
enum class Tag : std::uint64_t {
  overlap = 1,
  spectrum,
  push_a,
  push_b,
  tube_w,
  tube_phi,
  typical,
  product,
  f_ratio,
  fannes,
  cross_term_norm,
  overlap_residual,
  product_eigenvalue,
  gradient,
};

RngStream stream(std::uint64_t seed, Tag tag, std::uint64_t index) {
  return RngStream(seed, (static_cast<std::uint64_t>(tag) << 40) | index);
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

double largest_eigenvalue(const DensityMatrix& rho) {
  return jacobi_eigen(rho.entries()).values(0);
}

double binomial_margin(double observed, double law, std::size_t trials) {
  const double sigma = stats::binomial_sigma(law, trials);
  if (sigma == 0.0) return observed == law ? 0.0 : std::numeric_limits<double>::infinity();
  return (observed - law) / sigma;
}

void require_positive(int value, const char* what) {
  if (value < 1) throw std::invalid_argument(std::string(what) + " must be >= 1");
}

}  // namespace

void TrialConfig::validate() const {
  require_positive(trials, "trials");
  require_positive(optimizer.restarts, "restarts");
  if (!(optimizer.grad_tol > 0.0)) throw std::invalid_argument("grad_tol must be > 0");
}

MinEntropyResult estimate_min_output_entropy(const ChannelPair& ch, Side which,
                                             const TrialConfig& cfg) {
  cfg.validate();
  const auto map = channel_map(ch, which);
  return minimize_output_entropy(*map, cfg.optimizer, cfg.seed);
}

ProductEntropy estimate_product_entropy(const Isometry& w, const TrialConfig& cfg, int cap) {
  cfg.validate();
  const long long dim = static_cast<long long>(w.s()) * w.s();
  if (dim > cap) {
    throw std::invalid_argument("product optimization needs s^2 <= " + std::to_string(cap) +
                                ", got " + std::to_string(dim));
  }
  const ChannelPair ch(w);
  const auto map = product_map(ch);
  const CVector hat = maximally_entangled(w.s()).amplitudes();
  const HermitianEigen eig = jacobi_eigen(map->output(hat));
  const double at_hat = output_entropy(*map, hat);
  const MinEntropyResult opt = minimize_output_entropy(*map, cfg.optimizer, cfg.seed, {hat});
  return {at_hat, opt.value, eig.values(0)};
}

std::vector<CampaignResult> overlap_law_campaign(int s, const std::vector<double>& t_list,
                                                 int trials, std::uint64_t seed,
                                                 double sigmas) {
  require_positive(s, "s");
  require_positive(trials, "trials");
  for (double t : t_list) {
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("overlap t must lie in [0, 1]");
  }
  const auto start = Clock::now();
  RngStream fixed = stream(seed, Tag::overlap, 0);
  const PureState psi = random_pure_state(s, fixed);
  const auto n = static_cast<std::size_t>(trials);
  std::vector<double> overlap(n);
  std::vector<double> x2(n);
  std::vector<double> stat(n);
  parallel_for(n, [&](std::size_t i) {
    RngStream rng = stream(seed, Tag::overlap, i + 1);
    const PureState theta = random_pure_state(s, rng);
    const cplx x = psi.amplitudes().dot(theta.amplitudes());
    overlap[i] = std::abs(x);
    x2[i] = std::norm(x);
    stat[i] = s > 1 ? std::norm(overlap_decompose(psi, theta).phi.amplitudes()(0)) : 0.0;
  });
  const double elapsed = seconds_since(start);

  std::vector<CampaignResult> out;
  for (double t : t_list) {
    const auto hits = std::count_if(overlap.begin(), overlap.end(),
                                    [t](double v) { return v > t; });
    const double p_hat = static_cast<double>(hits) / trials;
    const double law = overlap_tail(s, t);
    const double margin = binomial_margin(p_hat, law, n);
    out.push_back({"overlap s=" + std::to_string(s) + " t=" + fmt(t), p_hat, law, margin,
                   std::abs(margin) <= sigmas, trials, elapsed, {}});
  }
  const double corr = stats::correlation(x2, stat);
  const double z = corr * std::sqrt(static_cast<double>(trials));
  out.push_back({"overlap independence s=" + std::to_string(s), corr, 0.0, z,
                 std::abs(z) <= sigmas, trials, elapsed, {}});
  return out;
}

CampaignResult spectrum_law_campaign(int d, int n, int trials, std::uint64_t seed, int law_n) {
  if (d != 2 && d != 3) {
    throw std::invalid_argument("spectrum law supports d in {2, 3}, got " + std::to_string(d));
  }
  if (n < d) throw std::invalid_argument("spectrum law requires n >= d");
  require_positive(trials, "trials");
  if (law_n == 0) law_n = n;
  const auto start = Clock::now();
  std::vector<double> sample(static_cast<std::size_t>(trials));
  parallel_for(sample.size(), [&](std::size_t i) {
    RngStream rng = stream(seed, Tag::spectrum, i);
    const PureState z = random_pure_state(static_cast<Eigen::Index>(d) * n, rng);
    sample[i] = largest_eigenvalue(partial_trace(z, {d, n}, TraceOut::second_n));
  });
  double ks = 0.0;
  const bool exact = d == 2 && law_n == 2;
  if (exact) {
    ks = stats::ks_statistic(sample, [](double w) {
      if (w <= 0.5) return 0.0;
      if (w >= 1.0) return 1.0;
      return std::pow(2.0 * w - 1.0, 3);
    });
  } else {
    const MuCdfTable table = mu_cdf_numeric(d, law_n, 4000);
    ks = stats::ks_statistic(sample, [&table](double w) { return table(w); });
  }
  const double crit = stats::ks_critical_one_sample(sample.size());
  CampaignResult r{"spectrum d=" + std::to_string(d) + " n=" + std::to_string(n) +
                       (law_n != n ? " law_n=" + std::to_string(law_n) : ""),
                   ks, crit, ks / crit, ks < crit, trials, seconds_since(start), {}};
  r.details = {{"exact_cdf", exact ? 1.0 : 0.0}, {"law_n", law_n}};
  return r;
}

CampaignResult pushforward_campaign(int s, int n, int d, int trials, std::uint64_t seed) {
  require_positive(s, "s");
  require_positive(trials, "trials");
  if (s > n * d) throw std::invalid_argument("pushforward requires s <= n d");
  const auto start = Clock::now();
  const auto m = static_cast<std::size_t>(trials);
  std::vector<double> a(m);
  std::vector<double> b(m);
  parallel_for(m, [&](std::size_t i) {
    RngStream ra = stream(seed, Tag::push_a, i);
    const ChannelPair ch(random_isometry(s, n, d, ra));
    a[i] = largest_eigenvalue(apply_conjugate(ch, random_pure_state(s, ra)));
    RngStream rb = stream(seed, Tag::push_b, i);
    const PureState z = random_pure_state(static_cast<Eigen::Index>(d) * n, rb);
    b[i] = largest_eigenvalue(partial_trace(z, {d, n}, TraceOut::second_n));
  });
  const double ks = stats::ks_two_sample(a, b);
  const double crit = stats::ks_critical_two_sample(m, m);
  return {"pushforward s=" + std::to_string(s) + " n=" + std::to_string(n) +
              " d=" + std::to_string(d),
          ks, crit, ks / crit, ks < crit, 2LL * trials, seconds_since(start), {}};
}

CampaignResult tube_fraction_campaign(int s, int n, int d, double gamma, int trials,
                                      std::uint64_t seed, double sigmas) {
  require_positive(trials, "trials");
  const auto feas = bounds::tube_feasibility(d, s);
  if (!feas.feasible) {
    throw std::invalid_argument("tube campaign: (d^2 + 2)(1 - 6 log d / s)^(s-1) = " +
                                fmt(feas.lhs) + " exceeds 1/4");
  }
  const auto start = Clock::now();
  constexpr int kMaxAttempts = 100;
  constexpr int kTypicalityTrials = 1000;
  std::optional<ChannelPair> ch;
  double typical_fraction = 0.0;
  int attempts = 0;
  for (; attempts < kMaxAttempts && !ch; ++attempts) {
    RngStream rng = stream(seed, Tag::tube_w, static_cast<std::uint64_t>(attempts));
    ChannelPair cand(random_isometry(s, n, d, rng));
    const auto typ = typicality_estimate(cand, kTypicalityTrials, rng);
    if (typ.is_typical) {
      ch.emplace(std::move(cand));
      typical_fraction = typ.fraction;
    }
  }
  if (!ch) throw std::runtime_error("tube campaign: no typical embedding in 100 attempts");

  RngStream center_rng = stream(seed, Tag::tube_phi, 0);
  const PureState psi = random_pure_state(s, center_rng);
  const TubeSpec tube = TubeSpec::make(apply_conjugate(*ch, psi), gamma, s, n, d);

  const double log_d = std::log(static_cast<double>(d));
  const double a2_radius =
      std::sqrt(48.0 * d * d * log_d / s) + 2.0 * std::sqrt(std::log(static_cast<double>(n)) / n);
  const double a3_radius =
      std::sqrt(6.0 * d * d * log_d / s) + std::sqrt(12.0 * d * d * log_d / s);
  const CMatrix mixed = CMatrix::Identity(d, d) / static_cast<double>(d);

  const auto m = static_cast<std::size_t>(trials);
  std::vector<char> hit(m), a1(m), a2c(m), a3c(m);
  parallel_for(m, [&](std::size_t i) {
    RngStream rng = stream(seed, Tag::tube_phi, i + 1);
    const PureState theta = random_pure_state(s, rng);
    hit[i] = in_tube(apply_conjugate(*ch, theta), tube);
    const OverlapSplit split = overlap_decompose(psi, theta);
    a1[i] = std::norm(split.x) >= gamma;
    a2c[i] = op_norm(apply_conjugate(*ch, split.phi).entries() - mixed) > a2_radius;
    a3c[i] = spectral_norm(cross_term(*ch, psi.amplitudes(), split.phi.amplitudes())) >
             a3_radius;
  });
  const auto rate = [&](const std::vector<char>& v) {
    return static_cast<double>(std::count(v.begin(), v.end(), 1)) / trials;
  };
  const double fraction = rate(hit);
  const double lower = bounds::tube_fraction_lower(s, gamma);
  const double q = std::pow(1.0 - 6.0 * log_d / s, s - 1);
  const double margin = binomial_margin(fraction, lower, m);
  CampaignResult r{"tube s=" + std::to_string(s) + " n=" + std::to_string(n) +
                       " d=" + std::to_string(d) + " gamma=" + fmt(gamma),
                   fraction, lower, margin, margin >= -sigmas, trials, seconds_since(start), {}};
  r.details = {{"tube_radius", tube.radius},
               {"typical_fraction", typical_fraction},
               {"typical_attempts", attempts},
               {"a1_rate", rate(a1)},
               {"a1_law", std::pow(1.0 - gamma, s - 1)},
               {"a2c_rate", rate(a2c)},
               {"a2c_bound", q + 0.5},
               {"a3c_rate", rate(a3c)},
               {"a3c_bound", (d * d + 1.0) * q},
               {"feasibility_lhs", feas.lhs}};
  return r;
}

CampaignResult typicality_campaign(int s, int n, int d, int trials_w, int trials_phi,
                                   std::uint64_t seed, double sigmas) {
  require_positive(trials_w, "trials_w");
  require_positive(trials_phi, "trials_phi");
  if (n <= d) throw std::invalid_argument("typicality campaign requires n > d");
  const auto start = Clock::now();
  const auto m = static_cast<std::size_t>(trials_w);
  std::vector<char> atypical(m);
  std::vector<double> fraction(m);
  parallel_for(m, [&](std::size_t i) {
    RngStream rng = stream(seed, Tag::typical, i);
    const ChannelPair ch(random_isometry(s, n, d, rng));
    const auto typ = typicality_estimate(ch, trials_phi, rng);
    atypical[i] = !typ.is_typical;
    fraction[i] = typ.fraction;
  });
  const double rate = static_cast<double>(std::count(atypical.begin(), atypical.end(), 1)) /
                      trials_w;
  const double bound = bounds::prob_Tc_upper(s, n, d);
  const double sigma = stats::binomial_sigma(bound, m);
  const double margin = sigma > 0.0 ? (rate - bound) / sigma
                                    : (rate <= bound ? 0.0 : std::numeric_limits<double>::infinity());
  CampaignResult r{"typicality s=" + std::to_string(s) + " n=" + std::to_string(n) +
                       " d=" + std::to_string(d),
                   rate, bound, margin, rate <= bound + sigmas * sigma,
                   static_cast<long long>(trials_w) * trials_phi, seconds_since(start), {}};
  r.details = {{"alpha", bounds::typicality_alpha(n, d)},
               {"median_ball_fraction", stats::median(fraction)},
               {"ball_radius", ball_radius(n)}};
  return r;
}

CampaignResult product_bound_campaign(int s, int n, int d, int channels, std::uint64_t seed) {
  require_positive(channels, "channels");
  const auto start = Clock::now();
  const double p = static_cast<double>(s) / (static_cast<double>(d) * n);
  const bool entropy_applies = static_cast<long long>(s) * d >= n;
  const double upper = entropy_applies ? bounds::prod_entropy_upper(s, d, n) : 0.0;
  const PureState hat = maximally_entangled(s);
  const auto m = static_cast<std::size_t>(channels);
  std::vector<double> eig_margin(m);
  std::vector<double> ent_margin(m);
  parallel_for(m, [&](std::size_t i) {
    RngStream rng = stream(seed, Tag::product, i);
    const ChannelPair ch(random_isometry(s, n, d, rng));
    const DensityMatrix out = product_output(ch, hat);
    const auto [spec, vecs] = hermitian_eigs(out);
    eig_margin[i] = spec.largest() - p;
    ent_margin[i] = entropy_applies ? upper - von_neumann_entropy(spec) : 0.0;
  });
  constexpr double kSlack = 1e-9;
  long long violations = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (eig_margin[i] < -kSlack) ++violations;
    if (ent_margin[i] < -kSlack) ++violations;
  }
  CampaignResult r{"product s=" + std::to_string(s) + " n=" + std::to_string(n) +
                       " d=" + std::to_string(d),
                   static_cast<double>(violations), 0.0, 0.0, violations == 0, channels,
                   seconds_since(start), {}};
  r.details = {{"p", p},
               {"prod_entropy_upper", upper},
               {"entropy_bound_applies", entropy_applies ? 1.0 : 0.0},
               {"min_eigenvalue_margin", *std::min_element(eig_margin.begin(), eig_margin.end())},
               {"min_entropy_margin", *std::min_element(ent_margin.begin(), ent_margin.end())}};
  return r;
}

namespace {

CampaignResult violation_result(const std::string& name, const std::vector<double>& margins,
                                double slack, double elapsed) {
  long long violations = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (double v : margins) {
    if (v < -slack) ++violations;
    worst = std::min(worst, v);
  }
  CampaignResult r{name, static_cast<double>(violations), 0.0, 0.0, violations == 0,
                   static_cast<long long>(margins.size()), elapsed, {}};
  r.details = {{"worst_margin", worst}, {"slack", slack}};
  return r;
}

}  // namespace

std::vector<CampaignResult> inequality_suite(int trials, std::uint64_t seed) {
  require_positive(trials, "trials");
  const auto m = static_cast<std::size_t>(trials);
  std::vector<CampaignResult> out;

  {
    const auto start = Clock::now();
    std::vector<double> margin(m);
    parallel_for(m, [&](std::size_t i) {
      RngStream rng = stream(seed, Tag::f_ratio, i);
      const double x = 50.0 * rng.uniform();
      const double gamma = rng.uniform();
      const double r = gamma + (1.0 - gamma) * rng.uniform();
      const double lhs = bounds::f_func(x);
      const double rhs = bounds::f_func(r * x + 1.0 - r) / bounds::f_func(1.0 - gamma);
      margin[i] = (rhs - lhs) / std::max(1.0, std::abs(rhs));
    });
    out.push_back(violation_result("f_ratio", margin, 1e-9, seconds_since(start)));
  }

  {
    const auto start = Clock::now();
    constexpr int kDims[] = {2, 3, 5, 10};
    std::vector<double> margin(m);
    std::vector<double> eps_used(m);
    parallel_for(m, [&](std::size_t i) {
      RngStream rng = stream(seed, Tag::fannes, i);
      const int d = kDims[i % 4];
      const std::vector<double> z = random_simplex_point(static_cast<std::size_t>(d), rng);
      std::vector<double> v(static_cast<std::size_t>(d));
      double mean = 0.0;
      for (double& x : v) {
        x = rng.normal();
        mean += x;
      }
      mean /= d;
      double l1 = 0.0;
      double t_max = std::numeric_limits<double>::infinity();
      for (int k = 0; k < d; ++k) {
        auto& x = v[static_cast<std::size_t>(k)];
        x -= mean;
        l1 += std::abs(x);
        if (x < 0.0) t_max = std::min(t_max, z[static_cast<std::size_t>(k)] / -x);
      }
      t_max = std::min(t_max, (1.0 - 1e-9) / l1);
      const double t = t_max * rng.uniform();
      double lhs_theta = 0.0;
      double lhs_z = 0.0;
      double eps_m = 0.0;
      for (int k = 0; k < d; ++k) {
        const auto idx = static_cast<std::size_t>(k);
        const double eps = t * v[idx];
        const double theta = std::max(z[idx] + eps, 0.0);
        eps_m += std::abs(eps);
        lhs_theta += bounds::f_func(theta * d);
        lhs_z += bounds::f_func(z[idx] * d);
      }
      eps_used[i] = eps_m;
      const double diff = std::abs(lhs_theta - lhs_z);
      margin[i] = eps_m > 0.0 ? bounds::fannes_eta(eps_m, d) - diff : -diff;
    });
    auto r = violation_result("fannes", margin, 1e-9, seconds_since(start));
    r.details.emplace_back("max_eps_m", *std::max_element(eps_used.begin(), eps_used.end()));
    out.push_back(std::move(r));
  }

  {
    const auto start = Clock::now();
    constexpr int kBlock = 100;
    constexpr Dims kShapes[] = {{3, 4, 2}, {4, 3, 3}, {5, 2, 4}, {2, 5, 2}};
    const std::size_t blocks = (m + kBlock - 1) / kBlock;
    std::vector<double> margin(m);
    parallel_for(blocks, [&](std::size_t b) {
      RngStream rng = stream(seed, Tag::cross_term_norm, b);
      const Dims dims = kShapes[b % 4];
      const ChannelPair ch(random_isometry(dims.s, dims.n, dims.d, rng));
      for (std::size_t i = b * kBlock; i < std::min(m, (b + 1) * kBlock); ++i) {
        CVector u(dims.s);
        CVector v(dims.s);
        for (int k = 0; k < dims.s; ++k) {
          u(k) = rng.complex_normal();
          v(k) = rng.complex_normal();
        }
        const double rhs = dims.d * u.norm() * v.norm();
        margin[i] = (rhs - fro_norm(cross_term(ch, u, v))) / std::max(1.0, rhs);
      }
    });
    out.push_back(violation_result("cross_term_norm", margin, 1e-9, seconds_since(start)));
  }

  {
    const auto start = Clock::now();
    constexpr int kSizes[] = {2, 4, 8, 16};
    constexpr double kTailT = 0.5;
    std::vector<double> margin(m);
    std::vector<char> exceed(m);
    parallel_for(m, [&](std::size_t i) {
      RngStream rng = stream(seed, Tag::overlap_residual, i);
      const int s = kSizes[i % 4];
      const PureState psi = random_pure_state(s, rng);
      const PureState theta = random_pure_state(s, rng);
      const OverlapSplit split = overlap_decompose(psi, theta);
      const double dist = (theta.amplitudes() - split.phi.amplitudes()).norm();
      margin[i] = std::numbers::sqrt2 * std::abs(split.x) - dist;
      exceed[i] = dist > kTailT;
    });
    auto r = violation_result("overlap_residual", margin, 1e-9, seconds_since(start));
    double law = 0.0;
    for (int s : kSizes) law += std::pow(1.0 - kTailT * kTailT / 2.0, s - 1) / 4.0;
    r.details.emplace_back("tail_rate_t0.5",
                           static_cast<double>(std::count(exceed.begin(), exceed.end(), 1)) /
                               trials);
    r.details.emplace_back("tail_bound_t0.5", law);
    out.push_back(std::move(r));
  }

  {
    const auto start = Clock::now();
    constexpr Dims kShapes[] = {{4, 4, 2}, {6, 4, 2}, {4, 8, 2}, {3, 3, 3}};
    constexpr std::size_t kChannels = 100;
    std::vector<double> margin(kChannels);
    parallel_for(kChannels, [&](std::size_t i) {
      RngStream rng = stream(seed, Tag::product_eigenvalue, i);
      const Dims dims = kShapes[i % 4];
      const ChannelPair ch(random_isometry(dims.s, dims.n, dims.d, rng));
      const DensityMatrix outp = product_output(ch, maximally_entangled(dims.s));
      const PureState phi_hat = maximally_entangled(dims.d);
      const double overlap =
          phi_hat.amplitudes().dot(outp.entries() * phi_hat.amplitudes()).real();
      margin[i] = overlap - static_cast<double>(dims.s) / (dims.d * dims.n);
    });
    out.push_back(violation_result("product_eigenvalue", margin, 1e-9, seconds_since(start)));
  }
  return out;
}

CampaignResult gradient_check(const Dims& dims, int trials, std::uint64_t seed, bool corrupt) {
  require_positive(trials, "trials");
  constexpr double kStep = 1e-5;
  constexpr double kMinEigen = 1e-6;
  const auto start = Clock::now();
  const auto m = static_cast<std::size_t>(trials);
  std::vector<double> rel(m, -1.0);
  parallel_for(m, [&](std::size_t i) {
    RngStream rng = stream(seed, Tag::gradient, i);
    const ChannelPair ch(random_isometry(dims.s, dims.n, dims.d, rng));
    const auto map = channel_map(ch, Side::conjugate);
    const CVector phi = random_pure_state(dims.s, rng).amplitudes();
    const EntropyAndGradient eg = entropy_gradient(*map, phi);
    if (eg.smallest_eigenvalue < kMinEigen) return;
    CVector fd(dims.s);
    for (int k = 0; k < dims.s; ++k) {
      CVector e = CVector::Zero(dims.s);
      e(k) = kStep;
      const double re = (output_entropy(*map, phi + e) - output_entropy(*map, phi - e)) /
                        (2.0 * kStep);
      e(k) = cplx(0.0, kStep);
      const double im = (output_entropy(*map, phi + e) - output_entropy(*map, phi - e)) /
                        (2.0 * kStep);
      fd(k) = cplx(re, im);
    }
    const CVector g = corrupt ? CVector(-eg.gradient) : eg.gradient;
    rel[i] = (g - fd).norm() / std::max(fd.norm(), 1e-300);
  });
  std::size_t admissible = 0;
  std::size_t good = 0;
  double worst = 0.0;
  for (double r : rel) {
    if (r < 0.0) continue;
    ++admissible;
    if (r < 1e-5) ++good;
    worst = std::max(worst, r);
  }
  const double share = admissible > 0 ? static_cast<double>(good) / admissible : 0.0;
  CampaignResult r{std::string("gradient") + (corrupt ? " (sign flipped)" : "") + " s=" +
                       std::to_string(dims.s) + " n=" + std::to_string(dims.n) +
                       " d=" + std::to_string(dims.d),
                   share, 0.99, 0.0, admissible > 0 && share >= 0.99 && worst < 1e-4, trials,
                   seconds_since(start), {}};
  r.details = {{"admissible", static_cast<double>(admissible)}, {"max_rel_error", worst}};
  return r;
}

}  // namespace entlab
