#pragma once

// Monte Carlo campaigns for the probabilistic statements, and entropy
// estimates for sampled channels.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "entlab/channels.hpp"
#include "entlab/optimize.hpp"

namespace entlab {

struct Dims {
  int s;
  int n;
  int d;
};

struct TrialConfig {
  Dims dims{1, 1, 1};
  int trials = 1;
  std::uint64_t seed = 0;
  double tolerance_sigmas = 4.0;
  OptimizerConfig optimizer{};

  /// Throws std::invalid_argument unless trials, restarts >= 1 and
  /// grad_tol > 0.
  void validate() const;
};

struct CampaignResult {
  std::string name;
  double estimate = 0.0;
  double bound_or_law = 0.0;
  double margin_sigmas = 0.0;
  bool pass = false;
  long long samples_used = 0;
  double wall_time = 0.0;
  std::vector<std::pair<std::string, double>> details;
};

MinEntropyResult estimate_min_output_entropy(const ChannelPair& ch, Side which,
                                             const TrialConfig& cfg);

struct ProductEntropy {
  double value_at_max_entangled;
  double optimized_value;
  double largest_eigenvalue;  ///< of the output at the maximally entangled input
};

inline constexpr int kProductDimCap = 256;

/// Throws std::invalid_argument when s^2 exceeds `cap`.
ProductEntropy estimate_product_entropy(const Isometry& w, const TrialConfig& cfg,
                                        int cap = kProductDimCap);

/// One result per t: P(|<psi|theta>| > t) against (1 - t^2)^(s-1), plus an
/// independence check between |x|^2 and |<e_1|phi>|^2.
std::vector<CampaignResult> overlap_law_campaign(int s, const std::vector<double>& t_list,
                                                 int trials, std::uint64_t seed,
                                                 double sigmas = 4.0);

/// Largest eigenvalue of reduced uniform states against the induced law with
/// parameter `law_n` (equal to n unless running a negative control).
CampaignResult spectrum_law_campaign(int d, int n, int trials, std::uint64_t seed,
                                     int law_n = 0);

CampaignResult pushforward_campaign(int s, int n, int d, int trials, std::uint64_t seed);

CampaignResult tube_fraction_campaign(int s, int n, int d, double gamma, int trials,
                                      std::uint64_t seed, double sigmas = 4.0);

CampaignResult typicality_campaign(int s, int n, int d, int trials_w, int trials_phi,
                                   std::uint64_t seed, double sigmas = 4.0);

/// Largest eigenvalue and entropy of the product output at the maximally
/// entangled input, over random channels.
CampaignResult product_bound_campaign(int s, int n, int d, int channels, std::uint64_t seed);

std::vector<CampaignResult> inequality_suite(int trials, std::uint64_t seed);

/// Analytic against central-difference gradients; `corrupt` flips the sign
/// of the analytic gradient.
CampaignResult gradient_check(const Dims& dims, int trials, std::uint64_t seed,
                              bool corrupt = false);

}  // namespace entlab
