#pragma once

// Output-entropy minimization over the unit sphere of the input space.

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "entlab/channels.hpp"
#include "entlab/matcore.hpp"

namespace entlab {

/// phi -> T(phi phi^dagger) for a completely positive map T. Implementations
/// must accept unnormalized phi, so finite differences see the same
/// function the gradient describes.
class OutputMap {
 public:
  virtual ~OutputMap() = default;
  virtual Eigen::Index input_dim() const = 0;
  virtual CMatrix output(const CVector& phi) const = 0;
  /// T^*(X) phi for Hermitian X on the output space.
  virtual CVector adjoint_apply(const CVector& phi, const CMatrix& x) const = 0;
};

enum class Side { direct, conjugate };

std::unique_ptr<OutputMap> channel_map(const ChannelPair& ch, Side side);
/// phi on C^s (x) C^s mapped through Phi^C (x) conj Phi^C.
std::unique_ptr<OutputMap> product_map(const ChannelPair& ch);

struct EntropyAndGradient {
  double entropy;
  CVector gradient;  ///< Euclidean: dS = Re(gradient^dagger dphi)
  double smallest_eigenvalue;
};

/// -Tr rho log rho of the (possibly unnormalized) output; exact up to
/// clamping of tiny negative eigenvalues.
double output_entropy(const OutputMap& map, const CVector& phi);
/// Entropy plus -2 T^*(log rho + I) phi, with eigenvalues floored at 1e-12
/// inside the logarithm.
EntropyAndGradient entropy_gradient(const OutputMap& map, const CVector& phi);

struct OptimizerConfig {
  int restarts = 20;
  int probes = 1000;
  int max_iters = 500;
  double grad_tol = 1e-8;
  double armijo_step = 1.0;
  double armijo_shrink = 0.5;
  double armijo_c = 1e-4;
  int max_backtracks = 60;
};

struct MinEntropyResult {
  double value;
  PureState argmin;
  double probe_min;
  int restarts_run;
  int aborted_restarts;
  std::vector<std::string> log;
};

/// Entropy of `probes` uniform inputs drawn from streams (seed, i).
std::vector<double> probe_entropies(const OutputMap& map, int probes, std::uint64_t seed);

/// Multistart projected gradient with renormalization retraction and
/// Armijo backtracking, started from the best `restarts` probes and from
/// any `extra_starts` (normalized before use).
MinEntropyResult minimize_output_entropy(const OutputMap& map, const OptimizerConfig& cfg,
                                         std::uint64_t seed,
                                         const std::vector<CVector>& extra_starts = {});

}  // namespace entlab
