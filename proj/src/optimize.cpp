#include "entlab/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "entlab/parallel.hpp"
#include "entlab/randq.hpp"

namespace entlab {

namespace {

constexpr double kLogFloor = 1e-12;

CVector flatten_rows(const CMatrix& m) {
  CVector v(m.size());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) v(i * m.cols() + j) = m(i, j);
  }
  return v;
}

CMatrix unflatten_rows(const CVector& v, Eigen::Index rows, Eigen::Index cols) {
  CMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  }
  return m;
}

class ChannelMap final : public OutputMap {
 public:
  ChannelMap(const ChannelPair& ch, Side side)
      : w_(ch.matrix()), dims_{ch.d(), ch.n()}, side_(side) {}

  Eigen::Index input_dim() const override { return w_.cols(); }

  CMatrix output(const CVector& phi) const override {
    const CMatrix m = reshape_nd(w_ * phi, dims_);
    if (side_ == Side::conjugate) return m.transpose() * m.conjugate();
    return m * m.adjoint();
  }

  CVector adjoint_apply(const CVector& phi, const CMatrix& x) const override {
    const CMatrix m = reshape_nd(w_ * phi, dims_);
    const CMatrix y = side_ == Side::conjugate ? CMatrix(m * x.transpose()) : CMatrix(x * m);
    return w_.adjoint() * flatten_rows(y);
  }

 private:
  CMatrix w_;
  BipartiteDims dims_;
  Side side_;
};

// Kraus family B_{kk'} = A_k (x) conj A_k', applied to phi reshaped as the
// s x s matrix Psi: B_{kk'} phi = A_k Psi A_k'^dagger.
class ProductMap final : public OutputMap {
 public:
  explicit ProductMap(const ChannelPair& ch)
      : ops_(kraus_operators(ch)), s_(ch.s()) {}

  Eigen::Index input_dim() const override { return s_ * s_; }

  CMatrix output(const CVector& phi) const override {
    const std::vector<CMatrix> v = images(phi);
    const auto m = static_cast<Eigen::Index>(v.size());
    CMatrix out(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = a; b < m; ++b) {
        const cplx val = v[static_cast<std::size_t>(b)]
                             .conjugate()
                             .cwiseProduct(v[static_cast<std::size_t>(a)])
                             .sum();
        out(a, b) = val;
        out(b, a) = std::conj(val);
      }
    }
    return out;
  }

  CVector adjoint_apply(const CVector& phi, const CMatrix& x) const override {
    const std::vector<CMatrix> v = images(phi);
    const auto d = static_cast<Eigen::Index>(ops_.size());
    const Eigen::Index m = d * d;
    CMatrix acc = CMatrix::Zero(s_, s_);
    for (Eigen::Index b = 0; b < m; ++b) {
      CMatrix u = CMatrix::Zero(v[0].rows(), v[0].cols());
      for (Eigen::Index a = 0; a < m; ++a) u += x(b, a) * v[static_cast<std::size_t>(a)];
      const auto& left = ops_[static_cast<std::size_t>(b / d)];
      const auto& right = ops_[static_cast<std::size_t>(b % d)];
      acc += left.adjoint() * u * right;
    }
    return flatten_rows(acc);
  }

 private:
  std::vector<CMatrix> images(const CVector& phi) const {
    const CMatrix psi = unflatten_rows(phi, s_, s_);
    std::vector<CMatrix> out;
    out.reserve(ops_.size() * ops_.size());
    for (const auto& a : ops_) {
      const CMatrix left = a * psi;
      for (const auto& b : ops_) out.push_back(left * b.adjoint());
    }
    return out;
  }

  std::vector<CMatrix> ops_;
  Eigen::Index s_;
};

double entropy_of(const RVector& w) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > 0.0) s -= w(i) * std::log(w(i));
  }
  return std::max(s, 0.0);
}

constexpr double kZeroEntropy = 1e-9;

struct RestartOutcome {
  double value;
  CVector phi;
  bool aborted;
  int iterations;
};

RestartOutcome descend(const OutputMap& map, CVector phi, const OptimizerConfig& cfg) {
  EntropyAndGradient cur = entropy_gradient(map, phi);
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    const CVector tangent = cur.gradient - phi * phi.dot(cur.gradient);
    const double gnorm = tangent.norm();
    if (gnorm < cfg.grad_tol) break;
    double t = cfg.armijo_step;
    bool accepted = false;
    for (int k = 0; k < cfg.max_backtracks; ++k, t *= cfg.armijo_shrink) {
      const CVector cand = (phi - t * tangent).normalized();
      const double val = output_entropy(map, cand);
      if (val <= cur.entropy - cfg.armijo_c * t * gnorm * gnorm) {
        phi = cand;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      // At zero entropy the floored log keeps the gradient large but nothing is left to gain.
      return {cur.entropy, phi, cur.entropy > kZeroEntropy, it};
    }
    cur = entropy_gradient(map, phi);
  }
  return {output_entropy(map, phi), phi, false, it};
}

}  // namespace

std::unique_ptr<OutputMap> channel_map(const ChannelPair& ch, Side side) {
  return std::make_unique<ChannelMap>(ch, side);
}

std::unique_ptr<OutputMap> product_map(const ChannelPair& ch) {
  return std::make_unique<ProductMap>(ch);
}

double output_entropy(const OutputMap& map, const CVector& phi) {
  return entropy_of(jacobi_eigen(map.output(phi)).values);
}

EntropyAndGradient entropy_gradient(const OutputMap& map, const CVector& phi) {
  const HermitianEigen eig = jacobi_eigen(map.output(phi));
  RVector log_term(eig.values.size());
  for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
    log_term(i) = std::log(std::max(eig.values(i), kLogFloor)) + 1.0;
  }
  const CMatrix x = eig.vectors * log_term.cast<cplx>().asDiagonal() * eig.vectors.adjoint();
  return {entropy_of(eig.values), -2.0 * map.adjoint_apply(phi, x),
          eig.values(eig.values.size() - 1)};
}

std::vector<double> probe_entropies(const OutputMap& map, int probes, std::uint64_t seed) {
  if (probes < 1) throw std::invalid_argument("probe count must be positive");
  std::vector<double> out(static_cast<std::size_t>(probes));
  parallel_for(out.size(), [&](std::size_t i) {
    RngStream rng(seed, i);
    out[i] = output_entropy(map, random_pure_state(map.input_dim(), rng).amplitudes());
  });
  return out;
}

MinEntropyResult minimize_output_entropy(const OutputMap& map, const OptimizerConfig& cfg,
                                         std::uint64_t seed,
                                         const std::vector<CVector>& extra_starts) {
  if (cfg.restarts < 1 || cfg.probes < 1 || cfg.max_iters < 0 || !(cfg.grad_tol > 0.0)) {
    throw std::invalid_argument("optimizer config: restarts, probes >= 1 and grad_tol > 0");
  }
  const std::vector<double> probes = probe_entropies(map, cfg.probes, seed);
  std::vector<std::size_t> order(probes.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return probes[a] < probes[b]; });
  const std::size_t probe_starts = std::min<std::size_t>(
      static_cast<std::size_t>(cfg.restarts), order.size());
  const std::size_t starts = probe_starts + extra_starts.size();
  std::vector<RestartOutcome> outcomes(starts);
  parallel_for(starts, [&](std::size_t r) {
    CVector phi0;
    if (r < probe_starts) {
      RngStream rng(seed, order[r]);
      phi0 = random_pure_state(map.input_dim(), rng).amplitudes();
    } else {
      phi0 = extra_starts[r - probe_starts].normalized();
    }
    outcomes[r] = descend(map, phi0, cfg);
  });

  MinEntropyResult result{outcomes[0].value, PureState::normalized(outcomes[0].phi),
                          probes[order[0]], static_cast<int>(starts), 0, {}};
  for (std::size_t r = 0; r < starts; ++r) {
    const auto& o = outcomes[r];
    if (o.aborted) {
      ++result.aborted_restarts;
      result.log.push_back("restart " + std::to_string(r) +
                           ": line search stalled after " + std::to_string(o.iterations) +
                           " iterations");
    }
    if (o.value < result.value) {
      result.value = o.value;
      result.argmin = PureState::normalized(o.phi);
    }
  }
  return result;
}

}  // namespace entlab
