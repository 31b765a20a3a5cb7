#include "entlab/channels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace entlab {

namespace {

constexpr double kIsometryTol = 1e-10;
constexpr int kTernaryMaxIter = 200;
constexpr double kTernaryTol = 1e-10;

void require_input_dim(const ChannelPair& ch, Eigen::Index len) {
  if (len != ch.s()) {
    throw std::invalid_argument("channel input has length " +
                                std::to_string(len) + ", expected s = " +
                                std::to_string(ch.s()));
  }
}

CMatrix output_factor(const ChannelPair& ch, const CVector& phi) {
  return reshape_nd(ch.matrix() * phi, {ch.d(), ch.n()});
}

}  // namespace

Isometry::Isometry(CMatrix matrix, int s, int n, int d)
    : w_(std::move(matrix)), s_(s), n_(n), d_(d) {
  if (s < 1 || n < 1 || d < 1) {
    throw std::invalid_argument("isometry dimensions must be positive");
  }
  if (s > n * d) {
    throw std::invalid_argument("isometry requires s <= n*d");
  }
  if (w_.rows() != static_cast<Eigen::Index>(n) * d || w_.cols() != s) {
    throw std::invalid_argument("isometry matrix has the wrong shape");
  }
  const CMatrix gram = w_.adjoint() * w_;
  const double err = (gram - CMatrix::Identity(s, s)).cwiseAbs().maxCoeff();
  if (err > kIsometryTol) {
    throw std::invalid_argument("W^dagger W deviates from I by " +
                                std::to_string(err));
  }
}

Isometry Isometry::conjugate() const {
  return Isometry(w_.conjugate(), s_, n_, d_);
}

Isometry coordinate_embedding(int s, int n, int d) {
  return Isometry(CMatrix::Identity(static_cast<Eigen::Index>(n) * d, s), s, n, d);
}

ChannelPair::ChannelPair(Isometry embedding, bool conjugated)
    : w_(std::move(embedding)),
      conjugated_(conjugated),
      applied_(conjugated ? CMatrix(w_.matrix().conjugate()) : w_.matrix()) {}

DensityMatrix apply_direct(const ChannelPair& ch, const PureState& phi) {
  require_input_dim(ch, phi.dim());
  const auto psi = PureState::normalized(ch.matrix() * phi.amplitudes());
  return partial_trace(psi, {ch.d(), ch.n()}, TraceOut::first_d);
}

DensityMatrix apply_conjugate(const ChannelPair& ch, const PureState& phi) {
  require_input_dim(ch, phi.dim());
  const auto psi = PureState::normalized(ch.matrix() * phi.amplitudes());
  return partial_trace(psi, {ch.d(), ch.n()}, TraceOut::second_n);
}

std::vector<CMatrix> kraus_operators(const ChannelPair& ch) {
  const int d = ch.d();
  std::vector<CMatrix> ops(static_cast<std::size_t>(d), CMatrix(ch.n(), ch.s()));
  for (int i = 0; i < ch.n(); ++i) {
    for (int j = 0; j < d; ++j) {
      ops[static_cast<std::size_t>(j)].row(i) = ch.matrix().row(i * d + j);
    }
  }
  return ops;
}

CMatrix cross_term(const ChannelPair& ch, const CVector& u, const CVector& v) {
  require_input_dim(ch, u.size());
  require_input_dim(ch, v.size());
  const CMatrix mu = output_factor(ch, u);
  const CMatrix mv = output_factor(ch, v);
  return mu.transpose() * mv.conjugate();
}

DensityMatrix product_output(const ChannelPair& ch, const PureState& psi) {
  const int s = ch.s();
  const int d = ch.d();
  if (psi.dim() != static_cast<Eigen::Index>(s) * s) {
    throw std::invalid_argument("product_output expects an input of length s^2");
  }
  CMatrix coeff(s, s);
  for (int a = 0; a < s; ++a) {
    for (int b = 0; b < s; ++b) coeff(a, b) = psi.amplitudes()(a * s + b);
  }
  const std::vector<CMatrix> ops = kraus_operators(ch);
  // (A_k (x) conj A_k') psi reshaped is A_k Psi A_k'^dagger.
  std::vector<CMatrix> images;
  images.reserve(static_cast<std::size_t>(d) * d);
  for (int k = 0; k < d; ++k) {
    const CMatrix left = ops[static_cast<std::size_t>(k)] * coeff;
    for (int kp = 0; kp < d; ++kp) {
      images.push_back(left * ops[static_cast<std::size_t>(kp)].adjoint());
    }
  }
  const int dd = d * d;
  CMatrix out(dd, dd);
  for (int a = 0; a < dd; ++a) {
    for (int b = a; b < dd; ++b) {
      const cplx val = (images[static_cast<std::size_t>(b)].conjugate().cwiseProduct(
                            images[static_cast<std::size_t>(a)]))
                           .sum();
      out(a, b) = val;
      out(b, a) = std::conj(val);
    }
  }
  const double tr = out.trace().real();
  if (tr > 0.0) out /= tr;
  return DensityMatrix::trusted(std::move(out));
}

double tube_radius(int s, int n, int d) {
  return 2.0 * std::sqrt(std::log(static_cast<double>(n)) / n) +
         13.0 * d * std::sqrt(std::log(static_cast<double>(d)) / s);
}

double ball_radius(int n) {
  return 2.0 * std::sqrt(std::log(static_cast<double>(n)) / n);
}

TubeSpec TubeSpec::make(DensityMatrix center, double gamma, int s, int n, int d) {
  if (!(gamma > 0.0 && gamma < 1.0)) {
    throw std::invalid_argument("tube gamma must lie in (0, 1)");
  }
  if (center.dim() != d) {
    throw std::invalid_argument("tube center must be d x d");
  }
  return TubeSpec{std::move(center), gamma, tube_radius(s, n, d)};
}

double tube_distance(const DensityMatrix& theta, const TubeSpec& tube) {
  const Eigen::Index d = tube.center.dim();
  if (theta.dim() != d) {
    throw std::invalid_argument("tube_distance: dimension mismatch");
  }
  const CMatrix mixed = CMatrix::Identity(d, d) / static_cast<double>(d);
  const CMatrix& rho = tube.center.entries();
  const auto dist = [&](double r) {
    return op_norm(theta.entries() - r * rho - (1.0 - r) * mixed);
  };
  double lo = tube.gamma;
  double hi = 1.0;
  for (int it = 0; it < kTernaryMaxIter && hi - lo > kTernaryTol; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (dist(m1) <= dist(m2)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return std::min({dist(0.5 * (lo + hi)), dist(tube.gamma), dist(1.0)});
}

bool in_tube(const DensityMatrix& theta, const TubeSpec& tube) {
  return tube_distance(theta, tube) <= tube.radius;
}

bool in_ball(const DensityMatrix& rho, int n) {
  const Eigen::Index d = rho.dim();
  const CMatrix diff =
      rho.entries() - CMatrix::Identity(d, d) / static_cast<double>(d);
  return op_norm(diff) <= ball_radius(n);
}

TypicalityEstimate typicality_estimate(const ChannelPair& ch, int trials,
                                       RngStream& rng) {
  if (trials < 1) throw std::invalid_argument("typicality needs trials >= 1");
  int hits = 0;
  for (int t = 0; t < trials; ++t) {
    const PureState phi = random_pure_state(ch.s(), rng);
    if (in_ball(apply_conjugate(ch, phi), ch.n())) ++hits;
  }
  const double fraction = static_cast<double>(hits) / trials;
  return {fraction, fraction >= 0.5, trials};
}

}  // namespace entlab
