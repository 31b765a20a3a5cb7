#include "entlab/randq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace entlab {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

constexpr double kDegenerateOverlap = 1.0 - 1e-12;

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_(stream_index) {}

std::array<std::uint32_t, 4> RngStream::block(std::uint64_t counter) const {
  std::array<std::uint32_t, 4> ctr{
      static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
      static_cast<std::uint32_t>(stream_), static_cast<std::uint32_t>(stream_ >> 32)};
  std::uint32_t k0 = static_cast<std::uint32_t>(seed_);
  std::uint32_t k1 = static_cast<std::uint32_t>(seed_ >> 32);
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ k0, lo1, hi0 ^ ctr[3] ^ k1, lo0};
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return ctr;
}

std::uint64_t RngStream::next_u64() {
  if (buf_pos_ >= 4) {
    buf_ = block(counter_++);
    buf_pos_ = 0;
  }
  const std::uint64_t lo = buf_[static_cast<std::size_t>(buf_pos_)];
  const std::uint64_t hi = buf_[static_cast<std::size_t>(buf_pos_ + 1)];
  buf_pos_ += 2;
  return (hi << 32) | lo;
}

double RngStream::uniform() {
  // 53 random bits, shifted by half an ulp so the result lies in (0, 1).
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (spare_normal_) {
    const double z = *spare_normal_;
    spare_normal_.reset();
    return z;
  }
  const double u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = r * std::sin(angle);
  return r * std::cos(angle);
}

cplx RngStream::complex_normal() {
  const double re = normal();
  const double im = normal();
  return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
}

CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
  CMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) g(i, j) = rng.complex_normal();
  }
  return g;
}

namespace {

// Q factor of a thin QR with the phases of diag(R) moved into Q.
CMatrix phase_fixed_q(const CMatrix& g) {
  const Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ() * CMatrix::Identity(g.rows(), g.cols());
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index k = 0; k < g.cols(); ++k) {
    const cplx rkk = r(k, k);
    const double mag = std::abs(rkk);
    if (mag > 0.0) q.col(k) *= rkk / mag;
  }
  return q;
}

}  // namespace

CMatrix haar_unitary(Eigen::Index m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("haar_unitary: m must be positive");
  return phase_fixed_q(ginibre(m, m, rng));
}

Isometry random_isometry(int s, int n, int d, RngStream& rng) {
  if (s < 1 || n < 1 || d < 1) {
    throw std::invalid_argument("random_isometry: dimensions must be positive");
  }
  if (s > n * d) {
    throw std::invalid_argument("random_isometry: s = " + std::to_string(s) +
                                " exceeds n*d = " + std::to_string(n * d));
  }
  return Isometry(phase_fixed_q(ginibre(n * d, s, rng)), s, n, d);
}

PureState random_pure_state(Eigen::Index m, RngStream& rng) {
  if (m < 1) throw std::invalid_argument("random_pure_state: m must be positive");
  CVector v(m);
  for (Eigen::Index i = 0; i < m; ++i) v(i) = rng.complex_normal();
  return PureState::normalized(v);
}

std::vector<double> random_simplex_point(std::size_t m, RngStream& rng) {
  std::vector<double> w(m);
  double total = 0.0;
  for (double& x : w) {
    x = -std::log(rng.uniform());
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

OverlapSplit overlap_decompose(const PureState& psi, const PureState& theta) {
  if (psi.dim() != theta.dim()) {
    throw std::invalid_argument("overlap_decompose: dimension mismatch");
  }
  const CVector& p = psi.amplitudes();
  const CVector& t = theta.amplitudes();
  const cplx x = p.dot(t);  // conjugates the first argument
  if (std::abs(x) >= kDegenerateOverlap) {
    throw std::domain_error("overlap_decompose: states are collinear");
  }
  CVector residual = t - x * p;
  // One re-orthogonalization pass keeps <psi|phi> at rounding level.
  residual -= p.dot(residual) * p;
  return {x, PureState::normalized(residual)};
}

double overlap_tail(int s, double t) {
  if (s < 1) throw std::invalid_argument("overlap_tail: s must be >= 1");
  if (!(t >= 0.0 && t <= 1.0)) {
    throw std::invalid_argument("overlap_tail: t must lie in [0, 1]");
  }
  return std::pow(1.0 - t * t, s - 1);
}

double mu_log_density(const std::vector<double>& w, int n) {
  const auto d = static_cast<int>(w.size());
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const double gap = std::abs(w[static_cast<std::size_t>(i)] -
                                  w[static_cast<std::size_t>(j)]);
      if (gap == 0.0) return neg_inf;
      acc += 2.0 * std::log(gap);
    }
  }
  if (n > d) {
    for (double x : w) {
      if (x <= 0.0) return neg_inf;
      acc += (n - d) * std::log(x);
    }
  }
  return acc;
}

double mu_log_density(const Spectrum& w, int n) {
  return mu_log_density(w.values(), n);
}

double MuCdfTable::operator()(double w) const {
  if (w <= x_.front()) return 0.0;
  if (w >= x_.back()) return 1.0;
  const auto it = std::upper_bound(x_.begin(), x_.end(), w);
  const auto hi = static_cast<std::size_t>(it - x_.begin());
  const std::size_t lo = hi - 1;
  const double frac = (w - x_[lo]) / (x_[hi] - x_[lo]);
  return F_[lo] + frac * (F_[hi] - F_[lo]);
}

double MuCdfTable::quantile(double q) const {
  if (q <= 0.0) return x_.front();
  if (q >= 1.0) return x_.back();
  const auto it = std::lower_bound(F_.begin(), F_.end(), q);
  const auto hi = static_cast<std::size_t>(it - F_.begin());
  if (hi == 0) return x_.front();
  const std::size_t lo = hi - 1;
  const double span = F_[hi] - F_[lo];
  const double frac = span > 0.0 ? (q - F_[lo]) / span : 0.0;
  return x_[lo] + frac * (x_[hi] - x_[lo]);
}

namespace {

// Density of the largest eigenvalue x, up to normalization.
double max_eig_density_d2(double x, int n) {
  const double gap = 2.0 * x - 1.0;
  return gap * gap * std::pow(x * (1.0 - x), n - 2);
}

double max_eig_density_d3(double x, int n, int inner) {
  // Remaining two weights sum to 1 - x and neither exceeds x.
  const double lo = std::max(0.0, 1.0 - 2.0 * x);
  const double hi = std::min(x, 1.0 - x);
  if (!(hi > lo)) return 0.0;
  const double h = (hi - lo) / inner;
  double acc = 0.0;
  for (int k = 0; k <= inner; ++k) {
    const double w2 = lo + k * h;
    const double w3 = 1.0 - x - w2;
    const double v = (x - w2) * (x - w3) * (w2 - w3);
    const double val = v * v * std::pow(x * w2 * w3, n - 3);
    acc += (k == 0 || k == inner) ? 0.5 * val : val;
  }
  return acc * h;
}

}  // namespace

MuCdfTable mu_cdf_numeric(int d, int n, int grid_size) {
  if (d != 2 && d != 3) {
    throw std::invalid_argument("mu_cdf_numeric supports d in {2, 3}, got " +
                                std::to_string(d));
  }
  if (n < d) throw std::invalid_argument("mu_cdf_numeric requires n >= d");
  if (grid_size < 1000) {
    throw std::invalid_argument("mu_cdf_numeric requires grid_size >= 1000");
  }
  MuCdfTable table;
  table.d_ = d;
  table.n_ = n;
  const double lo = 1.0 / d;
  const double h = (1.0 - lo) / grid_size;
  table.x_.resize(static_cast<std::size_t>(grid_size) + 1);
  std::vector<double> dens(table.x_.size());
  for (std::size_t k = 0; k < table.x_.size(); ++k) {
    const double x = k + 1 == table.x_.size() ? 1.0 : lo + static_cast<double>(k) * h;
    table.x_[k] = x;
    dens[k] = d == 2 ? max_eig_density_d2(x, n)
                     : max_eig_density_d3(x, n, grid_size);
  }
  table.F_.assign(table.x_.size(), 0.0);
  for (std::size_t k = 1; k < table.x_.size(); ++k) {
    table.F_[k] = table.F_[k - 1] +
                  0.5 * (dens[k - 1] + dens[k]) * (table.x_[k] - table.x_[k - 1]);
  }
  const double total = table.F_.back();
  for (double& f : table.F_) f /= total;
  table.F_.back() = 1.0;
  return table;
}

}  // namespace entlab
