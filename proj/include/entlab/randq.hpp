#pragma once

// Reproducible sampling of random states, unitaries and embeddings.

#include <array>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "entlab/isometry.hpp"
#include "entlab/matcore.hpp"

namespace entlab {

/// Counter-based generator (Philox4x32-10). The key is the 64-bit seed, the
/// upper half of the 128-bit counter is the stream index and the lower half
/// is the draw counter, so (seed, stream_index) fully determines the
/// sequence regardless of which thread consumes it.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_index);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_index() const { return stream_; }

  std::uint64_t next_u64();
  /// Uniform on (0, 1); never returns 0 or 1.
  double uniform();
  /// Standard normal via Box-Muller.
  double normal();
  /// Complex normal with E|z|^2 = 1.
  cplx complex_normal();

 private:
  std::array<std::uint32_t, 4> block(std::uint64_t counter) const;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 4;
  std::optional<double> spare_normal_;
};

/// m x m matrix of i.i.d. complex normals, filled column by column.
CMatrix ginibre(Eigen::Index rows, Eigen::Index cols, RngStream& rng);

/// Haar unitary from the QR decomposition of a Ginibre matrix with the
/// diagonal of R rotated to the positive reals.
CMatrix haar_unitary(Eigen::Index m, RngStream& rng);

/// U W_0 with U Haar on U(nd) and W_0 the coordinate embedding. Only the
/// first s Ginibre columns are drawn: Householder QR makes the first s
/// columns of Q depend on those columns alone, so this agrees (up to
/// rounding) with slicing a full haar_unitary(n*d) from the same stream.
/// Throws std::invalid_argument when s > n*d.
Isometry random_isometry(int s, int n, int d, RngStream& rng);

/// Uniform point on the unit sphere of C^m.
PureState random_pure_state(Eigen::Index m, RngStream& rng);

/// Uniform point of the probability simplex (flat Dirichlet).
std::vector<double> random_simplex_point(std::size_t m, RngStream& rng);

struct OverlapSplit {
  cplx x;
  PureState phi;
};

/// theta = x psi + sqrt(1 - |x|^2) phi with x = <psi|theta> and phi
/// orthogonal to psi. Throws std::domain_error when |x| >= 1 - 1e-12.
OverlapSplit overlap_decompose(const PureState& psi, const PureState& theta);

/// Exact law of the overlap with a fixed state: P(|<psi|theta>| > t) for
/// theta uniform on C^s equals (1 - t^2)^(s-1).
double overlap_tail(int s, double t);

/// Logarithm of the unnormalized induced eigenvalue density on the simplex:
/// sum_{i<j} 2 log|w_i - w_j| + (n - d) sum_i log w_i. Returns -infinity on
/// the boundary (Vandermonde zero, or a zero weight when n > d).
double mu_log_density(const Spectrum& w, int n);
double mu_log_density(const std::vector<double>& w, int n);

/// Tabulated CDF of the largest eigenvalue of the reduced state of a uniform
/// vector on C^d (x) C^n, normalized numerically by quadrature.
class MuCdfTable {
 public:
  int d() const { return d_; }
  int n() const { return n_; }
  const std::vector<double>& grid() const { return x_; }
  const std::vector<double>& cdf() const { return F_; }

  /// Piecewise-linear interpolation; 0 below 1/d and 1 above 1.
  double operator()(double w) const;
  /// Smallest tabulated w with CDF >= q (linear interpolation).
  double quantile(double q) const;

 private:
  friend MuCdfTable mu_cdf_numeric(int d, int n, int grid_size);
  int d_ = 0;
  int n_ = 0;
  std::vector<double> x_;
  std::vector<double> F_;
};

/// d in {2, 3}, n >= d, grid_size >= 1000. Throws std::invalid_argument on
/// unsupported input.
MuCdfTable mu_cdf_numeric(int d, int n, int grid_size);

}  // namespace entlab
