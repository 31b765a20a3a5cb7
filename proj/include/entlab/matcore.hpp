#pragma once

// Dense complex linear algebra and quantum-state primitives.
//
// Composite space convention: a vector on C^d (x) C^n has length d*n and the
// component (i, j), i over the n factor and j over the d factor, is stored at
// flat position i*d + j (zero based). Reshaping such a vector row-major gives
// the n x d matrix M(z) used throughout the library.

#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace entlab {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Tolerances shared by the state types.
inline constexpr double kPureNormTol = 1e-12;
inline constexpr double kDensityHermTol = 1e-10;
inline constexpr double kDensityTraceTol = 1e-10;
inline constexpr double kNegativeEigenSlack = 1e-9;

/// Unit vector in C^m.
class PureState {
 public:
  /// Throws std::invalid_argument unless |amplitudes| == 1 within 1e-12.
  explicit PureState(CVector amplitudes);
  /// Normalizes `v`; throws on a zero vector.
  static PureState normalized(const CVector& v);

  const CVector& amplitudes() const { return amps_; }
  Eigen::Index dim() const { return amps_.size(); }

 private:
  CVector amps_;
};

/// Hermitian, unit-trace, positive semidefinite m x m matrix.
class DensityMatrix {
 public:
  /// Full validation including the eigenvalue floor (-1e-9).
  static DensityMatrix checked(CMatrix entries);
  /// Checks hermiticity and trace only; for outputs of maps that preserve
  /// positivity by construction (partial traces, channel outputs).
  static DensityMatrix trusted(CMatrix entries);
  static DensityMatrix maximally_mixed(Eigen::Index m);
  static DensityMatrix pure(const PureState& psi);

  const CMatrix& entries() const { return rho_; }
  Eigen::Index dim() const { return rho_.rows(); }

 private:
  explicit DensityMatrix(CMatrix m) : rho_(std::move(m)) {}
  CMatrix rho_;
};

/// Probability vector sorted in descending order.
class Spectrum {
 public:
  /// Clamps entries in [-1e-9, 0) to zero; throws std::domain_error on more
  /// negative entries or when the sum is not 1 within 1e-10.
  explicit Spectrum(std::vector<double> values);

  const std::vector<double>& values() const { return w_; }
  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_[i]; }
  double largest() const { return w_.front(); }
  double smallest() const { return w_.back(); }

 private:
  std::vector<double> w_;
};

/// Real eigenvalues (descending) and the unitary whose columns are the
/// matching eigenvectors.
struct HermitianEigen {
  RVector values;
  CMatrix vectors;
};

/// Cyclic complex Jacobi. Converges when the off-diagonal Frobenius mass
/// drops below 1e-13 (relative to max(1, |M|_F)); throws std::runtime_error
/// after 100 sweeps.
HermitianEigen jacobi_eigen(const CMatrix& m);

/// Spectrum and eigenvectors of a density matrix.
std::pair<Spectrum, CMatrix> hermitian_eigs(const DensityMatrix& rho);

/// -sum w log w in nats, with 0 log 0 = 0.
double von_neumann_entropy(const Spectrum& w);
double von_neumann_entropy(const DensityMatrix& rho);

struct BipartiteDims {
  Eigen::Index d;
  Eigen::Index n;
};

enum class TraceOut {
  first_d,   ///< keeps the n factor: M M^dagger, n x n
  second_n,  ///< keeps the d factor: d x d
};

/// Reduced state of psi on C^d (x) C^n. Throws std::invalid_argument when
/// psi.dim() != d*n.
DensityMatrix partial_trace(const PureState& psi, BipartiteDims dims,
                            TraceOut side);

/// Row-major n x d reshape of a vector on C^d (x) C^n.
CMatrix reshape_nd(const CVector& z, BipartiteDims dims);

/// Largest |eigenvalue| of a Hermitian matrix.
double op_norm(const CMatrix& hermitian);
/// Largest singular value of an arbitrary matrix.
double spectral_norm(const CMatrix& m);
double fro_norm(const CMatrix& m);

/// (1/sqrt(m)) sum_k |k>|k> on C^m (x) C^m.
PureState maximally_entangled(Eigen::Index m);

/// Kronecker product a (x) b with the first factor as the slow index.
CMatrix kron(const CMatrix& a, const CMatrix& b);
CVector kron(const CVector& a, const CVector& b);

}  // namespace entlab
