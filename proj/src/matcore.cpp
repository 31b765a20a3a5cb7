#include "entlab/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace entlab {

namespace {

constexpr int kMaxSweeps = 100;
constexpr double kOffDiagTol = 1e-13;

double off_diagonal_norm(const CMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

void check_hermitian_unit_trace(const CMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw std::invalid_argument("density matrix must be square and non-empty");
  }
  const double herm_err = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > kDensityHermTol) {
    throw std::invalid_argument("density matrix not Hermitian (error " +
                                std::to_string(herm_err) + ")");
  }
  const double tr = m.trace().real();
  if (std::abs(tr - 1.0) > kDensityTraceTol) {
    throw std::invalid_argument("density matrix trace " + std::to_string(tr) +
                                " != 1");
  }
}

}  // namespace

PureState::PureState(CVector amplitudes) : amps_(std::move(amplitudes)) {
  const double nrm = amps_.norm();
  if (amps_.size() == 0 || std::abs(nrm - 1.0) > kPureNormTol) {
    throw std::invalid_argument("pure state must have unit norm");
  }
}

PureState PureState::normalized(const CVector& v) {
  const double nrm = v.norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    throw std::invalid_argument("cannot normalize a zero or non-finite vector");
  }
  return PureState(v / nrm);
}

DensityMatrix DensityMatrix::checked(CMatrix entries) {
  check_hermitian_unit_trace(entries);
  const HermitianEigen eig = jacobi_eigen(entries);
  if (eig.values.minCoeff() < -kNegativeEigenSlack) {
    throw std::invalid_argument("density matrix has a negative eigenvalue");
  }
  return DensityMatrix(std::move(entries));
}

DensityMatrix DensityMatrix::trusted(CMatrix entries) {
  check_hermitian_unit_trace(entries);
  return DensityMatrix(std::move(entries));
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index m) {
  if (m < 1) throw std::invalid_argument("dimension must be positive");
  return DensityMatrix(CMatrix::Identity(m, m) / static_cast<double>(m));
}

DensityMatrix DensityMatrix::pure(const PureState& psi) {
  const CVector& a = psi.amplitudes();
  CMatrix m = a * a.adjoint();
  return DensityMatrix(0.5 * (m + m.adjoint()));
}

Spectrum::Spectrum(std::vector<double> values) : w_(std::move(values)) {
  if (w_.empty()) throw std::invalid_argument("empty spectrum");
  for (double& x : w_) {
    if (!std::isfinite(x) || x < -kNegativeEigenSlack) {
      throw std::domain_error("spectrum entry below -1e-9: " +
                              std::to_string(x));
    }
    if (x < 0.0) x = 0.0;
  }
  std::sort(w_.begin(), w_.end(), std::greater<>());
  const double total = std::accumulate(w_.begin(), w_.end(), 0.0);
  if (std::abs(total - 1.0) > kDensityTraceTol) {
    throw std::domain_error("spectrum does not sum to 1: " +
                            std::to_string(total));
  }
}

HermitianEigen jacobi_eigen(const CMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("matrix not square");
  const Eigen::Index n = m.rows();
  CMatrix a = 0.5 * (m + m.adjoint());
  CMatrix v = CMatrix::Identity(n, n);
  const double scale = std::max(1.0, a.norm());

  int sweep = 0;
  while (off_diagonal_norm(a) >= kOffDiagTol * scale) {
    if (++sweep > kMaxSweeps) {
      throw std::runtime_error("Jacobi eigensolver did not converge");
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        const cplx phase = apq / mag;  // e^{i phi}
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // Real symmetric rotation for [[app, mag], [mag, aqq]].
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // G = diag(1, conj(phase)) * [[c, s], [-s, c]]
        const cplx g00 = c;
        const cplx g01 = s;
        const cplx g10 = -s * std::conj(phase);
        const cplx g11 = c * std::conj(phase);

        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = akp * g00 + akq * g10;
          a(k, q) = akp * g01 + akq * g11;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = std::conj(g00) * apk + std::conj(g10) * aqk;
          a(q, k) = std::conj(g01) * apk + std::conj(g11) * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = vkp * g00 + vkq * g10;
          v(k, q) = vkp * g01 + vkq * g11;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) {
                     return a(i, i).real() > a(j, j).real();
                   });
  HermitianEigen out{RVector(n), CMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src).real();
    out.vectors.col(k) = v.col(src);
  }
  return out;
}

std::pair<Spectrum, CMatrix> hermitian_eigs(const DensityMatrix& rho) {
  HermitianEigen eig = jacobi_eigen(rho.entries());
  std::vector<double> w(eig.values.data(),
                        eig.values.data() + eig.values.size());
  return {Spectrum(std::move(w)), std::move(eig.vectors)};
}

double von_neumann_entropy(const Spectrum& w) {
  double s = 0.0;
  for (double x : w.values()) {
    if (x > 0.0) s -= x * std::log(x);
  }
  return std::max(0.0, s);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  return von_neumann_entropy(hermitian_eigs(rho).first);
}

CMatrix reshape_nd(const CVector& z, BipartiteDims dims) {
  if (z.size() != dims.d * dims.n) {
    throw std::invalid_argument("vector length " + std::to_string(z.size()) +
                                " does not match d*n = " +
                                std::to_string(dims.d * dims.n));
  }
  CMatrix m(dims.n, dims.d);
  for (Eigen::Index i = 0; i < dims.n; ++i) {
    for (Eigen::Index j = 0; j < dims.d; ++j) m(i, j) = z(i * dims.d + j);
  }
  return m;
}

DensityMatrix partial_trace(const PureState& psi, BipartiteDims dims,
                            TraceOut side) {
  const CMatrix m = reshape_nd(psi.amplitudes(), dims);
  CMatrix rho = side == TraceOut::second_n ? CMatrix(m.transpose() * m.conjugate())
                                           : CMatrix(m * m.adjoint());
  rho = 0.5 * (rho + rho.adjoint());
  return DensityMatrix::trusted(std::move(rho));
}

double op_norm(const CMatrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  const HermitianEigen eig = jacobi_eigen(hermitian);
  return std::max(std::abs(eig.values(0)),
                  std::abs(eig.values(eig.values.size() - 1)));
}

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const CMatrix gram = m.rows() <= m.cols() ? CMatrix(m * m.adjoint())
                                            : CMatrix(m.adjoint() * m);
  const HermitianEigen eig = jacobi_eigen(gram);
  return std::sqrt(std::max(0.0, eig.values(0)));
}

double fro_norm(const CMatrix& m) { return m.norm(); }

PureState maximally_entangled(Eigen::Index m) {
  if (m < 1) throw std::invalid_argument("dimension must be positive");
  CVector v = CVector::Zero(m * m);
  const double amp = 1.0 / std::sqrt(static_cast<double>(m));
  for (Eigen::Index k = 0; k < m; ++k) v(k * m + k) = amp;
  return PureState::normalized(v);
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    out.segment(i * b.size(), b.size()) = a(i) * b;
  }
  return out;
}

}  // namespace entlab
