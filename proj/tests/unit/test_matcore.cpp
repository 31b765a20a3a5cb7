#include <gtest/gtest.h>

#include <cmath>

#include "entlab/matcore.hpp"
#include "entlab/randq.hpp"

using namespace entlab;

namespace {

CMatrix random_density(int m, RngStream& rng) {
  const CMatrix g = ginibre(m, m, rng);
  CMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

CMatrix random_hermitian(int m, RngStream& rng) {
  const CMatrix g = ginibre(m, m, rng);
  return 0.5 * (g + g.adjoint());
}

}  // namespace

TEST(PureState, RejectsUnnormalized) {
  EXPECT_THROW(PureState(CVector::Constant(2, cplx(1.0, 0.0))), std::invalid_argument);
  EXPECT_THROW(PureState::normalized(CVector::Zero(3)), std::invalid_argument);
  EXPECT_NO_THROW(PureState::normalized(CVector::Constant(2, cplx(1.0, 0.0))));
}

TEST(DensityMatrix, ValidatesInput) {
  CMatrix bad(2, 2);
  bad << 0.5, 0.1, 0.2, 0.5;
  EXPECT_THROW(DensityMatrix::checked(bad), std::invalid_argument);
  CMatrix neg(2, 2);
  neg << 1.5, 0.0, 0.0, -0.5;
  EXPECT_THROW(DensityMatrix::checked(neg), std::invalid_argument);
  EXPECT_NO_THROW(DensityMatrix::trusted(neg));
  CMatrix trace2 = CMatrix::Identity(2, 2);
  EXPECT_THROW(DensityMatrix::checked(trace2), std::invalid_argument);
}

TEST(Spectrum, SortsClampsAndRejects) {
  Spectrum w({0.25, -1e-12, 0.75});
  EXPECT_DOUBLE_EQ(w.largest(), 0.75);
  EXPECT_DOUBLE_EQ(w.smallest(), 0.0);
  EXPECT_THROW(Spectrum({1.1, -0.1}), std::domain_error);
  EXPECT_THROW(Spectrum({0.5, 0.4}), std::domain_error);
}

TEST(HermitianEigs, MaximallyMixed) {
  const auto [w, v] = hermitian_eigs(DensityMatrix::maximally_mixed(2));
  EXPECT_NEAR(w[0], 0.5, 1e-15);
  EXPECT_NEAR(w[1], 0.5, 1e-15);
}

TEST(HermitianEigs, PureBasisState) {
  CVector e0 = CVector::Zero(3);
  e0(0) = 1.0;
  const auto [w, v] = hermitian_eigs(DensityMatrix::pure(PureState(e0)));
  EXPECT_NEAR(w[0], 1.0, 1e-15);
  EXPECT_NEAR(w[1], 0.0, 1e-15);
  EXPECT_NEAR(w[2], 0.0, 1e-15);
}

TEST(HermitianEigs, ReconstructsRandomDensity) {
  RngStream rng(11, 0);
  for (int k = 0; k < 50; ++k) {
    const CMatrix rho = random_density(4, rng);
    const auto [w, v] = hermitian_eigs(DensityMatrix::checked(rho));
    RVector vals(4);
    for (int i = 0; i < 4; ++i) vals(i) = w[i];
    const CMatrix back = v * vals.cast<cplx>().asDiagonal() * v.adjoint();
    EXPECT_LT((back - rho).norm(), 1e-9);
    EXPECT_LT((v.adjoint() * v - CMatrix::Identity(4, 4)).norm(), 1e-12);
  }
}

TEST(JacobiEigen, MatchesEigenSolver) {
  RngStream rng(12, 0);
  for (int m : {1, 2, 5, 9}) {
    const CMatrix h = random_hermitian(m, rng);
    const RVector ours = jacobi_eigen(h).values;
    Eigen::SelfAdjointEigenSolver<CMatrix> ref(h);
    for (int i = 0; i < m; ++i) EXPECT_NEAR(ours(i), ref.eigenvalues()(m - 1 - i), 1e-11);
  }
}

TEST(Entropy, Examples) {
  EXPECT_DOUBLE_EQ(von_neumann_entropy(Spectrum({1.0, 0.0})), 0.0);
  for (int d : {2, 3, 7}) {
    EXPECT_NEAR(von_neumann_entropy(Spectrum(std::vector<double>(d, 1.0 / d))), std::log(d), 1e-14);
  }
  const double expect = -(0.75 * std::log(0.75) + 0.25 * std::log(0.25));
  EXPECT_NEAR(von_neumann_entropy(Spectrum({0.75, 0.25})), expect, 1e-15);
  EXPECT_NEAR(expect, 0.5623351, 1e-7);
}

TEST(PartialTrace, MaximallyEntangledGivesIdentity) {
  for (int d : {2, 3, 5}) {
    const PureState phi = maximally_entangled(d);
    const auto bd = BipartiteDims{d, d};
    const CMatrix id = CMatrix::Identity(d, d) / static_cast<double>(d);
    EXPECT_LT((partial_trace(phi, bd, TraceOut::first_d).entries() - id).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LT((partial_trace(phi, bd, TraceOut::second_n).entries() - id).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(PartialTrace, ProductStateIsRankOne) {
  RngStream rng(13, 0);
  const PureState a = random_pure_state(2, rng);  // C^d factor
  const PureState b = random_pure_state(3, rng);  // C^n factor
  // Layout: index i*d + j with i over n and j over d.
  const PureState prod(kron(b.amplitudes(), a.amplitudes()));
  const auto rho_d = partial_trace(prod, {2, 3}, TraceOut::second_n);
  const CMatrix aa = a.amplitudes() * a.amplitudes().adjoint();
  EXPECT_LT((rho_d.entries() - aa).norm(), 1e-12);
  const auto [w, v] = hermitian_eigs(rho_d);
  EXPECT_NEAR(w[0], 1.0, 1e-12);
  EXPECT_NEAR(w[1], 0.0, 1e-12);
}

TEST(PartialTrace, SchmidtSpectraAgreeWithSvd) {
  RngStream rng(14, 0);
  for (int k = 0; k < 20; ++k) {
    const PureState psi = random_pure_state(6, rng);
    const BipartiteDims bd{2, 3};
    const auto [wn, vn] = hermitian_eigs(partial_trace(psi, bd, TraceOut::first_d));
    const auto [wd, vd] = hermitian_eigs(partial_trace(psi, bd, TraceOut::second_n));
    const Eigen::JacobiSVD<CMatrix> svd(reshape_nd(psi.amplitudes(), bd));
    for (int i = 0; i < 2; ++i) {
      const double sv2 = svd.singularValues()(i) * svd.singularValues()(i);
      EXPECT_NEAR(wn[i], sv2, 1e-12);
      EXPECT_NEAR(wd[i], sv2, 1e-12);
    }
    EXPECT_NEAR(wn[2], 0.0, 1e-12);
  }
}

TEST(PartialTrace, RejectsWrongDimension) {
  EXPECT_THROW(partial_trace(maximally_entangled(2), {3, 2}, TraceOut::first_d), std::invalid_argument);
}

TEST(Norms, Examples) {
  CMatrix m = CMatrix::Zero(2, 2);
  m(0, 0) = 0.7 - 0.5;
  m(1, 1) = 0.3 - 0.5;
  EXPECT_NEAR(op_norm(m), 0.2, 1e-15);
  const CMatrix z = CMatrix::Zero(3, 3);
  EXPECT_EQ(op_norm(z), 0.0);
  EXPECT_EQ(fro_norm(z), 0.0);
  RngStream rng(15, 0);
  for (int k = 0; k < 1000; ++k) {
    const CMatrix h = random_hermitian(3, rng);
    EXPECT_LE(op_norm(h), fro_norm(h) + 1e-12);
    EXPECT_NEAR(op_norm(h), spectral_norm(h), 1e-10);
  }
}

TEST(MaximallyEntangled, Examples) {
  const PureState one = maximally_entangled(1);
  ASSERT_EQ(one.dim(), 1);
  EXPECT_NEAR(std::abs(one.amplitudes()(0) - cplx(1.0, 0.0)), 0.0, 1e-15);
  const PureState two = maximally_entangled(2);
  const double r = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(two.amplitudes()(0).real(), r, 1e-15);
  EXPECT_NEAR(std::abs(two.amplitudes()(1)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(two.amplitudes()(2)), 0.0, 1e-15);
  EXPECT_NEAR(two.amplitudes()(3).real(), r, 1e-15);
}

TEST(Kron, MatchesEigenDefinition) {
  RngStream rng(16, 0);
  const CMatrix a = ginibre(2, 3, rng);
  const CMatrix b = ginibre(3, 2, rng);
  const CMatrix k = kron(a, b);
  ASSERT_EQ(k.rows(), 6);
  ASSERT_EQ(k.cols(), 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 2; ++q) EXPECT_EQ(k(i * 3 + p, j * 2 + q), a(i, j) * b(p, q));
}
