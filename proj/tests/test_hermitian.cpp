#include <gtest/gtest.h>

#include <cmath>

#include "angsync/hermitian.hpp"
#include "test_util.hpp"

namespace angsync {
namespace {

using testing::Gen;

TEST(Symmetrize, HermitianInputIsFixedPoint) {
  Gen gen(1);
  const HermitianMatrix h = gen.hermitian(6);
  const HermitianMatrix again = symmetrize(h.matrix());
  EXPECT_EQ((again.matrix() - h.matrix()).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Symmetrize, TwoByTwo) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = Complex(1.0, 1.0);
  const HermitianMatrix h = symmetrize(m);
  EXPECT_EQ(h(0, 0), Complex(0.0, 0.0));
  EXPECT_EQ(h(1, 1), Complex(0.0, 0.0));
  EXPECT_EQ(h(0, 1), Complex(0.5, 0.5));
  EXPECT_EQ(h(1, 0), Complex(0.5, -0.5));
}

TEST(Symmetrize, RandomInputSatisfiesInvariants) {
  Gen gen(2);
  const HermitianMatrix h = symmetrize(gen.complex_matrix(5));
  EXPECT_LE(max_asymmetry(h.matrix()), 1e-12);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(h(i, i).imag(), 0.0);
}

TEST(Symmetrize, RejectsNonSquare) {
  EXPECT_THROW(symmetrize(ComplexMatrix::Zero(2, 3)), DimensionError);
}

TEST(HermitianMatrix, RejectsNonHermitianInput) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  EXPECT_THROW(HermitianMatrix{m}, Error);
}

TEST(ExtremeEigs, CompleteGraphLaplacian) {
  const int n = 4;
  const ComplexMatrix l = n * ComplexMatrix::Identity(n, n) - ComplexMatrix::Ones(n, n);
  const EigenResult r = extreme_eigs(HermitianMatrix(l), 2, 1, 1e-12);
  ASSERT_EQ(r.values.size(), 3);
  EXPECT_NEAR(r.values(0), 0.0, 1e-12);
  EXPECT_NEAR(r.values(1), 4.0, 1e-12);
  EXPECT_NEAR(r.values(2), 4.0, 1e-12);
}

TEST(ExtremeEigs, Identity) {
  const EigenResult r = extreme_eigs(HermitianMatrix::identity(3), 3, 0, 1e-12);
  for (int i = 0; i < 3; ++i) EXPECT_NEAR(r.values(i), 1.0, 1e-14);
}

TEST(ExtremeEigs, MatchesJacobiOracle) {
  Gen gen(3);
  const HermitianMatrix h = gen.hermitian(8);
  const std::vector<double> oracle = testing::jacobi_eigenvalues(h.matrix());
  const EigenResult r = extreme_eigs(h, 4, 4, 1e-12);
  for (int i = 0; i < 8; ++i) EXPECT_NEAR(r.values(i), oracle[i], 1e-10);
}

TEST(ExtremeEigs, ResultContract) {
  Gen gen(4);
  const HermitianMatrix h = gen.hermitian(12);
  const double tol = 1e-10;
  const EigenResult r = extreme_eigs(h, 3, 2, tol);
  for (int k = 0; k < r.values.size(); ++k) {
    if (k > 0) EXPECT_LE(r.values(k - 1), r.values(k));
    EXPECT_NEAR(r.vectors.col(k).norm(), 1.0, 1e-12);
    EXPECT_LE(r.residuals(k), tol * 12);
  }
}

TEST(ExtremeEigs, RejectsBadArguments) {
  const HermitianMatrix h = HermitianMatrix::identity(3);
  EXPECT_THROW(extreme_eigs(h, 2, 2, 1e-10), Error);
  EXPECT_THROW(extreme_eigs(h, -1, 0, 1e-10), Error);
  EXPECT_THROW(extreme_eigs(h, 1, 0, 0.0), Error);
}

class LanczosPath : public ::testing::TestWithParam<int> {};

TEST_P(LanczosPath, AgreesWithDense) {
  Gen gen(10 + GetParam());
  const int n = GetParam();
  const HermitianMatrix h = gen.hermitian(n);
  const double tol = 1e-10;
  const EigenResult dense = extreme_eigs(h, 2, 2, tol, {EigMethod::Dense});
  const EigenResult lanczos = extreme_eigs(h, 2, 2, tol, {EigMethod::Lanczos});
  const double scale = std::max(1.0, operator_norm(h, tol));
  for (int k = 0; k < 4; ++k) {
    EXPECT_NEAR(lanczos.values(k), dense.values(k), tol * scale) << "k=" << k;
    EXPECT_LE(lanczos.residuals(k), tol * n);
  }
}

INSTANTIATE_TEST_SUITE_P(Sizes, LanczosPath, ::testing::Values(5, 40, 150));

TEST(ExtremeEigs, LanczosKeepsRepeatedEigenvalues) {
  // Spectrum {0, n, ..., n}: the largest three are all n.
  const int n = 60;
  const ComplexVector z = Gen(5).phases(n).values();
  const HermitianMatrix s(ComplexMatrix(n * ComplexMatrix::Identity(n, n) - z * z.adjoint()));
  const EigenResult r = extreme_eigs(s, 2, 3, 1e-10, {EigMethod::Lanczos});
  EXPECT_NEAR(r.values(0), 0.0, 1e-8);
  for (int k = 1; k < 5; ++k) EXPECT_NEAR(r.values(k), n, 1e-8);
}

TEST(ExtremeEigs, AutoSwitchesAboveDenseLimit) {
  Gen gen(6);
  const HermitianMatrix h = gen.hermitian(30);
  EigOptions opts;
  opts.dense_limit = 10;  // forces the iterative path
  const EigenResult r = extreme_eigs(h, 1, 1, 1e-10, opts);
  const std::vector<double> oracle = testing::jacobi_eigenvalues(h.matrix());
  EXPECT_NEAR(r.values(0), oracle.front(), 1e-8);
  EXPECT_NEAR(r.values(1), oracle.back(), 1e-8);
}

TEST(OperatorNorm, Diagonal) {
  RealVector d(3);
  d << 1.0, -5.0, 2.0;
  EXPECT_NEAR(operator_norm(HermitianMatrix::diagonal(d), 1e-12), 5.0, 1e-12);
}

TEST(OperatorNorm, RankOnePhaseVector) {
  const int n = 9;
  const PhaseVector z = Gen(7).phases(n);
  EXPECT_NEAR(operator_norm(HermitianMatrix::rank_one(z.values()), 1e-12), n, 1e-11);
}

TEST(OperatorNorm, MatchesJacobiOracle) {
  Gen gen(8);
  const HermitianMatrix h = gen.hermitian(16);
  const std::vector<double> ev = testing::jacobi_eigenvalues(h.matrix());
  const double oracle = std::max(std::abs(ev.front()), std::abs(ev.back()));
  EXPECT_NEAR(operator_norm(h, 1e-10), oracle, 1e-8 * oracle);
  EXPECT_NEAR(operator_norm(h, 1e-10, {EigMethod::Lanczos}), oracle, 1e-8 * oracle);
}

TEST(QuadForm, Identity) {
  Gen gen(9);
  const ComplexVector v = gen.complex_vector(7);
  EXPECT_NEAR(quad_form(HermitianMatrix::identity(7), v), v.squaredNorm(), 1e-12);
}

TEST(QuadForm, RankOneAtItsVector) {
  const int n = 11;
  const PhaseVector z = Gen(10).phases(n);
  EXPECT_NEAR(quad_form(HermitianMatrix::rank_one(z.values()), z.values()), double(n * n), 1e-10);
}

TEST(QuadForm, MatchesDoubleSum) {
  Gen gen(11);
  const HermitianMatrix h = gen.hermitian(6);
  const ComplexVector v = gen.complex_vector(6);
  const Complex oracle = testing::double_sum_form(h.matrix(), v);
  EXPECT_NEAR(quad_form(h, v), oracle.real(), 1e-10);
  EXPECT_NEAR(oracle.imag(), 0.0, 1e-10);
}

TEST(QuadForm, RejectsDimensionMismatch) {
  EXPECT_THROW(quad_form(HermitianMatrix::identity(3), ComplexVector::Ones(4)), DimensionError);
}

// Properties over random draws.

TEST(HermitianProperties, ParallelogramIdentity) {
  Gen gen(12);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 9;
    const HermitianMatrix h = gen.hermitian(n);
    const ComplexVector u = gen.complex_vector(n);
    const ComplexVector v = gen.complex_vector(n);
    const double lhs = quad_form(h, u + v) + quad_form(h, u - v);
    const double rhs = 2.0 * quad_form(h, u) + 2.0 * quad_form(h, v);
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(HermitianProperties, ShiftMovesEigenvaluesExactly) {
  Gen gen(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 10;
    const HermitianMatrix h = gen.hermitian(n);
    const double c = gen.uniform(-10.0, 10.0);
    const int ks = n / 2;
    const EigenResult a = extreme_eigs(h, ks, n - ks, 1e-12);
    const EigenResult b = extreme_eigs(h.shifted(c), ks, n - ks, 1e-12);
    for (int k = 0; k < n; ++k) EXPECT_NEAR(b.values(k) - a.values(k), c, 1e-9 * n);
  }
}

TEST(HermitianProperties, OperatorNormBoundsRayleighQuotients) {
  Gen gen(14);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 12;
    const HermitianMatrix h = gen.hermitian(n);
    const double norm = operator_norm(h, 1e-12);
    for (int k = 0; k < 5; ++k) {
      const ComplexVector v = gen.complex_vector(n);
      EXPECT_GE(norm * (1.0 + 1e-12), std::abs(quad_form(h, v)) / v.squaredNorm());
    }
  }
}

}  // namespace
}  // namespace angsync
