#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "eigenbound/matrix.hpp"
#include "test_support.hpp"

using namespace eigenbound;
using eigenbound::test_support::random_matrix;
using eigenbound::test_support::random_unitary;

namespace {

const Complex I{0.0, 1.0};

}  // namespace

TEST(DenseMatrix, RejectsBadShapes) {
  EXPECT_THROW(DenseMatrix(0), DimensionError);
  EXPECT_THROW(DenseMatrix(2, std::vector<Complex>(3)), DimensionError);
  EXPECT_THROW((DenseMatrix{{1.0, 2.0}, {3.0}}), DimensionError);
}

TEST(DenseMatrix, RejectsNonFinite) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  EXPECT_THROW((DenseMatrix{{1.0, nan}, {0.0, 1.0}}), NonFiniteError);
  EXPECT_THROW((DenseMatrix{{Complex{1.0, inf}}}), NonFiniteError);
}

TEST(Adjoint, Examples) {
  EXPECT_EQ(adjoint(DenseMatrix{{I}}), (DenseMatrix{{-I}}));
  EXPECT_EQ(adjoint(DenseMatrix{{1.0, 2.0}, {3.0, 4.0}}), (DenseMatrix{{1.0, 3.0}, {2.0, 4.0}}));
  EXPECT_EQ(adjoint(DenseMatrix{{0.0, 1.0 + I}, {2.0, 0.0}}),
            (DenseMatrix{{0.0, 2.0}, {1.0 - I, 0.0}}));
}

TEST(Adjoint, IsAnInvolution) {
  Rng rng(7);
  const auto a = random_matrix(6, rng);
  EXPECT_EQ(adjoint(adjoint(a)), a);
}

TEST(Conjugate, Examples) {
  EXPECT_EQ(conjugate(DenseMatrix{{I}}), (DenseMatrix{{-I}}));
  const DenseMatrix real{{1.0, -2.0}, {0.5, 4.0}};
  EXPECT_EQ(conjugate(real), real);
  EXPECT_EQ(conjugate(DenseMatrix{{1.0 + I, 0.0}, {0.0, 1.0 - I}}),
            (DenseMatrix{{1.0 - I, 0.0}, {0.0, 1.0 + I}}));
  Rng rng(8);
  const auto a = random_matrix(5, rng);
  EXPECT_EQ(conjugate(conjugate(a)), a);
}

TEST(Trace, Examples) {
  EXPECT_EQ(trace(DenseMatrix::identity(3)), Complex(3.0));
  EXPECT_EQ(trace(DenseMatrix{{0.0, 1.0}, {0.0, 0.0}}), Complex(0.0));
  EXPECT_EQ(trace(DenseMatrix{{1.0 + I, 5.0}, {7.0, 2.0 - 3.0 * I}}), 3.0 - 2.0 * I);
}

TEST(Trace, LinearAndConjugates) {
  Rng rng(9);
  for (int k = 0; k < 20; ++k) {
    const auto a = random_matrix(7, rng);
    const auto b = random_matrix(7, rng);
    EXPECT_LT(std::abs(trace(linear_combine(1.0, a, 1.0, b)) - (trace(a) + trace(b))), 1e-13);
    EXPECT_EQ(trace(adjoint(a)), std::conj(trace(a)));
  }
}

TEST(FrobeniusNormSq, Examples) {
  EXPECT_DOUBLE_EQ(frobenius_norm_sq(DenseMatrix::identity(2)), 2.0);
  EXPECT_DOUBLE_EQ(frobenius_norm_sq(DenseMatrix{{0.0, 1.0}, {0.0, 0.0}}), 1.0);
  EXPECT_DOUBLE_EQ(frobenius_norm_sq(DenseMatrix{{1.0, 2.0}, {3.0, 4.0}}), 30.0);
}

TEST(FrobeniusNormSq, MatchesTraceOfGram) {
  Rng rng(10);
  for (std::size_t n : {1u, 2u, 5u, 17u, 50u}) {
    const auto a = random_matrix(n, rng);
    const double f = frobenius_norm_sq(a);
    const Complex t = trace(multiply(a, adjoint(a)));
    EXPECT_LE(std::abs(t.real() - f), 1e-12 * f) << "n=" << n;
    EXPECT_LE(std::abs(t.imag()), 1e-12 * f);
  }
}

TEST(Multiply, Examples) {
  Rng rng(11);
  const auto a = random_matrix(4, rng);
  EXPECT_EQ(multiply(a, DenseMatrix::identity(4)), a);
  EXPECT_EQ(multiply(DenseMatrix{{0.0, 1.0}, {0.0, 0.0}}, DenseMatrix{{0.0, 0.0}, {1.0, 0.0}}),
            (DenseMatrix{{1.0, 0.0}, {0.0, 0.0}}));
  EXPECT_EQ(multiply(DenseMatrix{{1.0, 1.0}, {0.0, 1.0}}, DenseMatrix{{1.0, -1.0}, {0.0, 1.0}}),
            DenseMatrix::identity(2));
}

TEST(Multiply, DimensionMismatch) {
  EXPECT_THROW(multiply(DenseMatrix::identity(2), DenseMatrix::identity(3)), DimensionError);
  EXPECT_THROW(linear_combine(1.0, DenseMatrix::identity(2), 1.0, DenseMatrix::identity(3)),
               DimensionError);
}

TEST(LinearCombine, Examples) {
  Rng rng(12);
  const auto a = random_matrix(3, rng);
  const auto b = random_matrix(3, rng);
  EXPECT_EQ(linear_combine(1.0, a, 0.0, b), a);
  EXPECT_EQ(linear_combine(1.0, a, -1.0, a), DenseMatrix(3));
  const DenseMatrix d{{1.0, 0.0}, {0.0, 3.0}};
  const DenseMatrix expected{{1.0, 0.0}, {0.0, -1.0}};
  EXPECT_EQ(linear_combine(2.0, DenseMatrix::identity(2), -1.0, d), expected);
  EXPECT_EQ(shift(d, 2.0), expected);
}

TEST(HermitianParts, Examples) {
  const DenseMatrix herm{{2.0, 1.0 - I}, {1.0 + I, -3.0}};
  EXPECT_EQ(hermitian_real_part(herm), herm);
  EXPECT_EQ(hermitian_imag_part(herm), DenseMatrix(2));

  EXPECT_EQ(hermitian_real_part(DenseMatrix{{0.0, 1.0}, {0.0, 0.0}}),
            (DenseMatrix{{0.0, 0.5}, {0.5, 0.0}}));
  const DenseMatrix skew{{0.0, 1.0}, {-1.0, 0.0}};
  EXPECT_EQ(hermitian_real_part(skew), DenseMatrix(2));
  EXPECT_EQ(hermitian_imag_part(skew), (DenseMatrix{{0.0, -I}, {I, 0.0}}));
  EXPECT_EQ(hermitian_imag_part(DenseMatrix{{2.0 * I}}), (DenseMatrix{{2.0}}));
}

TEST(HermitianParts, HermitianAndReconstruct) {
  Rng rng(13);
  for (std::size_t n : {1u, 3u, 8u, 25u}) {
    const auto a = random_matrix(n, rng, 3.0);
    const auto re = hermitian_real_part(a);
    const auto im = hermitian_imag_part(a);
    const double scale = a.max_abs_entry();
    EXPECT_LE(test_support::hermitian_defect(re), 1e-14 * scale);
    EXPECT_LE(test_support::hermitian_defect(im), 1e-14 * scale);
    EXPECT_LE(max_abs_diff(linear_combine(1.0, re, I, im), a), 1e-14 * scale);
  }
}

TEST(CommutatorDefect, Examples) {
  const std::vector<Complex> d{1.0, -2.0 + I, 3.5};
  EXPECT_EQ(commutator_defect(DenseMatrix::diagonal(d)), 0.0);
  EXPECT_DOUBLE_EQ(commutator_defect(DenseMatrix{{0.0, 1.0}, {0.0, 0.0}}), 1.0);
  EXPECT_EQ(commutator_defect(DenseMatrix{{0.0, 1.0}, {-1.0, 0.0}}), 0.0);
}

TEST(CommutatorDefect, UnitaryInvariance) {
  Rng rng(14);
  for (int k = 0; k < 10; ++k) {
    const auto a = random_matrix(9, rng);
    const auto u = random_unitary(9, rng);
    const double d = commutator_defect(a);
    const double du = commutator_defect(multiply(multiply(u, a), adjoint(u)));
    EXPECT_GE(d, 0.0);
    EXPECT_LE(std::abs(du - d), 1e-10 * d);
  }
}

TEST(CommutatorDefect, ShiftInvariance) {
  Rng rng(15);
  for (int k = 0; k < 20; ++k) {
    const auto a = random_matrix(6, rng);
    const Complex lambda = 3.0 * rng.complex_normal();
    const double d = commutator_defect(a);
    EXPECT_LE(std::abs(commutator_defect(shift(a, lambda)) - d), 1e-10 * d);
  }
}
