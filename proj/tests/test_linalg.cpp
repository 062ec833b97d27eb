#include <gtest/gtest.h>

#include <random>

#include "multroot/linalg.hpp"
#include "support.hpp"

using namespace multroot;
using testing_support::frob_diff;
using testing_support::random_cmatrix;
using testing_support::random_cvector;

namespace {

std::mt19937_64 rng(11);

CMatrix stacked_r(const QRFactors& qr) {
  CMatrix out(qr.rows, qr.cols);
  for (std::size_t j = 0; j < qr.cols; ++j)
    for (std::size_t i = 0; i <= j; ++i) out(i, j) = qr.r(i, j);
  return out;
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  CMatrix c(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) {
    const CVector col(b.col(j).begin(), b.col(j).end());
    const CVector y = a * col;
    for (std::size_t i = 0; i < a.rows(); ++i) c(i, j) = y[i];
  }
  return c;
}

}  // namespace

TEST(QR, ReconstructsAndIsUnitary) {
  for (int t = 0; t < 10; ++t) {
    const CMatrix a = random_cmatrix(6 + t, 3 + t / 2, rng);
    const QRFactors qr = qr_decompose(a);
    const CMatrix q = qr.q();
    EXPECT_LT(frob_diff(matmul(q, stacked_r(qr)), a), 1e-13 * a.frobenius_norm());
    EXPECT_LT(frob_diff(matmul(q.adjoint(), q), CMatrix::identity(q.rows())), 1e-13);
    for (std::size_t i = 0; i < qr.cols; ++i) {
      EXPECT_GE(qr.r(i, i).real(), 0.0);
      EXPECT_EQ(qr.r(i, i).imag(), 0.0);
    }
  }
  EXPECT_THROW(qr_decompose(CMatrix(2, 3)), std::invalid_argument);
}

TEST(QR, AppendMatchesFreshFactorization) {
  CMatrix a = random_cmatrix(8, 3, rng);
  QRFactors qr = qr_decompose(a);
  for (int step = 0; step < 5; ++step) {
    const CMatrix extra = random_cmatrix(a.rows() + 1, 2, rng);
    qr = qr_update_append(qr, 1, extra);
    CMatrix grown(a.rows() + 1, a.cols() + 2);
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t i = 0; i < a.rows(); ++i) grown(i, j) = a(i, j);
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t i = 0; i < grown.rows(); ++i) grown(i, a.cols() + j) = extra(i, j);
    a = grown;
    const QRFactors fresh = qr_decompose(a);
    EXPECT_LT(frob_diff(qr.r, fresh.r), 1e-12 * fresh.r.frobenius_norm());
  }
  EXPECT_THROW(qr_update_append(qr, 0, CMatrix(2, 1)), std::invalid_argument);
}

TEST(LeastSquares, ResidualOrthogonalToRange) {
  const CMatrix a = random_cmatrix(12, 5, rng);
  const CVector b = random_cvector(12, rng);
  const CVector x = least_squares_solve(qr_decompose(a), b);
  CVector r = a * x;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  const CVector g = a.adjoint() * r;
  EXPECT_LT(norm2(g), 1e-12 * a.frobenius_norm() * norm2(b));
}

TEST(Triangular, SolvesAndRejectsSingular) {
  CMatrix r(2, 2);
  r(0, 0) = 2.0;
  r(0, 1) = 1.0;
  r(1, 1) = 4.0;
  const CVector x = back_substitute(r, CVector{5.0, 8.0});
  EXPECT_NEAR(x[1].real(), 2.0, 1e-15);
  EXPECT_NEAR(x[0].real(), 1.5, 1e-15);
  const CVector y = forward_substitute_adjoint(r, CVector{2.0, 9.0});  // R^H y = b
  EXPECT_NEAR(y[0].real(), 1.0, 1e-15);
  EXPECT_NEAR(y[1].real(), 2.0, 1e-15);
  r(1, 1) = 0.0;
  EXPECT_THROW(back_substitute(r, CVector{1.0, 1.0}), SingularMatrixError);
}

TEST(SingularPair, MatchesJacobiSvd) {
  for (int t = 0; t < 15; ++t) {
    const CMatrix a = random_cmatrix(10 + t, 4 + t % 6, rng);
    const SingularPair sp = smallest_singular_pair(qr_decompose(a), 1e-15, 3000);
    const SvdResult s = jacobi_svd(a);
    EXPECT_NEAR(sp.sigma / s.values.back(), 1.0, 1e-9);
    // A x has norm sigma for the returned unit vector
    EXPECT_NEAR(norm2(sp.vector), 1.0, 1e-12);
    EXPECT_NEAR(norm2(a * sp.vector), sp.sigma, 1e-9 * s.values.front());
  }
}

TEST(SingularPair, FindsExactNullVector) {
  CMatrix a = random_cmatrix(6, 3, rng);
  for (std::size_t i = 0; i < 6; ++i) a(i, 2) = a(i, 0) - 2.0 * a(i, 1);
  const SingularPair sp = smallest_singular_pair(qr_decompose(a), 1e-10, 50);
  EXPECT_LT(sp.sigma, 1e-12 * a.frobenius_norm());
  const Complex s = sp.vector[0] / sp.vector[2];
  EXPECT_NEAR(std::abs(s - Complex(-1.0)), 0.0, 1e-10);  // null vector (1, -2, -1)
  EXPECT_THROW(smallest_singular_pair(qr_decompose(a), CVector{0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST(JacobiSvd, KnownDiagonalAndOrdering) {
  CMatrix a(3, 2);
  a(0, 0) = 3.0;
  a(1, 1) = Complex(0.0, -5.0);
  const SvdResult s = jacobi_svd(a);
  ASSERT_EQ(s.values.size(), 2u);
  EXPECT_NEAR(s.values[0], 5.0, 1e-14);
  EXPECT_NEAR(s.values[1], 3.0, 1e-14);
  EXPECT_NEAR(matrix_condition(a), 5.0 / 3.0, 1e-14);
  EXPECT_THROW(jacobi_svd(CMatrix(1, 2)), std::invalid_argument);
  EXPECT_THROW(jacobi_svd(CMatrix(300, 201)), std::invalid_argument);
}

TEST(JacobiSvd, SingularValuesReproduceFrobeniusNorm) {
  const CMatrix a = random_cmatrix(9, 6, rng);
  const SvdResult s = jacobi_svd(a);
  double sum = 0.0;
  for (double v : s.values) sum += v * v;
  EXPECT_NEAR(std::sqrt(sum), a.frobenius_norm(), 1e-12 * a.frobenius_norm());
  for (std::size_t i = 1; i < s.values.size(); ++i) EXPECT_GE(s.values[i - 1], s.values[i]);
}

TEST(Conditioning, ConvolutionMatricesOfXPlus25) {
  // C_m stays near 1 while the padded square variant grows like 25^(m+2)
  const Poly v{1.0, 25.0};
  EXPECT_NEAR(matrix_condition(convolution_matrix(v, 0)), 1.0, 1e-14);
  double prev = 0.0;
  for (int m = 1; m <= 10; ++m) {
    const double k = matrix_condition(convolution_matrix(v, m));
    EXPECT_GT(k, prev);
    EXPECT_LT(k, 1.09);
    prev = k;
  }
  EXPECT_NEAR(matrix_condition(testing_support::padded_convolution(v, 0)), 627.0, 1.0);
}
