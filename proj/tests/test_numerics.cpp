// Copyright 2026 The Neumark Optics Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "neumark/error.hpp"
#include "neumark/numerics.hpp"
#include "support.hpp"

namespace neumark {
namespace {

using testing::random_hermitian;

ComplexMatrix gamma1() {
  const double r = std::sqrt(2.0) / 6.0;
  ComplexMatrix g(3, 3);
  g << 2.0 / 3.0, r, -r, r, 5.0 / 6.0, 1.0 / 6.0, -r, 1.0 / 6.0, 1.0 / 6.0;
  return g;
}

TEST(Eigendecompose, IdentityHasUnitSpectrum) {
  const EigenDecomposition e = hermitian_eigendecompose(ComplexMatrix::Identity(3, 3));
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_NEAR(e.eigenvalues(i), 1.0, 1e-14);
  EXPECT_TRUE(is_unitary(e.basis));
}

TEST(Eigendecompose, GammaOneSpectrum) {
  const EigenDecomposition e = hermitian_eigendecompose(gamma1());
  EXPECT_NEAR(e.eigenvalues(0), 0.0, 1e-12);
  EXPECT_NEAR(e.eigenvalues(1), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(e.eigenvalues(2), 1.0, 1e-12);
}

TEST(Eigendecompose, RandomReconstructionAndDiagonalization) {
  std::mt19937_64 rng(11);
  for (Eigen::Index n = 1; n <= 16; ++n) {
    const ComplexMatrix h = random_hermitian(rng, n);
    const EigenDecomposition e = hermitian_eigendecompose(h);
    EXPECT_LE(max_abs(e.reconstruct() - h), 1e-10) << "n=" << n;
    EXPECT_LE(unitarity_residual(e.basis), 1e-10);
    const ComplexMatrix d = e.basis * h * e.basis.adjoint();
    EXPECT_LE(max_abs(d - ComplexMatrix(e.eigenvalues.cast<Complex>().asDiagonal())), 1e-10);
    for (Eigen::Index i = 1; i < n; ++i) EXPECT_LE(e.eigenvalues(i - 1), e.eigenvalues(i));
    // Oracle: an independent solver.
    const Eigen::VectorXd ref = Eigen::SelfAdjointEigenSolver<ComplexMatrix>(h).eigenvalues();
    EXPECT_LE((ref - e.eigenvalues).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Eigendecompose, Deterministic) {
  std::mt19937_64 rng(5);
  const ComplexMatrix h = random_hermitian(rng, 7);
  const EigenDecomposition a = hermitian_eigendecompose(h);
  const EigenDecomposition b = hermitian_eigendecompose(h);
  EXPECT_EQ(a.eigenvalues, b.eigenvalues);
  EXPECT_EQ(a.basis, b.basis);
}

TEST(Eigendecompose, RejectsNonHermitian) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(0, 1) = 1e-3;
  try {
    hermitian_eigendecompose(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotHermitian);
  }
}

TEST(Eigendecompose, RejectsNonFinite) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(1, 1) = std::nan("");
  EXPECT_THROW(hermitian_eigendecompose(m), Error);
}

TEST(Unitary, Basics) {
  EXPECT_TRUE(is_unitary(ComplexMatrix::Identity(4, 4)));
  ComplexMatrix d = ComplexMatrix::Identity(2, 2);
  d(0, 0) = 2.0;
  EXPECT_FALSE(is_unitary(d));
  std::mt19937_64 rng(3);
  EXPECT_TRUE(is_unitary(testing::random_unitary(rng, 6)));
}

TEST(Algebra, TraceAndAdjoint) {
  EXPECT_EQ(trace(ComplexMatrix::Identity(4, 4)), Complex(4.0, 0.0));
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 20; ++rep) {
    const ComplexMatrix a = testing::random_gaussian(rng, 5, 5);
    const ComplexMatrix b = testing::random_gaussian(rng, 5, 5);
    EXPECT_EQ(adjoint(adjoint(a)), a);
    EXPECT_LE(std::abs(trace(matmul(a, b)) - trace(matmul(b, a))), 1e-12);
  }
}

TEST(Algebra, ShapeMismatch) {
  try {
    matmul(ComplexMatrix::Zero(2, 3), ComplexMatrix::Zero(2, 3));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kShapeMismatch);
  }
  EXPECT_THROW(matvec(ComplexMatrix::Zero(2, 3), ComplexVector::Zero(2)), Error);
}

TEST(Algebra, HermitianTraceRejectsImaginary) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  EXPECT_DOUBLE_EQ(hermitian_trace(m), 2.0);
  m(0, 0) = Complex(1.0, 1e-6);
  EXPECT_THROW(hermitian_trace(m), Error);
}

TEST(Algebra, DirectSumAndKron) {
  const ComplexMatrix a = ComplexMatrix::Constant(2, 2, 1.0);
  const ComplexMatrix b = ComplexMatrix::Identity(3, 3);
  const ComplexMatrix s = direct_sum(a, b);
  EXPECT_EQ(s.rows(), 5);
  EXPECT_EQ(s.topRightCorner(2, 3), ComplexMatrix::Zero(2, 3));
  EXPECT_EQ(s.bottomRightCorner(3, 3), b);
  const ComplexMatrix k = kron(a, b);
  EXPECT_EQ(k.rows(), 6);
  EXPECT_EQ(k.block(3, 0, 3, 3), b);
}

TEST(PsdSqrt, ZeroAndDiagonal) {
  EXPECT_EQ(psd_sqrt(ComplexMatrix::Zero(3, 3)), ComplexMatrix::Zero(3, 3));
  RealVector c(3);
  c << 0.0, 2.0 / 3.0, 1.0;
  const ComplexMatrix complement = ComplexMatrix::Identity(3, 3) - ComplexMatrix(c.cast<Complex>().asDiagonal());
  const ComplexMatrix root = psd_sqrt(complement);
  EXPECT_NEAR(root(0, 0).real(), 1.0, 1e-12);
  EXPECT_NEAR(root(1, 1).real(), std::sqrt(1.0 / 3.0), 1e-12);
  EXPECT_NEAR(std::abs(root(2, 2)), 0.0, 1e-12);
  EXPECT_LE(max_abs(root - ComplexMatrix(root.diagonal().asDiagonal())), 1e-12);
}

TEST(PsdSqrt, RandomSquaresBack) {
  std::mt19937_64 rng(17);
  for (Eigen::Index n = 1; n <= 10; ++n) {
    const ComplexMatrix g = testing::random_gaussian(rng, n, n);
    const ComplexMatrix h = g * g.adjoint();
    const ComplexMatrix r = psd_sqrt(h);
    EXPECT_LE(max_abs(r * r - h), 1e-9 * std::max(1.0, max_abs(h)));
    EXPECT_LE(hermiticity_residual(r), 1e-12);
    EXPECT_GE(testing::oracle_min_eigenvalue(r), -1e-10);
  }
}

TEST(PsdSqrt, RejectsNegative) {
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(1, 1) = -0.1;
  try {
    psd_sqrt(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNotPositive);
  }
}

}  // namespace
}  // namespace neumark
