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

#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

#include "neumark/tolerances.hpp"

namespace neumark {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Spectral data of a Hermitian matrix H.
///
/// Rows of `basis` are the eigenvectors <alpha_i|, so basis * H * basis^dagger
/// is diag(eigenvalues) and basis^dagger * diag(eigenvalues) * basis == H.
struct EigenDecomposition {
  RealVector eigenvalues;  // ascending
  ComplexMatrix basis;

  std::size_t size() const { return static_cast<std::size_t>(eigenvalues.size()); }
  ComplexMatrix reconstruct() const;
};

/// Cyclic complex Jacobi. Deterministic: fixed (p, q) sweep order, stable
/// ascending sort. Throws kNotHermitian or kNoConvergence.
EigenDecomposition hermitian_eigendecompose(const ComplexMatrix& h,
                                            double tol = kDefaultTolerances.hermitian,
                                            const Tolerances& settings = kDefaultTolerances);

/// max |M^dagger M - I| entry.
double unitarity_residual(const ComplexMatrix& m);
bool is_unitary(const ComplexMatrix& m, double tol = kDefaultTolerances.unitary);

/// max |H - H^dagger| entry.
double hermiticity_residual(const ComplexMatrix& h);

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x);
ComplexMatrix adjoint(const ComplexMatrix& a);
Complex trace(const ComplexMatrix& a);
/// Trace of an operator known to be Hermitian; the imaginary part must be
/// below `imaginary_tol` and is then dropped.
double hermitian_trace(const ComplexMatrix& a, double imaginary_tol = kDefaultTolerances.imaginary);

/// U^dagger diag(sqrt(c)) U with eigenvalues in [-tol, 0) clamped to zero.
ComplexMatrix psd_sqrt(const ComplexMatrix& h, double tol = kDefaultTolerances.eigenvalue_window);

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
double max_abs(const ComplexMatrix& m);

void require_square(const ComplexMatrix& m, const char* what);
void require_finite(const ComplexMatrix& m, const char* what);
void require_hermitian(const ComplexMatrix& m, double tol, const char* what);

}  // namespace neumark
