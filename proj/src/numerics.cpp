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

#include "neumark/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include "neumark/error.hpp"

namespace neumark {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotHermitian: return "NotHermitian";
    case ErrorCode::kNotPositive: return "NotPositive";
    case ErrorCode::kNotUnitary: return "NotUnitary";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kEigenvalueOutOfRange: return "EigenvalueOutOfRange";
    case ErrorCode::kProbabilityOutOfRange: return "ProbabilityOutOfRange";
    case ErrorCode::kDegenerateOutput: return "DegenerateOutput";
    case ErrorCode::kZeroErrorViolation: return "ZeroErrorViolation";
    case ErrorCode::kInvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

namespace {

std::string shape_of(const ComplexMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

}  // namespace

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::kShapeMismatch, std::string(what) + " must be square, got " + shape_of(m));
  }
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::kInvalidInput, std::string(what) + " has non-finite entries");
  }
}

void require_hermitian(const ComplexMatrix& m, double tol, const char* what) {
  require_square(m, what);
  require_finite(m, what);
  const double residual = hermiticity_residual(m);
  if (residual > tol) {
    std::ostringstream os;
    os << what << " is not Hermitian (max |H - H^dagger| = " << residual << ")";
    throw Error(ErrorCode::kNotHermitian, os.str());
  }
}

ComplexMatrix EigenDecomposition::reconstruct() const {
  return basis.adjoint() * eigenvalues.cast<Complex>().asDiagonal() * basis;
}

EigenDecomposition hermitian_eigendecompose(const ComplexMatrix& h, double tol,
                                            const Tolerances& settings) {
  require_hermitian(h, tol, "eigendecomposition input");
  const Eigen::Index n = h.rows();

  ComplexMatrix a = 0.5 * (h + h.adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double threshold = settings.jacobi_relative * a.norm();

  bool converged = false;
  for (int sweep = 0; sweep <= settings.jacobi_max_sweeps; ++sweep) {
    if (off_diagonal_norm(a) <= threshold) {
      converged = true;
      break;
    }
    if (sweep == settings.jacobi_max_sweeps) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Complex apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag == 0.0) continue;
        // Reduce to a real symmetric 2x2 problem with the phase of a(p, q),
        // then apply the classical Jacobi rotation.
        const Complex phase = apq / mag;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        const double tau = (aqq - app) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex phase_conj = std::conj(phase);

        // J restricted to (p, q) = [[c, s], [-s conj(ph), c conj(ph)]].
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex akp = a(k, p);
          const Complex akq = a(k, q);
          a(k, p) = c * akp - s * phase_conj * akq;
          a(k, q) = s * akp + c * phase_conj * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex apk = a(p, k);
          const Complex aqk = a(q, k);
          a(p, k) = c * apk - s * phase * aqk;
          a(q, k) = s * apk + c * phase * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        a(p, p) = a(p, p).real();
        a(q, q) = a(q, q).real();
        for (Eigen::Index k = 0; k < n; ++k) {
          const Complex vkp = v(k, p);
          const Complex vkq = v(k, q);
          v(k, p) = c * vkp - s * phase_conj * vkq;
          v(k, q) = s * vkp + c * phase_conj * vkq;
        }
      }
    }
  }
  if (!converged) {
    throw Error(ErrorCode::kNoConvergence, "Jacobi sweeps exhausted before off-diagonal norm converged");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index x, Eigen::Index y) { return a(x, x).real() < a(y, y).real(); });

  EigenDecomposition result;
  result.eigenvalues.resize(n);
  result.basis.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Eigen::Index src = order[static_cast<std::size_t>(i)];
    result.eigenvalues(i) = a(src, src).real();
    result.basis.row(i) = v.col(src).adjoint();
  }
  return result;
}

double unitarity_residual(const ComplexMatrix& m) {
  require_square(m, "unitarity check input");
  const ComplexMatrix gram = m.adjoint() * m;
  return max_abs(gram - ComplexMatrix::Identity(m.rows(), m.cols()));
}

bool is_unitary(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols() || !m.allFinite()) return false;
  return unitarity_residual(m) <= tol;
}

double hermiticity_residual(const ComplexMatrix& h) {
  require_square(h, "Hermiticity check input");
  return max_abs(h - h.adjoint());
}

ComplexMatrix matmul(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) {
    throw Error(ErrorCode::kShapeMismatch, "cannot multiply " + shape_of(a) + " by " + shape_of(b));
  }
  return a * b;
}

ComplexVector matvec(const ComplexMatrix& a, const ComplexVector& x) {
  if (a.cols() != x.size()) {
    throw Error(ErrorCode::kShapeMismatch,
                "cannot apply " + shape_of(a) + " to a vector of length " + std::to_string(x.size()));
  }
  return a * x;
}

ComplexMatrix adjoint(const ComplexMatrix& a) { return a.adjoint(); }

Complex trace(const ComplexMatrix& a) {
  require_square(a, "trace input");
  return a.trace();
}

double hermitian_trace(const ComplexMatrix& a, double imaginary_tol) {
  const Complex t = trace(a);
  if (std::abs(t.imag()) > imaginary_tol) {
    std::ostringstream os;
    os << "trace of a Hermitian operator has imaginary part " << t.imag();
    throw Error(ErrorCode::kNotHermitian, os.str());
  }
  return t.real();
}

ComplexMatrix psd_sqrt(const ComplexMatrix& h, double tol) {
  const EigenDecomposition eig = hermitian_eigendecompose(h);
  RealVector roots(eig.eigenvalues.size());
  for (Eigen::Index i = 0; i < roots.size(); ++i) {
    const double c = eig.eigenvalues(i);
    if (c < -tol) {
      std::ostringstream os;
      os << "matrix square root needs a positive operator, found eigenvalue " << c;
      throw Error(ErrorCode::kNotPositive, os.str());
    }
    roots(i) = std::sqrt(std::max(c, 0.0));
  }
  const ComplexMatrix root = eig.basis.adjoint() * roots.cast<Complex>().asDiagonal() * eig.basis;
  return 0.5 * (root + root.adjoint());
}

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace neumark
