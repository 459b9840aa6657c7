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

#include "neumark/dilation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "neumark/error.hpp"

namespace neumark {

RealVector snap_inconclusive_spectrum(const RealVector& eigenvalues, const Tolerances& tol) {
  RealVector out = eigenvalues;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    double& c = out(i);
    if (c < -tol.eigenvalue_window) {
      std::ostringstream os;
      os << "inconclusive element not positive: eigenvalue " << c;
      throw Error(ErrorCode::kNotPositive, os.str());
    }
    if (c > 1.0 + tol.eigenvalue_window) {
      std::ostringstream os;
      os << "inconclusive element has eigenvalue " << c << " above 1";
      throw Error(ErrorCode::kEigenvalueOutOfRange, os.str());
    }
    if (c <= tol.eigenvalue_snap) c = 0.0;
    if (c >= 1.0 - tol.eigenvalue_snap) c = 1.0;
  }
  return out;
}

DilationSigma build_dilation(const ComplexMatrix& pi0, SignVariant variant, const Tolerances& tol) {
  return build_dilation(hermitian_eigendecompose(pi0, tol.hermitian, tol), variant, tol);
}

DilationSigma build_dilation(const EigenDecomposition& pi0_eigen, SignVariant variant, const Tolerances& tol) {
  if (pi0_eigen.basis.rows() != pi0_eigen.basis.cols() ||
      pi0_eigen.basis.rows() != pi0_eigen.eigenvalues.size()) {
    throw Error(ErrorCode::kShapeMismatch, "eigendecomposition basis does not match its eigenvalues");
  }
  DilationSigma d;
  d.dim_signal = pi0_eigen.size();
  d.variant = variant;
  d.eigen.basis = pi0_eigen.basis;
  d.eigen.eigenvalues = snap_inconclusive_spectrum(pi0_eigen.eigenvalues, tol);

  const Eigen::Index n = static_cast<Eigen::Index>(d.dim_signal);
  RealVector root_c(n);
  RealVector root_complement(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    root_c(i) = std::sqrt(d.eigen.eigenvalues(i));
    root_complement(i) = std::sqrt(1.0 - d.eigen.eigenvalues(i));
  }
  const ComplexMatrix& u = d.eigen.basis;
  ComplexMatrix a0 = u.adjoint() * root_c.cast<Complex>().asDiagonal() * u;
  ComplexMatrix comp = u.adjoint() * root_complement.cast<Complex>().asDiagonal() * u;
  d.a0 = 0.5 * (a0 + a0.adjoint());
  d.complement_sqrt = 0.5 * (comp + comp.adjoint());

  double s_tl = 1.0, s_tr = 1.0, s_bl = 1.0, s_br = 1.0;
  switch (variant) {
    case SignVariant::kUpperRight: s_tr = -1.0; break;
    case SignVariant::kLowerLeft: s_bl = -1.0; break;
    case SignVariant::kUpperLeft: s_tl = -1.0; break;
    case SignVariant::kLowerRight: s_br = -1.0; break;
  }
  d.sigma.resize(2 * n, 2 * n);
  d.sigma.topLeftCorner(n, n) = s_tl * d.complement_sqrt;
  d.sigma.topRightCorner(n, n) = s_tr * d.a0;
  d.sigma.bottomLeftCorner(n, n) = s_bl * d.a0;
  d.sigma.bottomRightCorner(n, n) = s_br * d.complement_sqrt;

  const double residual = unitarity_residual(d.sigma);
  if (residual > tol.unitary) {
    std::ostringstream os;
    os << "dilation is not unitary (residual " << residual << "); eigenbasis not orthonormal?";
    throw Error(ErrorCode::kNotUnitary, os.str());
  }
  return d;
}

DilatedOutput apply_to_pure(const DilationSigma& d, const PureState& psi) {
  if (psi.dim() != d.dim_signal) {
    throw Error(ErrorCode::kDimensionMismatch, "state dimension does not match the dilation");
  }
  const Eigen::Index n = static_cast<Eigen::Index>(d.dim_signal);
  return {d.sigma.topLeftCorner(n, n) * psi.amplitudes(), d.sigma.bottomLeftCorner(n, n) * psi.amplitudes()};
}

ComplexMatrix apply_to_mixed(const DilationSigma& d, const ComplexMatrix& rho) {
  const Eigen::Index n = static_cast<Eigen::Index>(d.dim_signal);
  if (rho.rows() != n || rho.cols() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "operator dimension does not match the dilation");
  }
  // Only the left block column of Sigma sees rho + 0.
  const ComplexMatrix left = d.sigma.leftCols(n);
  return left * rho * left.adjoint();
}

ProbabilitySplit success_failure_split(const DilationSigma& d, const State& state) {
  if (const auto* pure = std::get_if<PureState>(&state)) {
    const DilatedOutput out = apply_to_pure(d, *pure);
    return {out.signal.squaredNorm(), out.ancilla.squaredNorm()};
  }
  const Eigen::Index n = static_cast<Eigen::Index>(d.dim_signal);
  const ComplexMatrix out = apply_to_mixed(d, std::get<MixedState>(state).density());
  return {out.topLeftCorner(n, n).trace().real(), out.bottomRightCorner(n, n).trace().real()};
}

DilationReport verify_dilation(const DilationSigma& d, const std::vector<PureState>& states, double tol,
                               const Tolerances& settings) {
  DilationReport report;
  report.unitarity_residual = unitarity_residual(d.sigma);
  report.unitary = report.unitarity_residual <= settings.unitary;

  std::vector<DilatedOutput> outputs;
  outputs.reserve(states.size());
  for (const PureState& s : states) outputs.push_back(apply_to_pure(d, s));

  for (std::size_t i = 0; i < states.size(); ++i) {
    for (std::size_t j = 0; j < states.size(); ++j) {
      if (i == j) continue;
      const Complex signal = outputs[j].signal.dot(outputs[i].signal);
      const Complex ancilla = outputs[j].ancilla.dot(outputs[i].ancilla);
      const Complex original = states[j].amplitudes().dot(states[i].amplitudes());
      report.max_signal_overlap = std::max(report.max_signal_overlap, std::abs(signal));
      report.max_ancilla_overlap_error = std::max(report.max_ancilla_overlap_error, std::abs(ancilla - original));
    }
  }
  report.signal_orthogonal = report.max_signal_overlap <= tol;
  report.ancilla_overlaps_preserved = report.max_ancilla_overlap_error <= tol;
  return report;
}

MixedDilationReport verify_dilation_mixed(const DilationSigma& d, const std::vector<ComplexMatrix>& rhos,
                                          double tol, const Tolerances& settings) {
  MixedDilationReport report;
  report.unitarity_residual = unitarity_residual(d.sigma);
  const Eigen::Index n = static_cast<Eigen::Index>(d.dim_signal);
  for (std::size_t i = 0; i < rhos.size(); ++i) {
    for (std::size_t j = 0; j < rhos.size(); ++j) {
      if (i == j) continue;
      const ComplexMatrix product = rhos[i] * rhos[j];
      const ComplexMatrix out = apply_to_mixed(d, product);
      report.max_signal_trace = std::max(report.max_signal_trace, std::abs(out.topLeftCorner(n, n).trace()));
      report.max_ancilla_trace_error = std::max(
          report.max_ancilla_trace_error, std::abs(out.bottomRightCorner(n, n).trace() - product.trace()));
    }
  }
  report.passed = report.unitarity_residual <= settings.unitary && report.max_signal_trace <= tol &&
                  report.max_ancilla_trace_error <= tol;
  return report;
}

}  // namespace neumark
