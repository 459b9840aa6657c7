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

#include <cstddef>
#include <vector>

#include "neumark/numerics.hpp"
#include "neumark/povm.hpp"
#include "neumark/tolerances.hpp"

namespace neumark {

/// Which of the four N x N blocks of Sigma carries the minus sign. All four
/// are unitary; kUpperRight is the canonical one used by the compiler.
enum class SignVariant { kUpperRight, kLowerLeft, kUpperLeft, kLowerRight };

/// Direct-sum dilation of a POVM's inconclusive element onto 2N modes:
///
///     Sigma = [[ C, -A ],
///              [ A,  C ]],   A = Pi_0^(1/2),  C = (I - Pi_0)^(1/2),
///
/// with both square roots taken over the eigenbasis of Pi_0. A and C are
/// functions of Pi_0 alone, whatever eigenbasis `eigen` happens to hold.
struct DilationSigma {
  std::size_t dim_signal = 0;
  ComplexMatrix sigma;
  EigenDecomposition eigen;  // of Pi_0, eigenvalues snapped into [0, 1]
  ComplexMatrix a0;
  ComplexMatrix complement_sqrt;
  SignVariant variant = SignVariant::kUpperRight;
};

DilationSigma build_dilation(const ComplexMatrix& pi0, SignVariant variant = SignVariant::kUpperRight,
                             const Tolerances& tol = kDefaultTolerances);

/// Same construction from a caller-supplied eigendecomposition of Pi_0.
/// Any orthonormal eigenbasis yields the same A and C.
DilationSigma build_dilation(const EigenDecomposition& pi0_eigen,
                             SignVariant variant = SignVariant::kUpperRight,
                             const Tolerances& tol = kDefaultTolerances);

/// Checks eigenvalues of Pi_0 against [-window, 1 + window] and snaps them
/// onto [0, 1]. Throws kNotPositive / kEigenvalueOutOfRange.
RealVector snap_inconclusive_spectrum(const RealVector& eigenvalues, const Tolerances& tol = kDefaultTolerances);

struct DilatedOutput {
  ComplexVector signal;   // modes 1..N
  ComplexVector ancilla;  // modes N+1..2N
};

DilatedOutput apply_to_pure(const DilationSigma& d, const PureState& psi);

/// Sigma (rho + 0) Sigma^dagger on the 2N-dimensional extended space.
ComplexMatrix apply_to_mixed(const DilationSigma& d, const ComplexMatrix& rho);

struct ProbabilitySplit {
  double success = 0.0;  // mass left in the signal modes
  double failure = 0.0;  // mass moved to the ancilla modes
};

ProbabilitySplit success_failure_split(const DilationSigma& d, const State& state);

struct DilationReport {
  double unitarity_residual = 0.0;
  double max_signal_overlap = 0.0;         // max_{i != j} |<out_j|out_i>| on signal modes
  double max_ancilla_overlap_error = 0.0;  // max_{i != j} |<anc_j|anc_i> - <psi_j|psi_i>|
  bool unitary = false;
  bool signal_orthogonal = false;
  bool ancilla_overlaps_preserved = false;

  bool passed() const { return unitary && signal_orthogonal && ancilla_overlaps_preserved; }
};

DilationReport verify_dilation(const DilationSigma& d, const std::vector<PureState>& states,
                               double tol = kDefaultTolerances.usd,
                               const Tolerances& settings = kDefaultTolerances);

struct MixedDilationReport {
  double unitarity_residual = 0.0;
  double max_signal_trace = 0.0;  // max_{i != j} |Tr signal block of Sigma(rho_i rho_j + 0)Sigma^dagger|
  double max_ancilla_trace_error = 0.0;  // vs Tr(rho_i rho_j)
  bool passed = false;
};

/// Mixed-state analogue: for i != j the product rho_i rho_j leaves no trace
/// in the signal block, and the ancilla block keeps Tr(rho_i rho_j).
MixedDilationReport verify_dilation_mixed(const DilationSigma& d, const std::vector<ComplexMatrix>& rhos,
                                          double tol = kDefaultTolerances.usd,
                                          const Tolerances& settings = kDefaultTolerances);

}  // namespace neumark
