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

namespace neumark {

/// Numerical thresholds shared by every module. Functions take the record
/// (or a single field of it) so callers can override any of them.
struct Tolerances {
  // Max |H - H^dagger| entry accepted as Hermitian.
  double hermitian = 1e-10;
  // Max |M^dagger M - I| entry accepted as unitary.
  double unitary = 1e-10;
  // Eigenvalues of positive operators may dip this far below 0 (or above 1
  // for POVM complements) before the input is rejected.
  double eigenvalue_window = 1e-9;
  // Eigenvalues of the inconclusive element closer than this to 0 or 1 are
  // snapped onto the endpoint before square roots are taken.
  double eigenvalue_snap = 1e-12;
  // Probabilities in [-p, 0) report as 0 and (1, 1 + p] as 1.
  double probability = 1e-10;
  // Max |Im Tr(rho Pi)| accepted for a real expectation value.
  double imaginary = 1e-12;
  // Max off-diagonal Tr(rho_i Pi_j) for the unambiguity condition.
  double usd = 1e-9;
  // Two-mode elements with theta below this (and phase shifters with
  // |phi| below it) are dropped from compiled circuits.
  double elision = 1e-12;
  // Max cross-label detection probability in simulation.
  double zero_error = 1e-9;
  // Signal outputs with norm below this count as never identified.
  double zero_output = 1e-10;
  // Jacobi stops when off(H)_F <= jacobi_relative * ||H||_F.
  double jacobi_relative = 1e-13;
  int jacobi_max_sweeps = 100;
};

inline constexpr Tolerances kDefaultTolerances{};

}  // namespace neumark
