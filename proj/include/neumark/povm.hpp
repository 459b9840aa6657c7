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
#include <string>
#include <variant>
#include <vector>

#include "neumark/numerics.hpp"
#include "neumark/tolerances.hpp"

namespace neumark {

/// Normalized vector in the N-dimensional signal space.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes, double tol = kDefaultTolerances.hermitian);

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  ComplexMatrix density() const { return amplitudes_ * amplitudes_.adjoint(); }

 private:
  ComplexVector amplitudes_;
};

/// Density matrix: Hermitian, positive, unit trace.
class MixedState {
 public:
  explicit MixedState(ComplexMatrix density, double tol = kDefaultTolerances.hermitian);

  std::size_t dim() const { return static_cast<std::size_t>(density_.rows()); }
  const ComplexMatrix& density() const { return density_; }

 private:
  ComplexMatrix density_;
};

using State = std::variant<PureState, MixedState>;

std::size_t state_dim(const State& state);
ComplexMatrix state_density(const State& state);

/// States to discriminate together with their preparation priors.
class Ensemble {
 public:
  Ensemble(std::vector<State> states, std::vector<double> priors);
  static Ensemble uniform(std::vector<State> states);

  std::size_t size() const { return states_.size(); }
  std::size_t dim() const;
  const std::vector<State>& states() const { return states_; }
  const std::vector<double>& priors() const { return priors_; }
  const State& state(std::size_t i) const { return states_.at(i); }
  bool all_pure() const;
  std::vector<PureState> pure_states() const;

 private:
  std::vector<State> states_;
  std::vector<double> priors_;
};

/// Conclusive elements Pi_1..Pi_n on an N-dimensional space. The
/// inconclusive element Pi_0 = I - sum Pi_k is derived, never stored.
///
/// Construction only checks shapes and finiteness. Positivity is a
/// property of the numbers, reported by validate_povm.
class Povm {
 public:
  Povm(std::size_t dim, std::vector<ComplexMatrix> elements);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return elements_.size(); }
  const std::vector<ComplexMatrix>& elements() const { return elements_; }
  const ComplexMatrix& element(std::size_t k) const { return elements_.at(k); }
  ComplexMatrix conclusive_sum() const;

 private:
  std::size_t dim_;
  std::vector<ComplexMatrix> elements_;
};

struct ElementCheck {
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
  bool hermitian = false;
  bool positive = false;
};

struct PovmValidation {
  std::vector<ElementCheck> elements;
  double inconclusive_min_eigenvalue = 0.0;
  double inconclusive_max_eigenvalue = 0.0;
  bool inconclusive_positive = false;

  bool valid() const;
  /// Human-readable name of the first failed invariant, empty when valid.
  std::string first_failure() const;
};

PovmValidation validate_povm(const Povm& povm, const Tolerances& tol = kDefaultTolerances);

/// Pi_0 = I - sum_k Pi_k. Throws kNotPositive when an eigenvalue leaves
/// [-window, 1 + window]; eigenvalues inside the window are clamped.
ComplexMatrix inconclusive_element(const Povm& povm, const Tolerances& tol = kDefaultTolerances);

/// Tr(rho Pi) (or <psi|Pi|psi>), clamped onto [0, 1] within the
/// probability tolerance; throws kProbabilityOutOfRange beyond it.
double outcome_probability(const State& state, const ComplexMatrix& element,
                           const Tolerances& tol = kDefaultTolerances);
double outcome_probability(const PureState& state, const ComplexMatrix& element,
                           const Tolerances& tol = kDefaultTolerances);

struct UsdReport {
  Eigen::MatrixXd probabilities;  // (i, j) = Tr(rho_i Pi_j)
  std::vector<double> success;    // p_i, the diagonal
  std::vector<double> failure;    // q_i = 1 - p_i
  std::vector<double> inconclusive;  // Tr(rho_i Pi_0)
  double max_off_diagonal = 0.0;
  std::size_t worst_row = 0;
  std::size_t worst_col = 0;
  bool passed = false;
};

UsdReport verify_usd_condition(const Ensemble& ensemble, const Povm& povm,
                               double tol = kDefaultTolerances.usd,
                               const Tolerances& settings = kDefaultTolerances);

}  // namespace neumark
