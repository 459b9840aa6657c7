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
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "neumark/compiler.hpp"
#include "neumark/numerics.hpp"
#include "neumark/povm.hpp"
#include "neumark/tolerances.hpp"

namespace neumark {

/// Single photon spread over 2N rails; entry j is the amplitude of a_j^dagger|0>.
struct ModeAmplitudes {
  ComplexVector amplitudes;

  std::size_t n_modes() const { return static_cast<std::size_t>(amplitudes.size()); }
};

/// Signal state on rails 1..N, vacuum on the ancilla rails.
ModeAmplitudes embed_signal_state(const PureState& psi, std::size_t n_modes);

/// Applies the circuit element by element.
ModeAmplitudes propagate(const Circuit& circuit, ModeAmplitudes in);

struct SimulationOutcome {
  std::vector<double> port_probabilities;
  std::map<std::string, double> label_probabilities;  // conclusive labels only
  double p_inconclusive = 0.0;

  double probability(const std::string& label) const;
};

SimulationOutcome measure(const Circuit& circuit, const ModeAmplitudes& out);

/// Mixed states are simulated as the eigen-mixture of their pure components.
SimulationOutcome simulate_state(const Circuit& circuit, const State& state,
                                 const Tolerances& tol = kDefaultTolerances);

struct StateResult {
  SimulationOutcome outcome;
  double p_success = 0.0;       // probability of this state's own label
  double p_inconclusive = 0.0;
  double max_cross_label = 0.0;  // largest probability of another state's label
};

struct EnsembleSimulation {
  std::vector<StateResult> per_state;
  Eigen::MatrixXd confusion;  // (i, j): P(report state-j | state i)
  double average_success = 0.0;
  /// False when the circuit has raw signal labels instead of state labels;
  /// p_success is then all conclusive mass and cross-talk is not checked.
  bool labelled = true;
};

/// Throws kZeroErrorViolation when any state lights up another state's label
/// above tol.zero_error.
EnsembleSimulation simulate_ensemble(const Circuit& circuit, const Ensemble& ensemble,
                                     const Tolerances& tol = kDefaultTolerances);

/// Multinomial detector counts per port for `shots` photons.
std::vector<std::uint64_t> sample_counts(const SimulationOutcome& outcome, std::uint64_t shots, std::uint64_t seed);

}  // namespace neumark
