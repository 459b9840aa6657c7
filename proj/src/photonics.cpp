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

#include "neumark/photonics.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "neumark/error.hpp"

namespace neumark {

ModeAmplitudes embed_signal_state(const PureState& psi, std::size_t n_modes) {
  if (n_modes != 2 * psi.dim()) {
    std::ostringstream os;
    os << "a " << psi.dim() << "-dimensional state needs " << 2 * psi.dim() << " modes, circuit has " << n_modes;
    throw Error(ErrorCode::kDimensionMismatch, os.str());
  }
  ModeAmplitudes out{ComplexVector::Zero(static_cast<Eigen::Index>(n_modes))};
  out.amplitudes.head(static_cast<Eigen::Index>(psi.dim())) = psi.amplitudes();
  return out;
}

ModeAmplitudes propagate(const Circuit& circuit, ModeAmplitudes in) {
  if (in.n_modes() != circuit.n_modes()) {
    throw Error(ErrorCode::kDimensionMismatch, "state and circuit disagree on the number of modes");
  }
  std::span<Complex> amplitudes(in.amplitudes.data(), in.n_modes());
  for (const OpticalElement& e : circuit.elements()) apply_element(e, amplitudes);
  return in;
}

double SimulationOutcome::probability(const std::string& label) const {
  const auto it = label_probabilities.find(label);
  return it == label_probabilities.end() ? 0.0 : it->second;
}

SimulationOutcome measure(const Circuit& circuit, const ModeAmplitudes& out) {
  if (out.n_modes() != circuit.n_modes()) {
    throw Error(ErrorCode::kDimensionMismatch, "state and circuit disagree on the number of modes");
  }
  SimulationOutcome outcome;
  outcome.port_probabilities.resize(out.n_modes());
  for (std::size_t port = 0; port < out.n_modes(); ++port) {
    const double p = std::norm(out.amplitudes(static_cast<Eigen::Index>(port)));
    outcome.port_probabilities[port] = p;
    const std::string& label = circuit.label(port);
    if (label == kInconclusiveLabel) {
      outcome.p_inconclusive += p;
    } else {
      outcome.label_probabilities[label] += p;
    }
  }
  return outcome;
}

SimulationOutcome simulate_state(const Circuit& circuit, const State& state, const Tolerances& tol) {
  if (const auto* pure = std::get_if<PureState>(&state)) {
    return measure(circuit, propagate(circuit, embed_signal_state(*pure, circuit.n_modes())));
  }
  const ComplexMatrix& rho = std::get<MixedState>(state).density();
  if (circuit.n_modes() != 2 * static_cast<std::size_t>(rho.rows())) {
    throw Error(ErrorCode::kDimensionMismatch, "state and circuit disagree on the number of modes");
  }
  const EigenDecomposition eig = hermitian_eigendecompose(rho, tol.hermitian, tol);
  SimulationOutcome total;
  total.port_probabilities.assign(circuit.n_modes(), 0.0);
  for (Eigen::Index k = 0; k < eig.eigenvalues.size(); ++k) {
    const double weight = std::max(eig.eigenvalues(k), 0.0);
    if (weight == 0.0) continue;
    ModeAmplitudes in{ComplexVector::Zero(static_cast<Eigen::Index>(circuit.n_modes()))};
    in.amplitudes.head(rho.rows()) = eig.basis.row(k).adjoint();
    const SimulationOutcome part = measure(circuit, propagate(circuit, std::move(in)));
    for (std::size_t port = 0; port < circuit.n_modes(); ++port) {
      total.port_probabilities[port] += weight * part.port_probabilities[port];
    }
    for (const auto& [label, p] : part.label_probabilities) total.label_probabilities[label] += weight * p;
    total.p_inconclusive += weight * part.p_inconclusive;
  }
  return total;
}

EnsembleSimulation simulate_ensemble(const Circuit& circuit, const Ensemble& ensemble, const Tolerances& tol) {
  const std::size_t n = ensemble.size();
  EnsembleSimulation result;
  result.labelled = std::any_of(circuit.detector_map().begin(), circuit.detector_map().end(),
                                [](const std::string& label) { return label.rfind("state-", 0) == 0; });
  result.confusion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

  for (std::size_t i = 0; i < n; ++i) {
    StateResult r;
    r.outcome = simulate_state(circuit, ensemble.state(i), tol);
    r.p_inconclusive = r.outcome.p_inconclusive;
    if (result.labelled) {
      r.p_success = r.outcome.probability(state_label(i));
      for (const auto& [label, p] : r.outcome.label_probabilities) {
        if (label != state_label(i)) r.max_cross_label = std::max(r.max_cross_label, p);
      }
      for (std::size_t j = 0; j < n; ++j) {
        result.confusion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
            r.outcome.probability(state_label(j));
      }
    } else {
      for (const auto& [label, p] : r.outcome.label_probabilities) r.p_success += p;
    }
    result.average_success += ensemble.priors()[i] * r.p_success;
    if (r.max_cross_label > tol.zero_error) {
      std::ostringstream os;
      os << state_label(i) << " is reported as another state with probability " << r.max_cross_label
         << "; circuit and POVM do not match";
      throw Error(ErrorCode::kZeroErrorViolation, os.str());
    }
    result.per_state.push_back(std::move(r));
  }
  return result;
}

std::vector<std::uint64_t> sample_counts(const SimulationOutcome& outcome, std::uint64_t shots, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> ports(outcome.port_probabilities.begin(), outcome.port_probabilities.end());
  std::vector<std::uint64_t> counts(outcome.port_probabilities.size(), 0);
  for (std::uint64_t shot = 0; shot < shots; ++shot) ++counts[ports(rng)];
  return counts;
}

}  // namespace neumark
