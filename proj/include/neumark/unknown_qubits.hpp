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
#include <random>
#include <vector>

#include "neumark/compiler.hpp"
#include "neumark/numerics.hpp"
#include "neumark/photonics.hpp"
#include "neumark/povm.hpp"
#include "neumark/tolerances.hpp"

// Discrimination of two unknown qubits from registers
// |Psi_i> = |psi_1>_A |psi_2>_B |psi_i>_C, basis |abc> with A the most
// significant bit.
namespace neumark::unknown_qubits {

struct BlochQubit {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, 2 pi)

  ComplexVector amplitudes() const;  // (cos(theta/2), sin(theta/2) e^{i phi})
};

/// Uniform on the sphere: cos(theta) ~ U[-1, 1], phi ~ U[0, 2 pi).
BlochQubit sample_bloch(std::mt19937_64& rng);

double overlap_squared(const BlochQubit& a, const BlochQubit& b);

struct Register {
  int which = 1;  // 1 or 2
  PureState state;
};

Register build_register(const BlochQubit& q1, const BlochQubit& q2, int which);

/// (I - SWAP)/2 acting on qubits `first` and `second` (0 = A, 1 = B, 2 = C)
/// of the 8-dimensional register space, identity on the third.
ComplexMatrix antisymmetric_projector(int first, int second);

/// Pi_1 = k1 P_BC^as (x) I_A, Pi_2 = k2 P_AC^as (x) I_B. Not validated.
Povm build_povm(double k1, double k2);

/// Largest k with I - k (P_BC^as + P_AC^as) >= 0, optimal for equal priors.
double optimal_k();

/// Rows are the basis {|000>, |100>, |eta_01>, |chi_01>, |011>, |eta_11>,
/// |chi_11>, |111>} in lexicographic coordinates, with
/// |eta_i1>, |chi_i1> = (|i10> +- |i01>)/sqrt(2).
ComplexMatrix g_basis();

/// Optical realization of g_basis(): two 50:50 beam splitters on the
/// lexicographic rails followed by relabelling output rail k as g-index
/// relabel[k].
struct PreparationStage {
  std::vector<OpticalElement> elements;
  std::vector<std::size_t> relabel;

  ComplexMatrix matrix() const;
};

PreparationStage g_basis_preparation();

struct DemoCircuit {
  Povm povm;
  ComplexMatrix g;     // g_basis()
  ComplexMatrix pi0_g;  // inconclusive element in the g basis
  CompiledMeasurement compiled;
  std::vector<std::vector<std::size_t>> conclusive_blocks;  // blocks that carry a state label
  BlochQubit reference_q1;
  BlochQubit reference_q2;

  const Circuit& circuit() const { return compiled.circuit; }
};

/// Compiles the k = 2/3 POVM, expressed in the g basis, through the generic
/// pipeline. The post-processing is derived from one fixed reference pair;
/// the output directions it relies on do not depend on the pair.
DemoCircuit build_demo_circuit(const Tolerances& tol = kDefaultTolerances);

/// (1 - |<psi_1|psi_2>|^2)/3: Tr(|Psi_i><Psi_i| Pi_i) at k = 2/3 for either i.
double closed_form_success(const BlochQubit& q1, const BlochQubit& q2);

struct TrialRecord {
  double overlap_squared = 0.0;
  double p_success = 0.0;  // prior-weighted over the two registers
};

struct MonteCarloOptions {
  std::size_t trials = 100000;
  std::uint64_t seed = 42;
  std::size_t workers = 1;
  bool keep_records = false;
};

struct MonteCarloResult {
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  std::vector<double> per_block_means;  // mean signal norm^2 per conclusive block
  std::size_t element_count = 0;
  // Worst per-trial deviations observed.
  double max_operator_deviation = 0.0;     // simulator vs Tr(rho_i Pi_i)
  double max_closed_form_deviation = 0.0;  // simulator vs closed form
  double max_cross_talk = 0.0;
  double max_completeness_error = 0.0;  // |p + q - 1|
  double max_symmetry_error = 0.0;      // |p_1 - p_2|
  std::vector<TrialRecord> records;
};

/// Trials are split into fixed chunks with seeds derived from (seed, chunk),
/// so the result does not depend on the number of workers.
MonteCarloResult monte_carlo_average(const DemoCircuit& demo, const MonteCarloOptions& options,
                                     const Tolerances& tol = kDefaultTolerances);

}  // namespace neumark::unknown_qubits
