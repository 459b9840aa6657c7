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

#include "neumark/unknown_qubits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "neumark/error.hpp"

namespace neumark::unknown_qubits {

namespace {

constexpr std::size_t kChunkSize = 4096;

// Neumaier compensated sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      compensation_ += (sum_ - t) + x;
    } else {
      compensation_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

struct ChunkStats {
  CompensatedSum success;
  CompensatedSum success_sq;
  std::vector<CompensatedSum> blocks;
  double max_operator_deviation = 0.0;
  double max_closed_form_deviation = 0.0;
  double max_cross_talk = 0.0;
  double max_completeness_error = 0.0;
  double max_symmetry_error = 0.0;
  std::vector<TrialRecord> records;
};

int bit(std::size_t index, int qubit) { return static_cast<int>((index >> (2 - qubit)) & 1U); }

void run_chunk(const DemoCircuit& demo, std::uint64_t seed, std::size_t chunk, std::size_t count, bool keep,
               const Tolerances& tol, ChunkStats& stats) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  std::mt19937_64 rng(seq);
  const Circuit& circuit = demo.circuit();
  stats.blocks.resize(demo.conclusive_blocks.size());
  if (keep) stats.records.reserve(count);

  for (std::size_t t = 0; t < count; ++t) {
    const BlochQubit q1 = sample_bloch(rng);
    const BlochQubit q2 = sample_bloch(rng);
    const double closed = closed_form_success(q1, q2);
    double p[2] = {0.0, 0.0};
    std::vector<double> block_mass(demo.conclusive_blocks.size(), 0.0);

    for (int which = 1; which <= 2; ++which) {
      const Register reg = build_register(q1, q2, which);
      const PureState in_g(demo.g * reg.state.amplitudes());
      const SimulationOutcome outcome =
          measure(circuit, propagate(circuit, embed_signal_state(in_g, circuit.n_modes())));
      const double success = outcome.probability(state_label(static_cast<std::size_t>(which - 1)));
      const double cross = outcome.probability(state_label(static_cast<std::size_t>(2 - which)));
      const double oracle = outcome_probability(reg.state, demo.povm.element(static_cast<std::size_t>(which - 1)), tol);
      p[which - 1] = success;

      stats.max_operator_deviation = std::max(stats.max_operator_deviation, std::abs(success - oracle));
      stats.max_closed_form_deviation = std::max(stats.max_closed_form_deviation, std::abs(success - closed));
      stats.max_cross_talk = std::max(stats.max_cross_talk, cross);
      stats.max_completeness_error =
          std::max(stats.max_completeness_error, std::abs(success + cross + outcome.p_inconclusive - 1.0));
      for (std::size_t b = 0; b < demo.conclusive_blocks.size(); ++b) {
        double mass = 0.0;
        for (std::size_t port : demo.conclusive_blocks[b]) mass += outcome.port_probabilities[port];
        block_mass[b] += 0.5 * mass;
      }
    }
    const double value = 0.5 * p[0] + 0.5 * p[1];
    stats.max_symmetry_error = std::max(stats.max_symmetry_error, std::abs(p[0] - p[1]));
    stats.success.add(value);
    stats.success_sq.add(value * value);
    for (std::size_t b = 0; b < block_mass.size(); ++b) stats.blocks[b].add(block_mass[b]);
    if (keep) stats.records.push_back({overlap_squared(q1, q2), value});
  }
}

}  // namespace

ComplexVector BlochQubit::amplitudes() const {
  ComplexVector v(2);
  v(0) = std::cos(theta / 2.0);
  v(1) = std::polar(std::sin(theta / 2.0), phi);
  return v;
}

BlochQubit sample_bloch(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> cos_theta(-1.0, 1.0);
  std::uniform_real_distribution<double> azimuth(0.0, 2.0 * std::numbers::pi);
  const double z = cos_theta(rng);
  return {std::acos(z), azimuth(rng)};
}

double overlap_squared(const BlochQubit& a, const BlochQubit& b) {
  return std::norm(a.amplitudes().dot(b.amplitudes()));
}

Register build_register(const BlochQubit& q1, const BlochQubit& q2, int which) {
  if (which != 1 && which != 2) throw Error(ErrorCode::kInvalidInput, "register index must be 1 or 2");
  const ComplexVector a = q1.amplitudes();
  const ComplexVector b = q2.amplitudes();
  const ComplexVector c = which == 1 ? a : b;
  ComplexVector psi(8);
  for (std::size_t x = 0; x < 8; ++x) {
    psi(static_cast<Eigen::Index>(x)) = a(bit(x, 0)) * b(bit(x, 1)) * c(bit(x, 2));
  }
  return {which, PureState(psi)};
}

ComplexMatrix antisymmetric_projector(int first, int second) {
  if (first == second || first < 0 || first > 2 || second < 0 || second > 2) {
    throw Error(ErrorCode::kInvalidInput, "antisymmetric projector needs two distinct qubits out of A, B, C");
  }
  ComplexMatrix p = ComplexMatrix::Zero(8, 8);
  for (std::size_t x = 0; x < 8; ++x) {
    // SWAP exchanges the two bits; (I - SWAP)/2 row by row.
    std::size_t swapped = x;
    if (bit(x, first) != bit(x, second)) swapped ^= (std::size_t{1} << (2 - first)) | (std::size_t{1} << (2 - second));
    const auto xi = static_cast<Eigen::Index>(x);
    p(xi, xi) += 0.5;
    p(xi, static_cast<Eigen::Index>(swapped)) -= 0.5;
  }
  return p;
}

Povm build_povm(double k1, double k2) {
  if (!(k1 >= 0.0) || !(k2 >= 0.0)) throw Error(ErrorCode::kInvalidInput, "POVM weights must be non-negative");
  return Povm(8, {k1 * antisymmetric_projector(1, 2), k2 * antisymmetric_projector(0, 2)});
}

double optimal_k() { return 2.0 / 3.0; }

ComplexMatrix g_basis() {
  const double h = std::numbers::sqrt2 / 2.0;
  ComplexMatrix g = ComplexMatrix::Zero(8, 8);
  g(0, 0b000) = 1.0;
  g(1, 0b100) = 1.0;
  g(2, 0b010) = h;
  g(2, 0b001) = h;
  g(3, 0b010) = h;
  g(3, 0b001) = -h;
  g(4, 0b011) = 1.0;
  g(5, 0b110) = h;
  g(5, 0b101) = h;
  g(6, 0b110) = h;
  g(6, 0b101) = -h;
  g(7, 0b111) = 1.0;
  return g;
}

ComplexMatrix PreparationStage::matrix() const {
  const ComplexMatrix t = elements_transfer_matrix(relabel.size(), elements);
  ComplexMatrix out = ComplexMatrix::Zero(t.rows(), t.cols());
  for (std::size_t k = 0; k < relabel.size(); ++k) {
    out.row(static_cast<Eigen::Index>(relabel[k])) = t.row(static_cast<Eigen::Index>(k));
  }
  return out;
}

PreparationStage g_basis_preparation() {
  const double quarter = std::numbers::pi / 4.0;
  PreparationStage stage;
  stage.elements = {OpticalElement::two_mode(0b001, 0b010, quarter, std::numbers::pi),
                    OpticalElement::two_mode(0b101, 0b110, quarter, std::numbers::pi)};
  stage.relabel = {0, 2, 3, 4, 1, 5, 6, 7};
  return stage;
}

DemoCircuit build_demo_circuit(const Tolerances& tol) {
  const double k = optimal_k();
  Povm povm = build_povm(k, k);
  const ComplexMatrix g = g_basis();
  ComplexMatrix pi0_g = g * inconclusive_element(povm, tol) * g.adjoint();
  pi0_g = (0.5 * (pi0_g + pi0_g.adjoint())).eval();

  const BlochQubit q1{1.1, 0.7};
  const BlochQubit q2{2.3, 4.0};
  std::vector<PureState> reference;
  for (int which = 1; which <= 2; ++which) {
    reference.emplace_back(g * build_register(q1, q2, which).state.amplitudes());
  }
  CircuitMetadata metadata;
  metadata.extra["source"] = "unknown-qubit k=2/3 POVM, g basis";
  CompiledMeasurement compiled = compile_measurement(pi0_g, reference, metadata, tol);

  std::vector<std::vector<std::size_t>> conclusive;
  for (const std::vector<std::size_t>& block : compiled.basis.blocks) {
    const bool labelled = std::any_of(block.begin(), block.end(),
                                      [&](std::size_t port) { return compiled.post.port_state[port].has_value(); });
    if (labelled) conclusive.push_back(block);
  }
  return {std::move(povm), g, std::move(pi0_g), std::move(compiled), std::move(conclusive), q1, q2};
}

double closed_form_success(const BlochQubit& q1, const BlochQubit& q2) {
  return (1.0 - overlap_squared(q1, q2)) / 3.0;
}

MonteCarloResult monte_carlo_average(const DemoCircuit& demo, const MonteCarloOptions& options,
                                     const Tolerances& tol) {
  if (options.trials == 0) throw Error(ErrorCode::kInvalidInput, "need at least one trial");
  const std::size_t chunks = (options.trials + kChunkSize - 1) / kChunkSize;
  std::vector<ChunkStats> stats(chunks);
  const std::size_t workers = std::clamp<std::size_t>(options.workers, 1, chunks);

  auto work = [&](std::size_t worker) {
    for (std::size_t chunk = worker; chunk < chunks; chunk += workers) {
      const std::size_t begin = chunk * kChunkSize;
      const std::size_t count = std::min(kChunkSize, options.trials - begin);
      run_chunk(demo, options.seed, chunk, count, options.keep_records, tol, stats[chunk]);
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (std::thread& t : threads) t.join();
  }

  // Merge in chunk order so the result is independent of the worker count.
  CompensatedSum success, success_sq;
  std::vector<CompensatedSum> blocks(demo.conclusive_blocks.size());
  MonteCarloResult result;
  result.trials = options.trials;
  result.seed = options.seed;
  result.element_count = demo.circuit().two_mode_count();
  for (ChunkStats& s : stats) {
    success.add(s.success.value());
    success_sq.add(s.success_sq.value());
    for (std::size_t b = 0; b < blocks.size(); ++b) blocks[b].add(s.blocks[b].value());
    result.max_operator_deviation = std::max(result.max_operator_deviation, s.max_operator_deviation);
    result.max_closed_form_deviation = std::max(result.max_closed_form_deviation, s.max_closed_form_deviation);
    result.max_cross_talk = std::max(result.max_cross_talk, s.max_cross_talk);
    result.max_completeness_error = std::max(result.max_completeness_error, s.max_completeness_error);
    result.max_symmetry_error = std::max(result.max_symmetry_error, s.max_symmetry_error);
    if (options.keep_records) {
      result.records.insert(result.records.end(), s.records.begin(), s.records.end());
    }
  }
  const auto n = static_cast<double>(options.trials);
  result.mean = success.value() / n;
  if (options.trials > 1) {
    const double variance = std::max(0.0, (success_sq.value() - n * result.mean * result.mean) / (n - 1.0));
    result.stderr_mean = std::sqrt(variance / n);
  }
  for (const CompensatedSum& b : blocks) result.per_block_means.push_back(b.value() / n);
  return result;
}

}  // namespace neumark::unknown_qubits
