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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "neumark/dilation.hpp"
#include "neumark/numerics.hpp"
#include "neumark/povm.hpp"
#include "neumark/tolerances.hpp"

namespace neumark {

enum class ElementKind { kBeamSplitter, kMirror, kPhaseShifter };

std::string_view element_kind_name(ElementKind kind);  // "bs" | "mirror" | "ps"
ElementKind parse_element_kind(std::string_view name);

/// One optical element on 0-based mode indices.
///
/// Two-mode elements (p < q) act on the amplitude pair (a_p, a_q) as
///
///     [[ cos t,            -e^{i phi} sin t ],
///      [ e^{-i phi} sin t,  cos t           ]],   t in [0, pi/2],
///
/// so phi = 0 is the real rotation and phi = pi its inverse. A mirror is
/// the t = pi/2 case. Phase shifters multiply a_p by e^{i phi}.
struct OpticalElement {
  ElementKind kind = ElementKind::kBeamSplitter;
  std::size_t p = 0;
  std::size_t q = 0;  // unused by phase shifters
  double theta = 0.0;
  double phi = 0.0;

  static OpticalElement two_mode(std::size_t p, std::size_t q, double theta, double phi,
                                 double elision = kDefaultTolerances.elision);
  static OpticalElement phase_shifter(std::size_t mode, double phi);

  bool is_two_mode() const { return kind != ElementKind::kPhaseShifter; }
  Eigen::Matrix2cd matrix() const;  // identity-free 2x2 block (phase shifters: diag(e^{i phi}, 1))
  OpticalElement shifted(std::size_t offset) const;

  friend bool operator==(const OpticalElement&, const OpticalElement&) = default;
};

/// Applies one element in place; touches at most two amplitudes.
void apply_element(const OpticalElement& element, std::span<Complex> amplitudes);

inline constexpr std::string_view kInconclusiveLabel = "inconclusive";
std::string state_label(std::size_t state_index);  // 0-based index -> "state-1", ...
std::string signal_port_label(std::size_t port);   // 0-based port -> "signal-1", ...

struct CircuitMetadata {
  std::string source_hash;
  std::map<std::string, std::string> extra;
};

/// Ordered element list on 2N modes, applied first to last, plus the label
/// each output port reports.
class Circuit {
 public:
  Circuit(std::size_t n_modes, std::vector<OpticalElement> elements, std::vector<std::string> detector_map,
          CircuitMetadata metadata = {});

  std::size_t n_modes() const { return n_modes_; }
  std::size_t signal_modes() const { return n_modes_ / 2; }
  const std::vector<OpticalElement>& elements() const { return elements_; }
  const std::vector<std::string>& detector_map() const { return detector_map_; }
  const std::string& label(std::size_t port) const { return detector_map_.at(port); }
  const CircuitMetadata& metadata() const { return metadata_; }

  std::size_t count(ElementKind kind) const;
  std::size_t two_mode_count() const;

 private:
  std::size_t n_modes_;
  std::vector<OpticalElement> elements_;
  std::vector<std::string> detector_map_;
  CircuitMetadata metadata_;
};

/// Beam splitters coupling signal mode i to ancilla mode i + N with
/// cos t = sqrt(1 - c_i), sin t = sqrt(c_i). Their product is the
/// block-diagonalized dilation. Identity rotations (c_i = 0) are dropped.
std::vector<OpticalElement> core_rotations(const RealVector& eigenvalues,
                                           const Tolerances& tol = kDefaultTolerances);

/// Triangular Givens decomposition of an N x N unitary into at most
/// N(N-1)/2 two-mode elements followed by at most N phase shifters, on modes
/// 0..N-1. Rows are cleared from the last one up; within a row, columns left
/// to right, each folded into the diagonal column. Entries that are already
/// zero cost nothing, so block-diagonal inputs never couple across blocks.
std::vector<OpticalElement> reck_decompose(const ComplexMatrix& w, const Tolerances& tol = kDefaultTolerances);

/// Ordered product of element matrices embedded in n_modes dimensions.
ComplexMatrix elements_transfer_matrix(std::size_t n_modes, std::span<const OpticalElement> elements);
ComplexMatrix circuit_transfer_matrix(const Circuit& circuit);

/// Eigenbasis of Pi_0 adapted to compilation: Pi_0's connected blocks are
/// diagonalized separately and each block's eigenvectors stay on that
/// block's modes (ascending eigenvalue within a block), so U inherits the
/// block structure and needs no cross-block elements.
struct CompilationBasis {
  ComplexMatrix u;                              // rows: eigenvectors, block-local
  RealVector eigenvalues;                       // c_i for mode i, snapped into [0, 1]
  std::vector<std::vector<std::size_t>> blocks;  // mode indices per block, ascending
};

std::vector<std::vector<std::size_t>> connected_blocks(const ComplexMatrix& h, double threshold);
CompilationBasis compilation_basis(const ComplexMatrix& pi0, const Tolerances& tol = kDefaultTolerances);

/// Sigma in the compilation basis:
/// [[diag(sqrt(1-c)), -diag(sqrt c)], [diag(sqrt c), diag(sqrt(1-c))]].
ComplexMatrix diagonal_sigma(const RealVector& eigenvalues);

/// (V + V) Sigma_diag (U + U), the full extended-space map.
ComplexMatrix reference_transfer(const ComplexMatrix& u_pre, const RealVector& eigenvalues,
                                 const ComplexMatrix& v_post);

enum class PortAssignment {
  kByIndex,   // state i -> i-th port of its block
  kByWeight,  // state i -> free port where its output is largest
};

struct PostProcess {
  ComplexMatrix v;
  std::vector<std::optional<std::size_t>> port_state;  // per signal port: identified state
};

/// Unitary mapping each nonzero normalized output to its own port; the
/// remaining rows are completed by Gram-Schmidt. When `blocks` is non-empty
/// and outputs restricted to every block are mutually orthogonal, V is
/// built block by block (one port per state per block). Otherwise one
/// global block is used. Throws kDegenerateOutput when outputs overlap.
PostProcess post_process_from_outputs(std::size_t n_signal, const std::vector<ComplexVector>& outputs,
                                      const std::vector<std::vector<std::size_t>>& blocks,
                                      PortAssignment assignment, const Tolerances& tol = kDefaultTolerances);

/// V in the original basis: maps the normalized signal output C|psi_i> of
/// state i onto port i.
ComplexMatrix derive_post_process(const DilationSigma& d, const std::vector<PureState>& states,
                                  const Tolerances& tol = kDefaultTolerances);

/// U elements on signal modes, core rotations across (i, i+N), then V
/// elements on signal modes. Ancilla ports report inconclusive.
Circuit assemble_circuit(const ComplexMatrix& u_pre, const RealVector& eigenvalues, const ComplexMatrix& v_post,
                         std::vector<std::string> signal_labels = {}, CircuitMetadata metadata = {},
                         const Tolerances& tol = kDefaultTolerances);

/// Everything produced by compiling one POVM.
struct CompiledMeasurement {
  DilationSigma dilation;
  CompilationBasis basis;
  PostProcess post;
  Circuit circuit;
  std::size_t u_elements = 0;
  std::size_t core_elements = 0;
  std::size_t v_elements = 0;
};

/// Full pipeline. Without states V = I and signal ports keep raw labels.
/// With states, V routes each state's signal output to ports labelled
/// "state-i".
CompiledMeasurement compile_measurement(const ComplexMatrix& pi0, const std::vector<PureState>& states = {},
                                        CircuitMetadata metadata = {},
                                        const Tolerances& tol = kDefaultTolerances);

/// Ensemble form: mixed states may claim several ports, one per orthogonal
/// component of their signal output.
CompiledMeasurement compile_measurement(const ComplexMatrix& pi0, const Ensemble& ensemble,
                                        CircuitMetadata metadata = {},
                                        const Tolerances& tol = kDefaultTolerances);

}  // namespace neumark
