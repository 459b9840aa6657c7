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

#include "neumark/compiler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <iomanip>
#include <numbers>
#include <sstream>

#include "neumark/error.hpp"

namespace neumark {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

// Wraps into (-pi, pi].
double wrap_phase(double phi) {
  double wrapped = std::remainder(phi, 2.0 * kPi);
  if (wrapped <= -kPi) wrapped += 2.0 * kPi;
  return wrapped;
}

Complex unit_phase(Complex z) {
  const double mag = std::abs(z);
  return mag == 0.0 ? Complex(1.0, 0.0) : z / mag;
}

std::string fnv1a_hex(const ComplexMatrix& m) {
  std::uint64_t hash = 1469598103934665603ULL;
  auto mix = [&](double x) {
    unsigned char bytes[sizeof(double)];
    std::memcpy(bytes, &x, sizeof(double));
    for (unsigned char b : bytes) {
      hash ^= b;
      hash *= 1099511628211ULL;
    }
  };
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      mix(m(i, j).real());
      mix(m(i, j).imag());
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << hash;
  return os.str();
}

void require_unitary(const ComplexMatrix& w, double tol, const char* what) {
  require_square(w, what);
  const double residual = unitarity_residual(w);
  if (residual > tol) {
    std::ostringstream os;
    os << what << " is not unitary (max |W^dagger W - I| = " << residual << ")";
    throw Error(ErrorCode::kNotUnitary, os.str());
  }
}

}  // namespace

std::string_view element_kind_name(ElementKind kind) {
  switch (kind) {
    case ElementKind::kBeamSplitter: return "bs";
    case ElementKind::kMirror: return "mirror";
    case ElementKind::kPhaseShifter: return "ps";
  }
  return "bs";
}

ElementKind parse_element_kind(std::string_view name) {
  if (name == "bs") return ElementKind::kBeamSplitter;
  if (name == "mirror") return ElementKind::kMirror;
  if (name == "ps") return ElementKind::kPhaseShifter;
  throw Error(ErrorCode::kInvalidInput, "unknown element kind '" + std::string(name) + "'");
}

OpticalElement OpticalElement::two_mode(std::size_t p, std::size_t q, double theta, double phi, double elision) {
  if (p >= q) throw Error(ErrorCode::kInvalidInput, "two-mode element needs p < q");
  if (!(theta >= -elision && theta <= kHalfPi + elision)) {
    throw Error(ErrorCode::kInvalidInput, "beam splitter angle outside [0, pi/2]");
  }
  OpticalElement e;
  e.p = p;
  e.q = q;
  e.theta = std::clamp(theta, 0.0, kHalfPi);
  e.phi = wrap_phase(phi);
  if (e.theta >= kHalfPi - elision) {
    e.kind = ElementKind::kMirror;
    e.theta = kHalfPi;
  } else {
    e.kind = ElementKind::kBeamSplitter;
  }
  return e;
}

OpticalElement OpticalElement::phase_shifter(std::size_t mode, double phi) {
  OpticalElement e;
  e.kind = ElementKind::kPhaseShifter;
  e.p = mode;
  e.q = mode;
  e.theta = 0.0;
  e.phi = wrap_phase(phi);
  return e;
}

Eigen::Matrix2cd OpticalElement::matrix() const {
  Eigen::Matrix2cd m;
  if (kind == ElementKind::kPhaseShifter) {
    m << std::polar(1.0, phi), 0.0, 0.0, 1.0;
    return m;
  }
  const double c = std::cos(theta);
  const double s = kind == ElementKind::kMirror ? 1.0 : std::sin(theta);
  const double cc = kind == ElementKind::kMirror ? 0.0 : c;
  const Complex e = std::polar(1.0, phi);
  m << cc, -e * s, std::conj(e) * s, cc;
  return m;
}

OpticalElement OpticalElement::shifted(std::size_t offset) const {
  OpticalElement e = *this;
  e.p += offset;
  e.q += offset;
  return e;
}

void apply_element(const OpticalElement& element, std::span<Complex> amplitudes) {
  if (element.p >= amplitudes.size() || element.q >= amplitudes.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "element mode outside the state");
  }
  if (element.kind == ElementKind::kPhaseShifter) {
    amplitudes[element.p] *= std::polar(1.0, element.phi);
    return;
  }
  const Eigen::Matrix2cd m = element.matrix();
  const Complex ap = amplitudes[element.p];
  const Complex aq = amplitudes[element.q];
  amplitudes[element.p] = m(0, 0) * ap + m(0, 1) * aq;
  amplitudes[element.q] = m(1, 0) * ap + m(1, 1) * aq;
}

std::string state_label(std::size_t state_index) { return "state-" + std::to_string(state_index + 1); }

std::string signal_port_label(std::size_t port) { return "signal-" + std::to_string(port + 1); }

Circuit::Circuit(std::size_t n_modes, std::vector<OpticalElement> elements, std::vector<std::string> detector_map,
                 CircuitMetadata metadata)
    : n_modes_(n_modes),
      elements_(std::move(elements)),
      detector_map_(std::move(detector_map)),
      metadata_(std::move(metadata)) {
  if (n_modes_ == 0 || n_modes_ % 2 != 0) {
    throw Error(ErrorCode::kInvalidInput, "circuit needs an even, positive number of modes");
  }
  if (detector_map_.size() != n_modes_) {
    throw Error(ErrorCode::kInvalidInput, "detector map must label every port");
  }
  for (std::size_t port = signal_modes(); port < n_modes_; ++port) {
    if (detector_map_[port] != kInconclusiveLabel) {
      throw Error(ErrorCode::kInvalidInput, "ancilla port " + std::to_string(port + 1) + " must be inconclusive");
    }
  }
  for (const OpticalElement& e : elements_) {
    if (e.p >= n_modes_ || (e.is_two_mode() && (e.q >= n_modes_ || e.p >= e.q))) {
      throw Error(ErrorCode::kInvalidInput, "element modes outside the circuit or unordered");
    }
    if (e.is_two_mode() && !(e.theta >= 0.0 && e.theta <= kHalfPi)) {
      throw Error(ErrorCode::kInvalidInput, "beam splitter angle outside [0, pi/2]");
    }
    if ((e.kind == ElementKind::kMirror) != (e.is_two_mode() && e.theta == kHalfPi)) {
      throw Error(ErrorCode::kInvalidInput, "mirrors are exactly the theta = pi/2 elements");
    }
  }
}

std::size_t Circuit::count(ElementKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(elements_.begin(), elements_.end(), [&](const OpticalElement& e) { return e.kind == kind; }));
}

std::size_t Circuit::two_mode_count() const {
  return count(ElementKind::kBeamSplitter) + count(ElementKind::kMirror);
}

std::vector<OpticalElement> core_rotations(const RealVector& eigenvalues, const Tolerances& tol) {
  const std::size_t n = static_cast<std::size_t>(eigenvalues.size());
  std::vector<OpticalElement> out;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = eigenvalues(static_cast<Eigen::Index>(i));
    if (!(c >= -tol.eigenvalue_window && c <= 1.0 + tol.eigenvalue_window)) {
      std::ostringstream os;
      os << "core rotation eigenvalue " << c << " outside [0, 1]";
      throw Error(ErrorCode::kEigenvalueOutOfRange, os.str());
    }
    const double clamped = std::clamp(c, 0.0, 1.0);
    const double theta = std::atan2(std::sqrt(clamped), std::sqrt(1.0 - clamped));
    if (theta < tol.elision) continue;
    out.push_back(OpticalElement::two_mode(i, i + n, theta, 0.0, tol.elision));
  }
  return out;
}

std::vector<OpticalElement> reck_decompose(const ComplexMatrix& w, const Tolerances& tol) {
  require_unitary(w, tol.unitary, "decomposition input");
  const Eigen::Index n = w.rows();
  ComplexMatrix m = w;
  std::vector<OpticalElement> out;

  for (Eigen::Index r = n - 1; r >= 1; --r) {
    for (Eigen::Index j = 0; j < r; ++j) {
      const Complex a = m(r, j);
      const Complex b = m(r, r);
      if (a == Complex(0.0, 0.0)) continue;
      const double theta = std::atan2(std::abs(a), std::abs(b));
      if (theta < tol.elision) continue;
      // Right-multiplying by the inverse element on columns (j, r) clears
      // m(r, j) and keeps the phase of m(r, r).
      const Complex e_phi = unit_phase(b) * std::conj(unit_phase(a));
      const OpticalElement element = OpticalElement::two_mode(
          static_cast<std::size_t>(j), static_cast<std::size_t>(r), theta, std::arg(e_phi), tol.elision);
      const double c = element.kind == ElementKind::kMirror ? 0.0 : std::cos(element.theta);
      const double s = element.kind == ElementKind::kMirror ? 1.0 : std::sin(element.theta);
      const Complex e = std::polar(1.0, element.phi);
      for (Eigen::Index k = 0; k < n; ++k) {
        const Complex mj = m(k, j);
        const Complex mr = m(k, r);
        m(k, j) = mj * c - mr * std::conj(e) * s;
        m(k, r) = mj * e * s + mr * c;
      }
      m(r, j) = 0.0;
      out.push_back(element);
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const double phi = std::arg(m(i, i));
    if (std::abs(wrap_phase(phi)) >= tol.elision) {
      out.push_back(OpticalElement::phase_shifter(static_cast<std::size_t>(i), phi));
    }
  }
  return out;
}

ComplexMatrix elements_transfer_matrix(std::size_t n_modes, std::span<const OpticalElement> elements) {
  const auto n = static_cast<Eigen::Index>(n_modes);
  ComplexMatrix t = ComplexMatrix::Identity(n, n);
  for (const OpticalElement& e : elements) {
    // Left-multiplying by the embedded element only mixes rows p and q.
    if (e.kind == ElementKind::kPhaseShifter) {
      t.row(static_cast<Eigen::Index>(e.p)) *= std::polar(1.0, e.phi);
      continue;
    }
    const Eigen::Matrix2cd m = e.matrix();
    const auto p = static_cast<Eigen::Index>(e.p);
    const auto q = static_cast<Eigen::Index>(e.q);
    const ComplexVector row_p = t.row(p).transpose();
    const ComplexVector row_q = t.row(q).transpose();
    t.row(p) = (m(0, 0) * row_p + m(0, 1) * row_q).transpose();
    t.row(q) = (m(1, 0) * row_p + m(1, 1) * row_q).transpose();
  }
  return t;
}

ComplexMatrix circuit_transfer_matrix(const Circuit& circuit) {
  return elements_transfer_matrix(circuit.n_modes(), circuit.elements());
}

std::vector<std::vector<std::size_t>> connected_blocks(const ComplexMatrix& h, double threshold) {
  require_square(h, "block detection input");
  const std::size_t n = static_cast<std::size_t>(h.rows());
  std::vector<int> component(n, -1);
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t start = 0; start < n; ++start) {
    if (component[start] >= 0) continue;
    const int id = static_cast<int>(blocks.size());
    std::vector<std::size_t> members{start};
    component[start] = id;
    for (std::size_t head = 0; head < members.size(); ++head) {
      const std::size_t i = members[head];
      for (std::size_t j = 0; j < n; ++j) {
        if (component[j] >= 0) continue;
        const auto ii = static_cast<Eigen::Index>(i);
        const auto jj = static_cast<Eigen::Index>(j);
        if (std::abs(h(ii, jj)) > threshold || std::abs(h(jj, ii)) > threshold) {
          component[j] = id;
          members.push_back(j);
        }
      }
    }
    std::sort(members.begin(), members.end());
    blocks.push_back(std::move(members));
  }
  return blocks;
}

CompilationBasis compilation_basis(const ComplexMatrix& pi0, const Tolerances& tol) {
  require_hermitian(pi0, tol.hermitian, "inconclusive element");
  const Eigen::Index n = pi0.rows();
  CompilationBasis basis;
  basis.blocks = connected_blocks(pi0, tol.elision);
  basis.u = ComplexMatrix::Zero(n, n);
  basis.eigenvalues = RealVector::Zero(n);

  for (const std::vector<std::size_t>& block : basis.blocks) {
    const auto size = static_cast<Eigen::Index>(block.size());
    ComplexMatrix sub(size, size);
    for (Eigen::Index a = 0; a < size; ++a) {
      for (Eigen::Index b = 0; b < size; ++b) {
        sub(a, b) = pi0(static_cast<Eigen::Index>(block[static_cast<std::size_t>(a)]),
                        static_cast<Eigen::Index>(block[static_cast<std::size_t>(b)]));
      }
    }
    const EigenDecomposition eig = hermitian_eigendecompose(sub, tol.hermitian, tol);
    const RealVector c = snap_inconclusive_spectrum(eig.eigenvalues, tol);
    for (Eigen::Index k = 0; k < size; ++k) {
      // Fix the free phase of each eigenvector: its largest entry (first on
      // ties) becomes real positive.
      Eigen::Index pivot = 0;
      double best = -1.0;
      for (Eigen::Index l = 0; l < size; ++l) {
        const double mag = std::abs(eig.basis(k, l));
        if (mag > best + 1e-12) {
          best = mag;
          pivot = l;
        }
      }
      const Complex fix = std::conj(unit_phase(eig.basis(k, pivot)));
      const auto row = static_cast<Eigen::Index>(block[static_cast<std::size_t>(k)]);
      basis.eigenvalues(row) = c(k);
      for (Eigen::Index l = 0; l < size; ++l) {
        basis.u(row, static_cast<Eigen::Index>(block[static_cast<std::size_t>(l)])) = fix * eig.basis(k, l);
      }
    }
  }
  return basis;
}

ComplexMatrix diagonal_sigma(const RealVector& eigenvalues) {
  const Eigen::Index n = eigenvalues.size();
  ComplexMatrix s = ComplexMatrix::Zero(2 * n, 2 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double c = std::clamp(eigenvalues(i), 0.0, 1.0);
    s(i, i) = std::sqrt(1.0 - c);
    s(i + n, i + n) = std::sqrt(1.0 - c);
    s(i, i + n) = -std::sqrt(c);
    s(i + n, i) = std::sqrt(c);
  }
  return s;
}

ComplexMatrix reference_transfer(const ComplexMatrix& u_pre, const RealVector& eigenvalues,
                                 const ComplexMatrix& v_post) {
  return direct_sum(v_post, v_post) * diagonal_sigma(eigenvalues) * direct_sum(u_pre, u_pre);
}

namespace {

// Residual of `x` after removing its components along `accepted` (an
// orthonormal set), with one reorthogonalization pass.
ComplexVector orthogonal_residual(ComplexVector x, const std::vector<ComplexVector>& accepted) {
  for (int pass = 0; pass < 2; ++pass) {
    for (const ComplexVector& a : accepted) x -= a * a.dot(x);
  }
  return x;
}

struct BlockPlan {
  std::vector<std::size_t> modes;
  std::vector<std::pair<std::size_t, ComplexVector>> outputs;  // (state, restricted output)
};

double normalized_overlap(const ComplexVector& x, const ComplexVector& y) {
  return std::abs(x.dot(y)) / (x.norm() * y.norm());
}

bool plan_block(const std::vector<ComplexVector>& outputs, const std::vector<std::size_t>& modes, double zero_tol,
                double overlap_tol, BlockPlan& plan) {
  plan.modes = modes;
  plan.outputs.clear();
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    ComplexVector restricted(static_cast<Eigen::Index>(modes.size()));
    for (std::size_t k = 0; k < modes.size(); ++k) {
      restricted(static_cast<Eigen::Index>(k)) = outputs[i](static_cast<Eigen::Index>(modes[k]));
    }
    if (restricted.norm() > zero_tol) plan.outputs.emplace_back(i, std::move(restricted));
  }
  if (plan.outputs.size() > modes.size()) return false;
  for (std::size_t x = 0; x < plan.outputs.size(); ++x) {
    for (std::size_t y = x + 1; y < plan.outputs.size(); ++y) {
      if (normalized_overlap(plan.outputs[x].second, plan.outputs[y].second) > overlap_tol) return false;
    }
  }
  return true;
}

void fill_block(const BlockPlan& plan, PortAssignment assignment, ComplexMatrix& v,
                std::vector<std::optional<std::size_t>>& port_state) {
  const std::size_t d = plan.modes.size();
  std::vector<bool> taken(d, false);
  std::vector<ComplexVector> rows(d);
  std::vector<ComplexVector> accepted;

  for (const auto& [state, output] : plan.outputs) {
    std::size_t pos = d;
    if (assignment == PortAssignment::kByIndex) {
      pos = state;
      if (pos >= d || taken[pos]) {
        throw Error(ErrorCode::kDegenerateOutput, "no free port for " + state_label(state));
      }
    } else {
      double best = -1.0;
      for (std::size_t k = 0; k < d; ++k) {
        if (taken[k]) continue;
        const double weight = std::norm(output(static_cast<Eigen::Index>(k)));
        if (weight > best + 1e-12) {
          best = weight;
          pos = k;
        }
      }
    }
    ComplexVector w = orthogonal_residual(output.normalized(), accepted);
    w.normalize();
    accepted.push_back(w);
    rows[pos] = w;
    taken[pos] = true;
    port_state[plan.modes[pos]] = state;
  }

  for (std::size_t pos = 0; pos < d; ++pos) {
    if (taken[pos]) continue;
    // Prefer the port's own basis vector; otherwise the basis vector with
    // the largest component outside the accepted span.
    ComplexVector best_residual;
    double best_norm = -1.0;
    {
      ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(d));
      e(static_cast<Eigen::Index>(pos)) = 1.0;
      best_residual = orthogonal_residual(e, accepted);
      best_norm = best_residual.norm();
    }
    if (best_norm * best_norm < 0.5) {
      for (std::size_t k = 0; k < d; ++k) {
        ComplexVector e = ComplexVector::Zero(static_cast<Eigen::Index>(d));
        e(static_cast<Eigen::Index>(k)) = 1.0;
        ComplexVector r = orthogonal_residual(e, accepted);
        if (r.norm() > best_norm + 1e-12) {
          best_norm = r.norm();
          best_residual = r;
        }
      }
    }
    best_residual /= best_norm;
    accepted.push_back(best_residual);
    rows[pos] = best_residual;
    taken[pos] = true;
  }

  for (std::size_t pos = 0; pos < d; ++pos) {
    for (std::size_t k = 0; k < d; ++k) {
      v(static_cast<Eigen::Index>(plan.modes[pos]), static_cast<Eigen::Index>(plan.modes[k])) =
          std::conj(rows[pos](static_cast<Eigen::Index>(k)));
    }
  }
}

}  // namespace

PostProcess post_process_from_outputs(std::size_t n_signal, const std::vector<ComplexVector>& outputs,
                                      const std::vector<std::vector<std::size_t>>& blocks,
                                      PortAssignment assignment, const Tolerances& tol) {
  const auto n = static_cast<Eigen::Index>(n_signal);
  for (const ComplexVector& o : outputs) {
    if (o.size() != n) throw Error(ErrorCode::kDimensionMismatch, "signal output has the wrong dimension");
  }
  PostProcess post;
  post.v = ComplexMatrix::Zero(n, n);
  post.port_state.assign(n_signal, std::nullopt);

  // Blockwise routing needs orthogonality inside every block; this is
  // stricter than global orthogonality.
  constexpr double kBlockOverlap = 1e-8;
  constexpr double kGlobalOverlap = 1e-6;
  std::vector<BlockPlan> plans;
  bool blockwise = blocks.size() > 1;
  if (blockwise) {
    for (const std::vector<std::size_t>& block : blocks) {
      BlockPlan plan;
      if (!plan_block(outputs, block, tol.zero_output, kBlockOverlap, plan)) {
        blockwise = false;
        break;
      }
      plans.push_back(std::move(plan));
    }
  }
  if (!blockwise) {
    std::vector<std::size_t> all(n_signal);
    for (std::size_t i = 0; i < n_signal; ++i) all[i] = i;
    BlockPlan plan;
    if (!plan_block(outputs, all, tol.zero_output, kGlobalOverlap, plan)) {
      throw Error(ErrorCode::kDegenerateOutput,
                  "signal outputs are not mutually orthogonal; the POVM does not discriminate this ensemble "
                  "unambiguously");
    }
    plans.assign(1, std::move(plan));
  }
  for (const BlockPlan& plan : plans) fill_block(plan, assignment, post.v, post.port_state);
  return post;
}

ComplexMatrix derive_post_process(const DilationSigma& d, const std::vector<PureState>& states,
                                  const Tolerances& tol) {
  std::vector<ComplexVector> outputs;
  outputs.reserve(states.size());
  for (const PureState& s : states) outputs.push_back(apply_to_pure(d, s).signal);
  return post_process_from_outputs(d.dim_signal, outputs, {}, PortAssignment::kByIndex, tol).v;
}

Circuit assemble_circuit(const ComplexMatrix& u_pre, const RealVector& eigenvalues, const ComplexMatrix& v_post,
                         std::vector<std::string> signal_labels, CircuitMetadata metadata,
                         const Tolerances& tol) {
  require_unitary(u_pre, tol.unitary, "pre-process transformation");
  require_unitary(v_post, tol.unitary, "post-process transformation");
  const std::size_t n = static_cast<std::size_t>(u_pre.rows());
  if (static_cast<std::size_t>(v_post.rows()) != n || static_cast<std::size_t>(eigenvalues.size()) != n) {
    throw Error(ErrorCode::kDimensionMismatch, "U, eigenvalues and V must share the signal dimension");
  }

  std::vector<OpticalElement> elements = reck_decompose(u_pre, tol);
  const std::size_t u_count = elements.size();
  const std::vector<OpticalElement> core = core_rotations(eigenvalues, tol);
  elements.insert(elements.end(), core.begin(), core.end());
  const std::vector<OpticalElement> post = reck_decompose(v_post, tol);
  elements.insert(elements.end(), post.begin(), post.end());

  if (signal_labels.empty()) {
    for (std::size_t port = 0; port < n; ++port) signal_labels.push_back(signal_port_label(port));
  }
  if (signal_labels.size() != n) throw Error(ErrorCode::kDimensionMismatch, "need one label per signal port");
  signal_labels.resize(2 * n, std::string(kInconclusiveLabel));

  metadata.extra["u_elements"] = std::to_string(u_count);
  metadata.extra["core_elements"] = std::to_string(core.size());
  metadata.extra["v_elements"] = std::to_string(post.size());
  return Circuit(2 * n, std::move(elements), std::move(signal_labels), std::move(metadata));
}

namespace {

// Shared tail of both compile_measurement overloads. outputs[k] is a signal
// output in the compilation basis belonging to state owner[k].
CompiledMeasurement compile_with_outputs(const ComplexMatrix& pi0, DilationSigma dilation, CompilationBasis basis,
                                         const std::vector<ComplexVector>* outputs,
                                         const std::vector<std::size_t>& owner, CircuitMetadata metadata,
                                         const Tolerances& tol) {
  const std::size_t n = dilation.dim_signal;
  const auto ni = static_cast<Eigen::Index>(n);
  PostProcess post;
  std::vector<std::string> labels;
  if (outputs == nullptr) {
    post.v = ComplexMatrix::Identity(ni, ni);
    post.port_state.assign(n, std::nullopt);
  } else {
    post = post_process_from_outputs(n, *outputs, basis.blocks, PortAssignment::kByWeight, tol);
    for (std::size_t port = 0; port < n; ++port) {
      if (post.port_state[port]) post.port_state[port] = owner[*post.port_state[port]];
      labels.push_back(post.port_state[port] ? state_label(*post.port_state[port])
                                             : std::string(kInconclusiveLabel));
    }
  }
  if (metadata.source_hash.empty()) metadata.source_hash = fnv1a_hex(pi0);

  Circuit circuit = assemble_circuit(basis.u, basis.eigenvalues, post.v, std::move(labels), metadata, tol);
  CompiledMeasurement out{std::move(dilation), std::move(basis), std::move(post), std::move(circuit), 0, 0, 0};

  // Stage boundaries as recorded by assemble_circuit (all elements, phase
  // shifters included); the per-stage counts below are two-mode only.
  const auto& extra = out.circuit.metadata().extra;
  const std::size_t u_end = std::stoul(extra.at("u_elements"));
  const std::size_t core_end = u_end + std::stoul(extra.at("core_elements"));
  const auto& elements = out.circuit.elements();
  for (std::size_t i = 0; i < elements.size(); ++i) {
    if (!elements[i].is_two_mode()) continue;
    if (i < u_end) ++out.u_elements;
    else if (i < core_end) ++out.core_elements;
    else ++out.v_elements;
  }
  return out;
}

ComplexMatrix signal_map(const CompilationBasis& basis) {
  const auto ni = basis.eigenvalues.size();
  RealVector transmission(ni);
  for (Eigen::Index i = 0; i < ni; ++i) transmission(i) = std::sqrt(1.0 - basis.eigenvalues(i));
  return transmission.cast<Complex>().asDiagonal() * basis.u;
}

}  // namespace

CompiledMeasurement compile_measurement(const ComplexMatrix& pi0, const std::vector<PureState>& states,
                                        CircuitMetadata metadata, const Tolerances& tol) {
  DilationSigma dilation = build_dilation(pi0, SignVariant::kUpperRight, tol);
  CompilationBasis basis = compilation_basis(pi0, tol);
  if (states.empty()) return compile_with_outputs(pi0, std::move(dilation), std::move(basis), nullptr, {}, metadata, tol);

  const ComplexMatrix b = signal_map(basis);
  std::vector<ComplexVector> outputs;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].dim() != dilation.dim_signal) {
      throw Error(ErrorCode::kDimensionMismatch, "state dimension does not match the POVM");
    }
    outputs.push_back(b * states[i].amplitudes());
    owner.push_back(i);
  }
  return compile_with_outputs(pi0, std::move(dilation), std::move(basis), &outputs, owner, metadata, tol);
}

CompiledMeasurement compile_measurement(const ComplexMatrix& pi0, const Ensemble& ensemble, CircuitMetadata metadata,
                                        const Tolerances& tol) {
  DilationSigma dilation = build_dilation(pi0, SignVariant::kUpperRight, tol);
  CompilationBasis basis = compilation_basis(pi0, tol);
  if (ensemble.dim() != dilation.dim_signal) {
    throw Error(ErrorCode::kDimensionMismatch, "ensemble dimension does not match the POVM");
  }
  const ComplexMatrix b = signal_map(basis);
  std::vector<ComplexVector> outputs;
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (const auto* pure = std::get_if<PureState>(&ensemble.state(i))) {
      outputs.push_back(b * pure->amplitudes());
      owner.push_back(i);
      continue;
    }
    // A mixed state's signal output spans a subspace; route an orthogonal
    // basis of it, each component weighted by its amplitude.
    const ComplexMatrix out_rho = b * state_density(ensemble.state(i)) * b.adjoint();
    const EigenDecomposition eig = hermitian_eigendecompose(0.5 * (out_rho + out_rho.adjoint()), tol.hermitian, tol);
    // Eigenvectors below the solver's noise floor are arbitrary and must not claim ports.
    const double floor = std::max(tol.zero_output * tol.zero_output, tol.eigenvalue_window * out_rho.norm());
    for (std::size_t k = 0; k < eig.size(); ++k) {
      const double lambda = eig.eigenvalues(static_cast<Eigen::Index>(k));
      if (lambda <= floor) continue;
      outputs.push_back(std::sqrt(lambda) * eig.basis.row(static_cast<Eigen::Index>(k)).transpose().conjugate());
      owner.push_back(i);
    }
  }
  return compile_with_outputs(pi0, std::move(dilation), std::move(basis), &outputs, owner, metadata, tol);
}

}  // namespace neumark
