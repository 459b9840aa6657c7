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

#include "neumark/json_io.hpp"

#include <fstream>
#include <sstream>

#include "neumark/error.hpp"

namespace neumark::json_io {

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::kInvalidInput, msg); }

const json& field(const json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) invalid(std::string("missing field \"") + name + "\"");
  return j.at(name);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) invalid(std::string(what) + " must be a number");
  return j.get<double>();
}

std::size_t count(const json& j, const char* what) {
  if (!j.is_number_integer() && !j.is_number_unsigned()) invalid(std::string(what) + " must be an integer");
  const auto v = j.get<long long>();
  if (v < 0) invalid(std::string(what) + " must be non-negative");
  return static_cast<std::size_t>(v);
}

std::size_t port_index(const json& j, std::size_t n_modes) {
  const std::size_t one_based = count(j, "mode");
  if (one_based < 1 || one_based > n_modes) invalid("mode " + std::to_string(one_based) + " out of range");
  return one_based - 1;
}

}  // namespace

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const ComplexVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

json to_json(const ComplexMatrix& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    out.push_back(std::move(row));
  }
  return out;
}

Complex complex_from_json(const json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2) invalid("complex value must be [re, im]");
  return {number(j[0], "real part"), number(j[1], "imaginary part")};
}

ComplexVector vector_from_json(const json& j) {
  if (!j.is_array() || j.empty()) invalid("vector must be a non-empty array");
  ComplexVector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

ComplexMatrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) invalid("matrix must be a nested array");
  const std::size_t rows = j.size();
  const std::size_t cols = j[0].size();
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) invalid("matrix rows have unequal length");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = complex_from_json(j[r][c]);
    }
  }
  return m;
}

json povm_to_json(const Povm& povm) {
  json elements = json::array();
  for (const ComplexMatrix& e : povm.elements()) elements.push_back(to_json(e));
  return {{"dim", povm.dim()}, {"elements", elements}};
}

Povm povm_from_json(const json& j) {
  const std::size_t dim = count(field(j, "dim"), "dim");
  const json& elements = field(j, "elements");
  if (!elements.is_array() || elements.empty()) invalid("elements must be a non-empty array");
  std::vector<ComplexMatrix> mats;
  for (const json& e : elements) mats.push_back(matrix_from_json(e));
  return Povm(dim, std::move(mats));
}

json ensemble_to_json(const Ensemble& ensemble) {
  json states = json::array();
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    const State& s = ensemble.state(i);
    json entry;
    if (const auto* pure = std::get_if<PureState>(&s)) {
      entry = {{"type", "pure"}, {"data", to_json(pure->amplitudes())}};
    } else {
      entry = {{"type", "mixed"}, {"data", to_json(std::get<MixedState>(s).density())}};
    }
    entry["prior"] = ensemble.priors()[i];
    states.push_back(std::move(entry));
  }
  return {{"dim", ensemble.dim()}, {"states", states}};
}

Ensemble ensemble_from_json(const json& j) {
  const std::size_t dim = count(field(j, "dim"), "dim");
  const json& states = field(j, "states");
  if (!states.is_array() || states.empty()) invalid("states must be a non-empty array");
  std::vector<State> parsed;
  std::vector<double> priors;
  for (const json& s : states) {
    const json& type = field(s, "type");
    const json& data = field(s, "data");
    if (type == "pure") {
      parsed.emplace_back(PureState(vector_from_json(data)));
    } else if (type == "mixed") {
      parsed.emplace_back(MixedState(matrix_from_json(data)));
    } else {
      invalid("state type must be \"pure\" or \"mixed\"");
    }
    if (state_dim(parsed.back()) != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "state dimension does not match \"dim\"");
    }
    priors.push_back(number(field(s, "prior"), "prior"));
  }
  return Ensemble(std::move(parsed), std::move(priors));
}

json circuit_to_json(const Circuit& circuit) {
  json elements = json::array();
  for (const OpticalElement& e : circuit.elements()) {
    json modes = e.is_two_mode() ? json::array({e.p + 1, e.q + 1}) : json::array({e.p + 1});
    elements.push_back({{"kind", element_kind_name(e.kind)}, {"modes", modes}, {"theta", e.theta}, {"phi", e.phi}});
  }
  json detectors = json::object();
  for (std::size_t port = 0; port < circuit.n_modes(); ++port) {
    detectors[std::to_string(port + 1)] = circuit.label(port);
  }
  json metadata = json::object();
  metadata["source_hash"] = circuit.metadata().source_hash;
  for (const auto& [key, value] : circuit.metadata().extra) metadata[key] = value;
  metadata["two_mode_elements"] = circuit.two_mode_count();
  return {{"n_modes", circuit.n_modes()}, {"elements", elements}, {"detector_map", detectors}, {"metadata", metadata}};
}

Circuit circuit_from_json(const json& j) {
  const std::size_t n_modes = count(field(j, "n_modes"), "n_modes");
  const json& elements = field(j, "elements");
  if (!elements.is_array()) invalid("elements must be an array");
  std::vector<OpticalElement> parsed;
  for (const json& e : elements) {
    const json& kind_field = field(e, "kind");
    if (!kind_field.is_string()) invalid("element kind must be a string");
    OpticalElement element;
    element.kind = parse_element_kind(kind_field.get<std::string>());
    const json& modes = field(e, "modes");
    const std::size_t arity = element.is_two_mode() ? 2 : 1;
    if (!modes.is_array() || modes.size() != arity) invalid("element modes have the wrong arity");
    element.p = port_index(modes[0], n_modes);
    element.q = arity == 2 ? port_index(modes[1], n_modes) : element.p;
    element.theta = number(field(e, "theta"), "theta");
    element.phi = number(field(e, "phi"), "phi");
    parsed.push_back(element);
  }
  const json& detectors = field(j, "detector_map");
  if (!detectors.is_object() || detectors.size() != n_modes) invalid("detector_map must name every port");
  std::vector<std::string> labels(n_modes);
  for (std::size_t port = 0; port < n_modes; ++port) {
    const std::string key = std::to_string(port + 1);
    if (!detectors.contains(key) || !detectors[key].is_string()) invalid("detector_map lacks port " + key);
    labels[port] = detectors[key].get<std::string>();
  }
  CircuitMetadata metadata;
  if (j.contains("metadata")) {
    const json& m = j["metadata"];
    if (!m.is_object()) invalid("metadata must be an object");
    for (const auto& [key, value] : m.items()) {
      if (key == "source_hash" && value.is_string()) {
        metadata.source_hash = value.get<std::string>();
      } else if (key != "two_mode_elements") {
        metadata.extra[key] = value.is_string() ? value.get<std::string>() : value.dump();
      }
    }
  }
  return Circuit(n_modes, std::move(parsed), std::move(labels), std::move(metadata));
}

json outcome_to_json(const EnsembleSimulation& sim) {
  json per_state = json::array();
  for (const StateResult& r : sim.per_state) {
    per_state.push_back({{"p_success", r.p_success},
                         {"p_inconclusive", r.p_inconclusive},
                         {"ports", r.outcome.port_probabilities}});
  }
  return {{"per_state", per_state}, {"average_success", sim.average_success}};
}

json demo_report_to_json(const unknown_qubits::MonteCarloResult& result) {
  return {{"trials", result.trials},
          {"seed", result.seed},
          {"mean", result.mean},
          {"stderr", result.stderr_mean},
          {"per_block_means", result.per_block_means},
          {"element_count", result.element_count}};
}

std::string demo_records_csv(const unknown_qubits::MonteCarloResult& result) {
  std::ostringstream out;
  out.precision(17);
  out << "overlap_squared,p_success\n";
  for (const unknown_qubits::TrialRecord& r : result.records) out << r.overlap_squared << ',' << r.p_success << '\n';
  return out.str();
}

json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    invalid(path.string() + ": " + e.what());
  }
}

void write_file(const std::filesystem::path& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) invalid("cannot write " + path.string());
  out << text;
  if (!out) invalid("failed writing " + path.string());
}

}  // namespace neumark::json_io
