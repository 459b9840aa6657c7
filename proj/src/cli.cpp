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

#include "neumark/cli.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <string>

#include "neumark/compiler.hpp"
#include "neumark/dilation.hpp"
#include "neumark/json_io.hpp"
#include "neumark/photonics.hpp"
#include "neumark/povm.hpp"
#include "neumark/unknown_qubits.hpp"

namespace neumark::cli {

namespace {

constexpr double kDemoTarget = 1.0 / 6.0;
constexpr double kDemoWindow = 0.002;

double parse_double(std::string_view text) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(value) || value < 0.0) {
    throw Error(ErrorCode::kInvalidInput, "bad tolerance value \"" + std::string(text) + "\"");
  }
  return value;
}

// The POVM must be valid before anything is built from it.
bool load_valid_povm(const RunConfig& config, std::ostream& err, Povm& povm) {
  povm = json_io::povm_from_json(json_io::read_file(config.povm_path));
  const PovmValidation validation = validate_povm(povm, config.tol);
  if (!validation.valid()) {
    err << "invalid POVM: " << validation.first_failure() << "\n";
    return false;
  }
  return true;
}

void print_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    out << "  ";
    for (Eigen::Index c = 0; c < m.cols(); ++c) out << std::setw(14) << m(r, c);
    out << "\n";
  }
}

}  // namespace

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDimensionMismatch:
      return kExitDimensionMismatch;
    case ErrorCode::kDegenerateOutput:
    case ErrorCode::kZeroErrorViolation:
      return kExitUsdViolation;
    case ErrorCode::kNoConvergence:
      return kExitVerificationFailed;
    default:
      return kExitInvalidInput;
  }
}

void apply_tolerance_override(Tolerances& tol, std::string_view setting) {
  const std::size_t eq = setting.find('=');
  if (eq == std::string_view::npos) {
    const double v = parse_double(setting);
    tol.usd = v;
    tol.zero_error = v;
    return;
  }
  const std::string_view name = setting.substr(0, eq);
  const std::string_view text = setting.substr(eq + 1);
  if (name == "jacobi_max_sweeps") {
    const double v = parse_double(text);
    if (v < 1.0 || v != std::floor(v)) throw Error(ErrorCode::kInvalidInput, "jacobi_max_sweeps must be >= 1");
    tol.jacobi_max_sweeps = static_cast<int>(v);
    return;
  }
  double* field = nullptr;
  if (name == "hermitian") field = &tol.hermitian;
  else if (name == "unitary") field = &tol.unitary;
  else if (name == "eigenvalue_window") field = &tol.eigenvalue_window;
  else if (name == "eigenvalue_snap") field = &tol.eigenvalue_snap;
  else if (name == "probability") field = &tol.probability;
  else if (name == "imaginary") field = &tol.imaginary;
  else if (name == "usd") field = &tol.usd;
  else if (name == "elision") field = &tol.elision;
  else if (name == "zero_error") field = &tol.zero_error;
  else if (name == "zero_output") field = &tol.zero_output;
  else if (name == "jacobi_relative") field = &tol.jacobi_relative;
  if (field == nullptr) throw Error(ErrorCode::kInvalidInput, "unknown tolerance \"" + std::string(name) + "\"");
  *field = parse_double(text);
}

int cmd_compile(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Povm povm(1, {});
  if (!load_valid_povm(config, err, povm)) return kExitInvalidInput;
  const ComplexMatrix pi0 = inconclusive_element(povm, config.tol);

  CompiledMeasurement compiled = [&] {
    if (config.ensemble_path.empty()) return compile_measurement(pi0, std::vector<PureState>{}, {}, config.tol);
    const Ensemble ensemble = json_io::ensemble_from_json(json_io::read_file(config.ensemble_path));
    const UsdReport usd = verify_usd_condition(ensemble, povm, config.tol.usd, config.tol);
    if (!usd.passed) {
      throw Error(ErrorCode::kZeroErrorViolation,
                  "Tr(rho_" + std::to_string(usd.worst_row + 1) + " Pi_" + std::to_string(usd.worst_col + 1) +
                      ") = " + std::to_string(usd.max_off_diagonal) + " exceeds the unambiguity tolerance");
    }
    return compile_measurement(pi0, ensemble, {}, config.tol);
  }();

  json_io::write_file(config.out_path, json_io::circuit_to_json(compiled.circuit));
  out << "modes: " << compiled.circuit.n_modes() << "\n"
      << "two-mode elements: " << compiled.circuit.two_mode_count() << " (pre " << compiled.u_elements << ", core "
      << compiled.core_elements << ", post " << compiled.v_elements << ")\n"
      << "phase shifters: " << compiled.circuit.count(ElementKind::kPhaseShifter) << "\n"
      << "wrote " << config.out_path << "\n";
  return kExitOk;
}

int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream&) {
  const Circuit circuit = json_io::circuit_from_json(json_io::read_file(config.circuit_path));
  const Ensemble ensemble = json_io::ensemble_from_json(json_io::read_file(config.ensemble_path));
  if (ensemble.dim() != circuit.signal_modes()) {
    throw Error(ErrorCode::kDimensionMismatch, "ensemble dimension " + std::to_string(ensemble.dim()) +
                                                   " does not match " + std::to_string(circuit.signal_modes()) +
                                                   " signal modes");
  }
  const EnsembleSimulation sim = simulate_ensemble(circuit, ensemble, config.tol);
  json_io::write_file(config.out_path, json_io::outcome_to_json(sim));
  out << std::setprecision(12);
  for (std::size_t i = 0; i < sim.per_state.size(); ++i) {
    out << state_label(i) << ": p_success " << sim.per_state[i].p_success << ", p_inconclusive "
        << sim.per_state[i].p_inconclusive << "\n";
  }
  out << "average success: " << sim.average_success << "\n"
      << "wrote " << config.out_path << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  Povm povm(1, {});
  if (!load_valid_povm(config, err, povm)) return kExitInvalidInput;
  const Ensemble ensemble = json_io::ensemble_from_json(json_io::read_file(config.ensemble_path));
  const UsdReport usd = verify_usd_condition(ensemble, povm, config.tol.usd, config.tol);
  const DilationSigma d = build_dilation(inconclusive_element(povm, config.tol), SignVariant::kUpperRight, config.tol);

  out << std::setprecision(6) << "Tr(rho_i Pi_j):\n";
  print_matrix(out, usd.probabilities);
  out << std::setprecision(12);
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    out << state_label(i) << ": p " << usd.success[i] << ", q " << usd.failure[i] << "\n";
  }
  out << std::setprecision(3) << std::scientific;
  out << "max off-diagonal: " << usd.max_off_diagonal << "\n";

  double unitarity = 0.0;
  double orthogonality = 0.0;
  double overlap = 0.0;
  bool unitary = false;
  bool orthogonal = false;
  bool preserved = false;
  if (ensemble.all_pure()) {
    const DilationReport r = verify_dilation(d, ensemble.pure_states(), config.tol.usd, config.tol);
    unitarity = r.unitarity_residual;
    orthogonality = r.max_signal_overlap;
    overlap = r.max_ancilla_overlap_error;
    unitary = r.unitary;
    orthogonal = r.signal_orthogonal;
    preserved = r.ancilla_overlaps_preserved;
  } else {
    std::vector<ComplexMatrix> rhos;
    for (const State& s : ensemble.states()) rhos.push_back(state_density(s));
    const MixedDilationReport r = verify_dilation_mixed(d, rhos, config.tol.usd, config.tol);
    unitarity = r.unitarity_residual;
    orthogonality = r.max_signal_trace;
    overlap = r.max_ancilla_trace_error;
    unitary = unitarity <= config.tol.unitary;
    orthogonal = orthogonality <= config.tol.usd;
    preserved = overlap <= config.tol.usd;
  }
  out << "sigma unitarity residual: " << unitarity << "\n"
      << "signal orthogonality residual: " << orthogonality << "\n"
      << "ancilla overlap residual: " << overlap << "\n";
  out.unsetf(std::ios::floatfield);

  const char* failed = nullptr;
  if (!usd.passed) failed = "unambiguity condition (nonzero off-diagonal Tr(rho_i Pi_j))";
  else if (!unitary) failed = "sigma unitarity";
  else if (!orthogonal) failed = "signal output orthogonality";
  else if (!preserved) failed = "ancilla overlap preservation";
  if (failed != nullptr) {
    out << "FAIL\n";
    err << "verification failed: " << failed << "\n";
    return kExitVerificationFailed;
  }
  out << "PASS\n";
  return kExitOk;
}

int cmd_demo(const RunConfig& config, std::ostream& out, std::ostream& err) {
  if (config.trials < 1) {
    err << "trials must be at least 1\n";
    return kExitInvalidInput;
  }
  const unknown_qubits::DemoCircuit demo = unknown_qubits::build_demo_circuit(config.tol);
  unknown_qubits::MonteCarloOptions options;
  options.trials = config.trials;
  options.seed = config.seed;
  options.workers = config.workers;
  options.keep_records = !config.csv_path.empty();
  const unknown_qubits::MonteCarloResult result = unknown_qubits::monte_carlo_average(demo, options, config.tol);

  if (!config.out_path.empty()) json_io::write_file(config.out_path, json_io::demo_report_to_json(result));
  if (!config.csv_path.empty()) json_io::write_text(config.csv_path, json_io::demo_records_csv(result));

  const bool on_target = std::abs(result.mean - kDemoTarget) <= kDemoWindow;
  out << std::setprecision(8) << "trials: " << result.trials << ", seed: " << result.seed << "\n"
      << "mean success: " << result.mean << " +- " << result.stderr_mean << "\n"
      << "target 1/6: " << (on_target ? "PASS" : "FAIL") << " (|mean - 1/6| = " << std::abs(result.mean - kDemoTarget)
      << ")\n"
      << "measurement elements: " << result.element_count << "\n";
  out << "per-block mean norm^2:";
  for (double m : result.per_block_means) out << " " << m;
  out << "\n";

  if (result.max_operator_deviation > config.tol.usd || result.max_cross_talk > config.tol.zero_error) {
    err << "per-trial check failed: operator deviation " << result.max_operator_deviation << ", cross-talk "
        << result.max_cross_talk << "\n";
    return kExitVerificationFailed;
  }
  return kExitOk;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    switch (config.command) {
      case Command::kCompile:
        return cmd_compile(config, out, err);
      case Command::kSimulate:
        return cmd_simulate(config, out, err);
      case Command::kVerify:
        return cmd_verify(config, out, err);
      case Command::kDemo:
        return cmd_demo(config, out, err);
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}

}  // namespace neumark::cli
