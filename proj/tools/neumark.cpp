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

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "neumark/cli.hpp"

namespace {

void add_tolerance_flag(CLI::App* cmd, std::vector<std::string>& specs) {
  cmd->add_option("--tol", specs, "Tolerance override: VALUE, or NAME=VALUE (repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  using neumark::cli::Command;
  CLI::App app{"Compile unambiguous-discrimination POVMs into beam-splitter networks and simulate them"};
  app.require_subcommand(1);

  neumark::cli::RunConfig config;
  std::vector<std::string> tol_settings;

  CLI::App* compile = app.add_subcommand("compile", "Compile a POVM into a circuit");
  compile->add_option("--povm", config.povm_path, "POVM JSON")->required()->check(CLI::ExistingFile);
  compile->add_option("--ensemble", config.ensemble_path, "Ensemble JSON; labels the detectors")
      ->check(CLI::ExistingFile);
  compile->add_option("--out", config.out_path, "Circuit JSON to write")->required();
  add_tolerance_flag(compile, tol_settings);

  CLI::App* simulate = app.add_subcommand("simulate", "Simulate an ensemble through a circuit");
  simulate->add_option("--circuit", config.circuit_path, "Circuit JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--ensemble", config.ensemble_path, "Ensemble JSON")->required()->check(CLI::ExistingFile);
  simulate->add_option("--out", config.out_path, "Outcome JSON to write")->required();
  add_tolerance_flag(simulate, tol_settings);

  CLI::App* verify = app.add_subcommand("verify", "Check the unambiguity condition and the dilation");
  verify->add_option("--povm", config.povm_path, "POVM JSON")->required()->check(CLI::ExistingFile);
  verify->add_option("--ensemble", config.ensemble_path, "Ensemble JSON")->required()->check(CLI::ExistingFile);
  add_tolerance_flag(verify, tol_settings);

  CLI::App* demo = app.add_subcommand("demo", "Monte Carlo over random pairs of unknown qubits");
  demo->add_option("--trials", config.trials, "Number of sampled pairs")->capture_default_str();
  demo->add_option("--seed", config.seed, "RNG seed")->capture_default_str();
  demo->add_option("--workers", config.workers, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  demo->add_option("--out", config.out_path, "Report JSON to write");
  demo->add_option("--csv", config.csv_path, "Per-trial CSV to write");
  add_tolerance_flag(demo, tol_settings);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : neumark::cli::kExitInvalidInput;
  }

  if (compile->parsed()) config.command = Command::kCompile;
  else if (simulate->parsed()) config.command = Command::kSimulate;
  else if (verify->parsed()) config.command = Command::kVerify;
  else config.command = Command::kDemo;

  try {
    for (const std::string& setting : tol_settings) neumark::cli::apply_tolerance_override(config.tol, setting);
  } catch (const neumark::Error& e) {
    std::cerr << e.what() << "\n";
    return neumark::cli::kExitInvalidInput;
  }
  return neumark::cli::run(config, std::cout, std::cerr);
}
