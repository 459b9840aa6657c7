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
#include <iosfwd>
#include <string>
#include <string_view>

#include "neumark/error.hpp"
#include "neumark/tolerances.hpp"

namespace neumark::cli {

enum class Command { kCompile, kSimulate, kVerify, kDemo };

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitInvalidInput = 2;
inline constexpr int kExitUsdViolation = 3;
inline constexpr int kExitDimensionMismatch = 4;

struct RunConfig {
  Command command = Command::kVerify;
  std::string povm_path;
  std::string ensemble_path;  // optional for compile
  std::string circuit_path;
  std::string out_path;       // optional for demo
  std::string csv_path;       // demo only
  Tolerances tol = kDefaultTolerances;
  std::size_t trials = 100000;
  std::uint64_t seed = 42;
  std::size_t workers = 1;
};

int exit_code_for(ErrorCode code);

/// Either a bare number, which sets the verification tolerances (usd and
/// zero_error), or name=value for a single field, e.g. "hermitian=1e-9".
void apply_tolerance_override(Tolerances& tol, std::string_view setting);

int cmd_compile(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_simulate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_demo(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Dispatches on config.command and maps library errors to exit codes.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace neumark::cli
