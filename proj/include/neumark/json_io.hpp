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

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "neumark/compiler.hpp"
#include "neumark/numerics.hpp"
#include "neumark/photonics.hpp"
#include "neumark/povm.hpp"
#include "neumark/unknown_qubits.hpp"

// JSON encoding shared by the command-line tools. Complex scalars are
// [re, im] pairs, matrices row-major nested arrays, ports 1-based.
namespace neumark::json_io {

using nlohmann::json;

json to_json(Complex z);
json to_json(const ComplexVector& v);
json to_json(const ComplexMatrix& m);

Complex complex_from_json(const json& j);
ComplexVector vector_from_json(const json& j);
ComplexMatrix matrix_from_json(const json& j);

json povm_to_json(const Povm& povm);
Povm povm_from_json(const json& j);

json ensemble_to_json(const Ensemble& ensemble);
Ensemble ensemble_from_json(const json& j);

json circuit_to_json(const Circuit& circuit);
Circuit circuit_from_json(const json& j);

json outcome_to_json(const EnsembleSimulation& sim);
json demo_report_to_json(const unknown_qubits::MonteCarloResult& result);
std::string demo_records_csv(const unknown_qubits::MonteCarloResult& result);

/// Reads and parses a file; malformed content throws InvalidInput.
json read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const json& j);
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace neumark::json_io
