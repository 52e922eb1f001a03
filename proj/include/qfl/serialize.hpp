// Copyright 2026 The qfl Authors
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

// JSON formats. Complex numbers are [re, im]; matrices are row-major arrays
// of rows indexed by the declared state order.
//
//   automaton: {"type": "mo"|"mm", "states": [...], "alphabet": ["a", ...],
//               "transitions": {"#": [[[re, im], ...], ...], ...},
//               "initial": "q0", "accepting": [...], "rejecting": [...],
//               "class": {"kind": "MM", "error_side": "NEGATIVE", "margin": 0.1}}
//   mapping:   {"qubits": n, "kind": "density", "assignment": {"q0": "01", ...}}
//
// "rejecting" is omitted for measure-once machines and "class" is optional.

#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "json.hpp"
#include "qfl/automata.hpp"
#include "qfl/blocks.hpp"
#include "qfl/compose.hpp"
#include "qfl/mapping.hpp"
#include "qfl/transpile.hpp"

namespace qfl {

using Json = nlohmann::ordered_json;

Json complex_to_json(Complex z);
Complex complex_from_json(const Json &j);
Json matrix_to_json(const ComplexMatrix &m);
ComplexMatrix matrix_from_json(const Json &j);

struct TaggedQfa {
    Qfa machine;
    std::optional<QfaClassTag> tag;
};

Json qfa_to_json(const Qfa &m, const std::optional<QfaClassTag> &tag = std::nullopt);
/// Validates structure and unitarity (at `tol`); throws ValidationError.
TaggedQfa qfa_from_json(const Json &j, double tol = kUnitaryTol);

Json tag_to_json(const QfaClassTag &tag);
QfaClassTag tag_from_json(const Json &j);

Json mapping_to_json(const StateMapping &m);
StateMapping mapping_from_json(const Json &j);

Json equ_params_to_json(const EquParams &p);
Json mod_p_coefficients_to_json(const ModPCoefficients &c);

/// {"b": "aa", ...}; keys must be single characters.
std::map<char, std::string> homomorphism_from_json(const Json &j);

Json circuit_to_json(const CircuitIR &ir);

/// Throws IoError when the file cannot be opened or does not hold JSON.
Json read_json_file(const std::filesystem::path &path);
Json parse_json(const std::string &text);
void write_text_file(const std::filesystem::path &path, const std::string &text);
/// Two-space indented JSON with a trailing newline.
std::string dump(const Json &j);

}  // namespace qfl
