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

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qfl/automata.hpp"

namespace qfl {

enum class MappingKind { kNaive, kDensity };

std::string to_string(MappingKind kind);
MappingKind parse_mapping_kind(const std::string &s);

/// Basis index of an n-qubit register. Written as a bit string, the leftmost
/// character is qubit 0, which is the most significant bit of the index.
using BasisCode = std::uint32_t;

/// Injective assignment of automaton states to basis codes.
struct StateMapping {
    int qubits = 0;
    MappingKind kind = MappingKind::kNaive;
    /// State names in declaration order.
    std::vector<std::string> states;
    /// codes[i] is the basis code of states[i].
    std::vector<BasisCode> codes;

    std::size_t dim() const { return std::size_t{1} << qubits; }
    BasisCode code_of(const std::string &state) const;
    /// Throws unless the mapping is injective, in range and names `states`.
    void validate() const;

    bool operator==(const StateMapping &) const = default;
};

/// Bit string of a code, qubit 0 first.
std::string code_to_bits(BasisCode code, int qubits);
BasisCode bits_to_code(const std::string &bits);

/// Mask that flips qubit q of an n-qubit code.
inline BasisCode qubit_mask(int qubit, int qubits) { return BasisCode{1} << (qubits - 1 - qubit); }

/// ceil(log2 |Q|), at least 1.
int min_qubits(std::size_t state_count);

/// States take codes 0, 1, 2, ... in declaration order.
StateMapping naive_mapping(const Qfa &m, std::optional<int> qubits = std::nullopt);

/// Codes sorted by (Hamming weight, value). Accepting states take the
/// lightest codes, rejecting states the heaviest (first rejecting state gets
/// the heaviest code), non-halting states sit in between with unused codes as
/// buffers on either side. Without rejecting states the non-accepting states
/// are packed against the heavy end.
StateMapping density_mapping(const Qfa &m, std::optional<int> qubits = std::nullopt);

StateMapping make_mapping(const Qfa &m, MappingKind kind, std::optional<int> qubits = std::nullopt);

/// Per-code role under the automaton's measurement.
enum class CodeClass { kAccepting, kRejecting, kNonHalting, kUnmapped };

/// Roles of all 2^n codes. States of a measure-once automaton that are not
/// accepting are reported as rejecting, since the final measurement rejects them.
std::vector<CodeClass> classify_codes(const Qfa &m, const StateMapping &mapping);

/// Fraction of single-bit-flip events (mapped state, qubit) that turn an
/// accepting code into a rejecting one or vice versa. Non-halting and
/// unmapped targets do not decide the outcome and are not counted.
double flip_robustness_score(const StateMapping &mapping, const Qfa &m);

/// max weight(acc) <= min weight(non) <= max weight(non) <= min weight(rej).
bool satisfies_weight_ordering(const StateMapping &mapping, const Qfa &m);

}  // namespace qfl
