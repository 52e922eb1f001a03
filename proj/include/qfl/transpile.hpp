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

// Lowering of a mapped automaton to a portable circuit IR whose blocks are
// 2^n x 2^n unitaries, optionally factored into two-level unitaries.

#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "qfl/automata.hpp"
#include "qfl/linalg.hpp"
#include "qfl/mapping.hpp"

namespace qfl {

/// A unitary that acts as `u` on span{e_i, e_j} (i < j) and as identity
/// elsewhere: e_i -> u(0,0) e_i + u(1,0) e_j, e_j -> u(0,1) e_i + u(1,1) e_j.
struct TwoLevelFactor {
    std::size_t i = 0;
    std::size_t j = 0;
    ComplexMatrix u = ComplexMatrix::identity(2);
};

/// Factors of a unitary in application order: the first factor acts first,
/// so u = F_last ... F_1. Identity yields an empty list; a matrix that is
/// already two-level yields itself. At most d(d-1)/2 + d factors.
std::vector<TwoLevelFactor> two_level_decompose(const ComplexMatrix &u, double tol = kUnitaryTol);

/// Multiplies factors back into a dim x dim matrix.
ComplexMatrix reconstruct(const std::vector<TwoLevelFactor> &factors, std::size_t dim);

/// Applies one factor in place.
void apply_factor(const TwoLevelFactor &f, std::vector<Complex> &state);

struct CircuitBlock {
    char label = '#';
    ComplexMatrix unitary = ComplexMatrix::identity(1);
    std::optional<std::vector<TwoLevelFactor>> factors;
};

struct MeasureSpec {
    /// True for measure-many machines: measure after every block.
    bool per_block = false;
    std::vector<BasisCode> accepting;
    /// Empty for measure-once machines, where every other code rejects.
    std::vector<BasisCode> rejecting;
};

struct CircuitIR {
    int qubits = 0;
    BasisCode initial_code = 0;
    std::string alphabet;
    /// '#', then each input symbol in alphabet order, then '$'.
    std::vector<CircuitBlock> blocks;
    StateMapping mapping;
    MeasureSpec measure;

    const CircuitBlock &block(char label) const;
};

CircuitIR lower(const Qfa &m, const StateMapping &mapping, bool decompose = true);

/// Noiseless acceptance probability of the IR, applying two-level factors
/// when present and the dense block otherwise.
double simulate_ir(const CircuitIR &ir, std::string_view word);

struct GateStats {
    struct BlockCount {
        char label;
        std::size_t factors;
    };
    struct LengthCount {
        std::size_t length;
        std::size_t factors;
    };
    std::vector<BlockCount> per_block;
    /// Totals for symbol^L, L = 0..max_length.
    std::vector<LengthCount> by_length;
};

/// Total factor count of the circuit for one input word.
std::size_t gate_count(const CircuitIR &ir, std::string_view word);

/// Requires decomposed blocks. `symbol` defaults to the first input symbol.
GateStats gate_stats(const CircuitIR &ir, std::size_t max_length, std::optional<char> symbol = std::nullopt);

/// CSV with columns scope,key,factors; scope is "block" or "length".
void write_gate_stats_csv(std::ostream &out, const GateStats &stats);

}  // namespace qfl
