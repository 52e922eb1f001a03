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

// Shot-based Monte Carlo of a mapped automaton under bit-flip noise.
//
// Noise model: after every tape-symbol block each qubit independently
// suffers an X flip with probability eta_g; every measured bit is flipped
// with probability eta_r before it is classified. Each shot draws from its
// own SplitMix64 substream keyed by (seed, shot index), so results do not
// depend on how shots are distributed over threads.

#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qfl/automata.hpp"
#include "qfl/mapping.hpp"

namespace qfl {

struct NoiseModel {
    double eta_g = 0.0;
    double eta_r = 0.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// What an unmapped basis outcome means.
struct UnmappedPolicy {
    /// Mid-string (measure-many only): keep evolving, or halt and reject.
    enum class Mid { kNonHalting, kReject } mid = Mid::kNonHalting;
    /// Final read-out: count in `unmapped_outcomes`, or count as rejected.
    /// Either way the shot is not accepted.
    enum class Final { kCountUnmapped, kReject } final = Final::kCountUnmapped;
};

struct ShotResult {
    std::int64_t shots = 0;
    std::int64_t accepted = 0;
    /// Rejected read-outs, including measure-many shots still running after '$'.
    std::int64_t rejected = 0;
    std::int64_t unmapped_outcomes = 0;

    double frequency() const { return shots == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(shots); }
    bool operator==(const ShotResult &) const = default;
};

/// An automaton lifted onto 2^n basis codes: every block unitary is permuted
/// into the mapped positions and acts as identity on unmapped codes.
struct EmbeddedQfa {
    int qubits = 0;
    bool measure_many = false;
    BasisCode initial_code = 0;
    std::string alphabet;
    StateMapping mapping;
    std::map<char, ComplexMatrix> unitaries;
    std::vector<CodeClass> classes;

    std::size_t dim() const { return std::size_t{1} << qubits; }
    const ComplexMatrix &unitary(char symbol) const;
};

EmbeddedQfa embed(const Qfa &m, const StateMapping &mapping);

/// Noiseless acceptance probability of the embedded machine.
double embedded_accept_probability(const EmbeddedQfa &e, std::string_view word,
                                   UnmappedPolicy::Mid mid = UnmappedPolicy::Mid::kNonHalting);

ShotResult run_shots(const EmbeddedQfa &e, std::string_view word, const NoiseModel &noise, std::int64_t shots,
                     UnmappedPolicy policy = {}, unsigned threads = 1);

/// Runs one shot and records the state-vector norm after every block (after
/// the noise layer and, for measure-many machines, the collapse). The record
/// stops when the shot halts. Returns the shot's outcome class.
CodeClass trace_shot(const EmbeddedQfa &e, std::string_view word, const NoiseModel &noise, std::uint64_t shot_index,
                     std::vector<double> &norms, UnmappedPolicy policy = {});

/// Ideal probabilities below this floor are excluded from MAPE.
inline constexpr double kMapeFloor = 1e-6;

/// Mean absolute percentage error, in percent, over entries whose ideal
/// probability is at least kMapeFloor.
double mape(std::span<const double> ideal, std::span<const double> measured);
std::size_t mape_excluded_count(std::span<const double> ideal);

}  // namespace qfl
