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

// Noise sweeps: for each language, string length, noise pair and mapping,
// compare the exact acceptance probability with a shot-based estimate.

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "qfl/automata.hpp"
#include "qfl/mapping.hpp"
#include "qfl/serialize.hpp"

namespace qfl {

struct LanguageSpec {
    /// "mod" (two-state MOD_n), "modp" (multi-block MOD_p) or "equ".
    std::string family;
    int parameter = 0;
    /// Seed for the modp coefficient search.
    std::uint64_t construction_seed = 0;

    /// "mod:5", "modp:3", "equ:3".
    std::string name() const;
    static LanguageSpec parse(const std::string &text);
};

Qfa build_language(const LanguageSpec &lang);

struct NoisePair {
    double eta_g = 0.0;
    double eta_r = 0.0;
};

struct ExperimentSpec {
    std::vector<LanguageSpec> languages;
    int min_length = 2;
    int max_length = 40;
    std::vector<NoisePair> etas;
    std::vector<MappingKind> mappings{MappingKind::kNaive, MappingKind::kDensity};
    std::int64_t shots = 100000;
    std::uint64_t seed = 0;
    unsigned threads = 1;

    void validate() const;
    /// p, k in {3, 5, 7} (modp and equ), eta in {0.1, 0.5, 1}% for both rates.
    static ExperimentSpec default_grid();
};

ExperimentSpec experiment_spec_from_json(const Json &j);

/// Noise seed of one string. Shared by every mapping and noise pair, so the
/// mappings are compared on common random numbers.
std::uint64_t string_seed(std::uint64_t seed, int length);

struct ExperimentRow {
    std::string language;
    int string_length = 0;
    MappingKind mapping = MappingKind::kNaive;
    double eta_g = 0.0;
    double eta_r = 0.0;
    std::int64_t shots = 0;
    double ideal_p = 0.0;
    double measured_p = 0.0;
    std::uint64_t seed = 0;
};

struct MapeCell {
    std::string language;
    MappingKind mapping = MappingKind::kNaive;
    NoisePair eta;
    double mape = 0.0;
    std::size_t strings_used = 0;
    std::size_t strings_excluded = 0;
};

struct ExperimentResult {
    /// Ordered by language, mapping, noise pair, length (input order).
    std::vector<ExperimentRow> rows;
    /// Ordered by language, mapping, noise pair.
    std::vector<MapeCell> cells;
};

ExperimentResult run_experiment(const ExperimentSpec &spec);

/// Columns: language,string_length,mapping,eta_g,eta_r,shots,ideal_p,measured_p,seed.
void write_results_csv(std::ostream &out, const ExperimentResult &r);
/// One row per (language, mapping), one MAPE column per noise pair.
void write_mape_csv(std::ostream &out, const ExperimentSpec &spec, const ExperimentResult &r);
/// Per-cell MAPE plus density/naive ratios per language and noise pair.
Json experiment_summary(const ExperimentSpec &spec, const ExperimentResult &r);

}  // namespace qfl
