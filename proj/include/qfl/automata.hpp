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
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "qfl/linalg.hpp"

namespace qfl {

/// Start-of-string tape symbol.
inline constexpr char kStartSymbol = '#';
/// End-of-string tape symbol.
inline constexpr char kEndSymbol = '$';

/// Shared core of every automaton: states, input alphabet and one unitary per
/// tape symbol. Input symbols are single characters; '#' and '$' are reserved.
///
/// Matrix indices follow the declared state order.
class SemiQfa {
   public:
    SemiQfa(std::vector<std::string> states, std::string alphabet, std::map<char, ComplexMatrix> unitaries,
            double tol = kUnitaryTol);

    const std::vector<std::string> &states() const { return states_; }
    std::size_t size() const { return states_.size(); }
    /// Input alphabet in declaration order.
    const std::string &alphabet() const { return alphabet_; }
    /// Tape alphabet: '#', the input symbols, '$'.
    std::string tape_alphabet() const;
    const std::map<char, ComplexMatrix> &unitaries() const { return unitaries_; }

    /// Throws ValidationError for symbols outside the tape alphabet.
    const ComplexMatrix &unitary(char symbol) const;
    std::size_t index_of(std::string_view state) const;
    bool has_state(std::string_view state) const;
    bool in_alphabet(char symbol) const;

    /// U_w = U_{w_n} ... U_{w_1}; identity for the empty word.
    ComplexMatrix word_unitary(std::string_view word) const;

   private:
    std::vector<std::string> states_;
    std::string alphabet_;
    std::map<char, ComplexMatrix> unitaries_;
};

/// Measure-once automaton: one measurement after the end marker.
class MoQfa {
   public:
    MoQfa(SemiQfa semi, std::string initial, std::vector<std::string> accepting);

    const SemiQfa &semi() const { return semi_; }
    const std::string &initial() const { return initial_; }
    std::size_t initial_index() const { return initial_index_; }
    const std::vector<std::string> &accepting() const { return accepting_; }
    const std::vector<std::size_t> &accepting_indices() const { return accepting_indices_; }
    std::vector<std::size_t> non_accepting_indices() const;

   private:
    SemiQfa semi_;
    std::string initial_;
    std::size_t initial_index_;
    std::vector<std::string> accepting_;
    std::vector<std::size_t> accepting_indices_;
};

/// Measure-many automaton: a three-outcome measurement after every symbol.
class MmQfa {
   public:
    MmQfa(SemiQfa semi, std::string initial, std::vector<std::string> accepting, std::vector<std::string> rejecting);

    const SemiQfa &semi() const { return semi_; }
    const std::string &initial() const { return initial_; }
    std::size_t initial_index() const { return initial_index_; }
    const std::vector<std::string> &accepting() const { return accepting_; }
    const std::vector<std::string> &rejecting() const { return rejecting_; }
    const std::vector<std::size_t> &accepting_indices() const { return accepting_indices_; }
    const std::vector<std::size_t> &rejecting_indices() const { return rejecting_indices_; }
    /// Q \ (Q_acc u Q_rej), derived on construction.
    const std::vector<std::size_t> &non_halting_indices() const { return non_halting_indices_; }

   private:
    SemiQfa semi_;
    std::string initial_;
    std::size_t initial_index_;
    std::vector<std::string> accepting_;
    std::vector<std::string> rejecting_;
    std::vector<std::size_t> accepting_indices_;
    std::vector<std::size_t> rejecting_indices_;
    std::vector<std::size_t> non_halting_indices_;
};

using Qfa = std::variant<MoQfa, MmQfa>;

const SemiQfa &semi_of(const Qfa &m);

/// (psi, p_acc, p_rej): unnormalised non-halting superposition plus the
/// accumulated halting probabilities.
struct TotalState {
    ComplexVector psi;
    double p_acc = 0.0;
    double p_rej = 0.0;
};

/// |P_acc U_# w $ |q_init>|^2.
double mo_accept_probability(const MoQfa &m, std::string_view word);

TotalState mm_initial_state(const MmQfa &m);
TotalState mm_step(const MmQfa &m, const TotalState &t, char symbol);
/// Folds mm_step over an arbitrary tape string (markers included by the caller).
TotalState mm_run(const MmQfa &m, std::string_view tape);
/// Final p_acc after '#' word '$'.
double mm_accept_probability(const MmQfa &m, std::string_view word);

double accept_probability(const Qfa &m, std::string_view word);

/// Sampling-based semantic checks. Each is evaluated on every word of the
/// sample: validity on '#' w '$', decisiveness on '#' w (no end marker).
bool check_validity(const MmQfa &m, const std::vector<std::string> &sample, double tol = 1e-9);
bool check_end_decisive(const MmQfa &m, const std::vector<std::string> &sample, double tol = 1e-9);
bool check_co_end_decisive(const MmQfa &m, const std::vector<std::string> &sample, double tol = 1e-9);

/// Every word up to max_length over a single-letter alphabet; otherwise
/// `random_count` words of random length in [0, max_length] drawn from `seed`.
std::vector<std::string> default_sample(const std::string &alphabet, std::size_t max_length = 12,
                                        std::size_t random_count = 200, std::uint64_t seed = 0);

/// a^0, a^1, ..., a^max_length.
std::vector<std::string> unary_words(char symbol, std::size_t max_length);

}  // namespace qfl
