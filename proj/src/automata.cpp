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

#include "qfl/automata.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qfl/error.hpp"
#include "qfl/rng.hpp"

namespace qfl {

namespace {

std::string symbol_name(char c) { return std::string("'") + c + "'"; }

std::vector<std::size_t> resolve(const SemiQfa &semi, const std::vector<std::string> &names, const char *what) {
    std::vector<std::size_t> out;
    std::set<std::size_t> seen;
    out.reserve(names.size());
    for (const auto &name : names) {
        if (!semi.has_state(name)) {
            throw ValidationError(std::string(what) + " state '" + name + "' is not a declared state");
        }
        const std::size_t i = semi.index_of(name);
        if (!seen.insert(i).second) {
            throw ValidationError(std::string(what) + " state '" + name + "' listed twice");
        }
        out.push_back(i);
    }
    return out;
}

}  // namespace

SemiQfa::SemiQfa(std::vector<std::string> states, std::string alphabet, std::map<char, ComplexMatrix> unitaries,
                 double tol)
    : states_(std::move(states)), alphabet_(std::move(alphabet)), unitaries_(std::move(unitaries)) {
    if (states_.empty()) {
        throw ValidationError("automaton needs at least one state");
    }
    std::set<std::string> names(states_.begin(), states_.end());
    if (names.size() != states_.size()) {
        throw ValidationError("state names must be unique");
    }
    std::set<char> symbols;
    for (char c : alphabet_) {
        if (c == kStartSymbol || c == kEndSymbol) {
            throw ValidationError("symbol " + symbol_name(c) + " is reserved and cannot be an input symbol");
        }
        if (!symbols.insert(c).second) {
            throw ValidationError("input symbol " + symbol_name(c) + " listed twice");
        }
    }
    const std::string tape = tape_alphabet();
    for (char c : tape) {
        auto it = unitaries_.find(c);
        if (it == unitaries_.end()) {
            throw ValidationError("missing transition matrix for symbol " + symbol_name(c));
        }
        const ComplexMatrix &u = it->second;
        if (u.rows() != states_.size() || u.cols() != states_.size()) {
            throw ValidationError("transition matrix for " + symbol_name(c) + " is " + std::to_string(u.rows()) +
                                  "x" + std::to_string(u.cols()) + ", expected " + std::to_string(states_.size()) +
                                  "x" + std::to_string(states_.size()));
        }
        if (!is_unitary(u, tol)) {
            throw ValidationError("transition matrix for " + symbol_name(c) + " is not unitary at tolerance " +
                                  std::to_string(tol));
        }
    }
    for (const auto &[c, u] : unitaries_) {
        if (tape.find(c) == std::string::npos) {
            throw ValidationError("transition matrix given for symbol " + symbol_name(c) +
                                  " outside the tape alphabet");
        }
    }
}

std::string SemiQfa::tape_alphabet() const { return std::string(1, kStartSymbol) + alphabet_ + kEndSymbol; }

const ComplexMatrix &SemiQfa::unitary(char symbol) const {
    auto it = unitaries_.find(symbol);
    if (it == unitaries_.end()) {
        throw ValidationError("unknown symbol " + symbol_name(symbol));
    }
    return it->second;
}

std::size_t SemiQfa::index_of(std::string_view state) const {
    auto it = std::find(states_.begin(), states_.end(), state);
    if (it == states_.end()) {
        throw ValidationError("unknown state '" + std::string(state) + "'");
    }
    return static_cast<std::size_t>(it - states_.begin());
}

bool SemiQfa::has_state(std::string_view state) const {
    return std::find(states_.begin(), states_.end(), state) != states_.end();
}

bool SemiQfa::in_alphabet(char symbol) const { return alphabet_.find(symbol) != std::string::npos; }

ComplexMatrix SemiQfa::word_unitary(std::string_view word) const {
    ComplexMatrix acc = ComplexMatrix::identity(size());
    for (char c : word) {
        acc = mat_mul(unitary(c), acc);
    }
    return acc;
}

MoQfa::MoQfa(SemiQfa semi, std::string initial, std::vector<std::string> accepting)
    : semi_(std::move(semi)), initial_(std::move(initial)), accepting_(std::move(accepting)) {
    if (!semi_.has_state(initial_)) {
        throw ValidationError("initial state '" + initial_ + "' is not a declared state");
    }
    initial_index_ = semi_.index_of(initial_);
    accepting_indices_ = resolve(semi_, accepting_, "accepting");
}

std::vector<std::size_t> MoQfa::non_accepting_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < semi_.size(); ++i) {
        if (std::find(accepting_indices_.begin(), accepting_indices_.end(), i) == accepting_indices_.end()) {
            out.push_back(i);
        }
    }
    return out;
}

MmQfa::MmQfa(SemiQfa semi, std::string initial, std::vector<std::string> accepting,
             std::vector<std::string> rejecting)
    : semi_(std::move(semi)),
      initial_(std::move(initial)),
      accepting_(std::move(accepting)),
      rejecting_(std::move(rejecting)) {
    if (!semi_.has_state(initial_)) {
        throw ValidationError("initial state '" + initial_ + "' is not a declared state");
    }
    initial_index_ = semi_.index_of(initial_);
    accepting_indices_ = resolve(semi_, accepting_, "accepting");
    rejecting_indices_ = resolve(semi_, rejecting_, "rejecting");
    for (std::size_t i : accepting_indices_) {
        if (std::find(rejecting_indices_.begin(), rejecting_indices_.end(), i) != rejecting_indices_.end()) {
            throw ValidationError("state '" + semi_.states()[i] + "' is both accepting and rejecting");
        }
    }
    for (std::size_t i = 0; i < semi_.size(); ++i) {
        const bool acc = std::find(accepting_indices_.begin(), accepting_indices_.end(), i) != accepting_indices_.end();
        const bool rej = std::find(rejecting_indices_.begin(), rejecting_indices_.end(), i) != rejecting_indices_.end();
        if (!acc && !rej) {
            non_halting_indices_.push_back(i);
        }
    }
}

const SemiQfa &semi_of(const Qfa &m) {
    return std::visit([](const auto &x) -> const SemiQfa & { return x.semi(); }, m);
}

double mo_accept_probability(const MoQfa &m, std::string_view word) {
    const SemiQfa &semi = m.semi();
    ComplexVector psi = ComplexVector::basis(semi.size(), m.initial_index());
    psi = apply(semi.unitary(kStartSymbol), psi);
    for (char c : word) {
        if (!semi.in_alphabet(c)) {
            throw ValidationError("unknown symbol '" + std::string(1, c) + "' in input");
        }
        psi = apply(semi.unitary(c), psi);
    }
    psi = apply(semi.unitary(kEndSymbol), psi);
    return projected_norm_squared(psi, m.accepting_indices());
}

TotalState mm_initial_state(const MmQfa &m) {
    return TotalState{ComplexVector::basis(m.semi().size(), m.initial_index()), 0.0, 0.0};
}

TotalState mm_step(const MmQfa &m, const TotalState &t, char symbol) {
    const ComplexVector evolved = apply(m.semi().unitary(symbol), t.psi);
    TotalState next{ComplexVector(evolved.dim()), t.p_acc, t.p_rej};
    next.p_acc += projected_norm_squared(evolved, m.accepting_indices());
    next.p_rej += projected_norm_squared(evolved, m.rejecting_indices());
    for (std::size_t i : m.non_halting_indices()) {
        next.psi[i] = evolved[i];
    }
    return next;
}

TotalState mm_run(const MmQfa &m, std::string_view tape) {
    TotalState t = mm_initial_state(m);
    for (char c : tape) {
        t = mm_step(m, t, c);
    }
    return t;
}

namespace {

void require_input_word(const SemiQfa &semi, std::string_view word) {
    for (char c : word) {
        if (!semi.in_alphabet(c)) {
            throw ValidationError("unknown symbol '" + std::string(1, c) + "' in input");
        }
    }
}

std::string framed(std::string_view word, bool with_end) {
    std::string tape(1, kStartSymbol);
    tape += word;
    if (with_end) {
        tape += kEndSymbol;
    }
    return tape;
}

}  // namespace

double mm_accept_probability(const MmQfa &m, std::string_view word) {
    require_input_word(m.semi(), word);
    return mm_run(m, framed(word, true)).p_acc;
}

double accept_probability(const Qfa &m, std::string_view word) {
    if (const auto *mo = std::get_if<MoQfa>(&m)) {
        return mo_accept_probability(*mo, word);
    }
    return mm_accept_probability(std::get<MmQfa>(m), word);
}

bool check_validity(const MmQfa &m, const std::vector<std::string> &sample, double tol) {
    for (const auto &w : sample) {
        require_input_word(m.semi(), w);
        const TotalState t = mm_run(m, framed(w, true));
        if (std::abs(t.p_acc + t.p_rej - 1.0) > tol) {
            return false;
        }
    }
    return true;
}

bool check_end_decisive(const MmQfa &m, const std::vector<std::string> &sample, double tol) {
    for (const auto &w : sample) {
        require_input_word(m.semi(), w);
        if (mm_run(m, framed(w, false)).p_acc > tol) {
            return false;
        }
    }
    return true;
}

bool check_co_end_decisive(const MmQfa &m, const std::vector<std::string> &sample, double tol) {
    for (const auto &w : sample) {
        require_input_word(m.semi(), w);
        if (mm_run(m, framed(w, false)).p_rej > tol) {
            return false;
        }
    }
    return true;
}

std::vector<std::string> default_sample(const std::string &alphabet, std::size_t max_length,
                                        std::size_t random_count, std::uint64_t seed) {
    if (alphabet.empty()) {
        return {""};
    }
    if (alphabet.size() == 1) {
        return unary_words(alphabet[0], max_length);
    }
    SplitMix64 rng(seed);
    std::vector<std::string> out;
    out.reserve(random_count + 1);
    out.emplace_back();
    for (std::size_t i = 0; i < random_count; ++i) {
        const std::size_t len = rng.below(max_length + 1);
        std::string w;
        for (std::size_t j = 0; j < len; ++j) {
            w += alphabet[rng.below(alphabet.size())];
        }
        out.push_back(std::move(w));
    }
    return out;
}

std::vector<std::string> unary_words(char symbol, std::size_t max_length) {
    std::vector<std::string> out;
    out.reserve(max_length + 1);
    for (std::size_t j = 0; j <= max_length; ++j) {
        out.emplace_back(j, symbol);
    }
    return out;
}

}  // namespace qfl
