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

#include "qfl/compose.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qfl/error.hpp"

namespace qfl {

namespace {

constexpr double kCoefficientTol = 1e-12;

std::vector<std::string> prefixed(const std::vector<std::string> &names, const std::string &prefix) {
    std::vector<std::string> out;
    out.reserve(names.size());
    for (const auto &n : names) {
        out.push_back(prefix + n);
    }
    return out;
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string> &b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

std::string pair_name(const std::string &q, const std::string &p) { return "L." + q + "|R." + p; }

void require_same_alphabet(const SemiQfa &a, const SemiQfa &b) {
    std::string x = a.alphabet();
    std::string y = b.alphabet();
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    if (x != y) {
        throw ValidationError("input alphabets differ: {" + a.alphabet() + "} vs {" + b.alphabet() + "}");
    }
}

void require_coefficients(double c1, double c2) {
    if (!(c1 >= 0.0 && c1 <= 1.0 && c2 >= 0.0 && c2 <= 1.0) || std::abs(c1 + c2 - 1.0) > kCoefficientTol) {
        throw ValidationError("linear combination needs c1, c2 in [0, 1] with c1 + c2 = 1");
    }
}

// Shared by the measure-once and measure-many linear combinations.
std::map<char, ComplexMatrix> combined_unitaries(const SemiQfa &a, std::size_t a_init, const SemiQfa &b,
                                                 std::size_t b_init, double c1, double c2) {
    std::map<char, ComplexMatrix> out;
    for (char c : a.tape_alphabet()) {
        out.emplace(c, direct_sum(a.unitary(c), b.unitary(c)));
    }
    const std::size_t n = a.size() + b.size();
    ComplexMatrix mixer = ComplexMatrix::identity(n);
    const std::size_t i = a_init;
    const std::size_t j = a.size() + b_init;
    const double r1 = std::sqrt(c1);
    const Complex r2{0.0, std::sqrt(c2)};
    mixer(i, i) = r1;
    mixer(j, j) = r1;
    mixer(i, j) = r2;
    mixer(j, i) = r2;
    out.insert_or_assign(kStartSymbol, mat_mul(out.at(kStartSymbol), mixer));
    return out;
}

std::map<char, ComplexMatrix> tensor_unitaries(const SemiQfa &a, const SemiQfa &b) {
    std::map<char, ComplexMatrix> out;
    for (char c : a.tape_alphabet()) {
        out.emplace(c, kron(a.unitary(c), b.unitary(c)));
    }
    return out;
}

std::vector<std::string> tensor_states(const SemiQfa &a, const SemiQfa &b) {
    std::vector<std::string> out;
    out.reserve(a.size() * b.size());
    for (const auto &q : a.states()) {
        for (const auto &p : b.states()) {
            out.push_back(pair_name(q, p));
        }
    }
    return out;
}

bool contains(const std::vector<std::size_t> &v, std::size_t x) { return std::find(v.begin(), v.end(), x) != v.end(); }

}  // namespace

std::string to_string(QfaKind kind) {
    switch (kind) {
        case QfaKind::kMo:
            return "MO";
        case QfaKind::kMm:
            return "MM";
        case QfaKind::kMmEndDecisive:
            return "MM_END_DECISIVE";
        case QfaKind::kMmCoEndDecisive:
            return "MM_CO_END_DECISIVE";
    }
    return "MO";
}

std::string to_string(ErrorSide side) { return side == ErrorSide::kPositive ? "POSITIVE" : "NEGATIVE"; }

QfaKind parse_qfa_kind(const std::string &s) {
    for (QfaKind k : {QfaKind::kMo, QfaKind::kMm, QfaKind::kMmEndDecisive, QfaKind::kMmCoEndDecisive}) {
        if (to_string(k) == s) {
            return k;
        }
    }
    throw ValidationError("unknown automaton class '" + s + "'");
}

ErrorSide parse_error_side(const std::string &s) {
    if (s == "POSITIVE") {
        return ErrorSide::kPositive;
    }
    if (s == "NEGATIVE") {
        return ErrorSide::kNegative;
    }
    throw ValidationError("unknown error side '" + s + "'");
}

void validate(const QfaClassTag &tag) {
    if (tag.margin && !(*tag.margin > 0.0 && *tag.margin < 1.0)) {
        throw ValidationError("class margin must lie in (0, 1)");
    }
}

MoQfa complement(const MoQfa &m) {
    std::vector<std::string> accepting;
    for (std::size_t i : m.non_accepting_indices()) {
        accepting.push_back(m.semi().states()[i]);
    }
    return MoQfa(m.semi(), m.initial(), std::move(accepting));
}

MmQfa complement(const MmQfa &m) { return MmQfa(m.semi(), m.initial(), m.rejecting(), m.accepting()); }

Qfa complement(const Qfa &m) {
    return std::visit([](const auto &x) -> Qfa { return complement(x); }, m);
}

QfaClassTag complement(const QfaClassTag &tag) {
    QfaClassTag out = tag;
    out.error_side = tag.error_side == ErrorSide::kNegative ? ErrorSide::kPositive : ErrorSide::kNegative;
    if (tag.kind == QfaKind::kMmEndDecisive) {
        out.kind = QfaKind::kMmCoEndDecisive;
    } else if (tag.kind == QfaKind::kMmCoEndDecisive) {
        out.kind = QfaKind::kMmEndDecisive;
    }
    return out;
}

MmQfa linear_combination(const MmQfa &m, const MmQfa &n, double c1, double c2) {
    require_coefficients(c1, c2);
    require_same_alphabet(m.semi(), n.semi());
    auto u = combined_unitaries(m.semi(), m.initial_index(), n.semi(), n.initial_index(), c1, c2);
    SemiQfa semi(concat(prefixed(m.semi().states(), "L."), prefixed(n.semi().states(), "R.")), m.semi().alphabet(),
                 std::move(u));
    return MmQfa(std::move(semi), "L." + m.initial(),
                 concat(prefixed(m.accepting(), "L."), prefixed(n.accepting(), "R.")),
                 concat(prefixed(m.rejecting(), "L."), prefixed(n.rejecting(), "R.")));
}

MoQfa linear_combination(const MoQfa &m, const MoQfa &n, double c1, double c2) {
    require_coefficients(c1, c2);
    require_same_alphabet(m.semi(), n.semi());
    auto u = combined_unitaries(m.semi(), m.initial_index(), n.semi(), n.initial_index(), c1, c2);
    SemiQfa semi(concat(prefixed(m.semi().states(), "L."), prefixed(n.semi().states(), "R.")), m.semi().alphabet(),
                 std::move(u));
    return MoQfa(std::move(semi), "L." + m.initial(),
                 concat(prefixed(m.accepting(), "L."), prefixed(n.accepting(), "R.")));
}

MoQfa mo_hadamard(const MoQfa &m, const MoQfa &n) {
    require_same_alphabet(m.semi(), n.semi());
    std::vector<std::string> accepting;
    for (const auto &q : m.accepting()) {
        for (const auto &p : n.accepting()) {
            accepting.push_back(pair_name(q, p));
        }
    }
    // Keep declaration order of the product states.
    std::vector<std::string> states = tensor_states(m.semi(), n.semi());
    std::vector<std::string> ordered;
    for (const auto &s : states) {
        if (std::find(accepting.begin(), accepting.end(), s) != accepting.end()) {
            ordered.push_back(s);
        }
    }
    SemiQfa semi(std::move(states), m.semi().alphabet(), tensor_unitaries(m.semi(), n.semi()));
    return MoQfa(std::move(semi), pair_name(m.initial(), n.initial()), std::move(ordered));
}

MmQfa mm_end_decisive_hadamard(const MmQfa &m, const MmQfa &n) {
    require_same_alphabet(m.semi(), n.semi());
    if (!check_end_decisive(m, default_sample(m.semi().alphabet()))) {
        throw ValidationError("Hadamard product of measure-many automata requires end-decisive operands (left)");
    }
    if (!check_end_decisive(n, default_sample(n.semi().alphabet()))) {
        throw ValidationError("Hadamard product of measure-many automata requires end-decisive operands (right)");
    }
    std::vector<std::string> accepting;
    std::vector<std::string> rejecting;
    for (std::size_t i = 0; i < m.semi().size(); ++i) {
        for (std::size_t j = 0; j < n.semi().size(); ++j) {
            const std::string name = pair_name(m.semi().states()[i], n.semi().states()[j]);
            if (contains(m.accepting_indices(), i) && contains(n.accepting_indices(), j)) {
                accepting.push_back(name);
            } else if (!(contains(m.non_halting_indices(), i) && contains(n.non_halting_indices(), j))) {
                rejecting.push_back(name);
            }
        }
    }
    SemiQfa semi(tensor_states(m.semi(), n.semi()), m.semi().alphabet(), tensor_unitaries(m.semi(), n.semi()));
    return MmQfa(std::move(semi), pair_name(m.initial(), n.initial()), std::move(accepting), std::move(rejecting));
}

Qfa intersection(const Qfa &m, const Qfa &n) {
    if (m.index() != n.index()) {
        throw ValidationError("intersection needs two measure-once or two measure-many automata");
    }
    if (const auto *mo = std::get_if<MoQfa>(&m)) {
        return linear_combination(*mo, std::get<MoQfa>(n), 0.5, 0.5);
    }
    return linear_combination(std::get<MmQfa>(m), std::get<MmQfa>(n), 0.5, 0.5);
}

QfaClassTag intersection(const QfaClassTag &a, const QfaClassTag &b) {
    if (a.error_side != ErrorSide::kNegative || b.error_side != ErrorSide::kNegative) {
        throw ValidationError("intersection requires negative one-sided error on both operands");
    }
    const bool a_mo = a.kind == QfaKind::kMo;
    const bool b_mo = b.kind == QfaKind::kMo;
    if (a_mo != b_mo) {
        throw ValidationError("intersection needs two measure-once or two measure-many automata");
    }
    QfaClassTag out;
    out.error_side = ErrorSide::kNegative;
    out.kind = a.kind == b.kind ? a.kind : QfaKind::kMm;
    if (a.margin && b.margin) {
        out.margin = std::min(*a.margin, *b.margin) / 2.0;
    }
    return out;
}

Qfa union_of(const Qfa &m, const Qfa &n) {
    if (m.index() != n.index()) {
        throw ValidationError("union needs two measure-once or two measure-many automata");
    }
    if (const auto *mo = std::get_if<MoQfa>(&m)) {
        return complement(mo_hadamard(complement(*mo), complement(std::get<MoQfa>(n))));
    }
    const auto &a = std::get<MmQfa>(m);
    const auto &b = std::get<MmQfa>(n);
    if (!check_co_end_decisive(a, default_sample(a.semi().alphabet())) ||
        !check_co_end_decisive(b, default_sample(b.semi().alphabet()))) {
        throw ValidationError("union of measure-many automata requires co-end-decisive operands");
    }
    return complement(mm_end_decisive_hadamard(complement(a), complement(b)));
}

QfaClassTag union_of(const QfaClassTag &a, const QfaClassTag &b) {
    if (a.error_side != ErrorSide::kNegative || b.error_side != ErrorSide::kNegative) {
        throw ValidationError("union requires negative one-sided error on both operands");
    }
    const bool a_mo = a.kind == QfaKind::kMo;
    const bool b_mo = b.kind == QfaKind::kMo;
    if (a_mo != b_mo) {
        throw ValidationError("union needs two measure-once or two measure-many automata");
    }
    if (!a_mo && (a.kind != QfaKind::kMmCoEndDecisive || b.kind != QfaKind::kMmCoEndDecisive)) {
        throw ValidationError("union of measure-many automata requires co-end-decisive operands");
    }
    QfaClassTag out{a.kind, ErrorSide::kNegative, std::nullopt};
    // Off both languages 1 - f_i > eps_i, so 1 - f_out = (1 - f_1)(1 - f_2) > eps_1 eps_2.
    if (a.margin && b.margin) {
        out.margin = *a.margin * *b.margin;
    }
    return out;
}

MoQfa mo_inverse_homomorphism(const MoQfa &m, const std::map<char, std::string> &h) {
    const SemiQfa &semi = m.semi();
    std::string alphabet;
    std::map<char, ComplexMatrix> u;
    u.emplace(kStartSymbol, semi.unitary(kStartSymbol));
    u.emplace(kEndSymbol, semi.unitary(kEndSymbol));
    for (const auto &[symbol, image] : h) {
        for (char c : image) {
            if (!semi.in_alphabet(c)) {
                throw ValidationError("homomorphism image of '" + std::string(1, symbol) + "' uses unknown symbol '" +
                                      std::string(1, c) + "'");
            }
        }
        alphabet += symbol;
        u.emplace(symbol, semi.word_unitary(image));
    }
    return MoQfa(SemiQfa(semi.states(), std::move(alphabet), std::move(u)), m.initial(), m.accepting());
}

MoQfa mo_word_quotient(const MoQfa &m, const std::string &word) {
    const SemiQfa &semi = m.semi();
    for (char c : word) {
        if (!semi.in_alphabet(c)) {
            throw ValidationError("quotient word uses unknown symbol '" + std::string(1, c) + "'");
        }
    }
    std::map<char, ComplexMatrix> u = semi.unitaries();
    u.insert_or_assign(kStartSymbol, mat_mul(semi.word_unitary(word), semi.unitary(kStartSymbol)));
    return MoQfa(SemiQfa(semi.states(), semi.alphabet(), std::move(u)), m.initial(), m.accepting());
}

QfaClassTag linear_combination(const QfaClassTag &a, const QfaClassTag &b) {
    if ((a.kind == QfaKind::kMo) != (b.kind == QfaKind::kMo)) {
        throw ValidationError("linear combination needs two measure-once or two measure-many automata");
    }
    return QfaClassTag{a.kind == b.kind ? a.kind : QfaKind::kMm,
                       a.error_side == b.error_side ? a.error_side : ErrorSide::kNegative, std::nullopt};
}

QfaClassTag hadamard(const QfaClassTag &a, const QfaClassTag &b) {
    if ((a.kind == QfaKind::kMo) != (b.kind == QfaKind::kMo)) {
        throw ValidationError("Hadamard product needs two measure-once or two measure-many automata");
    }
    if (a.kind != QfaKind::kMo && (a.kind != QfaKind::kMmEndDecisive || b.kind != QfaKind::kMmEndDecisive)) {
        throw ValidationError("Hadamard product of measure-many automata requires end-decisive operands");
    }
    if (a.error_side != b.error_side) {
        throw ValidationError("Hadamard product needs operands with the same error side");
    }
    QfaClassTag out{a.kind, a.error_side, std::nullopt};
    if (a.margin && b.margin) {
        out.margin = a.error_side == ErrorSide::kNegative ? std::min(*a.margin, *b.margin) : *a.margin * *b.margin;
    }
    return out;
}

QfaClassTag default_tag(const Qfa &m) {
    return QfaClassTag{std::holds_alternative<MoQfa>(m) ? QfaKind::kMo : QfaKind::kMm, ErrorSide::kNegative,
                       std::nullopt};
}

}  // namespace qfl
