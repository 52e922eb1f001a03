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


#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracles.hpp"
#include "qfl/blocks.hpp"
#include "qfl/compose.hpp"

using namespace qfl;

namespace {

constexpr double kPi = std::numbers::pi;

std::string a(int j) { return std::string(static_cast<std::size_t>(j), 'a'); }

MmQfa equ(int k) { return build_equ(optimal_equ_params(k)).machine; }

// Accepts every word with certainty when reading '$'.
MmQfa accept_at_end() {
    std::map<char, ComplexMatrix> u;
    u.emplace('#', ComplexMatrix::identity(2));
    u.emplace('a', ComplexMatrix::identity(2));
    u.emplace('$', ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}});
    return MmQfa(SemiQfa({"n", "acc"}, "a", u), "n", {"acc"}, {});
}

MoQfa always_accept(const std::string &alphabet) {
    std::map<char, ComplexMatrix> u;
    for (char c : "#$" + alphabet) {
        u.emplace(c, ComplexMatrix::identity(1));
    }
    return MoQfa(SemiQfa({"yes"}, alphabet, u), "yes", {"yes"});
}

void check_unitary(const Qfa &m) {
    for (const auto &[c, u] : semi_of(m).unitaries()) {
        CHECK(is_unitary(u));
    }
}

}  // namespace

TEST_CASE("class tag names") {
    for (auto k : {QfaKind::kMo, QfaKind::kMm, QfaKind::kMmEndDecisive, QfaKind::kMmCoEndDecisive}) {
        CHECK(parse_qfa_kind(to_string(k)) == k);
    }
    CHECK(to_string(QfaKind::kMmEndDecisive) == "MM_END_DECISIVE");
    CHECK(parse_error_side("POSITIVE") == ErrorSide::kPositive);
    CHECK_THROWS(parse_qfa_kind("mo"));
    CHECK_THROWS(validate(QfaClassTag{QfaKind::kMo, ErrorSide::kNegative, 1.0}));
    CHECK_THROWS(validate(QfaClassTag{QfaKind::kMo, ErrorSide::kNegative, 0.0}));
    CHECK_NOTHROW(validate(QfaClassTag{QfaKind::kMo, ErrorSide::kNegative, 0.5}));
}

TEST_CASE("complement is an involution and flips the stochastic language") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 20; ++trial) {
        const Qfa m = trial % 2 ? Qfa{oracle::random_mo(rng, "ab")} : Qfa{oracle::random_mm(rng, "ab")};
        const Qfa c = complement(m);
        const Qfa cc = complement(c);
        for (int i = 0; i < 10; ++i) {
            const std::string w = oracle::random_word(rng, "ab", 10);
            const double f = accept_probability(m, w);
            if (std::holds_alternative<MoQfa>(m)) {
                CHECK(std::abs(accept_probability(c, w) - (1.0 - f)) < 1e-12);
            }
            CHECK(std::abs(accept_probability(cc, w) - f) < 1e-12);
        }
    }
}

TEST_CASE("complement of valid MM machines is pointwise 1 - f") {
    for (int k : {3, 5}) {
        const MmQfa m = equ(k);
        const MmQfa c = complement(m);
        for (int j = 0; j <= 40; ++j) {
            CHECK(std::abs(accept_probability(Qfa{c}, a(j)) - (1.0 - accept_probability(Qfa{m}, a(j)))) < 1e-12);
        }
    }
}

TEST_CASE("complement examples") {
    const auto b = build_equ(optimal_equ_params(3));
    const MmQfa c = complement(b.machine);
    CHECK(std::abs(accept_probability(Qfa{c}, a(3))) < 1e-12);
    for (int j = 0; j <= 40; ++j) {
        if (j != 3) {
            CHECK(accept_probability(Qfa{c}, a(j)) > b.params.margin);
        }
    }
    CHECK(std::abs(accept_probability(Qfa{complement(build_mod_n(5))}, a(5))) < 1e-12);
    const auto sample = default_sample("a");
    CHECK(check_end_decisive(c, sample));
}

TEST_CASE("complement tag flips side and decisiveness") {
    const QfaClassTag t{QfaKind::kMmCoEndDecisive, ErrorSide::kNegative, 0.1};
    const QfaClassTag c = complement(t);
    CHECK(c.kind == QfaKind::kMmEndDecisive);
    CHECK(c.error_side == ErrorSide::kPositive);
    CHECK(c.margin == t.margin);
    CHECK(complement(c) == t);
    CHECK(complement(QfaClassTag{QfaKind::kMo, ErrorSide::kPositive, std::nullopt}).kind == QfaKind::kMo);
}

TEST_CASE("linear combination examples") {
    const MmQfa e3 = equ(3);
    const MmQfa e5 = equ(5);
    const MmQfa only_first = linear_combination(e3, e5, 1.0, 0.0);
    const MmQfa twice = linear_combination(e3, e3, 0.5, 0.5);
    const MmQfa half = linear_combination(e3, e5, 0.5, 0.5);
    for (int j = 0; j <= 20; ++j) {
        const double f3 = accept_probability(Qfa{e3}, a(j));
        const double f5 = accept_probability(Qfa{e5}, a(j));
        CHECK(std::abs(accept_probability(Qfa{only_first}, a(j)) - f3) < 1e-12);
        CHECK(std::abs(accept_probability(Qfa{twice}, a(j)) - f3) < 1e-12);
        CHECK(std::abs(accept_probability(Qfa{half}, a(j)) - (0.5 * f3 + 0.5 * f5)) < 1e-12);
    }
    CHECK(std::abs(accept_probability(Qfa{half}, a(3)) - (0.5 + 0.5 * accept_probability(Qfa{e5}, a(3)))) < 1e-12);
    CHECK(half.semi().states().front().starts_with("L."));
    CHECK(half.semi().states().back().starts_with("R."));
}

TEST_CASE("linear combination preconditions") {
    const MmQfa e3 = equ(3);
    CHECK_THROWS(linear_combination(e3, e3, 0.6, 0.6));
    CHECK_THROWS(linear_combination(e3, e3, -0.1, 1.1));
    std::mt19937_64 rng(2);
    CHECK_THROWS(linear_combination(e3, oracle::random_mm(rng, "ab"), 0.5, 0.5));
    const MoQfa m = build_mod_n(3);
    CHECK_THROWS(linear_combination(m, oracle::random_mo(rng, "b"), 0.5, 0.5));
}

TEST_CASE("linear combination identity on random machines") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double c1 = unit(rng);
        const double c2 = 1.0 - c1;
        const std::string w = oracle::random_word(rng, "ab", 12);
        if (trial % 2 == 0) {
            const MmQfa m = oracle::random_mm(rng, "ab");
            const MmQfa n = oracle::random_mm(rng, "ab");
            const MmQfa l = linear_combination(m, n, c1, c2);
            CHECK(std::abs(oracle::mm_probability(l, w) -
                           (c1 * oracle::mm_probability(m, w) + c2 * oracle::mm_probability(n, w))) < 1e-9);
            check_unitary(Qfa{l});
        } else {
            const MoQfa m = oracle::random_mo(rng, "ab");
            const MoQfa n = oracle::random_mo(rng, "ab");
            const MoQfa l = linear_combination(m, n, c1, c2);
            CHECK(std::abs(oracle::mo_probability(l, w) -
                           (c1 * oracle::mo_probability(m, w) + c2 * oracle::mo_probability(n, w))) < 1e-9);
            check_unitary(Qfa{l});
        }
    }
}

TEST_CASE("MO Hadamard product") {
    const MoQfa m3 = build_mod_n(3);
    const MoQfa m5 = build_mod_n(5);
    const MoQfa h = mo_hadamard(m3, m5);
    CHECK(h.semi().size() == 4);
    CHECK(std::abs(accept_probability(Qfa{h}, a(15)) - 1.0) < 1e-12);
    for (int j = 0; j <= 30; ++j) {
        const double expected = std::pow(std::cos(kPi * j / 3), 2) * std::pow(std::cos(kPi * j / 5), 2);
        CHECK(std::abs(accept_probability(Qfa{h}, a(j)) - expected) < 1e-12);
    }
    const MoQfa unit = mo_hadamard(m5, always_accept("a"));
    for (int j = 0; j <= 12; ++j) {
        CHECK(std::abs(accept_probability(Qfa{unit}, a(j)) - accept_probability(Qfa{m5}, a(j))) < 1e-12);
    }
    std::mt19937_64 rng(6);
    CHECK_THROWS(mo_hadamard(m3, oracle::random_mo(rng, "ab")));
}

TEST_CASE("MO Hadamard product is pointwise multiplicative") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; ++trial) {
        const MoQfa m = oracle::random_mo(rng, "ab");
        const MoQfa n = oracle::random_mo(rng, "ab");
        const MoQfa h = mo_hadamard(m, n);
        check_unitary(Qfa{h});
        const std::string w = oracle::random_word(rng, "ab", 10);
        CHECK(std::abs(oracle::mo_probability(h, w) - oracle::mo_probability(m, w) * oracle::mo_probability(n, w)) <
              1e-9);
    }
}

TEST_CASE("end-decisive Hadamard product") {
    const MmQfa c3 = complement(equ(3));
    const MmQfa c5 = complement(equ(5));
    const MmQfa sq = mm_end_decisive_hadamard(c3, c3);
    const MmQfa mixed = mm_end_decisive_hadamard(c3, c5);
    const MmQfa unit = mm_end_decisive_hadamard(c3, accept_at_end());
    const auto words = unary_words('a', 40);
    for (int j = 0; j <= 40; ++j) {
        const double f3 = accept_probability(Qfa{c3}, a(j));
        const double f5 = accept_probability(Qfa{c5}, a(j));
        CHECK(std::abs(accept_probability(Qfa{sq}, a(j)) - f3 * f3) < 1e-9);
        CHECK(std::abs(accept_probability(Qfa{mixed}, a(j)) - f3 * f5) < 1e-9);
        CHECK(std::abs(accept_probability(Qfa{unit}, a(j)) - f3) < 1e-9);
        const double e3 = accept_probability(Qfa{equ(3)}, a(j));
        CHECK(std::abs(accept_probability(Qfa{sq}, a(j)) - (1 - e3) * (1 - e3)) < 1e-9);
    }
    for (const MmQfa *m : {&sq, &mixed, &unit}) {
        CHECK(check_validity(*m, words));
        CHECK(check_end_decisive(*m, words));
        check_unitary(Qfa{*m});
    }
    CHECK_THROWS(mm_end_decisive_hadamard(equ(3), c3));
}

TEST_CASE("end-decisive Hadamard product over random EQU complements") {
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> angle(0.05, kPi / 2 - 0.05);
    const auto words = unary_words('a', 40);
    for (int trial = 0; trial < 10; ++trial) {
        const MmQfa m = complement(build_equ(1 + static_cast<int>(rng() % 6), angle(rng), angle(rng)).machine);
        const MmQfa n = complement(build_equ(1 + static_cast<int>(rng() % 6), angle(rng), angle(rng)).machine);
        const MmQfa h = mm_end_decisive_hadamard(m, n);
        for (const auto &w : words) {
            CHECK(std::abs(oracle::mm_probability(h, w) - oracle::mm_probability(m, w) * oracle::mm_probability(n, w)) <
                  1e-9);
        }
        CHECK(check_end_decisive(h, words));
        CHECK(check_validity(h, words));
    }
}

TEST_CASE("intersection") {
    const Qfa e3{equ(3)};
    const Qfa e5{equ(5)};
    const Qfa same = intersection(e3, e3);
    const Qfa none = intersection(e3, e5);
    const Qfa m15 = intersection(Qfa{build_mod_n(3)}, Qfa{build_mod_n(5)});
    for (int j = 0; j <= 40; ++j) {
        CHECK(accept_probability(none, a(j)) < 1.0 - 1e-9);
        const bool in3 = j == 3;
        CHECK((std::abs(accept_probability(same, a(j)) - 1.0) < 1e-9) == in3);
        CHECK((std::abs(accept_probability(m15, a(j)) - 1.0) < 1e-9) == (j % 15 == 0));
    }
    const QfaClassTag t{QfaKind::kMmCoEndDecisive, ErrorSide::kNegative, 0.2};
    const QfaClassTag u{QfaKind::kMmCoEndDecisive, ErrorSide::kNegative, 0.1};
    CHECK(intersection(t, u).margin.value() == doctest::Approx(0.05));
    CHECK(intersection(t, u).kind == QfaKind::kMmCoEndDecisive);
    CHECK_THROWS(intersection(t, complement(u)));
    CHECK_THROWS(intersection(e3, Qfa{build_mod_n(3)}));
}

TEST_CASE("union") {
    const Qfa e3{equ(3)};
    const Qfa e5{equ(5)};
    const Qfa u = union_of(e3, e5);
    CHECK(semi_of(u).size() == 16);
    CHECK(std::abs(accept_probability(u, a(3)) - 1.0) < 1e-9);
    CHECK(std::abs(accept_probability(u, a(5)) - 1.0) < 1e-9);
    double worst = 0.0;
    for (int j = 0; j <= 40; ++j) {
        if (j != 3 && j != 5) {
            worst = std::max(worst, accept_probability(u, a(j)));
        }
    }
    CHECK(worst < 1.0);
    CHECK(accept_probability(u, a(4)) <= worst);
    // Off both languages 1 - f = (1 - f_3)(1 - f_5).
    const auto p3 = optimal_equ_params(3);
    const auto p5 = optimal_equ_params(5);
    CHECK(1.0 - worst > p3.margin * p5.margin);

    const Qfa same = union_of(e3, e3);
    for (int j = 0; j <= 20; ++j) {
        CHECK((std::abs(accept_probability(same, a(j)) - 1.0) < 1e-9) == (j == 3));
    }
    const Qfa mo = union_of(Qfa{build_mod_n(3)}, Qfa{build_mod_n(5)});
    for (int j = 0; j <= 30; ++j) {
        CHECK((std::abs(accept_probability(mo, a(j)) - 1.0) < 1e-9) == (j % 3 == 0 || j % 5 == 0));
    }
    CHECK_THROWS(union_of(Qfa{complement(equ(3))}, e5));

    const QfaClassTag t{QfaKind::kMmCoEndDecisive, ErrorSide::kNegative, 0.2};
    const QfaClassTag v{QfaKind::kMmCoEndDecisive, ErrorSide::kNegative, 0.1};
    CHECK(union_of(t, v).margin.value() == doctest::Approx(0.02));
    CHECK_THROWS(union_of(t, QfaClassTag{QfaKind::kMm, ErrorSide::kNegative, std::nullopt}));
}

TEST_CASE("membership of union and intersection matches set operations") {
    const std::vector<Qfa> machines{Qfa{build_mod_n(2)}, Qfa{build_mod_n(3)}, Qfa{build_mod_n(4)}};
    for (std::size_t i = 0; i < machines.size(); ++i) {
        for (std::size_t k = 0; k < machines.size(); ++k) {
            const Qfa u = union_of(machines[i], machines[k]);
            const Qfa n = intersection(machines[i], machines[k]);
            for (int j = 0; j <= 24; ++j) {
                const bool x = std::abs(accept_probability(machines[i], a(j)) - 1.0) < 1e-9;
                const bool y = std::abs(accept_probability(machines[k], a(j)) - 1.0) < 1e-9;
                CHECK((std::abs(accept_probability(u, a(j)) - 1.0) < 1e-9) == (x || y));
                CHECK((std::abs(accept_probability(n, a(j)) - 1.0) < 1e-9) == (x && y));
            }
        }
    }
}

TEST_CASE("inverse homomorphism") {
    const MoQfa m5 = build_mod_n(5);
    const MoQfa id = mo_inverse_homomorphism(m5, {{'a', "a"}});
    for (const auto &[c, u] : m5.semi().unitaries()) {
        CHECK(id.semi().unitary(c).max_abs_diff(u) == 0.0);
    }
    const MoQfa dbl = mo_inverse_homomorphism(m5, {{'b', "aa"}});
    CHECK(dbl.semi().alphabet() == "b");
    for (int j = 0; j <= 12; ++j) {
        CHECK(std::abs(accept_probability(Qfa{dbl}, std::string(j, 'b')) - accept_probability(Qfa{m5}, a(2 * j))) <
              1e-12);
    }
    const MoQfa erase = mo_inverse_homomorphism(m5, {{'b', ""}});
    CHECK(erase.semi().unitary('b').max_abs_diff(ComplexMatrix::identity(2)) == 0.0);
    for (int j = 0; j <= 6; ++j) {
        CHECK(std::abs(accept_probability(Qfa{erase}, std::string(j, 'b')) - 1.0) < 1e-12);
    }
    CHECK_THROWS(mo_inverse_homomorphism(m5, {{'b', "ac"}}));
}

TEST_CASE("inverse homomorphism on random machines") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const MoQfa m = oracle::random_mo(rng, "ab");
        const std::map<char, std::string> h{{'x', oracle::random_word(rng, "ab", 3)},
                                            {'y', oracle::random_word(rng, "ab", 3)}};
        const MoQfa inv = mo_inverse_homomorphism(m, h);
        for (int i = 0; i < 5; ++i) {
            const std::string w = oracle::random_word(rng, "xy", 8);
            std::string image;
            for (char c : w) {
                image += h.at(c);
            }
            CHECK(std::abs(oracle::mo_probability(inv, w) - oracle::mo_probability(m, image)) < 1e-9);
        }
    }
}

TEST_CASE("word quotient") {
    const MoQfa m5 = build_mod_n(5);
    const MoQfa same = mo_word_quotient(m5, "");
    for (const auto &[c, u] : m5.semi().unitaries()) {
        CHECK(same.semi().unitary(c).max_abs_diff(u) < 1e-15);
    }
    const MoQfa q2 = mo_word_quotient(m5, "aa");
    const MoQfa q5 = mo_word_quotient(m5, a(5));
    for (int j = 0; j <= 15; ++j) {
        CHECK(std::abs(accept_probability(Qfa{q2}, a(j)) - std::pow(std::cos(kPi * (j + 2) / 5), 2)) < 1e-12);
        CHECK(std::abs(accept_probability(Qfa{q5}, a(j)) - accept_probability(Qfa{m5}, a(j))) < 1e-12);
    }
    CHECK_THROWS(mo_word_quotient(m5, "b"));
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const MoQfa m = oracle::random_mo(rng, "ab");
        const std::string w = oracle::random_word(rng, "ab", 4);
        const MoQfa q = mo_word_quotient(m, w);
        const std::string x = oracle::random_word(rng, "ab", 6);
        CHECK(std::abs(oracle::mo_probability(q, x) - oracle::mo_probability(m, w + x)) < 1e-9);
    }
}

TEST_CASE("composed machines stay unitary through deep compositions") {
    Qfa m{equ(2)};
    for (int depth = 0; depth < 4; ++depth) {
        m = intersection(m, Qfa{equ(2)});
    }
    check_unitary(m);
    MoQfa mo = build_mod_n(3);
    for (int depth = 0; depth < 8; ++depth) {
        mo = depth % 2 ? complement(mo) : linear_combination(mo, build_mod_n(2 + depth), 0.5, 0.5);
    }
    check_unitary(Qfa{mo});
}

TEST_CASE("Hadamard and linear combination tags") {
    const QfaClassTag n1{QfaKind::kMo, ErrorSide::kNegative, 0.3};
    const QfaClassTag n2{QfaKind::kMo, ErrorSide::kNegative, 0.2};
    CHECK(hadamard(n1, n2).margin.value() == doctest::Approx(0.2));
    const QfaClassTag p1{QfaKind::kMmEndDecisive, ErrorSide::kPositive, 0.5};
    const QfaClassTag p2{QfaKind::kMmEndDecisive, ErrorSide::kPositive, 0.4};
    CHECK(hadamard(p1, p2).margin.value() == doctest::Approx(0.2));
    CHECK_THROWS(hadamard(p1, QfaClassTag{QfaKind::kMm, ErrorSide::kPositive, std::nullopt}));
    CHECK(linear_combination(n1, n2).kind == QfaKind::kMo);
    CHECK_FALSE(linear_combination(n1, n2).margin.has_value());
    CHECK(default_tag(Qfa{equ(3)}).kind == QfaKind::kMm);
}
