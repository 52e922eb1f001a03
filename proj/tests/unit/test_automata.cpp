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
#include "qfl/automata.hpp"
#include "qfl/blocks.hpp"
#include "qfl/compose.hpp"

using namespace qfl;

namespace {

std::map<char, ComplexMatrix> identities(std::size_t n, const std::string &alphabet) {
    std::map<char, ComplexMatrix> u;
    for (char c : "#$" + alphabet) {
        u.emplace(c, ComplexMatrix::identity(n));
    }
    return u;
}

}  // namespace

TEST_CASE("semi-QFA construction is validated") {
    const std::vector<std::string> two{"p", "q"};
    CHECK_NOTHROW(SemiQfa(two, "a", identities(2, "a")));
    CHECK_THROWS_AS(SemiQfa(two, "#", identities(2, "")), std::invalid_argument);
    CHECK_THROWS_AS(SemiQfa(two, "a$", identities(2, "a")), std::invalid_argument);
    CHECK_THROWS_AS(SemiQfa(two, "aa", identities(2, "a")), std::invalid_argument);
    CHECK_THROWS_AS(SemiQfa({"p", "p"}, "a", identities(2, "a")), std::invalid_argument);
    auto missing = identities(2, "a");
    missing.erase('$');
    CHECK_THROWS_AS(SemiQfa(two, "a", missing), std::invalid_argument);
    auto extra = identities(2, "ab");
    CHECK_THROWS_AS(SemiQfa(two, "a", extra), std::invalid_argument);
    auto wrong_size = identities(2, "a");
    wrong_size.insert_or_assign('a', ComplexMatrix::identity(3));
    CHECK_THROWS_AS(SemiQfa(two, "a", wrong_size), std::invalid_argument);
    auto not_unitary = identities(2, "a");
    not_unitary.insert_or_assign('a', ComplexMatrix{{1.0, 0.0}, {0.0, 1.1}});
    CHECK_THROWS_AS(SemiQfa(two, "a", not_unitary), std::invalid_argument);
    // A looser tolerance admits the same matrix.
    CHECK_NOTHROW(SemiQfa(two, "a", not_unitary, 0.5));
}

TEST_CASE("MO and MM state sets are validated") {
    const SemiQfa semi({"p", "q", "r"}, "a", identities(3, "a"));
    CHECK_THROWS(MoQfa(semi, "x", {"p"}));
    CHECK_THROWS(MoQfa(semi, "p", {"x"}));
    CHECK_THROWS(MmQfa(semi, "p", {"q"}, {"q"}));
    const MmQfa m(semi, "p", {"q"}, {"r"});
    CHECK(m.non_halting_indices() == std::vector<std::size_t>{0});
}

TEST_CASE("MOD_5 acceptance probabilities") {
    const MoQfa m = build_mod_n(5);
    CHECK(mo_accept_probability(m, "") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(mo_accept_probability(m, "aaaaa") == doctest::Approx(1.0).epsilon(1e-12));
    // Direct 2x2 product oracle with angle pi/5.
    const double c = std::cos(std::numbers::pi / 5);
    CHECK(std::abs(mo_accept_probability(m, "a") - c * c) < 1e-12);
    CHECK(std::abs(mo_accept_probability(m, "a") - 0.654508) < 1e-6);
    CHECK(std::abs(mo_accept_probability(m, "a") - oracle::mo_probability(m, "a")) < 1e-12);
    CHECK_THROWS(mo_accept_probability(m, "b"));
}

TEST_CASE("EQU_3 start step leaves cos(theta)|q0> + sin(theta)|q1>") {
    const auto b = build_equ(optimal_equ_params(3));
    const TotalState t = mm_step(b.machine, mm_initial_state(b.machine), '#');
    CHECK(std::abs(t.psi[0] - Complex(std::cos(b.params.theta))) < 1e-12);
    CHECK(std::abs(t.psi[1] - Complex(std::sin(b.params.theta))) < 1e-12);
    CHECK(std::abs(t.psi[2]) < 1e-12);
    CHECK(std::abs(t.psi[3]) < 1e-12);
    CHECK(t.p_acc == 0.0);
    CHECK(t.p_rej == 0.0);
}

TEST_CASE("an identity step leaves the total state unchanged") {
    const SemiQfa semi({"n", "acc", "rej"}, "a", identities(3, "a"));
    const MmQfa m(semi, "n", {"acc"}, {"rej"});
    const TotalState t = mm_step(m, mm_initial_state(m), 'a');
    CHECK(std::abs(t.psi[0] - Complex(1.0)) == 0.0);
    CHECK(t.p_acc == 0.0);
    CHECK(t.p_rej == 0.0);
    CHECK_THROWS(mm_step(m, t, 'z'));
}

TEST_CASE("EQU_3 at optimal parameters") {
    const auto b = build_equ(optimal_equ_params(3));
    const auto &p = b.params;
    CHECK(std::abs(mm_accept_probability(b.machine, "aaa") - 1.0) < 1e-12);
    CHECK(std::abs(mm_run(b.machine, "#aaa$").p_acc - 1.0) < 1e-12);
    CHECK(std::abs(mm_accept_probability(b.machine, "aaaa") - (1.0 - oracle::equ_p_rej(3, p.theta, p.phi, 4))) <
          1e-12);
    CHECK(std::abs(mm_accept_probability(b.machine, "") - (1.0 - oracle::equ_p_rej(3, p.theta, p.phi, 0))) < 1e-12);
}

TEST_CASE("matrix-evolution rejection matches the closed form") {
    for (int k : {3, 5, 7}) {
        const auto b = build_equ(optimal_equ_params(k));
        for (int j = 0; j <= 40; ++j) {
            const TotalState t = mm_run(b.machine, "#" + std::string(j, 'a') + "$");
            CHECK(std::abs(t.p_rej - oracle::equ_p_rej(k, b.params.theta, b.params.phi, j)) < 1e-9);
        }
    }
}

TEST_CASE("validity checks") {
    for (int k : {3, 5, 7}) {
        const auto b = build_equ(optimal_equ_params(k));
        CHECK(check_validity(b.machine, unary_words('a', 40)));
    }
    const SemiQfa semi({"n", "acc", "rej"}, "a", identities(3, "a"));
    CHECK_FALSE(check_validity(MmQfa(semi, "n", {"acc"}, {"rej"}), unary_words('a', 5)));
    const auto e3 = build_equ(optimal_equ_params(3)).machine;
    const auto e5 = build_equ(optimal_equ_params(5)).machine;
    CHECK(check_validity(linear_combination(e3, e5, 0.3, 0.7), unary_words('a', 40)));
}

TEST_CASE("decisiveness checks") {
    const auto e3 = build_equ(optimal_equ_params(3)).machine;
    const auto sample = default_sample("a");
    CHECK(check_co_end_decisive(e3, sample));
    CHECK_FALSE(check_end_decisive(e3, sample));
    const auto c3 = complement(e3);
    CHECK(check_end_decisive(c3, sample));
    CHECK_FALSE(check_co_end_decisive(c3, sample));

    // Two states; U_a swaps the non-halting state into the accepting one.
    auto u = identities(2, "a");
    u.insert_or_assign('a', ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}});
    const MmQfa leaky(SemiQfa({"n", "acc"}, "a", u), "n", {"acc"}, {});
    CHECK_FALSE(check_end_decisive(leaky, sample));
    CHECK(check_co_end_decisive(leaky, sample));
}

TEST_CASE("total-state invariant holds after every step") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        const MmQfa m = oracle::random_mm(rng, "ab");
        const std::string w = oracle::random_word(rng, "ab", 50);
        TotalState t = mm_initial_state(m);
        for (char c : "#" + w + "$") {
            t = mm_step(m, t, c);
            CHECK(std::abs(t.p_acc + t.p_rej + t.psi.norm_squared() - 1.0) < 1e-9);
        }
        const double f = mm_accept_probability(m, w);
        CHECK(f >= -1e-9);
        CHECK(f <= 1.0 + 1e-9);
        CHECK(std::abs(f - oracle::mm_probability(m, w)) < 1e-12);
    }
}

TEST_CASE("MO probabilities agree with the plain-vector oracle and stay in [0, 1]") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const MoQfa m = oracle::random_mo(rng, "ab");
        const std::string w = oracle::random_word(rng, "ab", 20);
        const double f = mo_accept_probability(m, w);
        CHECK(f >= -1e-9);
        CHECK(f <= 1.0 + 1e-9);
        CHECK(std::abs(f - oracle::mo_probability(m, w)) < 1e-12);
        CHECK(accept_probability(Qfa{m}, w) == f);
    }
}

TEST_CASE("an MM machine that can only accept on the end marker matches its MO twin") {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 20; ++trial) {
        // Input blocks act on the first three states only; the accepting
        // states 3 and 4 can only be reached through U_$.
        const std::size_t core = 3;
        std::map<char, ComplexMatrix> u;
        for (char c : std::string("#ab")) {
            u.emplace(c, direct_sum(oracle::random_unitary(core, rng), ComplexMatrix::identity(2)));
        }
        u.emplace('$', oracle::random_unitary(core + 2, rng));
        const std::vector<std::string> states{"s0", "s1", "s2", "f0", "f1"};
        const SemiQfa semi(states, "ab", u);
        const MmQfa mm(semi, "s0", {"f0", "f1"}, {});
        const MoQfa mo(semi, "s0", {"f0", "f1"});
        for (int i = 0; i < 10; ++i) {
            const std::string w = oracle::random_word(rng, "ab", 12);
            CHECK(std::abs(mm_accept_probability(mm, w) - mo_accept_probability(mo, w)) < 1e-9);
        }
    }
}

TEST_CASE("default sample") {
    const auto unary = default_sample("a");
    REQUIRE(unary.size() == 13);
    CHECK(unary.front().empty());
    CHECK(unary.back() == std::string(12, 'a'));
    const auto binary = default_sample("ab");
    CHECK(binary.size() == 201);
    CHECK(binary == default_sample("ab"));
    for (const auto &w : binary) {
        CHECK(w.size() <= 12);
    }
}
