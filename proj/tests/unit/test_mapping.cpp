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


#include <bit>

#include "doctest.h"
#include "oracles.hpp"
#include "qfl/blocks.hpp"
#include "qfl/compose.hpp"
#include "qfl/mapping.hpp"

using namespace qfl;

namespace {

Qfa equ(int k) { return Qfa{build_equ(optimal_equ_params(k)).machine}; }

std::string bits_of(const StateMapping &m, const std::string &state) {
    return code_to_bits(m.code_of(state), m.qubits);
}

Qfa chain(std::size_t n, std::size_t accepting, std::size_t rejecting) {
    std::vector<std::string> states;
    for (std::size_t i = 0; i < n; ++i) {
        states.push_back("s" + std::to_string(i));
    }
    std::map<char, ComplexMatrix> u;
    for (char c : std::string("#a$")) {
        u.emplace(c, ComplexMatrix::identity(n));
    }
    std::vector<std::string> acc(states.begin(), states.begin() + static_cast<long>(accepting));
    std::vector<std::string> rej(states.end() - static_cast<long>(rejecting), states.end());
    return Qfa{MmQfa(SemiQfa(states, "a", u), states[0], acc, rej)};
}

std::vector<Qfa> corpus() {
    std::vector<Qfa> out;
    for (int n = 1; n <= 7; ++n) {
        out.emplace_back(build_mod_n(n));
    }
    for (int p : {3, 5, 7, 11}) {
        out.emplace_back(build_mod_p(p).machine);
    }
    for (int k = 1; k <= 7; ++k) {
        out.push_back(equ(k));
        out.emplace_back(complement(std::get<MmQfa>(equ(k))));
    }
    out.push_back(union_of(equ(3), equ(5)));
    out.push_back(intersection(equ(3), equ(4)));
    out.emplace_back(mo_hadamard(build_mod_n(3), build_mod_n(5)));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 20; ++i) {
        out.emplace_back(oracle::random_mm(rng, "ab"));
        out.emplace_back(oracle::random_mo(rng, "a"));
    }
    for (std::size_t n : {5u, 17u, 33u, 64u}) {
        out.push_back(chain(n, n / 4, n / 3));
        out.push_back(chain(n, 1, 0));
        out.push_back(chain(n, 0, 2));
    }
    return out;
}

}  // namespace

TEST_CASE("bit strings put qubit 0 first") {
    CHECK(code_to_bits(1, 3) == "001");
    CHECK(code_to_bits(4, 3) == "100");
    CHECK(bits_to_code("110") == 6);
    CHECK(qubit_mask(0, 3) == 4);
    CHECK(qubit_mask(2, 3) == 1);
    CHECK_THROWS(bits_to_code("12"));
    CHECK_THROWS(bits_to_code(""));
    for (BasisCode c = 0; c < 32; ++c) {
        CHECK(bits_to_code(code_to_bits(c, 5)) == c);
    }
    CHECK(min_qubits(1) == 1);
    CHECK(min_qubits(4) == 2);
    CHECK(min_qubits(5) == 3);
}

TEST_CASE("naive mapping") {
    const StateMapping m = naive_mapping(equ(3));
    CHECK(m.qubits == 2);
    CHECK(bits_of(m, "q0") == "00");
    CHECK(bits_of(m, "q1") == "01");
    CHECK(bits_of(m, "q_acc") == "10");
    CHECK(bits_of(m, "q_rej") == "11");
    const StateMapping three = naive_mapping(chain(3, 1, 1));
    CHECK(three.qubits == 2);
    CHECK(std::find(three.codes.begin(), three.codes.end(), 3u) == three.codes.end());
    CHECK(naive_mapping(chain(5, 1, 1)).qubits == 3);
    CHECK(naive_mapping(equ(3), 4).qubits == 4);
    CHECK_THROWS(naive_mapping(chain(5, 1, 1), 2));
    CHECK_THROWS(naive_mapping(equ(3), 21));
}

TEST_CASE("density mapping examples") {
    const StateMapping m = density_mapping(equ(3));
    CHECK(bits_of(m, "q_acc") == "00");
    CHECK(bits_of(m, "q0") == "01");
    CHECK(bits_of(m, "q1") == "10");
    CHECK(bits_of(m, "q_rej") == "11");
    CHECK(m.kind == MappingKind::kDensity);

    const StateMapping single = density_mapping(chain(1, 1, 0), 3);
    CHECK(single.codes == std::vector<BasisCode>{0});

    // MOD_5 on three qubits: the accepting state takes 000 and the
    // non-accepting state the heaviest code.
    const StateMapping mo = density_mapping(Qfa{build_mod_n(5)}, 3);
    CHECK(bits_of(mo, "q0") == "000");
    CHECK(bits_of(mo, "q1") == "111");
    CHECK_THROWS(density_mapping(chain(9, 1, 1), 3));
}

TEST_CASE("density mapping places buffers on both sides of the non-halting block") {
    // 3 qubits, sorted codes 000 001 010 100 011 101 110 111.
    const Qfa m = chain(5, 1, 1);
    const StateMapping d = density_mapping(m);
    CHECK(bits_of(d, "s0") == "000");
    CHECK(bits_of(d, "s4") == "111");
    // Three non-halting states in the six middle slots, one unused slot
    // before them and two after.
    CHECK(bits_of(d, "s1") == "010");
    CHECK(bits_of(d, "s2") == "100");
    CHECK(bits_of(d, "s3") == "011");
}

TEST_CASE("rejecting states fill from the heavy end in reverse") {
    const StateMapping d = density_mapping(chain(8, 1, 3));
    CHECK(bits_of(d, "s5") == "111");
    CHECK(bits_of(d, "s6") == "110");
    CHECK(bits_of(d, "s7") == "101");
}

TEST_CASE("density mapping respects weight ordering and both mappings are injective") {
    for (const Qfa &m : corpus()) {
        const StateMapping d = density_mapping(m);
        const StateMapping n = naive_mapping(m);
        CHECK_NOTHROW(d.validate());
        CHECK_NOTHROW(n.validate());
        CHECK(satisfies_weight_ordering(d, m));
        CHECK(d.states == semi_of(m).states());
        const StateMapping wide = density_mapping(m, d.qubits + 1);
        CHECK(satisfies_weight_ordering(wide, m));
        CHECK(density_mapping(m) == d);
    }
}

TEST_CASE("weight ordering detects a violation") {
    const Qfa m = equ(3);
    StateMapping bad = naive_mapping(m);
    bad.kind = MappingKind::kDensity;
    // Naive puts q_acc (weight 1) above q0 (weight 0).
    CHECK_FALSE(satisfies_weight_ordering(bad, m));
}

TEST_CASE("mapping validation") {
    StateMapping m = naive_mapping(equ(3));
    m.codes[1] = m.codes[0];
    CHECK_THROWS(m.validate());
    m = naive_mapping(equ(3));
    m.codes[0] = 4;
    CHECK_THROWS(m.validate());
    CHECK(parse_mapping_kind("density") == MappingKind::kDensity);
    CHECK_THROWS(parse_mapping_kind("dense"));
}

TEST_CASE("code classes") {
    const Qfa m = equ(3);
    const auto classes = classify_codes(m, density_mapping(m, 3));
    CHECK(classes.size() == 8);
    CHECK(classes[0] == CodeClass::kAccepting);
    CHECK(classes[7] == CodeClass::kRejecting);
    CHECK(std::count(classes.begin(), classes.end(), CodeClass::kNonHalting) == 2);
    CHECK(std::count(classes.begin(), classes.end(), CodeClass::kUnmapped) == 4);
    const auto mo = classify_codes(Qfa{build_mod_n(3)}, naive_mapping(Qfa{build_mod_n(3)}));
    CHECK(mo == std::vector<CodeClass>{CodeClass::kAccepting, CodeClass::kRejecting});
}

TEST_CASE("flip robustness examples") {
    const Qfa all = chain(4, 4, 0);
    CHECK(flip_robustness_score(density_mapping(all), all) == 0.0);
    CHECK(flip_robustness_score(naive_mapping(all), all) == 0.0);

    const Qfa m = equ(3);
    const StateMapping d = density_mapping(m);
    const auto classes = classify_codes(m, d);
    for (int q = 0; q < 2; ++q) {
        CHECK(classes[d.code_of("q_acc") ^ qubit_mask(q, 2)] == CodeClass::kNonHalting);
    }
    // Eight flip events; none links 00 and 11.
    CHECK(flip_robustness_score(d, m) == 0.0);
    // Naive: 10 <-> 11 links q_acc and q_rej in both directions.
    CHECK(flip_robustness_score(naive_mapping(m), m) == doctest::Approx(2.0 / 8.0));
}

TEST_CASE("density never scores worse than naive on MOD_n and EQU_k") {
    std::vector<Qfa> blocks;
    for (int n = 3; n <= 7; ++n) {
        blocks.emplace_back(build_mod_n(n));
    }
    for (int k = 3; k <= 7; ++k) {
        blocks.push_back(equ(k));
    }
    for (const Qfa &m : blocks) {
        CHECK(flip_robustness_score(density_mapping(m), m) <= flip_robustness_score(naive_mapping(m), m));
    }
}
