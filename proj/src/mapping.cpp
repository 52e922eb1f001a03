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

#include "qfl/mapping.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>

#include "qfl/error.hpp"

namespace qfl {

namespace {

constexpr int kMaxQubits = 20;

struct StateGroups {
    std::vector<std::size_t> accepting;
    std::vector<std::size_t> rejecting;
    std::vector<std::size_t> non_halting;
};

StateGroups groups_of(const Qfa &m) {
    if (const auto *mo = std::get_if<MoQfa>(&m)) {
        return StateGroups{mo->accepting_indices(), {}, mo->non_accepting_indices()};
    }
    const auto &mm = std::get<MmQfa>(m);
    return StateGroups{mm.accepting_indices(), mm.rejecting_indices(), mm.non_halting_indices()};
}

int resolve_qubits(std::size_t state_count, std::optional<int> qubits) {
    const int needed = min_qubits(state_count);
    if (!qubits) {
        return needed;
    }
    if (*qubits < needed) {
        throw ValidationError(std::to_string(*qubits) + " qubits cannot hold " + std::to_string(state_count) +
                              " states");
    }
    if (*qubits > kMaxQubits) {
        throw ValidationError("at most " + std::to_string(kMaxQubits) + " qubits are supported");
    }
    return *qubits;
}

}  // namespace

std::string to_string(MappingKind kind) { return kind == MappingKind::kNaive ? "naive" : "density"; }

MappingKind parse_mapping_kind(const std::string &s) {
    if (s == "naive") {
        return MappingKind::kNaive;
    }
    if (s == "density") {
        return MappingKind::kDensity;
    }
    throw ValidationError("unknown mapping kind '" + s + "' (expected naive or density)");
}

BasisCode StateMapping::code_of(const std::string &state) const {
    auto it = std::find(states.begin(), states.end(), state);
    if (it == states.end()) {
        throw ValidationError("mapping has no state '" + state + "'");
    }
    return codes[static_cast<std::size_t>(it - states.begin())];
}

void StateMapping::validate() const {
    if (qubits < 1 || qubits > kMaxQubits) {
        throw ValidationError("mapping qubit count must be in [1, " + std::to_string(kMaxQubits) + "]");
    }
    if (states.size() != codes.size()) {
        throw ValidationError("mapping has " + std::to_string(states.size()) + " states but " +
                              std::to_string(codes.size()) + " codes");
    }
    std::set<BasisCode> seen;
    for (std::size_t i = 0; i < codes.size(); ++i) {
        if (codes[i] >= dim()) {
            throw ValidationError("code of state '" + states[i] + "' does not fit in " + std::to_string(qubits) +
                                  " qubits");
        }
        if (!seen.insert(codes[i]).second) {
            throw ValidationError("mapping is not injective: code " + code_to_bits(codes[i], qubits) + " reused");
        }
    }
    std::set<std::string> names(states.begin(), states.end());
    if (names.size() != states.size()) {
        throw ValidationError("mapping lists a state twice");
    }
}

std::string code_to_bits(BasisCode code, int qubits) {
    std::string out(static_cast<std::size_t>(qubits), '0');
    for (int q = 0; q < qubits; ++q) {
        if (code & qubit_mask(q, qubits)) {
            out[static_cast<std::size_t>(q)] = '1';
        }
    }
    return out;
}

BasisCode bits_to_code(const std::string &bits) {
    if (bits.empty() || bits.size() > static_cast<std::size_t>(kMaxQubits)) {
        throw ValidationError("bit string '" + bits + "' has invalid length");
    }
    BasisCode code = 0;
    for (char c : bits) {
        if (c != '0' && c != '1') {
            throw ValidationError("bit string '" + bits + "' contains a character other than 0/1");
        }
        code = (code << 1) | static_cast<BasisCode>(c == '1');
    }
    return code;
}

int min_qubits(std::size_t state_count) {
    int n = 1;
    while ((std::size_t{1} << n) < state_count) {
        ++n;
    }
    return n;
}

StateMapping naive_mapping(const Qfa &m, std::optional<int> qubits) {
    const SemiQfa &semi = semi_of(m);
    StateMapping out;
    out.qubits = resolve_qubits(semi.size(), qubits);
    out.kind = MappingKind::kNaive;
    out.states = semi.states();
    out.codes.resize(semi.size());
    std::iota(out.codes.begin(), out.codes.end(), BasisCode{0});
    return out;
}

StateMapping density_mapping(const Qfa &m, std::optional<int> qubits) {
    const SemiQfa &semi = semi_of(m);
    const StateGroups g = groups_of(m);
    StateMapping out;
    out.qubits = resolve_qubits(semi.size(), qubits);
    out.kind = MappingKind::kDensity;
    out.states = semi.states();
    out.codes.assign(semi.size(), 0);

    const std::size_t total = out.dim();
    std::vector<BasisCode> sorted(total);
    std::iota(sorted.begin(), sorted.end(), BasisCode{0});
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](BasisCode a, BasisCode b) { return std::popcount(a) < std::popcount(b); });

    for (std::size_t i = 0; i < g.accepting.size(); ++i) {
        out.codes[g.accepting[i]] = sorted[i];
    }
    for (std::size_t i = 0; i < g.rejecting.size(); ++i) {
        out.codes[g.rejecting[i]] = sorted[total - 1 - i];
    }
    const std::size_t free_begin = g.accepting.size();
    const std::size_t free_end = total - g.rejecting.size();
    const std::size_t unused = free_end - free_begin - g.non_halting.size();
    const std::size_t start = g.rejecting.empty() ? free_end - g.non_halting.size() : free_begin + unused / 2;
    for (std::size_t i = 0; i < g.non_halting.size(); ++i) {
        out.codes[g.non_halting[i]] = sorted[start + i];
    }
    return out;
}

StateMapping make_mapping(const Qfa &m, MappingKind kind, std::optional<int> qubits) {
    return kind == MappingKind::kNaive ? naive_mapping(m, qubits) : density_mapping(m, qubits);
}

std::vector<CodeClass> classify_codes(const Qfa &m, const StateMapping &mapping) {
    const StateGroups g = groups_of(m);
    if (mapping.states != semi_of(m).states()) {
        throw ValidationError("mapping does not match the automaton's states");
    }
    std::vector<CodeClass> out(mapping.dim(), CodeClass::kUnmapped);
    const bool mo = std::holds_alternative<MoQfa>(m);
    for (std::size_t i : g.accepting) {
        out[mapping.codes[i]] = CodeClass::kAccepting;
    }
    for (std::size_t i : g.rejecting) {
        out[mapping.codes[i]] = CodeClass::kRejecting;
    }
    for (std::size_t i : g.non_halting) {
        out[mapping.codes[i]] = mo ? CodeClass::kRejecting : CodeClass::kNonHalting;
    }
    return out;
}

double flip_robustness_score(const StateMapping &mapping, const Qfa &m) {
    const std::vector<CodeClass> classes = classify_codes(m, mapping);
    std::size_t events = 0;
    std::size_t decisive = 0;
    for (BasisCode code : mapping.codes) {
        const CodeClass from = classes[code];
        for (int q = 0; q < mapping.qubits; ++q) {
            const CodeClass to = classes[code ^ qubit_mask(q, mapping.qubits)];
            ++events;
            if ((from == CodeClass::kAccepting && to == CodeClass::kRejecting) ||
                (from == CodeClass::kRejecting && to == CodeClass::kAccepting)) {
                ++decisive;
            }
        }
    }
    return events == 0 ? 0.0 : static_cast<double>(decisive) / static_cast<double>(events);
}

bool satisfies_weight_ordering(const StateMapping &mapping, const Qfa &m) {
    const StateGroups g = groups_of(m);
    auto weights = [&](const std::vector<std::size_t> &idx) {
        std::vector<int> w;
        for (std::size_t i : idx) {
            w.push_back(std::popcount(mapping.codes[i]));
        }
        return w;
    };
    const auto acc = weights(g.accepting);
    const auto non = weights(g.non_halting);
    const auto rej = weights(g.rejecting);
    // Chain of group bounds, skipping empty groups.
    int floor = 0;
    for (const auto *group : {&acc, &non, &rej}) {
        if (group->empty()) {
            continue;
        }
        if (*std::min_element(group->begin(), group->end()) < floor) {
            return false;
        }
        floor = *std::max_element(group->begin(), group->end());
    }
    return true;
}

}  // namespace qfl
