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

#include "qfl/transpile.hpp"

#include <algorithm>
#include <cmath>

#include "qfl/error.hpp"
#include "qfl/noisesim.hpp"

namespace qfl {

namespace {

// Entries this small are treated as exact zeros by the elimination.
constexpr double kNegligible = 1e-14;

bool is_trivial_index(const ComplexMatrix &u, std::size_t k) {
    for (std::size_t t = 0; t < u.rows(); ++t) {
        const Complex expected = t == k ? Complex{1.0} : Complex{};
        if (std::abs(u(k, t) - expected) > kNegligible || std::abs(u(t, k) - expected) > kNegligible) {
            return false;
        }
    }
    return true;
}

TwoLevelFactor sub_factor(const ComplexMatrix &u, std::size_t i, std::size_t j) {
    return TwoLevelFactor{i, j, ComplexMatrix{{u(i, i), u(i, j)}, {u(j, i), u(j, j)}}};
}

}  // namespace

std::vector<TwoLevelFactor> two_level_decompose(const ComplexMatrix &u, double tol) {
    if (!u.is_square()) {
        throw ValidationError("two-level decomposition needs a square matrix");
    }
    if (!is_unitary(u, tol)) {
        throw ValidationError("two-level decomposition needs a unitary matrix");
    }
    const std::size_t d = u.rows();
    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < d; ++k) {
        if (!is_trivial_index(u, k)) {
            active.push_back(k);
        }
    }
    if (active.empty()) {
        return {};
    }
    if (d == 1) {
        throw ValidationError("a 1x1 phase has no two-level factorization");
    }
    if (active.size() <= 2) {
        std::size_t i = active.front();
        std::size_t j = active.size() == 2 ? active.back() : (i + 1 < d ? i + 1 : i - 1);
        if (i > j) {
            std::swap(i, j);
        }
        return {sub_factor(u, i, j)};
    }

    // Left-multiply Givens factors G_1, G_2, ... until only a diagonal D
    // remains, so u = G_1^dag ... G_m^dag D.
    ComplexMatrix m = u;
    std::vector<TwoLevelFactor> givens;
    for (std::size_t c = 0; c + 1 < d; ++c) {
        for (std::size_t r = c + 1; r < d; ++r) {
            const Complex b = m(r, c);
            if (std::abs(b) < kNegligible) {
                continue;
            }
            const Complex a = m(c, c);
            const double n = std::hypot(std::abs(a), std::abs(b));
            const ComplexMatrix g{{std::conj(a) / n, std::conj(b) / n}, {-b / n, a / n}};
            for (std::size_t t = 0; t < d; ++t) {
                const Complex top = m(c, t);
                const Complex bottom = m(r, t);
                m(c, t) = g(0, 0) * top + g(0, 1) * bottom;
                m(r, t) = g(1, 0) * top + g(1, 1) * bottom;
            }
            givens.push_back(TwoLevelFactor{c, r, g});
        }
    }

    std::vector<TwoLevelFactor> out;
    for (std::size_t k = 0; k < d; k += 2) {
        const std::size_t i = k + 1 < d ? k : k - 1;
        const std::size_t j = i + 1;
        const Complex di = k + 1 < d ? m(i, i) : Complex{1.0};
        const Complex dj = m(j, j);
        if (std::abs(di - 1.0) > kNegligible || std::abs(dj - 1.0) > kNegligible) {
            out.push_back(TwoLevelFactor{i, j, ComplexMatrix{{di, 0.0}, {0.0, dj}}});
        }
    }
    for (auto it = givens.rbegin(); it != givens.rend(); ++it) {
        out.push_back(TwoLevelFactor{it->i, it->j, it->u.adjoint()});
    }
    return out;
}

ComplexMatrix reconstruct(const std::vector<TwoLevelFactor> &factors, std::size_t dim) {
    ComplexMatrix m = ComplexMatrix::identity(dim);
    for (const auto &f : factors) {
        if (f.i >= f.j || f.j >= dim) {
            throw ValidationError("two-level factor indices out of range");
        }
        for (std::size_t t = 0; t < dim; ++t) {
            const Complex top = m(f.i, t);
            const Complex bottom = m(f.j, t);
            m(f.i, t) = f.u(0, 0) * top + f.u(0, 1) * bottom;
            m(f.j, t) = f.u(1, 0) * top + f.u(1, 1) * bottom;
        }
    }
    return m;
}

void apply_factor(const TwoLevelFactor &f, std::vector<Complex> &state) {
    const Complex x = state[f.i];
    const Complex y = state[f.j];
    state[f.i] = f.u(0, 0) * x + f.u(0, 1) * y;
    state[f.j] = f.u(1, 0) * x + f.u(1, 1) * y;
}

const CircuitBlock &CircuitIR::block(char label) const {
    for (const auto &b : blocks) {
        if (b.label == label) {
            return b;
        }
    }
    throw ValidationError("circuit has no block for symbol '" + std::string(1, label) + "'");
}

CircuitIR lower(const Qfa &m, const StateMapping &mapping, bool decompose) {
    const EmbeddedQfa e = embed(m, mapping);
    CircuitIR ir;
    ir.qubits = e.qubits;
    ir.initial_code = e.initial_code;
    ir.alphabet = e.alphabet;
    ir.mapping = mapping;
    ir.measure.per_block = e.measure_many;
    for (std::size_t c = 0; c < e.dim(); ++c) {
        if (e.classes[c] == CodeClass::kAccepting) {
            ir.measure.accepting.push_back(static_cast<BasisCode>(c));
        } else if (e.measure_many && e.classes[c] == CodeClass::kRejecting) {
            ir.measure.rejecting.push_back(static_cast<BasisCode>(c));
        }
    }
    const std::string labels = kStartSymbol + e.alphabet + kEndSymbol;
    for (char label : labels) {
        CircuitBlock b;
        b.label = label;
        b.unitary = e.unitary(label);
        if (decompose) {
            b.factors = two_level_decompose(b.unitary);
        }
        ir.blocks.push_back(std::move(b));
    }
    return ir;
}

double simulate_ir(const CircuitIR &ir, std::string_view word) {
    const std::size_t dim = std::size_t{1} << ir.qubits;
    std::vector<Complex> psi(dim);
    psi.at(ir.initial_code) = 1.0;
    std::vector<Complex> next(dim);
    double p_acc = 0.0;
    auto step = [&](char label) {
        const CircuitBlock &b = ir.block(label);
        if (b.factors) {
            for (const auto &f : *b.factors) {
                apply_factor(f, psi);
            }
        } else {
            for (std::size_t r = 0; r < dim; ++r) {
                Complex acc{};
                for (std::size_t c = 0; c < dim; ++c) {
                    acc += b.unitary(r, c) * psi[c];
                }
                next[r] = acc;
            }
            psi.swap(next);
        }
        if (ir.measure.per_block) {
            for (BasisCode c : ir.measure.accepting) {
                p_acc += std::norm(psi[c]);
                psi[c] = 0.0;
            }
            for (BasisCode c : ir.measure.rejecting) {
                psi[c] = 0.0;
            }
        }
    };
    step(kStartSymbol);
    for (char c : word) {
        step(c);
    }
    step(kEndSymbol);
    if (!ir.measure.per_block) {
        for (BasisCode c : ir.measure.accepting) {
            p_acc += std::norm(psi[c]);
        }
    }
    return p_acc;
}

std::size_t gate_count(const CircuitIR &ir, std::string_view word) {
    auto count = [&](char label) {
        const CircuitBlock &b = ir.block(label);
        if (!b.factors) {
            throw ValidationError("circuit blocks are not decomposed");
        }
        return b.factors->size();
    };
    std::size_t total = count(kStartSymbol) + count(kEndSymbol);
    for (char c : word) {
        total += count(c);
    }
    return total;
}

GateStats gate_stats(const CircuitIR &ir, std::size_t max_length, std::optional<char> symbol) {
    if (ir.alphabet.empty()) {
        throw ValidationError("circuit has an empty input alphabet");
    }
    const char s = symbol.value_or(ir.alphabet.front());
    GateStats out;
    for (const auto &b : ir.blocks) {
        if (!b.factors) {
            throw ValidationError("circuit blocks are not decomposed");
        }
        out.per_block.push_back({b.label, b.factors->size()});
    }
    for (std::size_t len = 0; len <= max_length; ++len) {
        out.by_length.push_back({len, gate_count(ir, std::string(len, s))});
    }
    return out;
}

void write_gate_stats_csv(std::ostream &out, const GateStats &stats) {
    out << "scope,key,factors\n";
    for (const auto &b : stats.per_block) {
        out << "block," << b.label << ',' << b.factors << '\n';
    }
    for (const auto &l : stats.by_length) {
        out << "length," << l.length << ',' << l.factors << '\n';
    }
}

}  // namespace qfl
