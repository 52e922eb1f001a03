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

#include "qfl/noisesim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "qfl/error.hpp"
#include "qfl/rng.hpp"

namespace qfl {

void NoiseModel::validate() const {
    if (!(eta_g >= 0.0 && eta_g <= 1.0) || !(eta_r >= 0.0 && eta_r <= 1.0)) {
        throw ValidationError("noise rates eta_g and eta_r must lie in [0, 1]");
    }
}

const ComplexMatrix &EmbeddedQfa::unitary(char symbol) const {
    auto it = unitaries.find(symbol);
    if (it == unitaries.end()) {
        throw ValidationError("unknown symbol '" + std::string(1, symbol) + "'");
    }
    return it->second;
}

EmbeddedQfa embed(const Qfa &m, const StateMapping &mapping) {
    mapping.validate();
    const SemiQfa &semi = semi_of(m);
    if (mapping.states != semi.states()) {
        throw ValidationError("mapping does not cover the automaton's states in declaration order");
    }
    EmbeddedQfa out;
    out.qubits = mapping.qubits;
    out.measure_many = std::holds_alternative<MmQfa>(m);
    out.alphabet = semi.alphabet();
    out.mapping = mapping;
    out.classes = classify_codes(m, mapping);
    out.initial_code =
        mapping.codes[std::visit([](const auto &x) { return x.initial_index(); }, m)];
    if (!out.measure_many) {
        // Measure-once machines have no rejecting halt; their non-accepting
        // states only matter at read-out, where they reject.
        for (auto &c : out.classes) {
            if (c == CodeClass::kNonHalting) {
                c = CodeClass::kRejecting;
            }
        }
    }
    const std::size_t dim = out.dim();
    for (const auto &[symbol, u] : semi.unitaries()) {
        ComplexMatrix lifted = ComplexMatrix::identity(dim);
        for (BasisCode code : mapping.codes) {
            lifted(code, code) = 0.0;
        }
        for (std::size_t r = 0; r < semi.size(); ++r) {
            for (std::size_t c = 0; c < semi.size(); ++c) {
                lifted(mapping.codes[r], mapping.codes[c]) = u(r, c);
            }
        }
        out.unitaries.emplace(symbol, std::move(lifted));
    }
    return out;
}

namespace {

std::string framed(const EmbeddedQfa &e, std::string_view word) {
    std::string tape(1, kStartSymbol);
    for (char c : word) {
        if (e.alphabet.find(c) == std::string::npos) {
            throw ValidationError("unknown symbol '" + std::string(1, c) + "' in input");
        }
        tape += c;
    }
    tape += kEndSymbol;
    return tape;
}

// Role of a code in the mid-string three-outcome measurement.
enum class MidRole : std::uint8_t { kAccept, kReject, kContinue };

std::vector<MidRole> mid_roles(const EmbeddedQfa &e, UnmappedPolicy::Mid mid) {
    std::vector<MidRole> out(e.dim(), MidRole::kContinue);
    for (std::size_t c = 0; c < e.dim(); ++c) {
        switch (e.classes[c]) {
            case CodeClass::kAccepting:
                out[c] = MidRole::kAccept;
                break;
            case CodeClass::kRejecting:
                out[c] = MidRole::kReject;
                break;
            case CodeClass::kUnmapped:
                out[c] = mid == UnmappedPolicy::Mid::kReject ? MidRole::kReject : MidRole::kContinue;
                break;
            case CodeClass::kNonHalting:
                break;
        }
    }
    return out;
}

}  // namespace

double embedded_accept_probability(const EmbeddedQfa &e, std::string_view word, UnmappedPolicy::Mid mid) {
    const std::string tape = framed(e, word);
    ComplexVector psi = ComplexVector::basis(e.dim(), e.initial_code);
    if (!e.measure_many) {
        for (char c : tape) {
            psi = apply(e.unitary(c), psi);
        }
        double p = 0.0;
        for (std::size_t c = 0; c < e.dim(); ++c) {
            if (e.classes[c] == CodeClass::kAccepting) {
                p += std::norm(psi[c]);
            }
        }
        return p;
    }
    const std::vector<MidRole> roles = mid_roles(e, mid);
    double p_acc = 0.0;
    for (char c : tape) {
        psi = apply(e.unitary(c), psi);
        for (std::size_t i = 0; i < e.dim(); ++i) {
            if (roles[i] == MidRole::kAccept) {
                p_acc += std::norm(psi[i]);
            }
            if (roles[i] != MidRole::kContinue) {
                psi[i] = 0.0;
            }
        }
    }
    return p_acc;
}

namespace {

constexpr std::uint64_t kNever = std::numeric_limits<std::uint64_t>::max();
// Continuation probabilities below this are rounding noise; the shot halts.
constexpr double kSurvivalFloor = 1e-14;

struct SparseBlock {
    bool identity = true;
    std::vector<std::uint32_t> row_begin;
    std::vector<std::uint32_t> cols;
    std::vector<Complex> values;
};

SparseBlock sparsify(const ComplexMatrix &m) {
    SparseBlock out;
    out.row_begin.push_back(0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const Complex v = m(r, c);
            if (v != Complex{}) {
                out.cols.push_back(static_cast<std::uint32_t>(c));
                out.values.push_back(v);
            }
            if (v != (r == c ? Complex{1.0} : Complex{})) {
                out.identity = false;
            }
        }
        out.row_begin.push_back(static_cast<std::uint32_t>(out.cols.size()));
    }
    return out;
}

class GeometricFlips {
   public:
    explicit GeometricFlips(double eta) : eta_(eta), log_keep_(eta > 0.0 && eta < 1.0 ? std::log1p(-eta) : 0.0) {}

    /// Number of flip-free slots before the next flip.
    std::uint64_t skip(SplitMix64 &rng) const {
        if (eta_ <= 0.0) {
            return kNever;
        }
        if (eta_ >= 1.0) {
            return 0;
        }
        const double k = std::floor(std::log1p(-rng.uniform()) / log_keep_);
        return k >= 1e18 ? kNever : static_cast<std::uint64_t>(k);
    }

   private:
    double eta_;
    double log_keep_;
};

struct Workspace {
    std::vector<Complex> psi;
    std::vector<Complex> scratch;
};

class ShotEngine {
   public:
    ShotEngine(const EmbeddedQfa &e, std::string_view word, const NoiseModel &noise, UnmappedPolicy policy)
        : e_(e),
          noise_(noise),
          policy_(policy),
          roles_(mid_roles(e, policy.mid)),
          gate_flips_(noise.eta_g),
          readout_flips_(noise.eta_r) {
        noise.validate();
        const std::string tape = framed(e, word);
        for (const auto &[symbol, u] : e.unitaries) {
            blocks_.emplace(symbol, sparsify(u));
        }
        for (char c : tape) {
            tape_.push_back(&blocks_.at(c));
        }
        build_prefix();
    }

    /// Outcome is kAccepting, kRejecting or kUnmapped.
    CodeClass run(std::uint64_t shot, Workspace &ws, std::vector<double> *norms) const {
        SplitMix64 rng = SplitMix64::substream(noise_.seed, shot);
        const std::size_t dim = e_.dim();
        const std::uint64_t n = static_cast<std::uint64_t>(e_.qubits);
        ws.psi.resize(dim);
        ws.scratch.resize(dim);

        std::uint64_t next_flip = gate_flips_.skip(rng);
        bool live = false;  // false: state equals prefix_[b]
        for (std::size_t b = 0; b < tape_.size(); ++b) {
            if (live && !tape_[b]->identity) {
                multiply(*tape_[b], ws.psi, ws.scratch);
                ws.psi.swap(ws.scratch);
            }
            const std::uint64_t block_end = (b + 1) * n;
            while (next_flip < block_end) {
                if (!live) {
                    std::copy(prefix_[b].begin(), prefix_[b].end(), ws.psi.begin());
                    live = true;
                }
                const BasisCode mask = qubit_mask(static_cast<int>(next_flip - b * n), e_.qubits);
                for (std::size_t c = 0; c < dim; ++c) {
                    if (c < (c ^ mask)) {
                        std::swap(ws.psi[c], ws.psi[c ^ mask]);
                    }
                }
                const std::uint64_t gap = gate_flips_.skip(rng);
                next_flip = gap == kNever ? kNever : next_flip + 1 + gap;
            }
            if (e_.measure_many) {
                double pa = 0.0;
                double pr = 0.0;
                if (live) {
                    for (std::size_t c = 0; c < dim; ++c) {
                        const double w = std::norm(ws.psi[c]);
                        if (roles_[c] == MidRole::kAccept) {
                            pa += w;
                        } else if (roles_[c] == MidRole::kReject) {
                            pr += w;
                        }
                    }
                } else {
                    pa = prefix_acc_[b];
                    pr = prefix_rej_[b];
                }
                double pn = std::max(0.0, 1.0 - pa - pr);
                if (pn < kSurvivalFloor) {
                    pn = 0.0;
                }
                const double u = rng.uniform() * (pa + pr + pn);
                if (u < pa + pr) {
                    const MidRole halt = u < pa ? MidRole::kAccept : MidRole::kReject;
                    const std::span<const Complex> state = live ? std::span<const Complex>(ws.psi) : prefix_[b];
                    if (norms) {
                        norms->push_back(1.0);
                    }
                    return read_out(state, halt, rng);
                }
                if (live) {
                    double keep = 0.0;
                    for (std::size_t c = 0; c < dim; ++c) {
                        if (roles_[c] != MidRole::kContinue) {
                            ws.psi[c] = 0.0;
                        } else {
                            keep += std::norm(ws.psi[c]);
                        }
                    }
                    const double scale = 1.0 / std::sqrt(keep);
                    for (auto &z : ws.psi) {
                        z *= scale;
                    }
                }
            }
            if (norms) {
                norms->push_back(norm_of(live ? std::span<const Complex>(ws.psi) : prefix_[b]));
            }
        }
        if (e_.measure_many) {
            return CodeClass::kRejecting;
        }
        const std::span<const Complex> final_state =
            live ? std::span<const Complex>(ws.psi) : std::span<const Complex>(prefix_.back());
        return read_out(final_state, std::nullopt, rng);
    }

   private:
    static double norm_of(std::span<const Complex> v) {
        double t = 0.0;
        for (const auto &z : v) {
            t += std::norm(z);
        }
        return std::sqrt(t);
    }

    static void multiply(const SparseBlock &m, std::span<const Complex> in, std::span<Complex> out) {
        const std::size_t rows = m.row_begin.size() - 1;
        for (std::size_t r = 0; r < rows; ++r) {
            Complex acc{};
            for (std::uint32_t k = m.row_begin[r]; k < m.row_begin[r + 1]; ++k) {
                acc += m.values[k] * in[m.cols[k]];
            }
            out[r] = acc;
        }
    }

    // Noiseless trajectory conditioned on not having halted: prefix_[b] is the
    // normalised state right after block b's unitary.
    void build_prefix() {
        const std::size_t dim = e_.dim();
        std::vector<Complex> state(dim);
        state[e_.initial_code] = 1.0;
        std::vector<Complex> next(dim);
        for (const SparseBlock *block : tape_) {
            multiply(*block, state, next);
            double pa = 0.0;
            double pr = 0.0;
            double pn = 0.0;
            for (std::size_t c = 0; c < dim; ++c) {
                const double w = std::norm(next[c]);
                if (!e_.measure_many || roles_[c] == MidRole::kContinue) {
                    pn += w;
                } else if (roles_[c] == MidRole::kAccept) {
                    pa += w;
                } else {
                    pr += w;
                }
            }
            const double total = pa + pr + pn;
            for (auto &z : next) {
                z /= std::sqrt(total);
            }
            prefix_.push_back(next);
            prefix_acc_.push_back(pa / total);
            prefix_rej_.push_back(pr / total);
            if (e_.measure_many) {
                if (pn / total < kSurvivalFloor) {
                    break;  // every shot halts here; later prefixes are unreachable
                }
                const double scale = std::sqrt(total / pn);
                for (std::size_t c = 0; c < dim; ++c) {
                    state[c] = roles_[c] == MidRole::kContinue ? next[c] * scale : Complex{};
                }
            } else {
                state = next;
            }
        }
    }

    // Samples a code from |state|^2 (restricted to one halting role when
    // given), applies read-out flips and classifies the result.
    CodeClass read_out(std::span<const Complex> state, std::optional<MidRole> restrict_to, SplitMix64 &rng) const {
        const std::size_t dim = e_.dim();
        auto eligible = [&](std::size_t c) { return !restrict_to || roles_[c] == *restrict_to; };
        double total = 0.0;
        for (std::size_t c = 0; c < dim; ++c) {
            if (eligible(c)) {
                total += std::norm(state[c]);
            }
        }
        const double u = rng.uniform() * total;
        double acc = 0.0;
        std::size_t picked = dim;
        for (std::size_t c = 0; c < dim; ++c) {
            if (!eligible(c)) {
                continue;
            }
            const double w = std::norm(state[c]);
            if (w == 0.0) {
                continue;
            }
            picked = c;
            acc += w;
            if (u < acc) {
                break;
            }
        }
        if (picked == dim) {
            picked = e_.initial_code;  // unreachable unless the state is zero
        }
        BasisCode code = static_cast<BasisCode>(picked);
        for (std::uint64_t q = readout_flips_.skip(rng); q < static_cast<std::uint64_t>(e_.qubits);) {
            code ^= qubit_mask(static_cast<int>(q), e_.qubits);
            const std::uint64_t gap = readout_flips_.skip(rng);
            q = gap == kNever ? kNever : q + 1 + gap;
        }
        switch (e_.classes[code]) {
            case CodeClass::kAccepting:
                return CodeClass::kAccepting;
            case CodeClass::kUnmapped:
                return policy_.final == UnmappedPolicy::Final::kCountUnmapped ? CodeClass::kUnmapped
                                                                              : CodeClass::kRejecting;
            default:
                return CodeClass::kRejecting;
        }
    }

    const EmbeddedQfa &e_;
    NoiseModel noise_;
    UnmappedPolicy policy_;
    std::vector<MidRole> roles_;
    GeometricFlips gate_flips_;
    GeometricFlips readout_flips_;
    std::map<char, SparseBlock> blocks_;
    std::vector<const SparseBlock *> tape_;
    std::vector<std::vector<Complex>> prefix_;
    std::vector<double> prefix_acc_;
    std::vector<double> prefix_rej_;
};

void tally(ShotResult &r, CodeClass outcome) {
    switch (outcome) {
        case CodeClass::kAccepting:
            ++r.accepted;
            break;
        case CodeClass::kUnmapped:
            ++r.unmapped_outcomes;
            break;
        default:
            ++r.rejected;
            break;
    }
}

}  // namespace

ShotResult run_shots(const EmbeddedQfa &e, std::string_view word, const NoiseModel &noise, std::int64_t shots,
                     UnmappedPolicy policy, unsigned threads) {
    if (shots < 1) {
        throw ValidationError("shot count must be at least 1");
    }
    const ShotEngine engine(e, word, noise, policy);
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<std::int64_t>(shots, 256))));
    std::vector<ShotResult> partial(threads);
    auto work = [&](unsigned t) {
        Workspace ws;
        const std::int64_t begin = shots * t / threads;
        const std::int64_t end = shots * (t + 1) / threads;
        for (std::int64_t s = begin; s < end; ++s) {
            tally(partial[t], engine.run(static_cast<std::uint64_t>(s), ws, nullptr));
        }
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(work, t);
        }
        for (auto &th : pool) {
            th.join();
        }
    }
    ShotResult out;
    out.shots = shots;
    for (const auto &p : partial) {
        out.accepted += p.accepted;
        out.rejected += p.rejected;
        out.unmapped_outcomes += p.unmapped_outcomes;
    }
    return out;
}

CodeClass trace_shot(const EmbeddedQfa &e, std::string_view word, const NoiseModel &noise, std::uint64_t shot_index,
                     std::vector<double> &norms, UnmappedPolicy policy) {
    const ShotEngine engine(e, word, noise, policy);
    Workspace ws;
    norms.clear();
    return engine.run(shot_index, ws, &norms);
}

double mape(std::span<const double> ideal, std::span<const double> measured) {
    if (ideal.empty()) {
        throw ValidationError("MAPE needs at least one value");
    }
    if (ideal.size() != measured.size()) {
        throw ValidationError("MAPE inputs differ in length");
    }
    double total = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < ideal.size(); ++i) {
        if (ideal[i] < kMapeFloor) {
            continue;
        }
        total += std::abs((ideal[i] - measured[i]) / ideal[i]);
        ++used;
    }
    if (used == 0) {
        throw ValidationError("MAPE: every ideal probability is below the exclusion floor");
    }
    return 100.0 * total / static_cast<double>(used);
}

std::size_t mape_excluded_count(std::span<const double> ideal) {
    return static_cast<std::size_t>(
        std::count_if(ideal.begin(), ideal.end(), [](double p) { return p < kMapeFloor; }));
}

}  // namespace qfl
