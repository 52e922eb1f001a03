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

#include "qfl/blocks.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "qfl/error.hpp"
#include "qfl/rng.hpp"

namespace qfl {

namespace {

constexpr int kDrawsPerSize = 64;
constexpr int kMaxDoublings = 6;

std::string unary_alphabet() { return std::string(1, kUnarySymbol); }

void require_open_interval(double x, const char *name) {
    if (!(x > 0.0 && x < std::numbers::pi / 2)) {
        throw ValidationError(std::string(name) + " must lie in the open interval (0, pi/2)");
    }
}

}  // namespace

MoQfa build_mod_n(int n) {
    if (n < 1) {
        throw ValidationError("MOD_n requires n >= 1");
    }
    std::map<char, ComplexMatrix> u;
    u.emplace(kStartSymbol, ComplexMatrix::identity(2));
    u.emplace(kUnarySymbol, rotation(std::numbers::pi / n));
    u.emplace(kEndSymbol, ComplexMatrix::identity(2));
    return MoQfa(SemiQfa({"q0", "q1"}, unary_alphabet(), std::move(u)), "q0", {"q0"});
}

bool is_prime(int n) {
    if (n < 2) {
        return false;
    }
    for (int f = 2; static_cast<long long>(f) * f <= n; ++f) {
        if (n % f == 0) {
            return false;
        }
    }
    return true;
}

double mod_p_acceptance(const std::vector<int> &coefficients, int p, long long j) {
    double total = 0.0;
    for (int k : coefficients) {
        // Reduce k*j mod 2p first so large j keeps full precision.
        const long long r = (static_cast<long long>(k) * j) % (2LL * p);
        const double c = std::cos(std::numbers::pi * static_cast<double>(r) / p);
        total += c * c;
    }
    return total / static_cast<double>(coefficients.size());
}

namespace {

double worst_non_member(const std::vector<int> &coefficients, int p) {
    double worst = 0.0;
    for (int j = 1; j < p; ++j) {
        worst = std::max(worst, mod_p_acceptance(coefficients, p, j));
    }
    return worst;
}

MoQfa mod_p_machine(const std::vector<int> &coefficients, int p) {
    const std::size_t d = coefficients.size();
    const std::size_t n = 2 * d;
    std::vector<std::string> states;
    for (std::size_t i = 0; i < d; ++i) {
        states.push_back("s" + std::to_string(i));
    }
    for (std::size_t i = 0; i < d; ++i) {
        states.push_back("t" + std::to_string(i));
    }

    // Householder reflection H = I - 2 v v^T / (v^T v), v = e_0 - u, maps e_0
    // onto u = (1/sqrt d) sum_i e_{s_i}; it is real symmetric and involutive.
    ComplexMatrix spread = ComplexMatrix::identity(n);
    if (d > 1) {
        const double amp = 1.0 / std::sqrt(static_cast<double>(d));
        std::vector<double> v(n, 0.0);
        for (std::size_t i = 0; i < d; ++i) {
            v[i] = -amp;
        }
        v[0] += 1.0;
        double vv = 0.0;
        for (double x : v) {
            vv += x * x;
        }
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t c = 0; c < n; ++c) {
                spread(r, c) -= 2.0 * v[r] * v[c] / vv;
            }
        }
    }

    ComplexMatrix step(n, n);
    for (std::size_t i = 0; i < d; ++i) {
        const double angle = std::numbers::pi * coefficients[i] / p;
        const double c = std::cos(angle);
        const double s = std::sin(angle);
        step(i, i) = c;
        step(i, d + i) = -s;
        step(d + i, i) = s;
        step(d + i, d + i) = c;
    }

    std::map<char, ComplexMatrix> u;
    u.emplace(kStartSymbol, std::move(spread));
    u.emplace(kUnarySymbol, std::move(step));
    u.emplace(kEndSymbol, ComplexMatrix::identity(n));
    std::vector<std::string> accepting(states.begin(), states.begin() + static_cast<std::ptrdiff_t>(d));
    std::string initial = states[0];
    return MoQfa(SemiQfa(std::move(states), unary_alphabet(), std::move(u)), std::move(initial),
                 std::move(accepting));
}

}  // namespace

ModPBlock build_mod_p(int p, std::uint64_t seed, std::optional<int> d) {
    if (p < 3 || !is_prime(p)) {
        throw ValidationError("MOD_p requires a prime p >= 3, got " + std::to_string(p));
    }
    int size = d.value_or(static_cast<int>(std::ceil(8.0 * std::log(static_cast<double>(p)))));
    if (size < 1) {
        throw ValidationError("MOD_p block count d must be positive");
    }

    SplitMix64 rng(seed);
    double best = 1.0;
    for (int round = 0; round <= kMaxDoublings; ++round, size *= 2) {
        for (int draw = 0; draw < kDrawsPerSize; ++draw) {
            std::vector<int> ks(static_cast<std::size_t>(size));
            for (int &k : ks) {
                k = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(p - 1)));
            }
            const double worst = worst_non_member(ks, p);
            best = std::min(best, worst);
            if (worst <= kModPMaxNonMember) {
                ModPCoefficients coeffs{p, ks, worst};
                return ModPBlock{mod_p_machine(ks, p), std::move(coeffs)};
            }
        }
    }
    std::ostringstream msg;
    msg << "MOD_" << p << ": no coefficient set reached the 1/8 margin; best max non-member probability " << best;
    throw ValidationError(msg.str());
}

EquParams equ_params(int k, double theta, double phi) {
    if (k < 1) {
        throw ValidationError("EQU_k requires k >= 1");
    }
    require_open_interval(theta, "theta");
    require_open_interval(phi, "phi");
    const double ct = std::cos(theta);
    const double st = std::sin(theta);
    const double cp = std::cos(phi);
    const double cpk = std::pow(cp, k);
    EquParams out;
    out.k = k;
    out.theta = theta;
    out.phi = phi;
    out.c_k = cpk * cpk * ct * ct + st * st;
    const double gap = ct * st * cpk * (1.0 - cp);
    out.margin_bound = gap * gap / out.c_k;
    out.margin = out.margin_bound * (1.0 - 1e-9);
    return out;
}

EquBlock build_equ(int k, double theta, double phi) { return build_equ(equ_params(k, theta, phi)); }

EquBlock build_equ(const EquParams &params) {
    const EquParams checked = equ_params(params.k, params.theta, params.phi);
    const double ct = std::cos(checked.theta);
    const double st = std::sin(checked.theta);
    const double cp = std::cos(checked.phi);
    const double sp = std::sin(checked.phi);
    const double cpk_ct = std::pow(cp, checked.k) * ct;

    ComplexMatrix start{{ct, -st, 0, 0}, {st, ct, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}};
    ComplexMatrix step{{cp, 0, -sp, 0}, {0, 1, 0, 0}, {sp, 0, cp, 0}, {0, 0, 0, 1}};

    // [[0, A^dagger], [A, 0]] / sqrt(C_k) with A = [[cpk_ct, st], [-st, cpk_ct]];
    // the columns of A have squared length C_k.
    const double s = 1.0 / std::sqrt(checked.c_k);
    ComplexMatrix end{{0, 0, cpk_ct * s, -st * s},
                      {0, 0, st * s, cpk_ct * s},
                      {cpk_ct * s, st * s, 0, 0},
                      {-st * s, cpk_ct * s, 0, 0}};
    if (!is_unitary(end, kUnitaryTol)) {
        throw std::logic_error("EQU end-marker matrix failed the unitarity check");
    }

    std::map<char, ComplexMatrix> u;
    u.emplace(kStartSymbol, std::move(start));
    u.emplace(kUnarySymbol, std::move(step));
    u.emplace(kEndSymbol, std::move(end));
    MmQfa m(SemiQfa({"q0", "q1", "q_acc", "q_rej"}, unary_alphabet(), std::move(u)), "q0", {"q_acc"}, {"q_rej"});
    return EquBlock{std::move(m), checked};
}

OptimalRoot solve_optimal_omega(int k, double residual_tol) {
    if (k < 1) {
        throw ValidationError("EQU_k requires k >= 1");
    }
    // g is strictly increasing on [0, 1] with g(0) = -k and g(1) = 2.
    auto g = [k](double w) { return std::pow(w, k + 1) + (k + 1) * w - k; };
    double lo = 0.0;
    double hi = 1.0;
    OptimalRoot out;
    for (out.iterations = 0; out.iterations < 200; ++out.iterations) {
        const double mid = 0.5 * (lo + hi);
        const double value = g(mid);
        out.omega = mid;
        out.residual = std::abs(value);
        if (out.residual <= residual_tol || mid == lo || mid == hi) {
            break;
        }
        (value < 0.0 ? lo : hi) = mid;
    }
    return out;
}

EquParams optimal_equ_params(int k) {
    const OptimalRoot root = solve_optimal_omega(k);
    const double theta = std::atan(std::sqrt(std::pow(root.omega, k)));
    const double phi = std::acos(root.omega);
    return equ_params(k, theta, phi);
}

double repetitions_for_margin(int k, double theta, double phi) {
    require_open_interval(theta, "theta");
    require_open_interval(phi, "phi");
    const double a = std::cos(theta);
    const double b = std::cos(phi);
    const double one_minus_b_sq = (1.0 - b) * (1.0 - b);
    return 1.0 / ((1.0 - a * a) * one_minus_b_sq) + 1.0 / (a * a * std::pow(b, 2 * k) * one_minus_b_sq) - 1.0;
}

}  // namespace qfl
