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

// Building-block languages over the unary alphabet {a}:
//   MOD_n = { a^j : n | j }   two-state measure-once automaton
//   MOD_p = { a^j : p | j }   O(log p)-state measure-once automaton, margin 1/8
//   EQU_k = { a^k }           four-state co-end-decisive measure-many automaton

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qfl/automata.hpp"

namespace qfl {

inline constexpr char kUnarySymbol = 'a';

/// Two states {q0, q1}; U_a rotates by pi/n, U_# = U_$ = I, accepting {q0}.
/// f(a^j) = cos^2(pi j / n).
MoQfa build_mod_n(int n);

struct ModPCoefficients {
    int p = 0;
    /// Rotation multipliers k_i in [1, p-1]; block i turns by pi k_i / p per 'a'.
    std::vector<int> coefficients;
    /// max_{j in [1, p-1]} mean_i cos^2(pi k_i j / p), checked exhaustively.
    double max_non_member_probability = 0.0;

    std::size_t d() const { return coefficients.size(); }
};

struct ModPBlock {
    MoQfa machine;
    ModPCoefficients coefficients;
};

/// Largest acceptance probability allowed on non-members of MOD_p.
inline constexpr double kModPMaxNonMember = 7.0 / 8.0;

/// Searches seeded random coefficient sets until the 1/8 margin is verified.
/// Starts at `d` (default ceil(8 ln p)) and doubles d after 64 failed draws.
///
/// States are s0..s{d-1} (block starts, accepting) followed by their partners
/// t0..t{d-1}. U_# is the Householder reflection sending s0 to the uniform
/// superposition of the s_i, U_a rotates each (s_i, t_i) pair, U_$ = I.
ModPBlock build_mod_p(int p, std::uint64_t seed = 0, std::optional<int> d = std::nullopt);

bool is_prime(int n);

/// mean_i cos^2(pi k_i j / p).
double mod_p_acceptance(const std::vector<int> &coefficients, int p, long long j);

struct EquParams {
    int k = 0;
    double theta = 0.0;
    double phi = 0.0;
    /// cos^{2k}(phi) cos^2(theta) + sin^2(theta).
    double c_k = 0.0;
    /// C_k^{-1} (cos theta sin theta cos^k phi (1 - cos phi))^2; every
    /// non-member is accepted with probability at most 1 - margin_bound.
    double margin_bound = 0.0;
    /// Guaranteed strict margin: margin_bound shrunk by a relative 1e-9.
    double margin = 0.0;
};

struct EquBlock {
    MmQfa machine;
    EquParams params;
};

EquParams equ_params(int k, double theta, double phi);

/// States (q0, q1, q_acc, q_rej), accepting {q_acc}, rejecting {q_rej}.
EquBlock build_equ(int k, double theta, double phi);
EquBlock build_equ(const EquParams &params);

struct OptimalRoot {
    double omega = 0.0;
    double residual = 0.0;
    int iterations = 0;
};

/// Unique root in (0, 1) of omega^{k+1} + (k+1) omega - k, by bisection.
OptimalRoot solve_optimal_omega(int k, double residual_tol = 1e-12);

/// Margin-maximising parameters: theta = atan(sqrt(omega^k)), phi = acos(omega).
EquParams optimal_equ_params(int k);

/// Repetition count N with f(a^{k+1}) = (1 + 1/N)^{-1}:
///   N = 1/((1-a^2)(1-b)^2) + 1/(a^2 b^{2k} (1-b)^2) - 1,  a = cos theta, b = cos phi.
double repetitions_for_margin(int k, double theta, double phi);

}  // namespace qfl
