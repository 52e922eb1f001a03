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

// Language operations on automata. Each operation is realised on the
// stochastic language f(w) = Pr[accept w]:
//
//   complement          f' = 1 - f
//   linear_combination  f' = c1 f_M + c2 f_N
//   hadamard            f' = f_M * f_N
//   inverse homomorphism, word quotient (measure-once only)
//
// Intersection and union of one-sided-error languages are built from these.
// Binary operations prefix state names with "L." and "R.".

#pragma once

#include <map>
#include <optional>
#include <string>

#include "qfl/automata.hpp"

namespace qfl {

enum class QfaKind { kMo, kMm, kMmEndDecisive, kMmCoEndDecisive };
enum class ErrorSide { kPositive, kNegative };

/// Language-class bookkeeping carried alongside a machine. The margin is
/// advisory metadata; membership is only ever checked by sampling.
struct QfaClassTag {
    QfaKind kind = QfaKind::kMo;
    ErrorSide error_side = ErrorSide::kNegative;
    std::optional<double> margin;

    bool operator==(const QfaClassTag &) const = default;
};

std::string to_string(QfaKind kind);
std::string to_string(ErrorSide side);
QfaKind parse_qfa_kind(const std::string &s);
ErrorSide parse_error_side(const std::string &s);

/// Throws if the margin is present but outside (0, 1).
void validate(const QfaClassTag &tag);

MoQfa complement(const MoQfa &m);
MmQfa complement(const MmQfa &m);
Qfa complement(const Qfa &m);
QfaClassTag complement(const QfaClassTag &tag);

/// c1 M (+) c2 N: direct sum of the machines with the start marker followed
/// by a 2x2 mixer that splits |q_init> into sqrt(c1)|q_init> + i sqrt(c2)|p_init>.
MmQfa linear_combination(const MmQfa &m, const MmQfa &n, double c1, double c2);
MoQfa linear_combination(const MoQfa &m, const MoQfa &n, double c1, double c2);

/// Kind is kept when both operands share it; no margin is claimed.
QfaClassTag linear_combination(const QfaClassTag &a, const QfaClassTag &b);

/// Tensor product machine on Q x P with accepting set Q_acc x P_acc.
MoQfa mo_hadamard(const MoQfa &m, const MoQfa &n);

/// Both negative: margin min(e1, e2). Both positive: margin e1 e2.
QfaClassTag hadamard(const QfaClassTag &a, const QfaClassTag &b);

/// Tensor product of two end-decisive machines. Accepting Q_acc x P_acc,
/// non-halting Q_non x P_non, every other pair rejecting. Throws if either
/// operand fails check_end_decisive on its default sample.
MmQfa mm_end_decisive_hadamard(const MmQfa &m, const MmQfa &n);

/// Both operands must recognise their languages with negative one-sided error.
Qfa intersection(const Qfa &m, const Qfa &n);
QfaClassTag intersection(const QfaClassTag &a, const QfaClassTag &b);

/// complement(hadamard(complement m, complement n)). Measure-many operands
/// must be co-end-decisive.
Qfa union_of(const Qfa &m, const Qfa &n);
QfaClassTag union_of(const QfaClassTag &a, const QfaClassTag &b);

/// U'_s = U_{h(s)} for every symbol s of the new alphabet (map keys).
MoQfa mo_inverse_homomorphism(const MoQfa &m, const std::map<char, std::string> &h);

/// Folds the word into the start marker: U'_# = U_w U_#, so f'(x) = f(w x).
MoQfa mo_word_quotient(const MoQfa &m, const std::string &word);

/// Default tag for a loaded machine without class metadata.
QfaClassTag default_tag(const Qfa &m);

}  // namespace qfl
