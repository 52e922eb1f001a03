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

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qfl {

using Complex = std::complex<double>;

/// Default tolerance used wherever a matrix is validated as unitary.
inline constexpr double kUnitaryTol = 1e-9;

/// Builds a complex number, rejecting NaN or infinite components.
Complex checked_complex(double re, double im);

class ComplexVector {
   public:
    explicit ComplexVector(std::size_t dim);
    explicit ComplexVector(std::vector<Complex> entries);
    ComplexVector(std::initializer_list<Complex> entries);

    /// The computational basis ket |index> of the given dimension.
    static ComplexVector basis(std::size_t dim, std::size_t index);

    std::size_t dim() const { return entries_.size(); }
    Complex &operator[](std::size_t i) { return entries_[i]; }
    const Complex &operator[](std::size_t i) const { return entries_[i]; }
    std::span<const Complex> entries() const { return entries_; }
    std::span<Complex> entries() { return entries_; }

    double norm_squared() const;
    double length() const;

   private:
    std::vector<Complex> entries_;
};

/// Dense row-major complex matrix.
class ComplexMatrix {
   public:
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> row_major);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Complex &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    std::span<const Complex> data() const { return data_; }

    ComplexMatrix adjoint() const;
    ComplexMatrix transpose() const;

    /// Largest entrywise modulus of (this - other); dimensions must agree.
    double max_abs_diff(const ComplexMatrix &other) const;

   private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<Complex> data_;
};

ComplexMatrix mat_mul(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexVector apply(const ComplexMatrix &m, const ComplexVector &v);

/// Block-diagonal [[a, 0], [0, b]].
ComplexMatrix direct_sum(const ComplexMatrix &a, const ComplexMatrix &b);

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexVector kron(const ComplexVector &x, const ComplexVector &y);

/// Zero-one diagonal projector onto the given basis indices.
ComplexMatrix projection(std::size_t dim, std::span<const std::size_t> indices);

/// |P_S v|^2 without materialising the projector.
double projected_norm_squared(const ComplexVector &v, std::span<const std::size_t> indices);

/// True iff max |m^dagger m - I| <= tol.
bool is_unitary(const ComplexMatrix &m, double tol = kUnitaryTol);

/// Planar rotation [[cos t, -sin t], [sin t, cos t]].
ComplexMatrix rotation(double angle);

inline ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) { return mat_mul(a, b); }
inline ComplexVector operator*(const ComplexMatrix &m, const ComplexVector &v) { return apply(m, v); }

}  // namespace qfl
