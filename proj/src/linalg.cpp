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

#include "qfl/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qfl/error.hpp"

namespace qfl {

namespace {

void require_finite(std::span<const Complex> values) {
    for (const auto &z : values) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw ValidationError("complex entry is not finite");
        }
    }
}

}  // namespace

Complex checked_complex(double re, double im) {
    if (!std::isfinite(re) || !std::isfinite(im)) {
        throw ValidationError("complex entry is not finite");
    }
    return {re, im};
}

ComplexVector::ComplexVector(std::size_t dim) : entries_(dim) {
    if (dim == 0) {
        throw ValidationError("vector dimension must be positive");
    }
}

ComplexVector::ComplexVector(std::vector<Complex> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw ValidationError("vector dimension must be positive");
    }
    require_finite(entries_);
}

ComplexVector::ComplexVector(std::initializer_list<Complex> entries)
    : ComplexVector(std::vector<Complex>(entries)) {}

ComplexVector ComplexVector::basis(std::size_t dim, std::size_t index) {
    if (index >= dim) {
        throw ValidationError("basis index " + std::to_string(index) + " out of range for dimension " +
                              std::to_string(dim));
    }
    ComplexVector v(dim);
    v[index] = 1.0;
    return v;
}

double ComplexVector::norm_squared() const {
    double total = 0.0;
    for (const auto &z : entries_) {
        total += std::norm(z);
    }
    return total;
}

double ComplexVector::length() const { return std::sqrt(norm_squared()); }

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    if (rows == 0 || cols == 0) {
        throw ValidationError("matrix dimensions must be positive");
    }
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
    if (rows == 0 || cols == 0) {
        throw ValidationError("matrix dimensions must be positive");
    }
    if (data_.size() != rows * cols) {
        throw ValidationError("matrix data has " + std::to_string(data_.size()) + " entries, expected " +
                              std::to_string(rows * cols));
    }
    require_finite(data_);
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : rows_(rows.size()), cols_(rows.size() == 0 ? 0 : rows.begin()->size()) {
    if (rows_ == 0 || cols_ == 0) {
        throw ValidationError("matrix dimensions must be positive");
    }
    data_.reserve(rows_ * cols_);
    for (const auto &row : rows) {
        if (row.size() != cols_) {
            throw ValidationError("ragged matrix literal");
        }
        data_.insert(data_.end(), row.begin(), row.end());
    }
    require_finite(data_);
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = (*this)(r, c);
        }
    }
    return out;
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix &other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw ValidationError("max_abs_diff: dimension mismatch");
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        worst = std::max(worst, std::abs(data_[i] - other.data_[i]));
    }
    return worst;
}

ComplexMatrix mat_mul(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (a.cols() != b.rows()) {
        throw ValidationError("mat_mul: " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " times " +
                              std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    ComplexMatrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{}) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                out(i, j) += aik * b(k, j);
            }
        }
    }
    return out;
}

ComplexVector apply(const ComplexMatrix &m, const ComplexVector &v) {
    if (m.cols() != v.dim()) {
        throw ValidationError("apply: matrix has " + std::to_string(m.cols()) + " columns, vector has dimension " +
                              std::to_string(v.dim()));
    }
    ComplexVector out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        Complex acc{};
        for (std::size_t c = 0; c < m.cols(); ++c) {
            acc += m(r, c) * v[c];
        }
        out[r] = acc;
    }
    return out;
}

ComplexMatrix direct_sum(const ComplexMatrix &a, const ComplexMatrix &b) {
    if (!a.is_square() || !b.is_square()) {
        throw ValidationError("direct_sum: operands must be square");
    }
    const std::size_t n = a.rows();
    ComplexMatrix out(n + b.rows(), n + b.rows());
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            out(r, c) = a(r, c);
        }
    }
    for (std::size_t r = 0; r < b.rows(); ++r) {
        for (std::size_t c = 0; c < b.cols(); ++c) {
            out(n + r, n + c) = b(r, c);
        }
    }
    return out;
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Complex s = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = s * b(br, bc);
                }
            }
        }
    }
    return out;
}

ComplexVector kron(const ComplexVector &x, const ComplexVector &y) {
    ComplexVector out(x.dim() * y.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) {
        for (std::size_t j = 0; j < y.dim(); ++j) {
            out[i * y.dim() + j] = x[i] * y[j];
        }
    }
    return out;
}

ComplexMatrix projection(std::size_t dim, std::span<const std::size_t> indices) {
    ComplexMatrix out(dim, dim);
    for (std::size_t i : indices) {
        if (i >= dim) {
            throw ValidationError("projection: index " + std::to_string(i) + " out of range for dimension " +
                                  std::to_string(dim));
        }
        out(i, i) = 1.0;
    }
    return out;
}

double projected_norm_squared(const ComplexVector &v, std::span<const std::size_t> indices) {
    double total = 0.0;
    for (std::size_t i : indices) {
        total += std::norm(v[i]);
    }
    return total;
}

bool is_unitary(const ComplexMatrix &m, double tol) {
    if (!m.is_square()) {
        throw ValidationError("is_unitary: matrix is not square");
    }
    if (!(tol > 0.0)) {
        throw ValidationError("is_unitary: tolerance must be positive");
    }
    const std::size_t n = m.rows();
    // (m^dagger m)_{ij} = sum_k conj(m_ki) m_kj
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Complex acc{};
            for (std::size_t k = 0; k < n; ++k) {
                acc += std::conj(m(k, i)) * m(k, j);
            }
            if (i == j) {
                acc -= 1.0;
            }
            if (std::abs(acc) > tol) {
                return false;
            }
        }
    }
    return true;
}

ComplexMatrix rotation(double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return ComplexMatrix{{c, -s}, {s, c}};
}

}  // namespace qfl
