// Copyright 2026 The qsd Authors
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

// Dense complex matrices for small bipartite systems: Hermitian
// eigendecomposition (cyclic Jacobi), trace norm, partial transpose and
// tensor products.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace qsd {

using Complex = std::complex<double>;

/// Absolute tolerance on max_ij |A_ij - conj(A_ji)| for a matrix to count as Hermitian.
inline constexpr double kHermitianTolerance = 1e-12;

class ComplexMatrix {
   public:
    ComplexMatrix() = default;

    ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows * cols) {
        if (rows == 0 || cols == 0) {
            throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
        }
    }

    /// Row-major entries; size must equal rows * cols.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (rows == 0 || cols == 0) {
            throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
        }
        if (entries_.size() != rows * cols) {
            std::ostringstream msg;
            msg << "ComplexMatrix: " << entries_.size() << " entries given for a " << rows << "x" << cols << " matrix";
            throw std::invalid_argument(msg.str());
        }
    }

    static ComplexMatrix identity(std::size_t n) {
        ComplexMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    static ComplexMatrix diagonal(std::span<const double> values) {
        ComplexMatrix m(values.size(), values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            m(i, i) = values[i];
        }
        return m;
    }

    /// |v><v| for a column vector v.
    static ComplexMatrix outer(std::span<const Complex> v) {
        ComplexMatrix m(v.size(), v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            for (std::size_t j = 0; j < v.size(); ++j) {
                m(i, j) = v[i] * std::conj(v[j]);
            }
        }
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    std::span<const Complex> entries() const { return entries_; }

    ComplexMatrix adjoint() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                out(c, r) = std::conj((*this)(r, c));
            }
        }
        return out;
    }

    ComplexMatrix transpose() const {
        ComplexMatrix out(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = 0; c < cols_; ++c) {
                out(c, r) = (*this)(r, c);
            }
        }
        return out;
    }

    Complex trace() const {
        Complex t = 0.0;
        for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& z : entries_) {
            m = std::max(m, std::abs(z));
        }
        return m;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& z : entries_) {
            s += std::norm(z);
        }
        return std::sqrt(s);
    }

    /// max_ij |A_ij - conj(A_ji)|; only meaningful for square matrices.
    double hermiticity_defect() const {
        double m = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t c = r; c < cols_; ++c) {
                m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
            }
        }
        return m;
    }

    bool is_hermitian(double tol = kHermitianTolerance) const { return is_square() && hermiticity_defect() <= tol; }

    ComplexMatrix& operator+=(const ComplexMatrix& other) {
        require_same_shape(other, "+=");
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            entries_[i] += other.entries_[i];
        }
        return *this;
    }

    ComplexMatrix& operator-=(const ComplexMatrix& other) {
        require_same_shape(other, "-=");
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            entries_[i] -= other.entries_[i];
        }
        return *this;
    }

    ComplexMatrix& operator*=(Complex s) {
        for (auto& z : entries_) {
            z *= s;
        }
        return *this;
    }

    ComplexMatrix& operator/=(Complex s) {
        for (auto& z : entries_) {
            z /= s;
        }
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator/(ComplexMatrix a, Complex s) { return a /= s; }

    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
        if (a.cols_ != b.rows_) {
            std::ostringstream msg;
            msg << "matrix product: " << a.rows_ << "x" << a.cols_ << " times " << b.rows_ << "x" << b.cols_;
            throw std::invalid_argument(msg.str());
        }
        ComplexMatrix out(a.rows_, b.cols_);
        for (std::size_t r = 0; r < a.rows_; ++r) {
            for (std::size_t k = 0; k < a.cols_; ++k) {
                const Complex ark = a(r, k);
                for (std::size_t c = 0; c < b.cols_; ++c) {
                    out(r, c) += ark * b(k, c);
                }
            }
        }
        return out;
    }

    bool operator==(const ComplexMatrix&) const = default;

   private:
    void require_same_shape(const ComplexMatrix& other, const char* op) const {
        if (rows_ != other.rows_ || cols_ != other.cols_) {
            std::ostringstream msg;
            msg << "matrix " << op << ": shape " << rows_ << "x" << cols_ << " vs " << other.rows_ << "x" << other.cols_;
            throw std::invalid_argument(msg.str());
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

/// max_ij |A_ij - B_ij|; shapes must agree.
inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) { return (a - b).max_abs(); }

/// Tensor product, (rows_a * rows_b) x (cols_a * cols_b).
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ra = 0; ra < a.rows(); ++ra) {
        for (std::size_t ca = 0; ca < a.cols(); ++ca) {
            const Complex x = a(ra, ca);
            for (std::size_t rb = 0; rb < b.rows(); ++rb) {
                for (std::size_t cb = 0; cb < b.cols(); ++cb) {
                    out(ra * b.rows() + rb, ca * b.cols() + cb) = x * b(rb, cb);
                }
            }
        }
    }
    return out;
}

inline std::vector<Complex> kron(std::span<const Complex> a, std::span<const Complex> b) {
    std::vector<Complex> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a) {
        for (const auto& y : b) {
            out.push_back(x * y);
        }
    }
    return out;
}

struct Spectrum {
    std::vector<double> eigenvalues;  // ascending
    ComplexMatrix eigenvectors;       // columns, in eigenvalue order
};

namespace detail {

inline void require_hermitian(const ComplexMatrix& a, const char* who) {
    if (!a.is_square()) {
        std::ostringstream msg;
        msg << who << ": matrix is " << a.rows() << "x" << a.cols() << ", not square";
        throw std::invalid_argument(msg.str());
    }
    const double defect = a.hermiticity_defect();
    if (!(defect <= kHermitianTolerance)) {
        std::ostringstream msg;
        msg << who << ": matrix is not Hermitian (max |A_ij - conj(A_ji)| = " << defect << ", tolerance "
            << kHermitianTolerance << ")";
        throw std::invalid_argument(msg.str());
    }
}

inline double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (r != c) {
                s += std::norm(a(r, c));
            }
        }
    }
    return std::sqrt(s);
}

// One complex Jacobi rotation zeroing a(p, q). The unitary is G = D R with
// D = diag(.., conj(e) at q, ..) making a(p, q) real and R the real rotation.
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const Complex apq = a(p, q);
    const double magnitude = std::abs(apq);
    if (magnitude == 0.0) {
        return;
    }
    const Complex phase = apq / magnitude;
    const double theta = (a(q, q).real() - a(p, p).real()) / (2.0 * magnitude);
    double t;
    if (std::abs(theta) > 1e150) {
        t = 0.5 / theta;
    } else {
        t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
    }
    const double c = 1.0 / std::sqrt(t * t + 1.0);
    const double s = t * c;

    const Complex g_pp = c;
    const Complex g_pq = s;
    const Complex g_qp = -s * std::conj(phase);
    const Complex g_qq = c * std::conj(phase);

    const std::size_t n = a.rows();
    for (std::size_t k = 0; k < n; ++k) {
        const Complex akp = a(k, p);
        const Complex akq = a(k, q);
        a(k, p) = akp * g_pp + akq * g_qp;
        a(k, q) = akp * g_pq + akq * g_qq;
    }
    for (std::size_t k = 0; k < n; ++k) {
        const Complex apk = a(p, k);
        const Complex aqk = a(q, k);
        a(p, k) = std::conj(g_pp) * apk + std::conj(g_qp) * aqk;
        a(q, k) = std::conj(g_pq) * apk + std::conj(g_qq) * aqk;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = a(p, p).real();
    a(q, q) = a(q, q).real();

    for (std::size_t k = 0; k < n; ++k) {
        const Complex vkp = v(k, p);
        const Complex vkq = v(k, q);
        v(k, p) = vkp * g_pp + vkq * g_qp;
        v(k, q) = vkp * g_pq + vkq * g_qq;
    }
}

}  // namespace detail

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// Converges when the off-diagonal Frobenius mass drops below 1e-14 times the
/// Frobenius norm of the input; at most 100 sweeps. Eigenvalues come back in
/// ascending order with the matching eigenvectors as columns. The result is a
/// deterministic function of the input bits.
///
/// Throws std::invalid_argument for non-square input or a Hermiticity defect
/// above kHermitianTolerance, and std::runtime_error if the sweep cap is hit.
inline Spectrum hermitian_eig(const ComplexMatrix& input) {
    detail::require_hermitian(input, "hermitian_eig");
    constexpr int kMaxSweeps = 100;
    constexpr double kRelativeOffDiagonal = 1e-14;

    const std::size_t n = input.rows();
    ComplexMatrix a = input;
    ComplexMatrix v = ComplexMatrix::identity(n);
    const double scale = input.frobenius_norm();

    bool converged = false;
    for (int sweep = 0; sweep <= kMaxSweeps; ++sweep) {
        if (detail::off_diagonal_norm(a) <= kRelativeOffDiagonal * scale) {
            converged = true;
            break;
        }
        if (sweep == kMaxSweeps) {
            break;
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                detail::jacobi_rotate(a, v, p, q);
            }
        }
    }
    if (!converged) {
        std::ostringstream msg;
        msg << "hermitian_eig: no convergence after " << kMaxSweeps << " sweeps (off-diagonal norm "
            << detail::off_diagonal_norm(a) << ")";
        throw std::runtime_error(msg.str());
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return a(x, x).real() < a(y, y).real(); });

    Spectrum out{std::vector<double>(n), ComplexMatrix(n, n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) {
            out.eigenvectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

inline std::vector<double> eigenvalues(const ComplexMatrix& a) { return hermitian_eig(a).eigenvalues; }

inline double min_eigenvalue(const ComplexMatrix& a) { return hermitian_eig(a).eigenvalues.front(); }

inline double max_eigenvalue(const ComplexMatrix& a) { return hermitian_eig(a).eigenvalues.back(); }

/// ||A||_1 for Hermitian A, as the sum of absolute eigenvalues.
inline double trace_norm(const ComplexMatrix& a) {
    if (!a.is_hermitian()) {
        if (!a.is_square()) {
            detail::require_hermitian(a, "trace_norm");
        }
        std::ostringstream msg;
        msg << "trace_norm: only Hermitian operators are supported (max |A_ij - conj(A_ji)| = "
            << a.hermiticity_defect() << ")";
        throw std::invalid_argument(msg.str());
    }
    double s = 0.0;
    for (double x : eigenvalues(a)) {
        s += std::abs(x);
    }
    return s;
}

/// Local dimensions of a bipartite space; basis index of |i>_A|j>_B is i * b + j.
struct BipartiteDims {
    std::size_t a = 2;
    std::size_t b = 2;

    std::size_t total() const { return a * b; }
    bool operator==(const BipartiteDims&) const = default;
};

enum class Party { A, B };

/// Transpose of the chosen tensor factor. For party B, entry (i a, j b) of the
/// result is entry (i b, j a) of the input; party A swaps the first factor's
/// indices instead. The map is an involution.
inline ComplexMatrix partial_transpose(const ComplexMatrix& m, BipartiteDims dims, Party party) {
    const std::size_t d = dims.total();
    if (dims.a == 0 || dims.b == 0 || m.rows() != d || m.cols() != d) {
        std::ostringstream msg;
        msg << "partial_transpose: " << m.rows() << "x" << m.cols() << " matrix does not match dims (" << dims.a
            << "," << dims.b << ")";
        throw std::invalid_argument(msg.str());
    }
    ComplexMatrix out(d, d);
    for (std::size_t i = 0; i < dims.a; ++i) {
        for (std::size_t x = 0; x < dims.b; ++x) {
            for (std::size_t j = 0; j < dims.a; ++j) {
                for (std::size_t y = 0; y < dims.b; ++y) {
                    const std::size_t row = i * dims.b + x;
                    const std::size_t col = j * dims.b + y;
                    if (party == Party::B) {
                        out(row, col) = m(i * dims.b + y, j * dims.b + x);
                    } else {
                        out(row, col) = m(j * dims.b + x, i * dims.b + y);
                    }
                }
            }
        }
    }
    return out;
}

}  // namespace qsd
