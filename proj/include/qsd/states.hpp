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

// Two-qubit state construction and Haar / Ginibre sampling.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qsd/linalg.hpp"
#include "qsd/rng.hpp"

namespace qsd {

inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kPositivityTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-12;

inline constexpr BipartiteDims kTwoQubits{2, 2};

class PureState {
   public:
    /// Throws unless the amplitudes have unit norm within 1e-12.
    PureState(BipartiteDims dims, std::vector<Complex> amplitudes) : dims_(dims), amplitudes_(std::move(amplitudes)) {
        if (amplitudes_.size() != dims_.total() || amplitudes_.empty()) {
            std::ostringstream msg;
            msg << "PureState: " << amplitudes_.size() << " amplitudes for dims (" << dims_.a << "," << dims_.b << ")";
            throw std::invalid_argument(msg.str());
        }
        double norm2 = 0.0;
        for (const auto& x : amplitudes_) {
            norm2 += std::norm(x);
        }
        if (!(std::abs(norm2 - 1.0) <= kNormTolerance)) {
            std::ostringstream msg;
            msg << "PureState: squared norm " << norm2 << " is not 1";
            throw std::invalid_argument(msg.str());
        }
    }

    /// Normalizes an arbitrary nonzero vector.
    static PureState normalized(BipartiteDims dims, std::vector<Complex> v) {
        double norm2 = 0.0;
        for (const auto& x : v) {
            norm2 += std::norm(x);
        }
        if (!(norm2 > 0.0)) {
            throw std::invalid_argument("PureState::normalized: zero vector");
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : v) {
            x *= inv;
        }
        return PureState(dims, std::move(v));
    }

    BipartiteDims dims() const { return dims_; }
    std::span<const Complex> amplitudes() const { return amplitudes_; }
    const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }

    bool operator==(const PureState&) const = default;

   private:
    BipartiteDims dims_;
    std::vector<Complex> amplitudes_;
};

/// Unit-trace positive semidefinite Hermitian operator on a bipartite space.
class DensityMatrix {
   public:
    /// Validates trace (1e-12), Hermiticity (1e-12) and positivity (lambda_min >= -1e-10).
    static DensityMatrix from_matrix(BipartiteDims dims, ComplexMatrix m) {
        if (m.rows() != dims.total() || m.cols() != dims.total()) {
            std::ostringstream msg;
            msg << "DensityMatrix: " << m.rows() << "x" << m.cols() << " matrix does not match dims (" << dims.a << ","
                << dims.b << ")";
            throw std::invalid_argument(msg.str());
        }
        const double defect = m.hermiticity_defect();
        if (!(defect <= kHermitianTolerance)) {
            std::ostringstream msg;
            msg << "DensityMatrix: not Hermitian (defect " << defect << ")";
            throw std::invalid_argument(msg.str());
        }
        const Complex tr = m.trace();
        if (!(std::abs(tr - 1.0) <= kTraceTolerance)) {
            std::ostringstream msg;
            msg << "DensityMatrix: trace " << tr.real() << (tr.imag() < 0 ? "" : "+") << tr.imag() << "i is not 1";
            throw std::invalid_argument(msg.str());
        }
        const double lmin = min_eigenvalue(m);
        if (!(lmin >= -kPositivityTolerance)) {
            std::ostringstream msg;
            msg << "DensityMatrix: not positive semidefinite (minimum eigenvalue " << lmin << ")";
            throw std::invalid_argument(msg.str());
        }
        return DensityMatrix(dims, std::move(m));
    }

    static DensityMatrix maximally_mixed(BipartiteDims dims) {
        return DensityMatrix(dims, ComplexMatrix::identity(dims.total()) / static_cast<double>(dims.total()));
    }

    static DensityMatrix projector(const PureState& psi) {
        return DensityMatrix(psi.dims(), ComplexMatrix::outer(psi.amplitudes()));
    }

    /// (rho + s I/d) / (1 + s) for s >= 0; stays a valid state without re-validation.
    DensityMatrix mixed_with_identity(double s) const {
        if (!(s >= 0.0)) {
            throw std::invalid_argument("mixed_with_identity: weight must be nonnegative");
        }
        const double d = static_cast<double>(dims_.total());
        ComplexMatrix m = matrix_ + ComplexMatrix::identity(dims_.total()) * (s / d);
        m /= (1.0 + s);
        return DensityMatrix(dims_, std::move(m));
    }

    BipartiteDims dims() const { return dims_; }
    std::size_t dimension() const { return dims_.total(); }
    const ComplexMatrix& matrix() const { return matrix_; }

    double purity() const {
        double s = 0.0;
        for (const auto& z : matrix_.entries()) {
            s += std::norm(z);
        }
        return s;
    }

    bool operator==(const DensityMatrix&) const = default;

   private:
    DensityMatrix(BipartiteDims dims, ComplexMatrix m) : dims_(dims), matrix_(std::move(m)) {}

    BipartiteDims dims_;
    ComplexMatrix matrix_;
};

/// Haar-random pure state: normalized complex Gaussian vector.
inline PureState random_pure(BipartiteDims dims, SeededRng& rng) {
    if (dims.total() < 2) {
        throw std::invalid_argument("random_pure: total dimension must be at least 2");
    }
    std::vector<Complex> v(dims.total());
    for (auto& x : v) {
        const double re = rng.normal();
        const double im = rng.normal();
        x = Complex(re, im);
    }
    return PureState::normalized(dims, std::move(v));
}

/// Random state of rank k from the Hilbert-Schmidt induced measure:
/// rho = G G^dagger / Tr(G G^dagger), G a d x k Ginibre matrix.
inline DensityMatrix random_mixed_rank(BipartiteDims dims, std::size_t rank, SeededRng& rng) {
    const std::size_t d = dims.total();
    if (rank < 1 || rank > d) {
        std::ostringstream msg;
        msg << "random_mixed_rank: rank " << rank << " outside [1, " << d << "]";
        throw std::invalid_argument(msg.str());
    }
    ComplexMatrix g(d, rank);
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < rank; ++c) {
            const double re = rng.normal();
            const double im = rng.normal();
            g(r, c) = Complex(re, im);
        }
    }
    ComplexMatrix m = g * g.adjoint();
    m = (m + m.adjoint()) * 0.5;
    m /= m.trace().real();
    return DensityMatrix::from_matrix(dims, std::move(m));
}

enum class ProductMode {
    identical,    // |psi>|psi>
    independent,  // |psi>|phi>
};

/// |a>|b> for single-qubit amplitude pairs a, b.
inline PureState product_pure(std::span<const Complex> a, std::span<const Complex> b) {
    if (a.size() != 2 || b.size() != 2) {
        throw std::invalid_argument("product_pure: single-qubit factors required");
    }
    return PureState::normalized(kTwoQubits, kron(a, b));
}

inline PureState random_product_pure(SeededRng& rng, ProductMode mode = ProductMode::identical) {
    const BipartiteDims qubit{1, 2};
    const PureState psi = random_pure(qubit, rng);
    if (mode == ProductMode::identical) {
        return product_pure(psi.amplitudes(), psi.amplitudes());
    }
    const PureState phi = random_pure(qubit, rng);
    return product_pure(psi.amplitudes(), phi.amplitudes());
}

enum class BellLabel { phi_plus, phi_minus, psi_plus, psi_minus };

inline BellLabel parse_bell_label(std::string_view text) {
    if (text == "phi+") return BellLabel::phi_plus;
    if (text == "phi-") return BellLabel::phi_minus;
    if (text == "psi+") return BellLabel::psi_plus;
    if (text == "psi-") return BellLabel::psi_minus;
    throw std::invalid_argument("unknown Bell state '" + std::string(text) + "' (expected phi+, phi-, psi+, psi-)");
}

inline PureState bell_state(BellLabel label) {
    const double h = 1.0 / std::numbers::sqrt2;
    switch (label) {
        case BellLabel::phi_plus:
            return PureState(kTwoQubits, {h, 0.0, 0.0, h});
        case BellLabel::phi_minus:
            return PureState(kTwoQubits, {h, 0.0, 0.0, -h});
        case BellLabel::psi_plus:
            return PureState(kTwoQubits, {0.0, h, h, 0.0});
        case BellLabel::psi_minus:
            return PureState(kTwoQubits, {0.0, h, -h, 0.0});
    }
    throw std::invalid_argument("bell_state: bad label");
}

/// Computational basis state |index> of a two-qubit system.
inline PureState basis_state(std::size_t index) {
    if (index >= 4) {
        throw std::invalid_argument("basis_state: index must be < 4");
    }
    std::vector<Complex> v(4, 0.0);
    v[index] = 1.0;
    return PureState(kTwoQubits, std::move(v));
}

/// SU(2) element Rz(alpha) Ry(beta) Rz(gamma).
struct EulerAngles {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
};

inline ComplexMatrix su2(EulerAngles e) {
    const Complex i(0.0, 1.0);
    const double cb = std::cos(e.beta / 2.0);
    const double sb = std::sin(e.beta / 2.0);
    ComplexMatrix u(2, 2);
    u(0, 0) = std::exp(-i * (e.alpha + e.gamma) / 2.0) * cb;
    u(0, 1) = -std::exp(-i * (e.alpha - e.gamma) / 2.0) * sb;
    u(1, 0) = std::exp(i * (e.alpha - e.gamma) / 2.0) * sb;
    u(1, 1) = std::exp(i * (e.alpha + e.gamma) / 2.0) * cb;
    return u;
}

/// (U_A (x) U_B)(sqrt(l0)|00> + sqrt(1-l0)|11>) with l0 in [1/2, 1].
/// Concurrence is 2 sqrt(l0 (1 - l0)) for every choice of angles.
inline PureState pure_from_schmidt(double lambda0, EulerAngles ua = {}, EulerAngles ub = {}) {
    if (!(lambda0 >= 0.5 && lambda0 <= 1.0)) {
        std::ostringstream msg;
        msg << "pure_from_schmidt: largest Schmidt coefficient " << lambda0 << " outside [1/2, 1]";
        throw std::invalid_argument(msg.str());
    }
    const double a = std::sqrt(lambda0);
    const double b = std::sqrt(1.0 - lambda0);
    const ComplexMatrix u = kron(su2(ua), su2(ub));
    std::vector<Complex> v(4);
    for (std::size_t r = 0; r < 4; ++r) {
        v[r] = u(r, 0) * a + u(r, 3) * b;
    }
    return PureState::normalized(kTwoQubits, std::move(v));
}

inline double concurrence(const PureState& psi) {
    if (psi.dims() != kTwoQubits) {
        throw std::invalid_argument("concurrence: two-qubit state required");
    }
    return 2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]);
}

inline Complex inner_product(const PureState& a, const PureState& b) {
    if (a.dims() != b.dims()) {
        throw std::invalid_argument("inner_product: dimension mismatch");
    }
    Complex s = 0.0;
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

/// Applies U rho U^dagger; U must be unitary (not checked).
inline DensityMatrix conjugate_by(const DensityMatrix& rho, const ComplexMatrix& u) {
    ComplexMatrix m = u * rho.matrix() * u.adjoint();
    m = (m + m.adjoint()) * 0.5;
    return DensityMatrix::from_matrix(rho.dims(), std::move(m));
}

/// Haar-random unitary: Gram-Schmidt on a Ginibre matrix with phase fix.
inline ComplexMatrix random_unitary(std::size_t n, SeededRng& rng) {
    ComplexMatrix z(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double re = rng.normal();
            const double im = rng.normal();
            z(r, c) = Complex(re, im);
        }
    }
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t k = 0; k < c; ++k) {
            Complex proj = 0.0;
            for (std::size_t r = 0; r < n; ++r) {
                proj += std::conj(z(r, k)) * z(r, c);
            }
            for (std::size_t r = 0; r < n; ++r) {
                z(r, c) -= proj * z(r, k);
            }
        }
        double norm2 = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            norm2 += std::norm(z(r, c));
        }
        const double inv = 1.0 / std::sqrt(norm2);
        for (std::size_t r = 0; r < n; ++r) {
            z(r, c) *= inv;
        }
    }
    return z;
}

}  // namespace qsd
