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

// Random robustness of entanglement (RRE) and generalized robustness for
// PPT-decidable bipartite systems (2x2, 2x3).
//
// For sigma(r) = (rho + r I/d) / (1 + r) the partial transpose is
// (rho^T + r I/d) / (1 + r), which is PSD exactly when r >= -d lambda_min(rho^T).
// So the RRE is max(0, -d lambda_min(rho^T)) and the closest separable state
// sits on the PPT boundary.

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "qsd/linalg.hpp"
#include "qsd/states.hpp"

namespace qsd {

/// lambda_min(rho^T) >= -kPptTolerance counts as PPT (separable) for verdicts.
inline constexpr double kPptTolerance = 1e-9;
/// Partial-transpose spectra above -kPptSnap are treated as exactly PPT by rre.
inline constexpr double kPptSnap = 1e-12;

enum class RreMethod { spectral, bisection_oracle, pure_closed_form };

inline std::string_view to_string(RreMethod m) {
    switch (m) {
        case RreMethod::spectral:
            return "spectral";
        case RreMethod::bisection_oracle:
            return "bisection-oracle";
        case RreMethod::pure_closed_form:
            return "pure-closed-form";
    }
    return "?";
}

struct RREResult {
    double value = 0.0;
    DensityMatrix closest_separable;
    RreMethod method = RreMethod::spectral;
};

namespace detail {

inline void require_ppt_decidable(BipartiteDims dims, const char* who) {
    const bool ok = (dims.a == 2 && dims.b == 2) || (dims.a == 2 && dims.b == 3) || (dims.a == 3 && dims.b == 2);
    if (!ok) {
        std::ostringstream msg;
        msg << who << ": dims (" << dims.a << "," << dims.b
            << ") are not 2x2 or 2x3, where PPT does not decide separability";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace detail

inline ComplexMatrix partial_transpose(const DensityMatrix& rho, Party party = Party::B) {
    return partial_transpose(rho.matrix(), rho.dims(), party);
}

/// Smallest eigenvalue of rho^{T_B}.
inline double min_pt_eigenvalue(const DensityMatrix& rho) { return min_eigenvalue(partial_transpose(rho)); }

inline bool is_ppt(const DensityMatrix& rho, double tol = kPptTolerance) { return min_pt_eigenvalue(rho) >= -tol; }

/// RRE from the partial-transpose spectrum, with the closest separable state.
inline RREResult rre(const DensityMatrix& rho) {
    detail::require_ppt_decidable(rho.dims(), "rre");
    const double lmin = min_pt_eigenvalue(rho);
    const double d = static_cast<double>(rho.dimension());
    const double value = lmin >= -kPptSnap ? 0.0 : -d * lmin;
    return RREResult{value, rho.mixed_with_identity(value), RreMethod::spectral};
}

inline DensityMatrix closest_separable(const DensityMatrix& rho) { return rre(rho).closest_separable; }

/// Reference RRE located by bisection on the PPT predicate over r in [0, 16].
///
/// Does not use the closed form: each step tests lambda_min(rho^T + r I/d) >= 0
/// directly. The returned value is the feasible end of the final bracket, so it
/// overestimates the RRE by at most `tol`.
inline RREResult rre_bisection_oracle(const DensityMatrix& rho, double tol) {
    detail::require_ppt_decidable(rho.dims(), "rre_bisection_oracle");
    if (!(tol > 0.0)) {
        throw std::invalid_argument("rre_bisection_oracle: tolerance must be positive");
    }
    const ComplexMatrix pt = partial_transpose(rho);
    const std::size_t n = rho.dimension();
    const ComplexMatrix id = ComplexMatrix::identity(n);
    const auto feasible = [&](double r) {
        return min_eigenvalue((pt + id * (r / static_cast<double>(n))) / (1.0 + r)) >= 0.0;
    };
    double lo = 0.0;
    double hi = 16.0;
    if (feasible(lo)) {
        return RREResult{0.0, rho, RreMethod::bisection_oracle};
    }
    if (!feasible(hi)) {
        throw std::runtime_error("rre_bisection_oracle: state is not PPT even at r = 16");
    }
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if (feasible(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return RREResult{hi, rho.mixed_with_identity(hi), RreMethod::bisection_oracle};
}

/// Closed form for two-qubit pure states: 4 |x0 x3 - x1 x2|, twice the concurrence.
inline double rre_pure(const PureState& psi) {
    if (psi.dims() != kTwoQubits) {
        throw std::invalid_argument("rre_pure: two-qubit state required");
    }
    return 4.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]);
}

/// Minimal r >= 0 such that (rho + r sigma)/(1 + r) is PPT; `infinite` when no finite r works.
struct GeneralizedRobustness {
    double value = 0.0;
    bool infinite = false;
};

/// Robustness of rho with respect to a separable reference sigma.
///
/// With S = sigma^{T_B} positive definite, r = max(0, -lambda_min(S^{-1/2} rho^T S^{-1/2})).
/// A singular S is handled on its kernel: a negative direction of rho^T there,
/// or coupling out of a null direction of that block, makes r infinite.
inline GeneralizedRobustness robustness_wrt(const DensityMatrix& rho, const DensityMatrix& sigma) {
    detail::require_ppt_decidable(rho.dims(), "robustness_wrt");
    if (rho.dims() != sigma.dims()) {
        throw std::invalid_argument("robustness_wrt: rho and sigma have different dims");
    }
    const ComplexMatrix sigma_pt = partial_transpose(sigma);
    const Spectrum s = hermitian_eig(sigma_pt);
    if (s.eigenvalues.front() < -kPptTolerance) {
        std::ostringstream msg;
        msg << "robustness_wrt: reference state is not PPT (lambda_min of its partial transpose = "
            << s.eigenvalues.front() << ")";
        throw std::invalid_argument(msg.str());
    }
    const ComplexMatrix rho_pt = partial_transpose(rho);
    if (min_eigenvalue(rho_pt) >= -kPptSnap) {
        return {0.0, false};
    }

    const std::size_t n = rho.dimension();
    constexpr double kSingular = 1e-12;
    if (s.eigenvalues.front() > kSingular) {
        std::vector<double> inv_sqrt(n);
        for (std::size_t k = 0; k < n; ++k) {
            inv_sqrt[k] = 1.0 / std::sqrt(s.eigenvalues[k]);
        }
        const ComplexMatrix w = s.eigenvectors * ComplexMatrix::diagonal(inv_sqrt) * s.eigenvectors.adjoint();
        ComplexMatrix whitened = w * rho_pt * w;
        whitened = (whitened + whitened.adjoint()) * 0.5;
        return {std::max(0.0, -min_eigenvalue(whitened)), false};
    }

    // Singular S. In the eigenbasis of S split into its range R and kernel K:
    // rho^T + r S >= 0 needs A_KK >= 0 and no coupling A_RK on the null space
    // of A_KK; then the Schur complement gives r exactly.
    std::vector<std::size_t> range, kernel;
    for (std::size_t k = 0; k < n; ++k) {
        (s.eigenvalues[k] > kSingular ? range : kernel).push_back(k);
    }
    const ComplexMatrix a = s.eigenvectors.adjoint() * rho_pt * s.eigenvectors;
    auto block = [&](const std::vector<std::size_t>& rows, const std::vector<std::size_t>& cols) {
        ComplexMatrix out(rows.size(), cols.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t j = 0; j < cols.size(); ++j) {
                out(i, j) = a(rows[i], cols[j]);
            }
        }
        return out;
    };
    ComplexMatrix a_kk = block(kernel, kernel);
    a_kk = (a_kk + a_kk.adjoint()) * 0.5;
    const Spectrum kk = hermitian_eig(a_kk);
    if (kk.eigenvalues.front() < -kPptSnap) {
        return {std::numeric_limits<double>::infinity(), true};
    }

    const double scale = std::max(1.0, a.max_abs());
    constexpr double kNull = 1e-10;
    constexpr double kCoupling = 1e-9;
    ComplexMatrix complement = block(range, range);
    const ComplexMatrix a_rk = block(range, kernel);
    for (std::size_t m = 0; m < kernel.size(); ++m) {
        // c = A_RK q for the m-th eigenvector q of A_KK.
        std::vector<Complex> c(range.size());
        double c_norm = 0.0;
        for (std::size_t i = 0; i < range.size(); ++i) {
            for (std::size_t j = 0; j < kernel.size(); ++j) {
                c[i] += a_rk(i, j) * kk.eigenvectors(j, m);
            }
            c_norm = std::max(c_norm, std::abs(c[i]));
        }
        const double mu = kk.eigenvalues[m];
        if (mu <= kNull * scale) {
            if (c_norm > kCoupling * scale) {
                return {std::numeric_limits<double>::infinity(), true};
            }
            continue;
        }
        complement -= ComplexMatrix::outer(c) / mu;
    }
    std::vector<double> inv_sqrt;
    for (std::size_t k : range) {
        inv_sqrt.push_back(1.0 / std::sqrt(s.eigenvalues[k]));
    }
    const ComplexMatrix w = ComplexMatrix::diagonal(inv_sqrt);
    ComplexMatrix whitened = w * complement * w;
    whitened = (whitened + whitened.adjoint()) * 0.5;
    return {std::max(0.0, -min_eigenvalue(whitened)), false};
}

}  // namespace qsd
