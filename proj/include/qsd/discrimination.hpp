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

// Global minimum-error discrimination of two-state ensembles (Helstrom) and
// the robustness-based bounds on it.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qsd/linalg.hpp"
#include "qsd/robustness.hpp"
#include "qsd/states.hpp"

namespace qsd {

inline constexpr double kProbabilityTolerance = 1e-12;
/// Additive slack on every bound inequality.
inline constexpr double kBoundSlack = 1e-9;
/// |R1 - R2| at or below this counts as equal robustness.
inline constexpr double kEqualRreTolerance = 1e-8;
/// RRE above this counts as entangled when classifying ensemble members.
inline constexpr double kEntangledThreshold = 1e-9;

struct EnsembleItem {
    double probability;
    DensityMatrix state;
};

class Ensemble {
   public:
    explicit Ensemble(std::vector<EnsembleItem> items) : items_(std::move(items)) {
        if (items_.empty()) {
            throw std::invalid_argument("Ensemble: no states");
        }
        double total = 0.0;
        for (const auto& item : items_) {
            if (!(item.probability > 0.0 && item.probability <= 1.0)) {
                std::ostringstream msg;
                msg << "Ensemble: probability " << item.probability << " outside (0, 1]";
                throw std::invalid_argument(msg.str());
            }
            if (item.state.dims() != items_.front().state.dims()) {
                throw std::invalid_argument("Ensemble: states act on different spaces");
            }
            total += item.probability;
        }
        if (!(std::abs(total - 1.0) <= kProbabilityTolerance)) {
            std::ostringstream msg;
            msg << "Ensemble: probabilities sum to " << total << ", not 1";
            throw std::invalid_argument(msg.str());
        }
    }

    static Ensemble pair(double p1, DensityMatrix rho1, DensityMatrix rho2) {
        return Ensemble({{p1, std::move(rho1)}, {1.0 - p1, std::move(rho2)}});
    }

    std::size_t size() const { return items_.size(); }
    const EnsembleItem& operator[](std::size_t i) const { return items_[i]; }
    const std::vector<EnsembleItem>& items() const { return items_; }
    BipartiteDims dims() const { return items_.front().state.dims(); }

   private:
    std::vector<EnsembleItem> items_;
};

/// Optimal global success probability (1 + ||p1 rho1 - p2 rho2||_1) / 2.
inline double helstrom(double p1, const DensityMatrix& rho1, double p2, const DensityMatrix& rho2) {
    if (!(std::abs(p1 + p2 - 1.0) <= kProbabilityTolerance) || p1 < 0.0 || p2 < 0.0) {
        std::ostringstream msg;
        msg << "helstrom: probabilities " << p1 << " and " << p2 << " do not form a distribution";
        throw std::invalid_argument(msg.str());
    }
    if (rho1.dims() != rho2.dims()) {
        throw std::invalid_argument("helstrom: states act on different spaces");
    }
    return 0.5 * (1.0 + trace_norm(rho1.matrix() * p1 - rho2.matrix() * p2));
}

namespace detail {

inline void require_pair(const Ensemble& eta, const char* who) {
    if (eta.size() != 2) {
        std::ostringstream msg;
        msg << who << ": only two-state ensembles are supported (got " << eta.size() << ")";
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace detail

inline double helstrom(const Ensemble& eta) {
    detail::require_pair(eta, "helstrom");
    return helstrom(eta[0].probability, eta[0].state, eta[1].probability, eta[1].state);
}

/// Same probabilities, each state replaced by its closest separable state.
inline Ensemble closest_separable_ensemble(const Ensemble& eta) {
    std::vector<EnsembleItem> out;
    out.reserve(eta.size());
    for (const auto& item : eta.items()) {
        out.push_back({item.probability, closest_separable(item.state)});
    }
    return Ensemble(std::move(out));
}

namespace detail {

struct RobustnessSummary {
    std::vector<double> values;
    Ensemble separable;
    double max = 0.0;
    double min = 0.0;
};

inline RobustnessSummary summarize(const Ensemble& eta) {
    std::vector<double> values;
    std::vector<EnsembleItem> sep;
    for (const auto& item : eta.items()) {
        RREResult r = rre(item.state);
        values.push_back(r.value);
        sep.push_back({item.probability, std::move(r.closest_separable)});
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double vmin = *lo;
    const double vmax = *hi;
    return RobustnessSummary{std::move(values), Ensemble(std::move(sep)), vmax, vmin};
}

}  // namespace detail

/// P_G(closest separable ensemble) * (1 + max RRE).
inline double theorem1_upper(const Ensemble& eta) {
    detail::require_pair(eta, "theorem1_upper");
    const auto s = detail::summarize(eta);
    return helstrom(s.separable) * (1.0 + s.max);
}

/// P_G(closest separable ensemble) * (1 + min RRE) - max_b R_b p_b.
inline double theorem2_lower(const Ensemble& eta) {
    detail::require_pair(eta, "theorem2_lower");
    const auto s = detail::summarize(eta);
    double weighted = 0.0;
    for (std::size_t b = 0; b < eta.size(); ++b) {
        weighted = std::max(weighted, s.values[b] * eta[b].probability);
    }
    return helstrom(s.separable) * (1.0 + s.min) - weighted;
}

namespace detail {

// Lower bound on P_G(eta) - P_G(eps) when exactly one member is entangled.
inline double theorem4_bound(const Ensemble& eta, const std::vector<double>& r) {
    if (r.size() != 2) {
        throw std::invalid_argument("theorem4_lower_diff: two-state ensemble required");
    }
    const bool e1 = r[0] > kEntangledThreshold;
    const bool e2 = r[1] > kEntangledThreshold;
    if (e1 == e2) {
        std::ostringstream msg;
        msg << "theorem4_lower_diff: exactly one state must be entangled, but state 1 has RRE " << r[0]
            << " and state 2 has RRE " << r[1] << (e1 ? " (both entangled)" : " (both separable)");
        throw std::invalid_argument(msg.str());
    }
    const double big_r = e1 ? r[0] : r[1];
    const double norm = trace_norm(eta[0].state.matrix() * eta[0].probability - eta[1].state.matrix() * eta[1].probability);
    return big_r / (2.0 * (1.0 + big_r)) * (norm - 1.0);
}

}  // namespace detail

inline double theorem4_lower_diff(const Ensemble& eta) {
    detail::require_pair(eta, "theorem4_lower_diff");
    std::vector<double> r;
    for (const auto& item : eta.items()) {
        r.push_back(rre(item.state).value);
    }
    return detail::theorem4_bound(eta, r);
}

struct BoundReport {
    double p_eta = 0.0;
    double p_eps = 0.0;
    std::vector<double> r_values;
    double r_max = 0.0;
    double r_min = 0.0;
    double gamma = 0.0;
    double thm1_upper = 0.0;
    double thm2_lower = 0.0;
    std::optional<double> thm4_lower_diff;
    bool thm1_ok = false;
    bool thm2_ok = false;
    std::optional<bool> thm3_ok;  // set only when the two RREs are equal
    std::optional<bool> thm4_ok;  // set only when exactly one state is entangled

    /// True when some applicable bound fails.
    bool any_violation() const {
        return !thm1_ok || !thm2_ok || (thm3_ok && !*thm3_ok) || (thm4_ok && !*thm4_ok);
    }

    /// gamma >= 1/(1 + r_max), equivalently p_eta >= p_eps.
    bool above_reference_curve(double slack = kBoundSlack) const { return gamma >= 1.0 / (1.0 + r_max) - slack; }
};

inline BoundReport bound_report(const Ensemble& eta) {
    detail::require_pair(eta, "bound_report");
    const auto s = detail::summarize(eta);

    BoundReport rep;
    rep.p_eta = helstrom(eta);
    rep.p_eps = helstrom(s.separable);
    rep.r_values = s.values;
    rep.r_max = s.max;
    rep.r_min = s.min;
    rep.gamma = rep.p_eta / (rep.p_eps * (1.0 + rep.r_max));

    double weighted = 0.0;
    for (std::size_t b = 0; b < eta.size(); ++b) {
        weighted = std::max(weighted, s.values[b] * eta[b].probability);
    }
    rep.thm1_upper = rep.p_eps * (1.0 + rep.r_max);
    rep.thm2_lower = rep.p_eps * (1.0 + rep.r_min) - weighted;
    rep.thm1_ok = rep.p_eta <= rep.thm1_upper + kBoundSlack;
    rep.thm2_ok = rep.p_eta >= rep.thm2_lower - kBoundSlack;

    if (std::abs(s.values[0] - s.values[1]) <= kEqualRreTolerance) {
        rep.thm3_ok = rep.p_eta >= rep.p_eps - kBoundSlack;
    }
    const bool e1 = s.values[0] > kEntangledThreshold;
    const bool e2 = s.values[1] > kEntangledThreshold;
    if (e1 != e2) {
        rep.thm4_lower_diff = detail::theorem4_bound(eta, s.values);
        rep.thm4_ok = rep.p_eta - rep.p_eps >= *rep.thm4_lower_diff - kBoundSlack;
    }
    return rep;
}

}  // namespace qsd
