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

// Seeded batch experiments: the gamma-vs-robustness scatter over Haar
// ensembles, the delta-P(r) minimization over pure-state pairs, and a
// Monte-Carlo harness for the four discrimination bounds.
//
// Every ensemble or optimizer restart draws from its own child seed, so
// results do not depend on the thread count or scheduling order.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qsd/discrimination.hpp"
#include "qsd/nelder_mead.hpp"
#include "qsd/rng.hpp"
#include "qsd/robustness.hpp"
#include "qsd/states.hpp"

namespace qsd {

namespace stream {
inline constexpr std::uint64_t fig1 = 1;
inline constexpr std::uint64_t fig2 = 2;
inline constexpr std::uint64_t verify_general = 3;
inline constexpr std::uint64_t verify_equal = 4;
inline constexpr std::uint64_t verify_separable = 5;
}  // namespace stream

/// Runs fn(i) for i in [0, n) on up to `threads` workers; rethrows the first failure.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < n; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Scatter of gamma against the maximum RRE.

enum class Fig1Panel { mixed_ranks, product_vs_rank };

/// One class of ensembles. With `product` set, state 2 is a Haar product pure
/// state and rank2 is reported as 1.
struct RankClass {
    int rank1 = 1;
    int rank2 = 1;
    bool product = false;
};

struct Fig1Config {
    Fig1Panel panel = Fig1Panel::mixed_ranks;
    std::vector<RankClass> classes;
    std::size_t n_ensembles = 1000;
    std::uint64_t seed = 0;
    ProductMode product_mode = ProductMode::identical;
    unsigned threads = 1;

    /// Both panels default to the four equal-rank classes 1..4.
    static Fig1Config for_panel(Fig1Panel panel) {
        Fig1Config cfg;
        cfg.panel = panel;
        for (int k = 1; k <= 4; ++k) {
            cfg.classes.push_back(panel == Fig1Panel::mixed_ranks ? RankClass{k, k, false} : RankClass{k, 1, true});
        }
        return cfg;
    }

    void validate() const {
        if (n_ensembles < 1) {
            throw std::invalid_argument("fig1: n_ensembles must be at least 1");
        }
        if (classes.empty()) {
            throw std::invalid_argument("fig1: no rank classes");
        }
        for (const auto& c : classes) {
            const bool ok1 = c.rank1 >= 1 && c.rank1 <= 4;
            const bool ok2 = c.product || (c.rank2 >= 1 && c.rank2 <= 4);
            if (!ok1 || !ok2) {
                std::ostringstream msg;
                msg << "fig1: ranks must lie in {1,2,3,4} (got " << c.rank1 << "," << c.rank2 << ")";
                throw std::invalid_argument(msg.str());
            }
            if (c.product != (panel == Fig1Panel::product_vs_rank)) {
                throw std::invalid_argument("fig1: rank class does not match the panel");
            }
        }
    }
};

struct Fig1Record {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    int rank1 = 0;
    int rank2 = 0;
    bool is_product = false;
    double p1 = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double r_max = 0.0;
    double r_min = 0.0;
    double p_eta = 0.0;
    double p_eps = 0.0;
    double gamma = 0.0;
    bool thm1_ok = true;
    bool thm2_ok = true;

    bool below_curve(double slack = kBoundSlack) const { return gamma < 1.0 / (1.0 + r_max) - slack; }
};

/// Regenerates one ensemble from its child seed: state 1, then state 2, then p1.
inline Fig1Record fig1_ensemble(std::size_t index, std::uint64_t child_seed, const RankClass& cls, ProductMode mode) {
    SeededRng rng(child_seed);
    DensityMatrix rho1 = random_mixed_rank(kTwoQubits, static_cast<std::size_t>(cls.rank1), rng);
    DensityMatrix rho2 = cls.product ? DensityMatrix::projector(random_product_pure(rng, mode))
                                     : random_mixed_rank(kTwoQubits, static_cast<std::size_t>(cls.rank2), rng);
    const double p1 = rng.uniform();
    const BoundReport rep = bound_report(Ensemble::pair(p1, std::move(rho1), std::move(rho2)));

    Fig1Record rec;
    rec.index = index;
    rec.seed = child_seed;
    rec.rank1 = cls.rank1;
    rec.rank2 = cls.product ? 1 : cls.rank2;
    rec.is_product = cls.product;
    rec.p1 = p1;
    rec.r1 = rep.r_values[0];
    rec.r2 = rep.r_values[1];
    rec.r_max = rep.r_max;
    rec.r_min = rep.r_min;
    rec.p_eta = rep.p_eta;
    rec.p_eps = rep.p_eps;
    rec.gamma = rep.gamma;
    rec.thm1_ok = rep.thm1_ok;
    rec.thm2_ok = rep.thm2_ok;
    return rec;
}

struct Fig1ClassSummary {
    RankClass cls;
    std::size_t count = 0;
    std::size_t below_curve = 0;
};

struct Fig1Summary {
    std::size_t records = 0;
    std::size_t gamma_violations = 0;  // gamma > 1 + slack
    std::size_t below_curve = 0;       // gamma < 1/(1 + Rmax) - slack
    std::size_t thm1_violations = 0;
    std::size_t thm2_violations = 0;
    std::vector<Fig1ClassSummary> per_class;
};

struct Fig1Result {
    std::vector<Fig1Record> records;
    Fig1Summary summary;
};

inline Fig1Result run_fig1(const Fig1Config& cfg) {
    cfg.validate();
    const std::size_t total = cfg.classes.size() * cfg.n_ensembles;
    Fig1Result out;
    out.records.resize(total);
    parallel_for(total, cfg.threads, [&](std::size_t index) {
        const RankClass& cls = cfg.classes[index / cfg.n_ensembles];
        out.records[index] = fig1_ensemble(index, derive_seed(cfg.seed, stream::fig1, index), cls, cfg.product_mode);
    });

    Fig1Summary& s = out.summary;
    s.records = total;
    for (const auto& cls : cfg.classes) {
        s.per_class.push_back({cls, 0, 0});
    }
    for (const auto& rec : out.records) {
        auto& cs = s.per_class[rec.index / cfg.n_ensembles];
        ++cs.count;
        if (rec.gamma > 1.0 + kBoundSlack) ++s.gamma_violations;
        if (rec.below_curve()) {
            ++s.below_curve;
            ++cs.below_curve;
        }
        if (!rec.thm1_ok) ++s.thm1_violations;
        if (!rec.thm2_ok) ++s.thm2_violations;
    }
    return out;
}

// ---------------------------------------------------------------------------
// delta-P(r): min over pure-state pairs with minimum RRE r of P_G(eta) - P_G(eps).
//
// State 1 is fixed to sqrt(l1)|00> + sqrt(1-l1)|11> with 4 sqrt(l1(1-l1)) = r;
// the search runs over theta = (p1, l2, six Euler angles of U_A (x) U_B on
// state 2) with l2 in [1/2, l1], so state 2 has RRE >= r.

/// Default grid: 0.01..0.30 step 0.01, 0.32..1.00 step 0.02, then 1.2..1.8 step 0.2.
/// The continuation pass in run_fig2 needs the fine spacing to follow the
/// negative branch up to where it closes.
inline std::vector<double> default_fig2_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 30; ++i) grid.push_back(i / 100.0);
    for (int i = 16; i <= 50; ++i) grid.push_back(i / 50.0);
    for (int i = 6; i <= 9; ++i) grid.push_back(i / 5.0);
    return grid;
}

/// Largest Schmidt coefficient of a two-qubit pure state whose RRE is r.
inline double schmidt_lambda_for_rre(double r) {
    if (!(r >= 0.0 && r <= 2.0)) {
        throw std::invalid_argument("schmidt_lambda_for_rre: r must lie in [0, 2]");
    }
    return 0.5 * (1.0 + std::sqrt(std::max(0.0, 1.0 - r * r / 4.0)));
}

struct Fig2Config {
    std::vector<double> r_grid = default_fig2_grid();
    int restarts = 64;
    int max_iterations = 2000;
    double zero_tolerance = 1e-4;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    bool second_product = false;  // pin state 2 to a product state (l2 = 1)

    void validate() const {
        if (r_grid.empty()) {
            throw std::invalid_argument("fig2: empty r grid");
        }
        for (std::size_t i = 0; i < r_grid.size(); ++i) {
            if (!(r_grid[i] > 0.0 && r_grid[i] < 2.0)) {
                std::ostringstream msg;
                msg << "fig2: grid value " << r_grid[i] << " outside (0, 2)";
                throw std::invalid_argument(msg.str());
            }
            if (i > 0 && !(r_grid[i] > r_grid[i - 1])) {
                throw std::invalid_argument("fig2: grid must be strictly ascending");
            }
        }
        if (restarts < 1 || max_iterations < 1) {
            throw std::invalid_argument("fig2: restarts and max_iterations must be positive");
        }
        if (!(zero_tolerance >= 0.0)) {
            throw std::invalid_argument("fig2: tolerance must be nonnegative");
        }
    }
};

inline constexpr std::size_t kFig2Parameters = 8;

struct PairEvaluation {
    double delta_p = 0.0;
    double p_eta = 0.0;
    double p_eps = 0.0;
    double r1 = 0.0;
    double r2 = 0.0;
    double p1 = 0.0;
};

/// Evaluates the candidate theta = (p1, l2, a1, b1, g1, a2, b2, g2) at fixed r.
inline PairEvaluation fig2_candidate(double r, const std::vector<double>& theta) {
    const double lambda1 = schmidt_lambda_for_rre(r);
    const PureState psi1 = pure_from_schmidt(lambda1);
    const PureState psi2 = pure_from_schmidt(std::clamp(theta[1], 0.5, 1.0), {theta[2], theta[3], theta[4]},
                                             {theta[5], theta[6], theta[7]});
    PairEvaluation ev;
    ev.p1 = std::clamp(theta[0], 0.0, 1.0);
    const double p2 = 1.0 - ev.p1;
    ev.r1 = rre_pure(psi1);
    ev.r2 = rre_pure(psi2);
    const DensityMatrix rho1 = DensityMatrix::projector(psi1);
    const DensityMatrix rho2 = DensityMatrix::projector(psi2);
    ev.p_eta = helstrom(ev.p1, rho1, p2, rho2);
    ev.p_eps = helstrom(ev.p1, rho1.mixed_with_identity(ev.r1), p2, rho2.mixed_with_identity(ev.r2));
    ev.delta_p = ev.p_eta - ev.p_eps;
    return ev;
}

/// The lower-bound floor P_eta - P_eps >= Rmin P_eps - max_b R_b p_b must hold for every candidate.
inline bool satisfies_lower_floor(const PairEvaluation& ev) {
    const double rmin = std::min(ev.r1, ev.r2);
    const double weighted = std::max(ev.r1 * ev.p1, ev.r2 * (1.0 - ev.p1));
    return ev.delta_p >= rmin * ev.p_eps - weighted - kBoundSlack;
}

struct Fig2Record {
    double r = 0.0;
    double delta_p = 0.0;
    double p1 = 0.0;
    double lambda1 = 0.0;
    double lambda2 = 0.0;
    std::array<double, 6> angles{};
    int best_restart = 0;
    int iterations = 0;
    int converged_restarts = 0;
    std::size_t evaluations = 0;
    std::size_t floor_violations = 0;
};

struct Fig2Result {
    std::vector<Fig2Record> records;
    std::optional<double> r_c;
    std::size_t floor_violations = 0;
    bool monotone_tail = true;  // once delta-P >= -tol it stays there on the grid
};

/// Smallest grid r from which delta-P stays >= -tolerance for the rest of the grid.
inline std::optional<double> extract_r_c(const std::vector<Fig2Record>& records, double tolerance) {
    std::optional<double> rc;
    for (auto it = records.rbegin(); it != records.rend(); ++it) {
        if (it->delta_p >= -tolerance) {
            rc = it->r;
        } else {
            break;
        }
    }
    return rc;
}

namespace detail {

struct RestartOutcome {
    NelderMeadResult nm;
    std::size_t floor_violations = 0;
};

inline Box fig2_box(const Fig2Config& cfg, double r) {
    const double lo = cfg.second_product ? 1.0 : 0.5;
    const double hi = cfg.second_product ? 1.0 : schmidt_lambda_for_rre(r);
    const double inf = std::numeric_limits<double>::infinity();
    return Box{{0.0, lo, -inf, -inf, -inf, -inf, -inf, -inf}, {1.0, hi, inf, inf, inf, inf, inf, inf}};
}

// Nelder-Mead from `start`, then once more from the converged point.
inline RestartOutcome fig2_search(const Fig2Config& cfg, double r, std::vector<double> start) {
    const Box box = fig2_box(cfg, r);
    const double lambda2_lo = box.lower[1];
    const double lambda2_hi = box.upper[1];
    box.clamp(start);

    RestartOutcome out;
    const auto objective = [&](const std::vector<double>& theta) {
        const PairEvaluation ev = fig2_candidate(r, theta);
        if (!satisfies_lower_floor(ev)) ++out.floor_violations;
        return ev.delta_p;
    };

    std::vector<double> step(kFig2Parameters, 0.6);
    step[0] = 0.25;
    step[1] = 0.25 * (lambda2_hi - lambda2_lo);

    NelderMeadOptions opt;
    opt.max_iterations = cfg.max_iterations;
    out.nm = nelder_mead(objective, start, step, box, opt);
    // One more pass from the converged point with a fresh, smaller simplex.
    for (auto& h : step) h *= 0.25;
    NelderMeadResult polish = nelder_mead(objective, out.nm.x, step, box, opt);
    polish.iterations += out.nm.iterations;
    polish.evaluations += out.nm.evaluations;
    if (polish.value <= out.nm.value) {
        out.nm = std::move(polish);
    } else {
        out.nm.iterations = polish.iterations;
        out.nm.evaluations = polish.evaluations;
    }
    return out;
}

inline RestartOutcome fig2_restart(const Fig2Config& cfg, double r, std::uint64_t seed) {
    const Box box = fig2_box(cfg, r);
    SeededRng rng(seed);
    std::vector<double> start(kFig2Parameters);
    start[0] = rng.uniform();
    start[1] = rng.uniform(box.lower[1], box.upper[1]);
    for (std::size_t k = 2; k < kFig2Parameters; ++k) start[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
    return fig2_search(cfg, r, std::move(start));
}

}  // namespace detail

namespace detail {

inline void set_winner(Fig2Record& rec, const NelderMeadResult& nm, int restart) {
    rec.delta_p = nm.value;
    rec.p1 = nm.x[0];
    rec.lambda2 = nm.x[1];
    std::copy(nm.x.begin() + 2, nm.x.end(), rec.angles.begin());
    rec.best_restart = restart;
    rec.iterations = nm.iterations;
}

}  // namespace detail

inline Fig2Result run_fig2(const Fig2Config& cfg) {
    cfg.validate();
    const std::size_t points = cfg.r_grid.size();
    const auto restarts = static_cast<std::size_t>(cfg.restarts);
    std::vector<detail::RestartOutcome> outcomes(points * restarts);
    parallel_for(outcomes.size(), cfg.threads, [&](std::size_t task) {
        const std::size_t g = task / restarts;
        const std::size_t k = task % restarts;
        outcomes[task] = detail::fig2_restart(cfg, cfg.r_grid[g], derive_seed(derive_seed(cfg.seed, stream::fig2, g), 0, k));
    });

    Fig2Result result;
    for (std::size_t g = 0; g < points; ++g) {
        Fig2Record rec;
        rec.r = cfg.r_grid[g];
        rec.lambda1 = schmidt_lambda_for_rre(rec.r);
        std::size_t best = 0;
        for (std::size_t k = 0; k < restarts; ++k) {
            const auto& o = outcomes[g * restarts + k];
            if (o.nm.value < outcomes[g * restarts + best].nm.value) best = k;
            if (o.nm.converged) ++rec.converged_restarts;
            rec.evaluations += static_cast<std::size_t>(o.nm.evaluations);
            rec.floor_violations += o.floor_violations;
        }
        detail::set_winner(rec, outcomes[g * restarts + best].nm, static_cast<int>(best));
        result.records.push_back(rec);
    }

    // Continuation: warm-start each grid point from the previous point's
    // optimum. Reported with best_restart == restarts when it wins.
    for (std::size_t g = 1; g < points; ++g) {
        Fig2Record& rec = result.records[g];
        const Fig2Record& prev = result.records[g - 1];
        std::vector<double> start{prev.p1, prev.lambda2};
        start.insert(start.end(), prev.angles.begin(), prev.angles.end());
        const detail::RestartOutcome o = detail::fig2_search(cfg, rec.r, std::move(start));
        rec.evaluations += static_cast<std::size_t>(o.nm.evaluations);
        rec.floor_violations += o.floor_violations;
        if (o.nm.converged) ++rec.converged_restarts;
        if (o.nm.value < rec.delta_p) detail::set_winner(rec, o.nm, static_cast<int>(restarts));
    }
    for (const auto& rec : result.records) result.floor_violations += rec.floor_violations;
    result.r_c = extract_r_c(result.records, cfg.zero_tolerance);
    bool reached = false;
    for (const auto& rec : result.records) {
        const bool zero = rec.delta_p >= -cfg.zero_tolerance;
        if (reached && !zero) result.monotone_tail = false;
        reached = reached || zero;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Monte-Carlo harness for the four bounds.

struct TheoremTally {
    std::size_t checked = 0;
    std::size_t violations = 0;
    double worst_slack = std::numeric_limits<double>::infinity();

    void add(double slack) {
        ++checked;
        worst_slack = std::min(worst_slack, slack);
        if (slack < -kBoundSlack) ++violations;
    }

    void merge(const TheoremTally& o) {
        checked += o.checked;
        violations += o.violations;
        worst_slack = std::min(worst_slack, o.worst_slack);
    }
};

struct VerifySummary {
    TheoremTally thm1, thm2, thm3, thm4;

    bool ok() const { return thm1.violations + thm2.violations + thm3.violations + thm4.violations == 0; }

    void add(const BoundReport& rep) {
        thm1.add(rep.thm1_upper - rep.p_eta);
        thm2.add(rep.p_eta - rep.thm2_lower);
        if (rep.thm3_ok) thm3.add(rep.p_eta - rep.p_eps);
        if (rep.thm4_lower_diff) thm4.add(rep.p_eta - rep.p_eps - *rep.thm4_lower_diff);
    }

    void merge(const VerifySummary& o) {
        thm1.merge(o.thm1);
        thm2.merge(o.thm2);
        thm3.merge(o.thm3);
        thm4.merge(o.thm4);
    }
};

struct VerifyConfig {
    std::size_t n_samples = 1000;
    std::uint64_t seed = 0;
    unsigned threads = 1;
    std::vector<Ensemble> extra;  // checked in addition to the random constructions
};

/// Two pure states with the same Schmidt coefficient and random local unitaries.
inline Ensemble equal_rre_pair(SeededRng& rng) {
    const double lambda = rng.uniform(0.5, 1.0);
    auto angles = [&] { return EulerAngles{rng.uniform(0.0, 2 * std::numbers::pi), rng.uniform(0.0, 2 * std::numbers::pi),
                                           rng.uniform(0.0, 2 * std::numbers::pi)}; };
    const EulerAngles a1 = angles(), b1 = angles(), a2 = angles(), b2 = angles();
    DensityMatrix rho1 = DensityMatrix::projector(pure_from_schmidt(lambda, a1, b1));
    DensityMatrix rho2 = DensityMatrix::projector(pure_from_schmidt(lambda, a2, b2));
    return Ensemble::pair(rng.uniform(), std::move(rho1), std::move(rho2));
}

/// A Haar product pure state paired with an entangled Haar state of the given rank.
inline Ensemble product_entangled_pair(SeededRng& rng, std::size_t rank, ProductMode mode = ProductMode::identical) {
    DensityMatrix product = DensityMatrix::projector(random_product_pure(rng, mode));
    for (int attempt = 0; attempt < 1000; ++attempt) {
        DensityMatrix entangled = random_mixed_rank(kTwoQubits, rank, rng);
        if (rre(entangled).value > kEntangledThreshold) {
            return Ensemble::pair(rng.uniform(), std::move(entangled), std::move(product));
        }
    }
    throw std::runtime_error("product_entangled_pair: no entangled sample in 1000 attempts");
}

inline VerifySummary verify_theorems(const VerifyConfig& cfg) {
    if (cfg.n_samples < 1) {
        throw std::invalid_argument("verify_theorems: need at least one sample");
    }
    const std::size_t n = cfg.n_samples;
    // Tasks: 4n general (ranks 1..4), n equal-RRE, n product+entangled.
    const std::size_t tasks = 6 * n;
    std::vector<VerifySummary> partial(tasks);
    parallel_for(tasks, cfg.threads, [&](std::size_t t) {
        VerifySummary& s = partial[t];
        if (t < 4 * n) {
            const std::size_t rank = t / n + 1;
            SeededRng rng(derive_seed(cfg.seed, stream::verify_general, t));
            DensityMatrix rho1 = random_mixed_rank(kTwoQubits, rank, rng);
            DensityMatrix rho2 = random_mixed_rank(kTwoQubits, rank, rng);
            const BoundReport rep = bound_report(Ensemble::pair(rng.uniform(), std::move(rho1), std::move(rho2)));
            s.thm1.add(rep.thm1_upper - rep.p_eta);
            s.thm2.add(rep.p_eta - rep.thm2_lower);
        } else if (t < 5 * n) {
            SeededRng rng(derive_seed(cfg.seed, stream::verify_equal, t - 4 * n));
            const BoundReport rep = bound_report(equal_rre_pair(rng));
            if (!rep.thm3_ok) {
                throw std::logic_error("verify_theorems: equal-Schmidt pair did not produce equal RRE");
            }
            s.thm3.add(rep.p_eta - rep.p_eps);
        } else {
            const std::size_t i = t - 5 * n;
            SeededRng rng(derive_seed(cfg.seed, stream::verify_separable, i));
            const BoundReport rep = bound_report(product_entangled_pair(rng, i % 4 + 1));
            if (!rep.thm4_lower_diff) {
                throw std::logic_error("verify_theorems: product+entangled pair failed the single-entangled precondition");
            }
            s.thm4.add(rep.p_eta - rep.p_eps - *rep.thm4_lower_diff);
        }
    });
    VerifySummary total;
    for (const auto& s : partial) total.merge(s);
    for (const auto& eta : cfg.extra) total.add(bound_report(eta));
    return total;
}

}  // namespace qsd
