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

// Acceptance checks. Each criterion prints exactly one PASS/FAIL line followed
// by indented detail lines. With no arguments every criterion runs; with one
// argument only the named criterion runs. Exit status is nonzero when any
// selected criterion fails.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qsd/io.hpp"
#include "qsd/qsd.hpp"

using namespace qsd;

namespace {

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<std::string> details;

    void require(bool ok, const std::string& what) {
        pass = pass && ok;
        details.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
    }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string num(double x) { return format_text(x); }

DensityMatrix bell(BellLabel l) { return DensityMatrix::projector(bell_state(l)); }

Outcome bell_rre() {
    Outcome o;
    const DensityMatrix rho = bell(BellLabel::phi_plus);
    const auto t0 = Clock::now();
    const RREResult r = rre(rho);
    const double ms = 1e3 * seconds_since(t0);
    o.require(std::abs(r.value - 2.0) <= 1e-10, "rre(phi+) = " + num(r.value) + ", |error| = " +
                                                    num(std::abs(r.value - 2.0)) + " <= 1e-10");
    o.require(ms < 1.0, "runtime " + num(ms) + " ms < 1 ms");
    o.summary = "rre(phi+) = " + num(r.value) + " in " + num(ms) + " ms";
    return o;
}

Outcome bell_example() {
    Outcome o;
    const Ensemble eta = Ensemble::pair(0.5, bell(BellLabel::phi_plus), bell(BellLabel::phi_minus));
    const BoundReport rep = bound_report(eta);
    o.require(std::abs(rep.p_eta - 1.0) <= 1e-9, "P_G(Bell ensemble) = " + num(rep.p_eta) + " (expected 1)");
    o.require(std::abs(rep.p_eps - 2.0 / 3.0) <= 1e-9,
              "P_G(closest separable ensemble) = " + num(rep.p_eps) + " (expected 2/3)");
    o.require(std::abs(rep.thm2_lower - 1.0) <= 1e-9, "theorem 2 lower bound = " + num(rep.thm2_lower) + " (expected 1)");
    o.require(std::abs(rep.p_eta - rep.thm2_lower) <= 1e-9,
              "lower bound saturated: P_G - bound = " + num(rep.p_eta - rep.thm2_lower));
    o.summary = "P_G = " + num(rep.p_eta) + ", P_G(sep) = " + num(rep.p_eps) + ", lower bound = " + num(rep.thm2_lower);
    return o;
}

Outcome thm12_suite() {
    Outcome o;
    const auto t0 = Clock::now();
    std::size_t v1 = 0, v2 = 0, n = 0;
    double worst1 = INFINITY, worst2 = INFINITY;
    for (std::size_t k = 1; k <= 4; ++k) {
        for (std::size_t i = 0; i < 1000; ++i) {
            SeededRng rng(derive_seed(2024, k, i));
            DensityMatrix a = random_mixed_rank(kTwoQubits, k, rng);
            DensityMatrix b = random_mixed_rank(kTwoQubits, k, rng);
            const BoundReport rep = bound_report(Ensemble::pair(rng.uniform(), std::move(a), std::move(b)));
            ++n;
            v1 += !rep.thm1_ok;
            v2 += !rep.thm2_ok;
            worst1 = std::min(worst1, rep.thm1_upper - rep.p_eta);
            worst2 = std::min(worst2, rep.p_eta - rep.thm2_lower);
        }
    }
    const double secs = seconds_since(t0);
    o.require(v1 == 0, "theorem 1 violations " + std::to_string(v1) + "/" + std::to_string(n) + " (worst slack " +
                           num(worst1) + ")");
    o.require(v2 == 0, "theorem 2 violations " + std::to_string(v2) + "/" + std::to_string(n) + " (worst slack " +
                           num(worst2) + ")");
    o.require(secs < 60.0, "single-threaded runtime " + num(secs) + " s < 60 s");
    o.summary = std::to_string(n) + " ensembles, " + std::to_string(v1 + v2) + " violations, " + num(secs) + " s";
    return o;
}

Outcome thm3_suite() {
    Outcome o;
    std::size_t failures = 0, not_equal = 0;
    double worst = INFINITY;
    for (std::size_t i = 0; i < 1000; ++i) {
        SeededRng rng(derive_seed(2025, 0, i));
        const BoundReport rep = bound_report(equal_rre_pair(rng));
        if (!rep.thm3_ok) {
            ++not_equal;
            continue;
        }
        worst = std::min(worst, rep.p_eta - rep.p_eps);
        failures += rep.p_eta < rep.p_eps - 1e-9;
    }
    o.require(not_equal == 0, "pairs with unequal RRE: " + std::to_string(not_equal));
    o.require(failures == 0, "pairs with P_eta < P_eps - 1e-9: " + std::to_string(failures) + "/1000 (min P_eta - P_eps " +
                                 num(worst) + ")");
    o.summary = "1000 equal-RRE pairs, " + std::to_string(failures) + " failures";
    return o;
}

Outcome fig1_left() {
    Outcome o;
    Fig1Config cfg = Fig1Config::for_panel(Fig1Panel::mixed_ranks);
    cfg.n_ensembles = 1000;
    cfg.seed = 7;
    const Fig1Result res = run_fig1(cfg);
    double worst = INFINITY;
    for (const auto& r : res.records) worst = std::min(worst, r.gamma - 1.0 / (1.0 + r.r_max));
    for (const auto& c : res.summary.per_class) {
        o.require(c.below_curve == 0, "ranks (" + std::to_string(c.cls.rank1) + "," + std::to_string(c.cls.rank2) +
                                          "): " + std::to_string(c.below_curve) + "/" + std::to_string(c.count) +
                                          " below 1/(1+R) - 1e-9");
    }
    o.require(res.summary.gamma_violations == 0, "gamma > 1 violations: " + std::to_string(res.summary.gamma_violations));
    o.details.push_back("     min gamma - 1/(1+R) = " + num(worst));
    o.summary = std::to_string(res.summary.below_curve) + "/" + std::to_string(res.summary.records) +
                " points below the reference curve (seed 7)";
    return o;
}

Outcome fig1_right() {
    Outcome o;
    std::size_t total = 0;
    std::size_t seed7 = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        Fig1Config cfg = Fig1Config::for_panel(Fig1Panel::product_vs_rank);
        cfg.n_ensembles = 1000;
        cfg.seed = seed;
        const Fig1Result res = run_fig1(cfg);
        std::ostringstream line;
        line << "     seed " << seed << ":";
        for (const auto& c : res.summary.per_class) line << " rank " << c.cls.rank1 << " -> " << c.below_curve << "/1000";
        o.details.push_back(line.str());
        total += res.summary.below_curve;
        if (seed == 7) seed7 = res.summary.below_curve;
        o.pass = o.pass && res.summary.gamma_violations == 0;
    }
    o.require(total > 0, "points below the curve across 4 classes x 10 seeds: " + std::to_string(total) +
                             " (hard failure only when zero)");
    o.summary = std::to_string(total) + " below-curve points over 40000 product+entangled ensembles (seed 7: " +
                std::to_string(seed7) + "/4000)";
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    double worst_mixed = 0.0;
    for (std::size_t k = 1; k <= 4; ++k) {
        double worst = 0.0;
        for (std::size_t i = 0; i < 1000; ++i) {
            SeededRng rng(derive_seed(2026, k, i));
            const DensityMatrix rho = random_mixed_rank(kTwoQubits, k, rng);
            worst = std::max(worst, std::abs(rre(rho).value - rre_bisection_oracle(rho, 1e-10).value));
        }
        o.require(worst <= 1e-8, "rank " + std::to_string(k) + ": max |spectral - bisection| = " + num(worst));
        worst_mixed = std::max(worst_mixed, worst);
    }
    double worst_pure = 0.0;
    for (std::size_t i = 0; i < 1000; ++i) {
        SeededRng rng(derive_seed(2026, 9, i));
        const PureState psi = random_pure(kTwoQubits, rng);
        worst_pure = std::max(worst_pure, std::abs(rre_pure(psi) - rre(DensityMatrix::projector(psi)).value));
    }
    o.require(worst_pure <= 1e-10, "pure closed form vs spectral on 1000 Haar states: max diff " + num(worst_pure));
    o.summary = "max mixed diff " + num(worst_mixed) + ", max pure diff " + num(worst_pure);
    return o;
}

Outcome fig2() {
    Outcome o;
    Fig2Config cfg;
    cfg.restarts = 64;
    cfg.seed = 3;
    const auto t0 = Clock::now();
    const Fig2Result res = run_fig2(cfg);
    const double secs = seconds_since(t0);
    const Fig2Record& first = res.records.front();
    o.require(first.r == 0.01 && first.delta_p < -1e-3, "deltaP(0.01) = " + num(first.delta_p) + " < -1e-3");
    double worst_tail = INFINITY;
    double worst_r = 0.0;
    for (const auto& r : res.records) {
        if (r.r >= 0.12 - 1e-12 && r.delta_p < worst_tail) {
            worst_tail = r.delta_p;
            worst_r = r.r;
        }
    }
    o.require(worst_tail >= -1e-4,
              "min deltaP over r >= 0.12 is " + num(worst_tail) + " at r = " + num(worst_r) + " (need >= -1e-4)");
    const bool rc_ok = res.r_c && *res.r_c >= 0.03 && *res.r_c <= 0.12;
    o.require(rc_ok, "r_c = " + (res.r_c ? num(*res.r_c) : std::string("none")) + " (need within [0.03, 0.12])");
    o.require(secs < 600.0, "runtime " + num(secs) + " s < 600 s with 64 restarts");
    o.require(res.floor_violations == 0, "lower-bound floor violations: " + std::to_string(res.floor_violations));
    o.summary = "r_c = " + (res.r_c ? num(*res.r_c) : std::string("none")) + ", deltaP(0.01) = " + num(first.delta_p);
    return o;
}

Outcome linalg_properties() {
    Outcome o;
    const int n = 1000;
    SeededRng rng(2027);
    double homog = 0, tri = 0, rev = 0, spectrum_gap = 0, recon = 0, unit = 0, tr = 0;
    bool involution = true;
    for (int i = 0; i < n; ++i) {
        const ComplexMatrix a = oracle::random_hermitian(4, rng);
        const ComplexMatrix b = oracle::random_hermitian(4, rng);
        const double c = rng.uniform(-5.0, 5.0);
        const double na = trace_norm(a), nb = trace_norm(b);
        homog = std::max(homog, std::abs(trace_norm(a * c) - std::abs(c) * na));
        tri = std::max(tri, trace_norm(a + b) - (na + nb));
        rev = std::max(rev, std::abs(na - nb) - trace_norm(a - b));

        const DensityMatrix rho = random_mixed_rank(kTwoQubits, 1 + i % 4, rng);
        const ComplexMatrix ptb = partial_transpose(rho.matrix(), kTwoQubits, Party::B);
        const ComplexMatrix pta = partial_transpose(rho.matrix(), kTwoQubits, Party::A);
        involution = involution && partial_transpose(ptb, kTwoQubits, Party::B) == rho.matrix() &&
                     partial_transpose(pta, kTwoQubits, Party::A) == rho.matrix();
        const auto ea = eigenvalues(pta), eb = eigenvalues(ptb);
        for (std::size_t j = 0; j < 4; ++j) spectrum_gap = std::max(spectrum_gap, std::abs(ea[j] - eb[j]));

        const Spectrum s = hermitian_eig(a);
        const ComplexMatrix back = s.eigenvectors * ComplexMatrix::diagonal(s.eigenvalues) * s.eigenvectors.adjoint();
        recon = std::max(recon, max_abs_diff(back, a) / a.max_abs());
        unit = std::max(unit, max_abs_diff(s.eigenvectors.adjoint() * s.eigenvectors, ComplexMatrix::identity(4)));
        double sum = 0;
        for (double x : s.eigenvalues) sum += x;
        tr = std::max(tr, std::abs(sum - a.trace().real()));
    }
    o.require(homog <= 1e-10, "||cA|| = |c| ||A||: max error " + num(homog));
    o.require(tri <= 1e-10, "triangle inequality: max excess " + num(tri));
    o.require(rev <= 1e-10, "reverse triangle inequality: max excess " + num(rev));
    o.require(involution, "partial transpose is an involution (exact)");
    o.require(spectrum_gap <= 1e-10, "spectrum of PT_A equals PT_B: max diff " + num(spectrum_gap));
    o.require(recon <= 1e-10, "eigen-reconstruction relative error " + num(recon));
    o.require(unit <= 1e-10, "eigenvector unitarity error " + num(unit));
    o.require(tr <= 1e-10, "eigenvalue sum vs trace error " + num(tr));
    o.summary = "1000 instances per property";
    return o;
}

struct Criterion {
    const char* name;
    const char* title;
    std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
    static const std::vector<Criterion> all = {
        {"bell_rre", "Bell RRE", bell_rre},
        {"bell_example", "Bell-pair worked example", bell_example},
        {"thm12_suite", "Theorem 1/2 inequality suite", thm12_suite},
        {"thm3_suite", "Equal-RRE Theorem 3 suite", thm3_suite},
        {"fig1_left", "Fig. 1 left panel: all points on or above 1/(1+R)", fig1_left},
        {"fig1_right", "Fig. 1 right panel: below-curve count", fig1_right},
        {"oracle_equivalence", "Oracle equivalence", oracle_equivalence},
        {"fig2", "Fig. 2 approximate reproduction", fig2},
        {"linalg_properties", "Linalg property suite", linalg_properties},
    };
    return all;
}

}  // namespace

int main(int argc, char** argv) {
    const std::string only = argc > 1 ? argv[1] : "";
    bool matched = false;
    bool all_pass = true;
    for (const auto& c : criteria()) {
        if (!only.empty() && only != c.name) continue;
        matched = true;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("exception: ") + e.what();
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << " | " << c.title << " | " << o.summary << '\n';
        for (const auto& d : o.details) std::cout << "    " << d << '\n';
        std::cout.flush();
        all_pass = all_pass && o.pass;
    }
    if (!matched) {
        std::cerr << "unknown criterion '" << only << "'; known:";
        for (const auto& c : criteria()) std::cerr << ' ' << c.name;
        std::cerr << '\n';
        return 2;
    }
    return all_pass ? 0 : 1;
}
