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

#include "qsd/discrimination.hpp"

#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace qsd;

namespace {

DensityMatrix bell(BellLabel l) { return DensityMatrix::projector(bell_state(l)); }

Ensemble bell_ensemble() { return Ensemble::pair(0.5, bell(BellLabel::phi_plus), bell(BellLabel::phi_minus)); }

Ensemble random_ensemble(SeededRng& rng, std::size_t k1, std::size_t k2) {
    DensityMatrix a = random_mixed_rank(kTwoQubits, k1, rng);
    DensityMatrix b = random_mixed_rank(kTwoQubits, k2, rng);
    return Ensemble::pair(rng.uniform(), std::move(a), std::move(b));
}

}  // namespace

TEST(ensemble, validation) {
    const DensityMatrix id = DensityMatrix::maximally_mixed(kTwoQubits);
    EXPECT_THROW(Ensemble({{0.5, id}, {0.6, id}}), std::invalid_argument);
    EXPECT_THROW(Ensemble({{1.5, id}, {-0.5, id}}), std::invalid_argument);
    EXPECT_THROW(Ensemble({}), std::invalid_argument);
    SeededRng rng(1);
    EXPECT_THROW(Ensemble({{0.5, id}, {0.5, random_mixed_rank({2, 3}, 2, rng)}}), std::invalid_argument);
    EXPECT_THROW(Ensemble::pair(0.0, id, id), std::invalid_argument);
    EXPECT_NO_THROW(Ensemble({{1.0, id}}));
}

TEST(helstrom, examples) {
    EXPECT_NEAR(helstrom(bell_ensemble()), 1.0, 1e-12);
    const DensityMatrix id = DensityMatrix::maximally_mixed(kTwoQubits);
    EXPECT_NEAR(helstrom(Ensemble::pair(0.3, id, id)), 0.7, 1e-12);
    const DensityMatrix s1 = closest_separable(bell(BellLabel::phi_plus));
    const DensityMatrix s2 = closest_separable(bell(BellLabel::phi_minus));
    EXPECT_NEAR(helstrom(0.5, s1, 0.5, s2), 2.0 / 3.0, 1e-12);
}

TEST(helstrom, only_two_state_ensembles) {
    const DensityMatrix id = DensityMatrix::maximally_mixed(kTwoQubits);
    EXPECT_THROW(helstrom(Ensemble({{0.5, id}, {0.25, id}, {0.25, id}})), std::invalid_argument);
}

TEST(helstrom, matches_charpoly_oracle) {
    // Rank sums below 4 give repeated zero roots, where the polynomial oracle
    // itself is only accurate to about sqrt(machine epsilon).
    SeededRng rng(2);
    const std::pair<std::size_t, std::size_t> ranks[] = {{1, 3}, {2, 2}, {2, 4}, {3, 3}, {4, 4}};
    for (int t = 0; t < 200; ++t) {
        const auto [k1, k2] = ranks[t % 5];
        const Ensemble eta = random_ensemble(rng, k1, k2);
        const double expected =
            oracle::helstrom(eta[0].probability, eta[0].state.matrix(), eta[1].probability, eta[1].state.matrix());
        EXPECT_NEAR(helstrom(eta), expected, 1e-9);
    }
}

TEST(helstrom, joint_unitary_invariance) {
    SeededRng rng(3);
    for (int t = 0; t < 200; ++t) {
        const Ensemble eta = random_ensemble(rng, 1 + t % 4, 1 + (t / 4) % 4);
        const ComplexMatrix u = random_unitary(4, rng);
        const Ensemble rotated =
            Ensemble::pair(eta[0].probability, conjugate_by(eta[0].state, u), conjugate_by(eta[1].state, u));
        EXPECT_NEAR(helstrom(eta), helstrom(rotated), 1e-10);
    }
}

TEST(helstrom, within_trivial_range) {
    SeededRng rng(4);
    for (int t = 0; t < 200; ++t) {
        const Ensemble eta = random_ensemble(rng, 1 + t % 4, 1 + t % 4);
        const double p = helstrom(eta);
        EXPECT_GE(p, std::max(eta[0].probability, eta[1].probability) - 1e-12);
        EXPECT_LE(p, 1.0 + 1e-12);
    }
}

TEST(bounds, bell_pair_saturates_lower_bound) {
    const Ensemble eta = bell_ensemble();
    EXPECT_NEAR(theorem2_lower(eta), 1.0, 1e-9);
    EXPECT_NEAR(theorem1_upper(eta), 2.0, 1e-9);
    const BoundReport rep = bound_report(eta);
    EXPECT_NEAR(rep.p_eta, 1.0, 1e-9);
    EXPECT_NEAR(rep.p_eps, 2.0 / 3.0, 1e-9);
    EXPECT_NEAR(rep.p_eta - rep.thm2_lower, 0.0, 1e-9);
    EXPECT_NEAR(rep.gamma, 0.5, 1e-9);
    ASSERT_TRUE(rep.thm3_ok.has_value());
    EXPECT_TRUE(*rep.thm3_ok);
    EXPECT_FALSE(rep.thm4_ok.has_value());
    EXPECT_FALSE(rep.any_violation());
}

TEST(bounds, separable_ensemble_has_equal_probabilities) {
    const Ensemble eta =
        Ensemble::pair(0.5, DensityMatrix::projector(basis_state(1)), DensityMatrix::maximally_mixed(kTwoQubits));
    const BoundReport rep = bound_report(eta);
    EXPECT_DOUBLE_EQ(rep.r_max, 0.0);
    EXPECT_DOUBLE_EQ(rep.p_eta, rep.p_eps);
    EXPECT_NEAR(rep.gamma, 1.0, 1e-12);
    EXPECT_NEAR(rep.thm1_upper, rep.p_eta, 1e-12);
    EXPECT_NEAR(rep.thm2_lower, rep.p_eta, 1e-12);
}

TEST(bounds, theorem4_example_product_and_bell) {
    // |00> against phi+ at equal priors: the trace norm of (|00><00| - phi+)/2
    // has eigenvalues (+-1/sqrt(2))/2 on the span of |00>, |11>, so the norm is 1/sqrt(2).
    const Ensemble eta = Ensemble::pair(0.5, DensityMatrix::projector(basis_state(0)), bell(BellLabel::phi_plus));
    const double norm = oracle::charpoly_trace_norm(eta[0].state.matrix() * 0.5 - eta[1].state.matrix() * 0.5);
    EXPECT_NEAR(norm, 1.0 / std::sqrt(2.0), 1e-9);
    const double expected = 2.0 / (2.0 * 3.0) * (norm - 1.0);
    EXPECT_NEAR(theorem4_lower_diff(eta), expected, 1e-12);
    const BoundReport rep = bound_report(eta);
    ASSERT_TRUE(rep.thm4_lower_diff.has_value());
    EXPECT_NEAR(*rep.thm4_lower_diff, expected, 1e-12);
    EXPECT_TRUE(*rep.thm4_ok);
    EXPECT_GE(rep.p_eta - rep.p_eps, expected - 1e-9);
}

TEST(bounds, theorem4_precondition_diagnostics) {
    try {
        theorem4_lower_diff(bell_ensemble());
        FAIL() << "expected rejection";
    } catch (const std::invalid_argument& e) {
        EXPECT_NE(std::string(e.what()).find("both entangled"), std::string::npos) << e.what();
    }
    const DensityMatrix id = DensityMatrix::maximally_mixed(kTwoQubits);
    EXPECT_THROW(theorem4_lower_diff(Ensemble::pair(0.5, id, id)), std::invalid_argument);
}

TEST(bounds, report_invariants_on_random_ensembles) {
    SeededRng rng(5);
    for (int t = 0; t < 400; ++t) {
        const Ensemble eta = random_ensemble(rng, 1 + t % 4, 1 + (t / 4) % 4);
        const BoundReport rep = bound_report(eta);
        EXPECT_NEAR(rep.gamma, rep.p_eta / (rep.p_eps * (1.0 + rep.r_max)), 1e-12);
        EXPECT_LE(rep.gamma, 1.0 + 1e-9);
        EXPECT_TRUE(rep.thm1_ok);
        EXPECT_TRUE(rep.thm2_ok);
        EXPECT_NEAR(rep.thm1_upper, theorem1_upper(eta), 1e-12);
        EXPECT_NEAR(rep.thm2_lower, theorem2_lower(eta), 1e-12);
        if (std::abs(rep.p_eta - rep.p_eps) > 1e-6) {
            EXPECT_EQ(rep.above_reference_curve(), rep.p_eta > rep.p_eps);
        }
        EXPECT_EQ(rep.thm4_ok.has_value(), (rep.r_values[0] > 1e-9) != (rep.r_values[1] > 1e-9));
    }
}

TEST(bounds, closest_separable_ensemble_keeps_probabilities) {
    SeededRng rng(6);
    const Ensemble eta = random_ensemble(rng, 2, 3);
    const Ensemble eps = closest_separable_ensemble(eta);
    EXPECT_EQ(eps[0].probability, eta[0].probability);
    EXPECT_EQ(eps[1].probability, eta[1].probability);
    EXPECT_TRUE(is_ppt(eps[0].state));
    EXPECT_TRUE(is_ppt(eps[1].state));
}
