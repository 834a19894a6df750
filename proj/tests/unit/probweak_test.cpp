/*
 * Copyright 2026 The coweak Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <random>

#include <gtest/gtest.h>

#include "coweak/bisim.hpp"
#include "coweak/probweak.hpp"
#include "fixtures.hpp"

using namespace coweak;

namespace {

ProbKernel su_system() {
    StateSpace s({"s", "u", "t"});
    ProbKernel k(s, {"a"});
    k.set(0, kTau, 1, 0.5);
    k.set(0, 1, 2, 0.5);
    k.set(1, 1, 2, 1.0);
    return k;
}

} // namespace

TEST(ProbWeakCheck, DiscretePartitionHoldsVacuously) {
    std::mt19937_64 rng(71);
    for (int i = 0; i < 10; ++i) {
        auto k = fixtures::to_kernel(oracle::random_fps(rng, 5, false));
        EXPECT_TRUE(prob_weak_check(k, Partition::discrete(k.space())).holds);
    }
}

TEST(ProbWeakCheck, SuExampleHolds) {
    auto k = su_system();
    auto r = prob_weak_check(k, Partition::from_blocks(k.space(), {{"s", "u"}, {"t"}}));
    EXPECT_TRUE(r.holds);
    EXPECT_NEAR(r.saturation.table.at(0, 1, 1), 1.0, 1e-12);
}

TEST(ProbWeakCheck, WrongGroupingGivesWitness) {
    auto k = su_system();
    auto r = prob_weak_check(k, Partition::from_blocks(k.space(), {{"s", "t"}, {"u"}}));
    ASSERT_FALSE(r.holds);
    ASSERT_TRUE(r.witness.has_value());
    EXPECT_EQ(r.witness->first, "s");
    EXPECT_EQ(r.witness->second, "t");
    EXPECT_GT(std::fabs(r.witness->first_value - r.witness->second_value), 1e-9);
}

TEST(ProbWeakMinimize, SuExample) {
    auto k = su_system();
    EXPECT_EQ(prob_weak_minimize(k), Partition::from_blocks(k.space(), {{"s", "u"}, {"t"}}));
    EXPECT_EQ(brute_force_prob_weak(k), prob_weak_minimize(k));
}

TEST(ProbWeakMinimize, DifferentVisibleMassSplits) {
    ProbKernel k(StateSpace({"x", "y"}), {"a"});
    k.set(0, 1, 0, 0.5);
    k.set(1, 1, 1, 0.25);
    EXPECT_EQ(prob_weak_minimize(k), Partition::discrete(k.space()));
}

TEST(ProbWeakMinimize, StochasticOwnClassIsOne) {
    std::mt19937_64 rng(72);
    for (int i = 0; i < 20; ++i) {
        auto sys = oracle::random_fps(rng, 5, true);
        auto k = fixtures::to_kernel(sys);
        auto p = prob_weak_minimize(k);
        auto r = prob_weak_check(k, p);
        for (std::size_t x = 0; x < k.size(); ++x) EXPECT_NEAR(r.saturation.table.at(x, kTau, p.block_of(x)), 1.0, 1e-12);
    }
}

TEST(ProbWeakMinimize, MatchesExhaustiveOracle) {
    std::mt19937_64 rng(73);
    for (int i = 0; i < 60; ++i) {
        auto sys = oracle::random_fps(rng, 5, i % 3 != 0);
        auto k = fixtures::to_kernel(sys);
        auto p = prob_weak_minimize(k);
        EXPECT_EQ(p, Partition(k.space(), oracle::prob_weak_brute(sys))) << i;
        EXPECT_TRUE(prob_weak_check(k, p).holds);
        EXPECT_EQ(p, brute_force_prob_weak(k));
    }
}

TEST(ProbWeakMinimize, ResidualOfComputedTablesIsSmall) {
    std::mt19937_64 rng(74);
    for (int i = 0; i < 30; ++i) {
        auto k = fixtures::to_kernel(oracle::random_fps(rng, 5, true));
        auto p = prob_weak_minimize(k);
        auto r = prob_weak_check(k, p);
        EXPECT_LT(r.saturation.residual, 1e-9);
        EXPECT_LT(prob_residual(k, p.quotient(), r.saturation.table), 1e-9);
    }
}

TEST(ProbWeakMinimize, DeterministicZeroOneKernelsMatchLtsWeakClasses) {
    std::mt19937_64 rng(75);
    std::size_t checked = 0;
    for (int i = 0; i < 200 && checked < 40; ++i) {
        // each state has at most one outgoing transition, of probability 1
        const std::size_t n = 1 + rng() % 5;
        oracle::Lts lts{n, 2, {}};
        ProbKernel k(StateSpace::numbered(n), fixtures::alphabet(2));
        for (std::size_t x = 0; x < n; ++x) {
            if (rng() % 3 == 0) continue;
            auto l = static_cast<std::uint32_t>(rng() % 3);
            auto y = rng() % n;
            lts.edges.emplace_back(x, l, y);
            k.set(x, l, y, 1.0);
        }
        // tau self-loops diverge probabilistically but not relationally
        bool tau_cycle = false;
        auto tau = oracle::empty_rel(n);
        for (const auto &[x, l, y] : lts.edges)
            if (l == 0) tau[x][y] = true;
        auto reach = oracle::then(tau, oracle::rtc(tau));
        for (std::size_t x = 0; x < n; ++x) tau_cycle = tau_cycle || reach[x][x];
        if (tau_cycle) continue;
        ++checked;
        EXPECT_EQ(prob_weak_minimize(k), Partition(k.space(), oracle::classic_weak_classes(lts)));
    }
    EXPECT_GE(checked, 20u);
}

TEST(BruteForceProbWeak, LimitsSize) {
    ProbKernel k(StateSpace::numbered(8), {"a"});
    EXPECT_THROW(brute_force_prob_weak(k), TooLargeError);
}
