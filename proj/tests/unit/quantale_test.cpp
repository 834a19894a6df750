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

#include "coweak/quantale.hpp"

using namespace coweak;

namespace {

using NatQ = LabelSetQ<NatAdd>;

NatQ::value_type random_set(const NatQ &q, std::mt19937_64 &rng) {
    NatQ::value_type v;
    const std::size_t k = rng() % 4;
    for (std::size_t i = 0; i < k; ++i) v.emplace_back(static_cast<Label>(rng() % 2), rng() % 3);
    return q.normalize(std::move(v));
}

/// A quantale whose multiplication forgets the unit.
struct BrokenUnitQ : BoolQ {
    bool mul(bool a, bool b) const { return a && b && false; }
};

} // namespace

TEST(JoinMany, EmptyIsBottom) {
    EXPECT_EQ(join_many(BoolQ{}, std::vector<bool>{}), false);
    NatQ q({"a"});
    EXPECT_TRUE(join_many(q, std::vector<NatQ::value_type>{}).empty());
}

TEST(JoinMany, BoolIsOr) { EXPECT_EQ(join_many(BoolQ{}, std::vector<bool>{true, false}), true); }

TEST(JoinMany, LabelSetIsUnion) {
    NatQ q({"a"});
    auto v = join_many(q, std::vector<NatQ::value_type>{q.singleton(1, 2), q.singleton(kTau, 0)});
    EXPECT_EQ(q.format(v), "{(tau,0),(a,2)}");
    EXPECT_EQ(v, q.join(q.singleton(kTau, 0), q.singleton(1, 2)));
}

TEST(JoinMany, OrderIndependent) {
    NatQ q({"a"});
    std::mt19937_64 rng(3);
    std::vector<NatQ::value_type> elems;
    for (int i = 0; i < 6; ++i) elems.push_back(random_set(q, rng));
    auto forward = join_many(q, elems);
    std::reverse(elems.begin(), elems.end());
    EXPECT_EQ(forward, join_many(q, elems));
}

TEST(BoolQ, LawsHoldExhaustively) {
    BoolQ q;
    auto report = check_quantale_laws(q, q.elements());
    EXPECT_TRUE(report.all_passed());
    EXPECT_EQ(report.find("mul-associative")->checked, 8u);
}

TEST(LabelSetQ, LawsHoldOnRandomSamples) {
    NatQ q({"a"});
    std::mt19937_64 rng(11);
    std::vector<NatQ::value_type> samples;
    for (int i = 0; i < 10; ++i) samples.push_back(random_set(q, rng));
    auto report = check_quantale_laws(q, samples);
    for (const auto &law : report.laws) EXPECT_TRUE(law.passed()) << law.law << ": " << law.counterexample.value_or("");
}

TEST(LabelSetQ, TrivialAndRealMonoidsSatisfyLaws) {
    LtsQ lts({"a", "b"});
    std::vector<LtsQ::value_type> s{{}, lts.unit(), lts.singleton(1), lts.singleton(2), lts.join(lts.singleton(1), lts.unit())};
    EXPECT_TRUE(check_quantale_laws(lts, s).all_passed());
    LabelSetQ<RealAdd> timed({"a"});
    std::vector<LabelSetQ<RealAdd>::value_type> t{{}, timed.unit(), timed.singleton(kTau, 0.7), timed.singleton(1, 0.8),
                                                  timed.join(timed.singleton(kTau, 1.5), timed.singleton(1, 0.0))};
    EXPECT_TRUE(check_quantale_laws(timed, t).all_passed());
}

TEST(LabelSetQ, UnitLaw) {
    NatQ q({"a", "b"});
    std::mt19937_64 rng(5);
    for (int i = 0; i < 50; ++i) {
        auto a = random_set(q, rng);
        EXPECT_EQ(q.mul(q.unit(), a), a);
        EXPECT_EQ(q.mul(a, q.unit()), a);
    }
}

TEST(LabelSetQ, ProductAbsorbsSilentSteps) {
    NatQ q({"a", "b"});
    EXPECT_EQ(q.mul(q.singleton(1, 2), q.singleton(kTau, 3)), q.singleton(1, 5));
    EXPECT_EQ(q.mul(q.singleton(kTau, 1), q.singleton(2, 1)), q.singleton(2, 2));
    EXPECT_TRUE(q.mul(q.singleton(1, 0), q.singleton(2, 0)).empty());
}

TEST(LabelSetQ, MulPreservesUnions) {
    NatQ q({"a"});
    std::mt19937_64 rng(9);
    for (int i = 0; i < 200; ++i) {
        auto a = random_set(q, rng), b = random_set(q, rng), c = random_set(q, rng);
        EXPECT_EQ(q.mul(a, q.join(b, c)), q.join(q.mul(a, b), q.mul(a, c)));
        EXPECT_EQ(q.mul(q.join(b, c), a), q.join(q.mul(b, a), q.mul(c, a)));
    }
}

TEST(LabelSetQ, OrderIsPartialOrder) {
    NatQ q({"a"});
    std::mt19937_64 rng(21);
    std::vector<NatQ::value_type> s;
    for (int i = 0; i < 12; ++i) s.push_back(random_set(q, rng));
    auto r = check_quantale_laws(q, s);
    EXPECT_TRUE(r.find("leq-reflexive")->passed());
    EXPECT_TRUE(r.find("leq-antisymmetric")->passed());
    EXPECT_TRUE(r.find("leq-transitive")->passed());
}

TEST(CheckLaws, BrokenUnitIsReported) {
    BrokenUnitQ q;
    auto report = check_quantale_laws(q, q.elements());
    EXPECT_FALSE(report.all_passed());
    EXPECT_FALSE(report.find("mul-left-unit")->passed());
    EXPECT_TRUE(report.find("mul-left-unit")->counterexample.has_value());
    EXPECT_TRUE(report.find("join-commutative")->passed());
}

TEST(CheckLaws, EmptySamplesRejected) { EXPECT_THROW(check_quantale_laws(BoolQ{}, {}), PreconditionError); }

TEST(LabelSetQ, FindLabel) {
    LtsQ q({"a", "b"});
    EXPECT_EQ(q.find_label("tau"), kTau);
    EXPECT_EQ(q.find_label("b"), Label{2});
    EXPECT_FALSE(q.find_label("c").has_value());
    EXPECT_EQ(q.label_name(1), "a");
}

TEST(RealAdd, SnapsToGrid) {
    RealAdd m;
    EXPECT_EQ(m.op(0.7, 0.8), m.op(1.0, 0.5));
    EXPECT_EQ(m.format(1.5), "1.5");
}
