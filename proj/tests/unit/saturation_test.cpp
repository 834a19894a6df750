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

#include "coweak/saturation.hpp"
#include "fixtures.hpp"

using namespace coweak;

namespace {

KleisliEndo<LtsQ> chain() {
    LtsQ q({"a"});
    StateSpace s({"x0", "x1", "x2"});
    KleisliEndo<LtsQ> a(q, s, s);
    a.set(0, 1, q.singleton(1));
    a.set(1, 2, q.singleton(kTau));
    return a;
}

/// Closure oracle for a label-set system: [0] = tau*, [a] = tau* a tau*.
oracle::LabelRel closure_oracle(const oracle::Lts &s) {
    const auto arrows = oracle::double_arrows(s);
    oracle::LabelRel out(s.n, std::vector<std::set<std::uint32_t>>(s.n));
    for (std::uint32_t l = 0; l < arrows.size(); ++l)
        for (std::size_t x = 0; x < s.n; ++x)
            for (std::size_t y = 0; y < s.n; ++y)
                if (arrows[l][x][y]) out[x][y].insert(l);
    return out;
}

} // namespace

TEST(FixpointConfig, Validates) {
    FixpointConfig cfg;
    cfg.max_iterations = 0;
    EXPECT_THROW(cfg.validate(), PreconditionError);
    cfg = {};
    cfg.tolerance = 0;
    EXPECT_THROW(cfg.validate(), PreconditionError);
}

TEST(Saturate, ChainAddsVisibleClosureAndSilentLoops) {
    auto a = chain();
    const auto &q = a.quantale();
    auto s = saturate(a);
    KleisliEndo<LtsQ> expect = join_endo(a, identity_endo(a.src(), q));
    expect.join_into(0, 2, q.singleton(1));
    EXPECT_EQ(s, expect);
}

TEST(Saturate, AlreadySaturatedIsFixed) {
    auto s = saturate(chain());
    EXPECT_EQ(saturate(s), s);
}

TEST(Saturate, BoolMatchesFloydWarshall) {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 50; ++i) {
        auto r = fixtures::random_rel(rng, 6, 0.25);
        EXPECT_EQ(fixtures::from_bool(saturate(fixtures::to_bool(r))), oracle::rtc(r));
    }
}

TEST(Saturate, LabelSetMatchesDoubleArrowOracle) {
    std::mt19937_64 rng(32);
    for (int i = 0; i < 60; ++i) {
        auto sys = oracle::random_lts(rng, 7, 2);
        EXPECT_EQ(fixtures::labels_of(saturate(fixtures::to_endo(sys))), closure_oracle(sys));
    }
}

TEST(Saturate, ClosureProperties) {
    std::mt19937_64 rng(33);
    for (int i = 0; i < 60; ++i) {
        auto a = fixtures::to_endo(oracle::random_lts(rng, 6, 2));
        auto s = saturate(a);
        EXPECT_TRUE(leq_endo(identity_endo(a.src(), a.quantale()), s));
        EXPECT_TRUE(leq_endo(a, s));
        EXPECT_TRUE(leq_endo(compose(s, s), s));
        EXPECT_EQ(saturate(s), s);
    }
}

TEST(Saturate, MinimalAmongTransitiveReflexiveSupersets) {
    std::mt19937_64 rng(34);
    for (int i = 0; i < 40; ++i) {
        auto sys = oracle::random_lts(rng, 5, 2);
        auto a = fixtures::to_endo(sys);
        auto extra = fixtures::to_endo(oracle::random_lts(rng, 5, 2));
        if (!(extra.src() == a.src()) || !(extra.quantale() == a.quantale())) continue;
        auto beta = saturate(join_endo(a, extra));
        EXPECT_TRUE(leq_endo(saturate(a), beta));
    }
}

TEST(Saturate, AccelerationGivesIdenticalResult) {
    std::mt19937_64 rng(35);
    FixpointConfig fast;
    fast.accelerate = true;
    for (int i = 0; i < 50; ++i) {
        auto a = fixtures::to_endo(oracle::random_lts(rng, 8, 2));
        EXPECT_EQ(saturate(a), saturate(a, fast));
    }
    LabelSetQ<NatAdd> q({"a"});
    auto s = StateSpace::numbered(4);
    KleisliEndo<LabelSetQ<NatAdd>> w(q, s, s);
    w.set(0, 1, q.singleton(kTau, 2));
    w.set(1, 2, q.singleton(1, 1));
    w.set(2, 3, q.singleton(kTau, 3));
    EXPECT_EQ(saturate(w), saturate(w, fast));
}

TEST(Saturate, WeightCycleIsReported) {
    LabelSetQ<NatAdd> q({"a"});
    auto s = StateSpace::numbered(2);
    KleisliEndo<LabelSetQ<NatAdd>> w(q, s, s);
    w.set(0, 1, q.singleton(kTau, 1));
    w.set(1, 0, q.singleton(kTau, 0));
    try {
        saturate(w);
        FAIL() << "expected NonStabilizing";
    } catch (const NonStabilizingError &e) {
        EXPECT_EQ(e.cycle(), (std::vector<std::string>{"s0", "s1", "s0"}));
    }
    // unit weights on the cycle are harmless
    w.set(0, 1, q.singleton(kTau, 0));
    w.set(1, 1, q.singleton(1, 5));
    auto sat = saturate(w);
    EXPECT_EQ(sat.at(0, 1), q.join(q.singleton(kTau, 0), q.singleton(1, 5)));
}

TEST(Saturate, IterationCapIsEnforced) {
    FixpointConfig cfg;
    cfg.max_iterations = 1;
    EXPECT_THROW(saturate(chain(), cfg), NonStabilizingError);
}

TEST(SaturateThrough, IdentityGivesSaturation) {
    std::mt19937_64 rng(36);
    for (int i = 0; i < 30; ++i) {
        auto a = fixtures::to_endo(oracle::random_lts(rng, 6, 2));
        EXPECT_EQ(saturate_through(a, identity_endo(a.src(), a.quantale())), saturate(a));
    }
}

TEST(SaturateThrough, ChainQuotientEqualsMapAfterSaturation) {
    auto a = chain();
    QuotientMap f(a.src(), StateSpace({"[x0]", "[x1,x2]"}), {0, 1, 1});
    auto fs = lift(f, a.quantale());
    EXPECT_EQ(saturate_through(a, fs), compose(fs, saturate(a)));
}

TEST(SaturateThrough, EqualsMapAfterSaturationOnRandomInputs) {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 40; ++i) {
        auto a = fixtures::to_endo(oracle::random_lts(rng, 6, 2));
        std::vector<std::size_t> assign(a.rows());
        std::size_t k = 1 + rng() % a.rows();
        for (std::size_t x = 0; x < a.rows(); ++x) assign[x] = x < k ? x : rng() % k;
        QuotientMap f(a.src(), StateSpace::numbered(k, "b"), assign);
        auto fs = lift(f, a.quantale());
        EXPECT_EQ(saturate_through(a, fs), compose(fs, saturate(a)));
    }
}

TEST(SaturateThrough, BoolMatchesBoundedWordEnumeration) {
    std::mt19937_64 rng(38);
    for (int i = 0; i < 40; ++i) {
        const std::size_t n = 5;
        auto r = fixtures::random_rel(rng, n, 0.25);
        auto f = fixtures::random_rel(rng, n, 0.3);
        // sum over k <= 2n of r^k then f
        auto acc = f, power = oracle::identity_rel(n);
        for (std::size_t k = 1; k <= 2 * n; ++k) {
            power = oracle::then(power, r);
            acc = oracle::unite(acc, oracle::then(power, f));
        }
        EXPECT_EQ(fixtures::from_bool(saturate_through(fixtures::to_bool(r), fixtures::to_bool(f))), acc);
    }
}

TEST(SigmaBangFlow, UnderlineGivesSaturation) {
    std::mt19937_64 rng(39);
    for (int i = 0; i < 30; ++i) {
        auto a = fixtures::to_endo(oracle::random_lts(rng, 6, 2));
        for (std::size_t depth : {1u, 2u, 4u}) EXPECT_EQ(sigma_bang_flow(underline(a, depth)), saturate(a));
    }
}

TEST(SigmaBangFlow, EmptyTableIsIdentity) {
    auto s = StateSpace::numbered(3);
    MFlow<LtsQ, NatAdd> pi(s, LtsQ({"a"}));
    EXPECT_EQ(sigma_bang_flow(pi), identity_endo(s, LtsQ({"a"})));
}

TEST(SigmaBangFlow, TwoEntriesEqualSaturatedJoin) {
    std::mt19937_64 rng(40);
    LtsQ q({"a", "b"});
    auto s = StateSpace::numbered(5);
    for (int i = 0; i < 30; ++i) {
        oracle::Lts sa = oracle::random_lts(rng, 5, 2), sb = oracle::random_lts(rng, 5, 2);
        sa.n = sb.n = 5;
        sa.visible = sb.visible = 2;
        for (auto *sys : {&sa, &sb})
            sys->edges.erase(std::remove_if(sys->edges.begin(), sys->edges.end(),
                                            [](const auto &e) { return std::get<0>(e) >= 5 || std::get<2>(e) >= 5; }),
                             sys->edges.end());
        auto a = fixtures::to_endo(sa), b = fixtures::to_endo(sb);
        MFlow<LtsQ, NatAdd> pi(s, q);
        pi.add(1, a);
        pi.add(2, b);
        EXPECT_EQ(sigma_bang_flow(pi), saturate(join_endo(a, b)));
    }
}

TEST(SigmaBangDiagram, NoArrowsIsIdentity) {
    Diagram<BoolQ> d{BoolQ{}};
    d.add_object("X", StateSpace::numbered(2, "x"));
    d.add_object("Y", StateSpace::numbered(1, "y"));
    auto r = sigma_bang_diagram(d);
    EXPECT_EQ(r, identity_endo(d.coproduct_carrier(), BoolQ{}));
    EXPECT_EQ(d.coproduct_carrier().names(), (std::vector<std::string>{"X.x0", "X.x1", "Y.y0"}));
}

TEST(SigmaBangDiagram, OneObjectSelfArrowIsSaturation) {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 20; ++i) {
        auto a = fixtures::to_endo(oracle::random_lts(rng, 5, 2));
        Diagram<LtsQ> d(a.quantale());
        d.add_object("D", a.src());
        d.add_arrow("d", 0, 0, a);
        auto r = sigma_bang_diagram(d);
        auto expect = saturate(a);
        for (std::size_t x = 0; x < a.rows(); ++x)
            for (std::size_t y = 0; y < a.cols(); ++y) EXPECT_EQ(r.at(x, y), expect.at(x, y));
    }
}

TEST(SigmaBangDiagram, SingleArrowBetweenObjects) {
    Diagram<BoolQ> d{BoolQ{}};
    auto u = d.add_object("D1", StateSpace({"u"}));
    auto v = d.add_object("D2", StateSpace({"v"}));
    KleisliMorphism<BoolQ> img(BoolQ{}, d.carriers()[u], d.carriers()[v]);
    img.set(0, 0, true);
    d.add_arrow("d", u, v, img);
    auto over = overline(d, 0);
    EXPECT_TRUE(over.at(0, 1));
    EXPECT_FALSE(over.at(0, 0));
    EXPECT_TRUE(over.at(1, 1));
    auto r = sigma_bang_diagram(d);
    EXPECT_EQ(fixtures::from_bool(r), (oracle::Rel{{true, true}, {false, true}}));
}

TEST(SaturatePresheaf, ChainLetter) {
    auto p = to_presheaf(chain());
    auto sp = saturate_presheaf(p);
    EXPECT_TRUE(sp.letters[0].at(0, 1));
    EXPECT_TRUE(sp.letters[0].at(0, 2));
    EXPECT_FALSE(sp.letters[0].at(0, 0));
    EXPECT_FALSE(sp.letters[0].at(1, 2));
    EXPECT_TRUE(sp.epsilon.at(1, 2));
}

TEST(SaturatePresheaf, TauFreeIsPadding) {
    std::mt19937_64 rng(42);
    auto r = fixtures::random_rel(rng, 4, 0.4);
    auto s = StateSpace::numbered(4);
    RelPresheaf p{s, {"a"}, KleisliEndo<BoolQ>(BoolQ{}, s, s), {fixtures::to_bool(r)}};
    auto sp = saturate_presheaf(p);
    EXPECT_EQ(sp.epsilon, identity_endo(s, BoolQ{}));
    EXPECT_EQ(fixtures::from_bool(sp.letters[0]), r);
}

TEST(SaturatePresheaf, MatchesWordEnumeration) {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 30; ++i) {
        const std::size_t n = 1 + rng() % 5;
        auto tau = fixtures::random_rel(rng, n, 0.3), a = fixtures::random_rel(rng, n, 0.3);
        auto s = StateSpace::numbered(n);
        RelPresheaf p{s, {"a"}, fixtures::to_bool(tau), {fixtures::to_bool(a)}};
        auto sp = saturate_presheaf(p);
        // words tau^i and tau^i a tau^j, total length <= 2n + 1
        std::vector<oracle::Rel> tau_pow{oracle::identity_rel(n)};
        for (std::size_t k = 1; k <= 2 * n + 1; ++k) tau_pow.push_back(oracle::then(tau_pow.back(), tau));
        auto eps = oracle::empty_rel(n), letter = oracle::empty_rel(n);
        for (std::size_t i2 = 0; i2 <= 2 * n + 1; ++i2) eps = oracle::unite(eps, tau_pow[i2]);
        for (std::size_t i2 = 0; i2 <= 2 * n; ++i2)
            for (std::size_t j = 0; i2 + j <= 2 * n; ++j)
                letter = oracle::unite(letter, oracle::then(oracle::then(tau_pow[i2], a), tau_pow[j]));
        EXPECT_EQ(fixtures::from_bool(sp.epsilon), eps);
        EXPECT_EQ(fixtures::from_bool(sp.letters[0]), letter);
        // evaluate(word) uses the same composites
        EXPECT_EQ(fixtures::from_bool(p.evaluate({kTau, 1, kTau})), oracle::then(oracle::then(tau, a), tau));
    }
}

// ---------------------------------------------------------------------------
// Probabilistic

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

TEST(SaturateProb, OwnClassGetsOneWhenStochastic) {
    std::mt19937_64 rng(44);
    for (int i = 0; i < 20; ++i) {
        auto sys = oracle::random_fps(rng, 5, true);
        auto k = fixtures::to_kernel(sys);
        auto p = Partition(k.space(), std::vector<std::size_t>(k.size(), 0));
        auto r = saturate_prob_through(k, p.quotient());
        for (std::size_t x = 0; x < k.size(); ++x) EXPECT_NEAR(r.table.at(x, kTau, 0), 1.0, 1e-12);
    }
}

TEST(SaturateProb, SuExampleGeometricSeries) {
    auto k = su_system();
    QuotientMap f(k.space(), StateSpace({"[s,u]", "[t]"}), {0, 0, 1});
    auto r = saturate_prob_through(k, f);
    EXPECT_NEAR(r.table.at(0, 1, 1), 1.0, 1e-12);
    EXPECT_NEAR(r.table.at(1, 1, 1), 1.0, 1e-12);
    EXPECT_LT(r.residual, 1e-12);
}

TEST(SaturateProb, NoTransitions) {
    ProbKernel k(StateSpace::numbered(3), {"a"});
    QuotientMap f(k.space(), StateSpace({"A", "B"}), {0, 1, 1});
    auto r = saturate_prob_through(k, f);
    for (std::size_t x = 0; x < 3; ++x) {
        EXPECT_EQ(r.table.at(x, kTau, 0), x == 0 ? 1.0 : 0.0);
        EXPECT_EQ(r.table.at(x, kTau, 1), x == 0 ? 0.0 : 1.0);
        EXPECT_EQ(r.table.at(x, 1, 0), 0.0);
        EXPECT_EQ(r.table.at(x, 1, 1), 0.0);
    }
}

TEST(SaturateProb, MatchesJacobiOracleAndIsLeast) {
    std::mt19937_64 rng(45);
    for (int i = 0; i < 30; ++i) {
        auto sys = oracle::random_fps(rng, 5, i % 2 == 0);
        auto k = fixtures::to_kernel(sys);
        std::vector<std::size_t> cls(sys.n);
        for (auto &c : cls) c = rng() % 2;
        Partition p(k.space(), cls);
        auto r = saturate_prob_through(k, p.quotient());
        auto ref = oracle::prob_saturation(sys, p.block_ids());
        ASSERT_EQ(ref.size(), r.table.data().size());
        for (std::size_t j = 0; j < ref.size(); ++j) EXPECT_NEAR(r.table.data()[j], ref[j], 1e-9);
        EXPECT_LT(r.residual, 1e-9);
        // leastness: a fixed point reached from a perturbed start above it is not below it
        EXPECT_LT(prob_residual(k, p.quotient(), r.table), 1e-9);
    }
}

TEST(SaturateProb, DivergentMassBecomesInfinite) {
    ProbKernel k(StateSpace::numbered(1), {"a"});
    k.set(0, kTau, 0, 2.0);
    QuotientMap f(k.space(), StateSpace({"A"}), {0});
    auto r = saturate_prob_through(k, f);
    EXPECT_TRUE(std::isinf(r.table.at(0, kTau, 0)));
}

TEST(SaturateProb, MaxIterationsReported) {
    ProbKernel k(StateSpace::numbered(2), {"a"});
    k.set(0, kTau, 0, 1.0);
    k.set(0, 1, 1, 0.5);
    QuotientMap f(k.space(), StateSpace({"A", "B"}), {0, 1});
    FixpointConfig cfg;
    cfg.max_iterations = 1000;
    EXPECT_THROW(saturate_prob_through(k, f, cfg), MaxIterationsError);
}
