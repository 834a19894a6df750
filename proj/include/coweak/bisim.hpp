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

#ifndef COWEAK_BISIM_HPP
#define COWEAK_BISIM_HPP

#include <optional>
#include <string>
#include <vector>

#include "coweak/common.hpp"
#include "coweak/kleisli.hpp"
#include "coweak/laxflow.hpp"
#include "coweak/partition.hpp"
#include "coweak/prob_kernel.hpp"
#include "coweak/quantale.hpp"
#include "coweak/saturation.hpp"

namespace coweak {

/// Coarsest partition whose quotient map is a homomorphism of alpha,
/// refined from `start` (default: one block).
template <Quantale Q>
Partition strong_minimize(const KleisliEndo<Q> &alpha, std::optional<Partition> start = std::nullopt) {
    if (!alpha.is_endo()) throw MismatchError("strong_minimize: morphism is not an endomorphism");
    using Row = std::vector<typename Q::value_type>;
    auto signature = [&](const Partition &p) {
        const auto sig = pushforward(p.quotient(), alpha);
        std::vector<Row> rows(alpha.rows());
        for (std::size_t x = 0; x < alpha.rows(); ++x)
            for (std::size_t c = 0; c < sig.cols(); ++c) rows[x].push_back(sig.at(x, c));
        return rows;
    };
    auto equal = [](const Row &a, const Row &b) { return a == b; };
    return refine<Row>(start ? *start : Partition::single_block(alpha.src()), signature, equal).partition;
}

/// Strong probabilistic bisimulation: equal fiber sums per (label, class) within `tol`.
inline Partition strong_minimize(const ProbKernel &alpha, double tol = kEps) {
    using Row = std::vector<double>;
    auto signature = [&](const Partition &p) {
        const auto t = pushforward(p.quotient(), alpha);
        std::vector<Row> rows;
        for (std::size_t x = 0; x < alpha.size(); ++x) rows.push_back(t.row(x));
        return rows;
    };
    auto equal = [tol](const Row &a, const Row &b) { return detail::rows_close(a, b, tol); };
    return refine<Row>(Partition::single_block(alpha.space()), signature, equal).partition;
}

/// Coarsest weak bisimulation: strong bisimulation of the saturation.
template <Quantale Q> Partition weak_minimize(const KleisliEndo<Q> &alpha, const FixpointConfig &cfg = {}) {
    return strong_minimize(saturate(alpha, cfg));
}

struct WeakWitness {
    std::string first;  // two states the map identifies
    std::string second;
    std::string target; // target state (class) where their rows differ
    std::string first_value;
    std::string second_value;
};

struct WeakCheckResult {
    bool holds = true;
    std::optional<WeakWitness> witness;
};

/**
 * f is a weak behavioural morphism iff L = mu x.(f# v x . alpha) factors
 * through f#, i.e. states with the same image have equal rows of L.
 */
template <Quantale Q>
WeakCheckResult weak_check(const KleisliEndo<Q> &alpha, const StateMap &f, const FixpointConfig &cfg = {}) {
    if (!(f.src() == alpha.src())) throw MismatchError("weak_check: map source is not the carrier");
    const auto &q = alpha.quantale();
    const auto L = saturate_through(alpha, lift(f, q), cfg);
    const std::size_t n = alpha.rows();
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = x + 1; y < n; ++y) {
            if (f(x) != f(y)) continue;
            for (std::size_t c = 0; c < L.cols(); ++c)
                if (!(L.at(x, c) == L.at(y, c)))
                    return {false, WeakWitness{alpha.src().name(x), alpha.src().name(y), f.dst().name(c),
                                               q.format(L.at(x, c)), q.format(L.at(y, c))}};
        }
    return {};
}

template <Quantale Q>
WeakCheckResult weak_check(const KleisliEndo<Q> &alpha, const Partition &p, const FixpointConfig &cfg = {}) {
    return weak_check(alpha, static_cast<const StateMap &>(p.quotient()), cfg);
}

/**
 * Coarsest weak bisimulation by enumerating every equivalence relation.
 * The join of all passing relations is checked to pass as well.
 */
template <Quantale Q>
Partition brute_force_weak(const KleisliEndo<Q> &alpha, const FixpointConfig &cfg = {},
                           std::size_t max_states = 7) {
    if (alpha.rows() > max_states)
        throw TooLargeError("brute-force search is limited to " + std::to_string(max_states) + " states");
    auto best = Partition::discrete(alpha.src());
    for_each_partition(alpha.src(), [&](const Partition &p) {
        if (weak_check(alpha, p, cfg).holds) best = join(best, p);
    });
    if (!weak_check(alpha, best, cfg).holds)
        throw Error("Invariant", "join of weak bisimulations " + best.to_string() + " is not one");
    return best;
}

// ---------------------------------------------------------------------------
// Adjunction check for Sigma_! over relations

struct AdjointDisagreement {
    std::string family; // the candidate, as a bit string per object
    bool left = false;
    bool right = false;
};

struct AdjointReport {
    std::size_t candidates = 0;
    std::size_t left_holds = 0;
    std::size_t right_holds = 0;
    std::vector<AdjointDisagreement> disagreements;

    bool agrees() const { return disagreements.empty(); }
};

/**
 * For every family {f_D : pi(D) -> Y} of relations, compares
 *   left:  f_D2 . pi(d) <= pi' . f_D1 for every arrow d : D1 -> D2
 *   right: [f_D] . Sigma_!(pi) <= pi' . [f_D]
 * where [f_D] is the cotuple on the coproduct carrier.
 */
inline AdjointReport adjoint_check(const Diagram<BoolQ> &pi, const KleisliEndo<BoolQ> &target,
                                   std::size_t max_carrier = 3, const FixpointConfig &cfg = {}) {
    if (!target.is_endo()) throw PreconditionError("adjoint_check: target is not an endomorphism");
    const auto &Y = target.src();
    const BoolQ q;
    if (!leq_endo(identity_endo(Y, q), target)) throw PreconditionError("adjoint_check: target is not reflexive");
    if (!leq_endo(compose(target, target), target))
        throw PreconditionError("adjoint_check: target is not transitive");
    if (Y.size() > max_carrier) throw TooLargeError("adjoint_check: target carrier too large");
    std::size_t bits = 0;
    for (const auto &c : pi.carriers()) {
        if (c.size() > max_carrier) throw TooLargeError("adjoint_check: object carrier too large");
        bits += c.size() * Y.size();
    }
    if (bits > 24) throw TooLargeError("adjoint_check: too many candidate families");

    const auto carrier = pi.coproduct_carrier();
    const auto sigma = sigma_bang_diagram(pi, cfg);
    AdjointReport report;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << bits); ++mask) {
        std::vector<KleisliMorphism<BoolQ>> family;
        KleisliMorphism<BoolQ> cotuple(q, carrier, Y);
        std::size_t bit = 0;
        std::string text;
        for (std::size_t o = 0; o < pi.objects().size(); ++o) {
            KleisliMorphism<BoolQ> f(q, pi.carriers()[o], Y);
            if (o) text += "|";
            for (std::size_t r = 0; r < f.rows(); ++r)
                for (std::size_t c = 0; c < f.cols(); ++c, ++bit) {
                    const bool v = (mask >> bit) & 1u;
                    f.set(r, c, v);
                    cotuple.set(pi.offset(o) + r, c, v);
                    text += v ? '1' : '0';
                }
            family.push_back(std::move(f));
        }
        bool left = true;
        for (const auto &a : pi.arrows())
            if (!leq_endo(compose(family[a.to], a.image), compose(target, family[a.from]))) {
                left = false;
                break;
            }
        const bool right = leq_endo(compose(cotuple, sigma), compose(target, cotuple));
        ++report.candidates;
        report.left_holds += left;
        report.right_holds += right;
        if (left != right) report.disagreements.push_back({text, left, right});
    }
    return report;
}

template <class Monoid>
AdjointReport adjoint_check(const MFlow<BoolQ, Monoid> &pi, const KleisliEndo<BoolQ> &target,
                            std::size_t max_carrier = 3, const FixpointConfig &cfg = {}) {
    return adjoint_check(as_diagram(pi), target, max_carrier, cfg);
}

} // namespace coweak

#endif // COWEAK_BISIM_HPP
