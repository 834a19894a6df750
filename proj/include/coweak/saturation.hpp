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

#ifndef COWEAK_SATURATION_HPP
#define COWEAK_SATURATION_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "coweak/common.hpp"
#include "coweak/kleisli.hpp"
#include "coweak/laxflow.hpp"
#include "coweak/prob_kernel.hpp"
#include "coweak/quantale.hpp"

namespace coweak {

struct FixpointConfig {
    enum class Mode { exact, numeric };

    Mode mode = Mode::exact;
    std::size_t max_iterations = 1'000'000;
    double tolerance = kConvergence;
    /// Closure iterates advance by squaring (x -> x . x) instead of one step.
    bool accelerate = false;

    void validate() const {
        if (max_iterations < 1) throw PreconditionError("max_iterations must be at least 1");
        if (!(tolerance > 0.0)) throw PreconditionError("tolerance must be positive");
    }
};

namespace detail {

template <class Q> struct is_label_set : std::false_type {};
template <class M> struct is_label_set<LabelSetQ<M>> : std::true_type {};

} // namespace detail

/**
 * For label-set weights over a strictly increasing monoid: a cycle of
 * silent edges carrying a non-unit weight. Such a cycle makes the weight
 * sets of the closure infinite. Returned as state names, first == last.
 */
template <class M>
std::optional<std::vector<std::string>> find_weight_cycle(const KleisliEndo<LabelSetQ<M>> &alpha) {
    const auto &q = alpha.quantale();
    const auto &mon = q.monoid();
    const std::size_t n = alpha.rows();
    std::vector<std::vector<std::size_t>> succ(n);
    auto silent = [&](std::size_t x, std::size_t y) {
        for (const auto &e : alpha.at(x, y))
            if (e.first == kTau) return true;
        return false;
    };
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
            if (silent(x, y)) succ[x].push_back(y);

    // Shortest silent path from `from` to `to`, as a predecessor walk.
    auto path = [&](std::size_t from, std::size_t to) -> std::optional<std::vector<std::size_t>> {
        std::vector<std::size_t> pred(n, n);
        std::vector<std::size_t> queue{from};
        pred[from] = from;
        for (std::size_t i = 0; i < queue.size(); ++i) {
            auto u = queue[i];
            if (u == to) {
                std::vector<std::size_t> out{to};
                while (out.back() != from) out.push_back(pred[out.back()]);
                std::reverse(out.begin(), out.end());
                return out;
            }
            for (auto v : succ[u])
                if (pred[v] == n) {
                    pred[v] = u;
                    queue.push_back(v);
                }
        }
        return std::nullopt;
    };

    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
            bool heavy = false;
            for (const auto &e : alpha.at(x, y))
                if (e.first == kTau && (mon.less(e.second, mon.unit()) || mon.less(mon.unit(), e.second)))
                    heavy = true;
            if (!heavy) continue;
            if (auto back = path(y, x)) {
                std::vector<std::string> cycle{alpha.src().name(x)};
                for (auto s : *back) cycle.push_back(alpha.src().name(s));
                return cycle;
            }
        }
    }
    return std::nullopt;
}

namespace detail {

template <Quantale Q> void guard_divergence(const KleisliEndo<Q> &alpha) {
    if constexpr (is_label_set<Q>::value) {
        if constexpr (Q::monoid_type::kStrictlyIncreasing) {
            if (auto cycle = find_weight_cycle(alpha)) {
                std::string text;
                for (std::size_t i = 0; i < cycle->size(); ++i) text += (i ? " -> " : "") + (*cycle)[i];
                throw NonStabilizingError("silent cycle with non-unit weight: " + text, *cycle);
            }
        }
    }
}

/// Iterates `step` from `start` until two consecutive values agree.
template <class T, class Step>
T stabilize(T start, Step &&step, const FixpointConfig &cfg, const char *what) {
    cfg.validate();
    T x = std::move(start);
    for (std::size_t i = 0; i < cfg.max_iterations; ++i) {
        T next = step(x);
        if (next == x) return x;
        x = std::move(next);
    }
    throw NonStabilizingError(std::string(what) + " did not stabilize within " +
                              std::to_string(cfg.max_iterations) + " iterations");
}

} // namespace detail

/// alpha*: the least reflexive, transitive endomorphism above alpha.
template <Quantale Q> KleisliEndo<Q> saturate(const KleisliEndo<Q> &alpha, const FixpointConfig &cfg = {}) {
    if (!alpha.is_endo()) throw MismatchError("saturate: morphism is not an endomorphism");
    detail::guard_divergence(alpha);
    const auto step = join_endo(identity_endo(alpha.src(), alpha.quantale()), alpha);
    if (cfg.accelerate)
        return detail::stabilize(step, [](const KleisliEndo<Q> &x) { return compose(x, x); }, cfg,
                                 "saturation");
    return detail::stabilize(identity_endo(alpha.src(), alpha.quantale()),
                             [&](const KleisliEndo<Q> &x) { return compose(step, x); }, cfg,
                             "saturation");
}

/// Least fixed point of x -> f v x . alpha, iterated from f.
template <Quantale Q>
KleisliMorphism<Q> saturate_through(const KleisliEndo<Q> &alpha, const KleisliMorphism<Q> &f,
                                    const FixpointConfig &cfg = {}) {
    if (!alpha.is_endo()) throw MismatchError("saturate_through: alpha is not an endomorphism");
    if (!(f.src() == alpha.src())) throw MismatchError("saturate_through: f.src is not alpha's carrier");
    if (!(f.quantale() == alpha.quantale())) throw MismatchError("saturate_through: quantales differ");
    detail::guard_divergence(alpha);
    return detail::stabilize(
        f, [&](const KleisliMorphism<Q> &x) { return join_endo(f, compose(x, alpha)); }, cfg,
        "saturation");
}

/// Least fixed point of x -> id v join_i x . generators[i].
template <Quantale Q>
KleisliEndo<Q> closure_of(const StateSpace &space, const Q &q,
                          const std::vector<KleisliEndo<Q>> &generators, const FixpointConfig &cfg = {}) {
    auto all = KleisliEndo<Q>(q, space, space);
    for (const auto &g : generators) all = join_endo(all, g);
    detail::guard_divergence(all);
    const auto id = identity_endo(space, q);
    return detail::stabilize(
        id,
        [&](const KleisliEndo<Q> &x) {
            auto next = id;
            for (const auto &g : generators) next = join_endo(next, compose(x, g));
            return next;
        },
        cfg, "saturation");
}

template <Quantale Q, class Monoid>
KleisliEndo<Q> sigma_bang_flow(const MFlow<Q, Monoid> &pi, const FixpointConfig &cfg = {}) {
    std::vector<KleisliEndo<Q>> gens;
    for (const auto &e : pi.entries()) gens.push_back(e.second);
    return closure_of(pi.carrier(), pi.quantale(), gens, cfg);
}

/// Uses the entries 0..depth.
template <Quantale Q> KleisliEndo<Q> sigma_bang_flow(const NFlow<Q> &pi, const FixpointConfig &cfg = {}) {
    std::vector<KleisliEndo<Q>> gens;
    for (std::size_t n = 0; n <= pi.depth(); ++n) gens.push_back(pi.materialize(n));
    return closure_of(pi.carrier(), pi.quantale(), gens, cfg);
}

/// The arrow image pi(d) extended to the coproduct carrier: rows of the
/// source summand act by pi(d) into the target summand, all other rows are
/// the coprojection (identity).
template <Quantale Q> KleisliEndo<Q> overline(const Diagram<Q> &pi, std::size_t arrow) {
    const auto &a = pi.arrows().at(arrow);
    const auto carrier = pi.coproduct_carrier();
    const auto &q = pi.quantale();
    KleisliEndo<Q> out(q, carrier, carrier);
    const auto src_off = pi.offset(a.from);
    const auto dst_off = pi.offset(a.to);
    const auto src_size = pi.carriers()[a.from].size();
    for (std::size_t r = 0; r < carrier.size(); ++r) {
        if (r >= src_off && r < src_off + src_size) {
            for (std::size_t c = 0; c < a.image.cols(); ++c)
                out.set(r, dst_off + c, a.image.at(r - src_off, c));
        } else {
            out.set(r, r, q.unit());
        }
    }
    return out;
}

template <Quantale Q> KleisliEndo<Q> sigma_bang_diagram(const Diagram<Q> &pi, const FixpointConfig &cfg = {}) {
    std::vector<KleisliEndo<Q>> gens;
    for (std::size_t d = 0; d < pi.arrows().size(); ++d) gens.push_back(overline(pi, d));
    return closure_of(pi.coproduct_carrier(), pi.quantale(), gens, cfg);
}

/// Generator images of the tau-erased presheaf: eps -> tau*, a -> tau* . a . tau*.
inline TauErasedPresheaf saturate_presheaf(const RelPresheaf &pi, const FixpointConfig &cfg = {}) {
    if (!(pi.tau.src() == pi.space) || !pi.tau.is_endo())
        throw MismatchError("presheaf tau image does not live on its carrier");
    auto star = saturate(pi.tau, cfg);
    TauErasedPresheaf out{pi.space, pi.alphabet, star, {}};
    for (const auto &letter : pi.letters) {
        if (!(letter.src() == pi.space) || !letter.is_endo())
            throw MismatchError("presheaf letter image does not live on its carrier");
        out.letters.push_back(compose(star, compose(letter, star)));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fully probabilistic systems

struct ProbSaturation {
    ProbTable table; // (state, label, class)
    std::size_t iterations = 0;
    double residual = 0.0;
};

namespace detail {

/// One application of the right-hand sides, reading from `cur`.
inline double prob_rhs(const ProbKernel &alpha, const StateMap &f, const ProbTable &cur,
                       std::size_t x, Label l, std::size_t c) {
    const std::size_t n = alpha.size();
    double s = 0.0;
    for (std::size_t z = 0; z < n; ++z) {
        s += ext_mul(alpha.at(x, kTau, z), cur.at(z, l, c));
        if (l != kTau) s += ext_mul(alpha.at(x, l, z), cur.at(z, kTau, c));
    }
    const double base = (l == kTau && f(x) == c) ? 1.0 : 0.0;
    s = std::max(base, s);
    return s > kInfinityCap ? kInf : s;
}

inline double ext_diff(double a, double b) {
    if (a == b) return 0.0;
    if (std::isinf(a) || std::isinf(b)) return kInf;
    return std::fabs(a - b);
}

} // namespace detail

/// max |rhs(table) - table| over all entries.
inline double prob_residual(const ProbKernel &alpha, const StateMap &f, const ProbTable &table) {
    double r = 0.0;
    for (std::size_t x = 0; x < alpha.size(); ++x)
        for (Label l = 0; l < alpha.label_count(); ++l)
            for (std::size_t c = 0; c < f.dst().size(); ++c)
                r = std::max(r, detail::ext_diff(detail::prob_rhs(alpha, f, table, x, l, c),
                                                 table.at(x, l, c)));
    return r;
}

/**
 * alpha*_R as the least solution of
 *   t(x)(tau, C) = [f(x) = C] v sum_z alpha(x)(tau, z) t(z)(tau, C)
 *   t(x)(a, C)   = sum_z alpha(x)(tau, z) t(z)(a, C) + alpha(x)(a, z) t(z)(tau, C)
 * with v read as max. Gauss-Seidel value iteration from zero; entries above
 * the infinity cap become inf.
 */
inline ProbSaturation saturate_prob_through(const ProbKernel &alpha, const StateMap &f,
                                            const FixpointConfig &cfg = {}) {
    cfg.validate();
    if (!(f.src() == alpha.space())) throw MismatchError("saturate_prob_through: map source is not the carrier");
    ProbSaturation out{ProbTable(alpha.size(), alpha.label_count(), f.dst().size())};
    auto &t = out.table;
    for (std::size_t it = 1; it <= cfg.max_iterations; ++it) {
        double change = 0.0;
        // silent entries first: visible ones read them
        for (Label l = 0; l < alpha.label_count(); ++l)
            for (std::size_t x = 0; x < alpha.size(); ++x)
                for (std::size_t c = 0; c < f.dst().size(); ++c) {
                    const double v = detail::prob_rhs(alpha, f, t, x, l, c);
                    change = std::max(change, detail::ext_diff(v, t.at(x, l, c)));
                    t.at(x, l, c) = v;
                }
        out.iterations = it;
        if (change < cfg.tolerance) {
            out.residual = prob_residual(alpha, f, t);
            return out;
        }
    }
    throw MaxIterationsError("probabilistic saturation did not converge", cfg.max_iterations,
                             prob_residual(alpha, f, t));
}

} // namespace coweak

#endif // COWEAK_SATURATION_HPP
