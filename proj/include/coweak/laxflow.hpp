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

#ifndef COWEAK_LAXFLOW_HPP
#define COWEAK_LAXFLOW_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coweak/common.hpp"
#include "coweak/kleisli.hpp"
#include "coweak/monoid.hpp"
#include "coweak/quantale.hpp"

namespace coweak {

/// One failed instance of a flow law, with the offending matrix entry.
struct FlowViolation {
    std::string law; // "unit" or "composition"
    std::string m;   // index of the left factor (or of the unit entry)
    std::string n;   // index of the right factor; empty for the unit law
    std::string row;
    std::string col;
    std::string lhs;
    std::string rhs;
};

struct FlowLawReport {
    std::size_t checks = 0;
    std::vector<FlowViolation> violations;

    bool passed() const { return violations.empty(); }
};

namespace detail {

/// First entry where a <= b fails, as (row, col).
template <Quantale Q>
std::optional<std::pair<std::size_t, std::size_t>> first_not_leq(const KleisliMorphism<Q> &a,
                                                                  const KleisliMorphism<Q> &b) {
    const Q &q = a.quantale();
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (!q.leq(a.at(r, c), b.at(r, c))) return std::make_pair(r, c);
    return std::nullopt;
}

template <Quantale Q>
void check_law(FlowLawReport &report, std::string law, std::string m, std::string n,
               const KleisliMorphism<Q> &lhs, const KleisliMorphism<Q> &rhs) {
    ++report.checks;
    if (auto bad = first_not_leq(lhs, rhs)) {
        const Q &q = lhs.quantale();
        report.violations.push_back(FlowViolation{
            std::move(law), std::move(m), std::move(n), lhs.src().name(bad->first),
            lhs.dst().name(bad->second), q.format(lhs.at(bad->first, bad->second)),
            q.format(rhs.at(bad->first, bad->second))});
    }
}

} // namespace detail

/**
 * A lax functor N -> Kl(Q): either generated by a single endomorphism
 * (pi_n = alpha^n, materialized on demand up to `depth`) or an explicit
 * table pi_0..pi_N.
 */
template <Quantale Q> class NFlow {
public:
    static NFlow generated(KleisliEndo<Q> alpha, std::size_t depth) {
        if (!alpha.is_endo()) throw PreconditionError("flow generator must be an endomorphism");
        NFlow f;
        f.depth_ = depth;
        f.cache_ = std::make_shared<Cache>();
        f.cache_->powers.push_back(identity_endo(alpha.src(), alpha.quantale()));
        f.generator_ = std::move(alpha);
        return f;
    }

    static NFlow tabulated(std::vector<KleisliEndo<Q>> table) {
        if (table.empty()) throw PreconditionError("tabulated flow needs at least pi_0");
        for (const auto &e : table) {
            if (!e.is_endo() || !(e.src() == table.front().src()))
                throw MismatchError("flow entries must share one carrier");
            if (!(e.quantale() == table.front().quantale()))
                throw MismatchError("flow entries must share one quantale");
        }
        NFlow f;
        f.depth_ = table.size() - 1;
        f.cache_ = std::make_shared<Cache>();
        f.cache_->powers = std::move(table);
        return f;
    }

    bool is_generated() const noexcept { return generator_.has_value(); }
    std::size_t depth() const noexcept { return depth_; }
    const StateSpace &carrier() const { return cache_->powers.front().src(); }
    const Q &quantale() const { return cache_->powers.front().quantale(); }
    const std::optional<KleisliEndo<Q>> &generator() const noexcept { return generator_; }

    /// pi_n. Generated flows may be materialized past their depth.
    KleisliEndo<Q> materialize(std::size_t n) const {
        std::lock_guard<std::mutex> lock(cache_->mutex);
        auto &powers = cache_->powers;
        if (!generator_) {
            if (n >= powers.size())
                throw PreconditionError("flow has no entry at index " + std::to_string(n));
            return powers[n];
        }
        while (powers.size() <= n) powers.push_back(compose(*generator_, powers.back()));
        return powers[n];
    }

private:
    struct Cache {
        std::mutex mutex;
        std::vector<KleisliEndo<Q>> powers;
    };

    NFlow() = default;

    std::size_t depth_ = 0;
    std::optional<KleisliEndo<Q>> generator_;
    std::shared_ptr<Cache> cache_;
};

/// The sequence (alpha^n)_n, validated and tabulated up to `depth`.
template <Quantale Q> NFlow<Q> underline(const KleisliEndo<Q> &alpha, std::size_t depth) {
    return NFlow<Q>::generated(alpha, depth);
}

/// The component at index 1.
template <Quantale Q> KleisliEndo<Q> truncate_at_one(const NFlow<Q> &pi) {
    if (!pi.is_generated() && pi.depth() < 1)
        throw PreconditionError("flow has no entry at index 1");
    return pi.materialize(1);
}

/// Checks id <= pi_0 and pi_m . pi_n <= pi_{m+n} for all m + n <= depth.
template <Quantale Q> FlowLawReport validate_flow(const NFlow<Q> &pi) {
    FlowLawReport report;
    detail::check_law(report, "unit", "0", "", identity_endo(pi.carrier(), pi.quantale()),
                      pi.materialize(0));
    for (std::size_t m = 0; m <= pi.depth(); ++m)
        for (std::size_t n = 0; m + n <= pi.depth(); ++n)
            detail::check_law(report, "composition", std::to_string(m), std::to_string(n),
                              compose(pi.materialize(m), pi.materialize(n)),
                              pi.materialize(m + n));
    return report;
}

/**
 * A lax functor from a monoid (one-object category) stored as a finite
 * sample m -> pi_m. Laws are checked on the sampled fragment only.
 */
template <Quantale Q, class Monoid> class MFlow {
public:
    using index_type = typename Monoid::value_type;
    using entry_type = std::pair<index_type, KleisliEndo<Q>>;

    MFlow(StateSpace carrier, Q q, Monoid monoid = {})
        : carrier_(std::move(carrier)), q_(std::move(q)), monoid_(std::move(monoid)) {}

    /// Adds (or joins into) the entry at index m.
    void add(index_type m, KleisliEndo<Q> endo) {
        if (!endo.is_endo() || !(endo.src() == carrier_))
            throw MismatchError("flow entry does not live on the flow's carrier");
        if (!(endo.quantale() == q_)) throw MismatchError("flow entry uses a different quantale");
        for (auto &e : entries_) {
            if (equal_index(e.first, m)) {
                e.second = join_endo(e.second, endo);
                return;
            }
        }
        auto pos = std::find_if(entries_.begin(), entries_.end(),
                                [&](const entry_type &e) { return monoid_.less(m, e.first); });
        entries_.insert(pos, entry_type{std::move(m), std::move(endo)});
    }

    const KleisliEndo<Q> *find(const index_type &m) const {
        for (const auto &e : entries_)
            if (equal_index(e.first, m)) return &e.second;
        return nullptr;
    }

    const std::vector<entry_type> &entries() const noexcept { return entries_; }
    const StateSpace &carrier() const noexcept { return carrier_; }
    const Q &quantale() const noexcept { return q_; }
    const Monoid &monoid() const noexcept { return monoid_; }

    friend bool operator==(const MFlow &a, const MFlow &b) {
        if (!(a.carrier_ == b.carrier_) || !(a.q_ == b.q_) || a.entries_.size() != b.entries_.size())
            return false;
        for (std::size_t i = 0; i < a.entries_.size(); ++i) {
            if (!a.equal_index(a.entries_[i].first, b.entries_[i].first)) return false;
            if (!(a.entries_[i].second == b.entries_[i].second)) return false;
        }
        return true;
    }

private:
    bool equal_index(const index_type &a, const index_type &b) const {
        return !monoid_.less(a, b) && !monoid_.less(b, a);
    }

    StateSpace carrier_;
    Q q_;
    Monoid monoid_;
    std::vector<entry_type> entries_;
};

/// id <= pi_1 when the unit is sampled; pi_m . pi_n <= pi_{m.n} when all three are.
template <Quantale Q, class Monoid> FlowLawReport validate_flow(const MFlow<Q, Monoid> &pi) {
    FlowLawReport report;
    const auto &mon = pi.monoid();
    if (const auto *e = pi.find(mon.unit()))
        detail::check_law(report, "unit", mon.format(mon.unit()), "",
                          identity_endo(pi.carrier(), pi.quantale()), *e);
    for (const auto &[m, pm] : pi.entries()) {
        for (const auto &[n, pn] : pi.entries()) {
            const auto *target = pi.find(mon.op(m, n));
            if (!target) continue;
            detail::check_law(report, "composition", mon.format(m), mon.format(n), compose(pm, pn),
                              *target);
        }
    }
    return report;
}

/// Entries 0..depth of an N-flow as an M-flow over (N, +).
template <Quantale Q> MFlow<Q, NatAdd> tabulate(const NFlow<Q> &pi) {
    MFlow<Q, NatAdd> out(pi.carrier(), pi.quantale());
    for (std::size_t n = 0; n <= pi.depth(); ++n) out.add(n, pi.materialize(n));
    return out;
}

namespace detail {

/// Monoid values of M that the curried flow samples: those occurring in
/// some entry, the unit, and all binary products of these.
template <class M, class Index>
std::vector<typename M::value_type>
curry_sample(const MFlow<LabelSetQ<M>, Index> &pi) {
    const M &mon = pi.quantale().monoid();
    auto less = [&](const auto &a, const auto &b) { return mon.less(a, b); };
    std::vector<typename M::value_type> occurring{mon.unit()};
    for (const auto &[idx, endo] : pi.entries())
        for (std::size_t r = 0; r < endo.rows(); ++r)
            for (std::size_t c = 0; c < endo.cols(); ++c)
                for (const auto &entry : endo.at(r, c)) occurring.push_back(entry.second);
    std::sort(occurring.begin(), occurring.end(), less);
    occurring.erase(std::unique(occurring.begin(), occurring.end(),
                                [&](const auto &a, const auto &b) { return !less(a, b) && !less(b, a); }),
                    occurring.end());
    std::vector<typename M::value_type> sample = occurring;
    for (const auto &a : occurring)
        for (const auto &b : occurring) sample.push_back(mon.op(a, b));
    std::sort(sample.begin(), sample.end(), less);
    sample.erase(std::unique(sample.begin(), sample.end(),
                             [&](const auto &a, const auto &b) { return !less(a, b) && !less(b, a); }),
                 sample.end());
    return sample;
}

} // namespace detail

/**
 * Moves the weight monoid M out of the quantale into the index:
 * an M'-flow over LabelSetQ(Sigma, M) becomes an (M' x M)-flow over
 * LabelSetQ(Sigma, 1) whose (m', m) component relates x to (s, y) iff
 * (s, m) occurs in pi_{m'}(x, y). Components are emitted for every m in
 * the closed sample (see detail::curry_sample), including empty ones.
 */
template <class M, class Index>
MFlow<LtsQ, ProductMonoid<Index, M>> curry_monoid(const MFlow<LabelSetQ<M>, Index> &pi) {
    const auto &q = pi.quantale();
    const M &mon = q.monoid();
    LtsQ plain(q.alphabet());
    MFlow<LtsQ, ProductMonoid<Index, M>> out(pi.carrier(), plain,
                                             ProductMonoid<Index, M>{pi.monoid(), mon});
    const auto sample = detail::curry_sample(pi);
    for (const auto &[idx, endo] : pi.entries()) {
        for (const auto &m : sample) {
            KleisliEndo<LtsQ> component(plain, pi.carrier(), pi.carrier());
            for (std::size_t r = 0; r < endo.rows(); ++r) {
                for (std::size_t c = 0; c < endo.cols(); ++c) {
                    typename LtsQ::value_type cell;
                    for (const auto &[label, value] : endo.at(r, c))
                        if (!mon.less(value, m) && !mon.less(m, value))
                            cell.emplace_back(label, std::monostate{});
                    if (!cell.empty()) component.set(r, c, plain.normalize(std::move(cell)));
                }
            }
            out.add({idx, m}, std::move(component));
        }
    }
    return out;
}

/// Inverse of curry_monoid.
template <class M, class Index>
MFlow<LabelSetQ<M>, Index> uncurry_monoid(const MFlow<LtsQ, ProductMonoid<Index, M>> &pi) {
    const auto &prod = pi.monoid();
    LabelSetQ<M> weighted(pi.quantale().alphabet(), prod.second);
    MFlow<LabelSetQ<M>, Index> out(pi.carrier(), weighted, prod.first);
    for (const auto &[idx, endo] : pi.entries()) {
        KleisliEndo<LabelSetQ<M>> component(weighted, pi.carrier(), pi.carrier());
        for (std::size_t r = 0; r < endo.rows(); ++r)
            for (std::size_t c = 0; c < endo.cols(); ++c)
                for (const auto &entry : endo.at(r, c))
                    component.join_into(r, c, weighted.singleton(entry.first, idx.second));
        out.add(idx.first, std::move(component));
    }
    return out;
}

/**
 * A lax functor on a finite diagram, stored by its generating arrows:
 * objects with carriers, and arrows d : D1 -> D2 with images
 * pi(d) : pi(D1) -> pi(D2). Composites are not stored.
 */
template <Quantale Q> class Diagram {
public:
    struct Arrow {
        std::string name;
        std::size_t from;
        std::size_t to;
        KleisliMorphism<Q> image;
    };

    explicit Diagram(Q q) : q_(std::move(q)) {}

    std::size_t add_object(std::string name, StateSpace carrier) {
        for (const auto &o : objects_)
            if (o == name) throw PreconditionError("duplicate object '" + name + "'");
        objects_.push_back(std::move(name));
        carriers_.push_back(std::move(carrier));
        return objects_.size() - 1;
    }

    void add_arrow(std::string name, std::size_t from, std::size_t to, KleisliMorphism<Q> image) {
        if (from >= objects_.size() || to >= objects_.size())
            throw PreconditionError("arrow '" + name + "' has an unknown endpoint");
        if (!(image.src() == carriers_[from]) || !(image.dst() == carriers_[to]))
            throw MismatchError("image of arrow '" + name + "' does not match endpoint carriers");
        if (!(image.quantale() == q_)) throw MismatchError("arrow image uses a different quantale");
        arrows_.push_back(Arrow{std::move(name), from, to, std::move(image)});
    }

    std::size_t object_index(const std::string &name) const {
        for (std::size_t i = 0; i < objects_.size(); ++i)
            if (objects_[i] == name) return i;
        throw PreconditionError("unknown object '" + name + "'");
    }

    const Q &quantale() const noexcept { return q_; }
    const std::vector<std::string> &objects() const noexcept { return objects_; }
    const std::vector<StateSpace> &carriers() const noexcept { return carriers_; }
    const std::vector<Arrow> &arrows() const noexcept { return arrows_; }

    /// Offset of object D's summand in the coproduct carrier.
    std::size_t offset(std::size_t object) const {
        std::size_t off = 0;
        for (std::size_t i = 0; i < object; ++i) off += carriers_[i].size();
        return off;
    }

    /// Disjoint union of the carriers; states are named "<object>.<state>".
    StateSpace coproduct_carrier() const {
        std::vector<std::string> names;
        for (std::size_t o = 0; o < objects_.size(); ++o)
            for (const auto &s : carriers_[o].names()) names.push_back(objects_[o] + "." + s);
        return StateSpace(std::move(names));
    }

private:
    Q q_;
    std::vector<std::string> objects_;
    std::vector<StateSpace> carriers_;
    std::vector<Arrow> arrows_;
};

/// A one-object diagram whose arrows are the sampled entries of an M-flow.
template <Quantale Q, class Monoid> Diagram<Q> as_diagram(const MFlow<Q, Monoid> &pi) {
    Diagram<Q> d(pi.quantale());
    auto o = d.add_object("*", pi.carrier());
    for (const auto &[m, endo] : pi.entries()) d.add_arrow(pi.monoid().format(m), o, o, endo);
    return d;
}

/// f is a morphism alpha -> beta of End<=(K): f# . alpha <= beta . f#.
template <Quantale Q>
bool is_oplax_morphism(const StateMap &f, const KleisliEndo<Q> &alpha, const KleisliEndo<Q> &beta) {
    auto fs = lift(f, alpha.quantale());
    return leq_endo(compose(fs, alpha), compose(beta, fs));
}

/// f# . pi_n <= pi'_n . f# for every n up to the smaller depth.
template <Quantale Q>
bool is_flow_morphism(const StateMap &f, const NFlow<Q> &pi, const NFlow<Q> &pi2) {
    auto fs = lift(f, pi.quantale());
    const std::size_t depth = std::min(pi.depth(), pi2.depth());
    for (std::size_t n = 0; n <= depth; ++n)
        if (!leq_endo(compose(fs, pi.materialize(n)), compose(pi2.materialize(n), fs))) return false;
    return true;
}

/**
 * A relational presheaf on the free monoid over Sigma_tau, given by its
 * generator images; a word evaluates to the composite of its letters.
 */
struct RelPresheaf {
    StateSpace space;
    std::vector<std::string> alphabet;
    KleisliEndo<BoolQ> tau;
    std::vector<KleisliEndo<BoolQ>> letters; // letters[i] is the image of alphabet[i]

    /// pi(w) for w = w_1 ... w_k: first w_1, then w_2, ...
    KleisliEndo<BoolQ> evaluate(const std::vector<Label> &word) const {
        auto out = identity_endo(space, BoolQ{});
        for (Label l : word) out = compose(l == kTau ? tau : letters.at(l - 1), out);
        return out;
    }
};

/// The relational presheaf of an LTS: each letter goes to its transition relation.
inline RelPresheaf to_presheaf(const KleisliEndo<LtsQ> &alpha) {
    const auto &q = alpha.quantale();
    KleisliEndo<BoolQ> empty(BoolQ{}, alpha.src(), alpha.src());
    RelPresheaf p{alpha.src(), q.alphabet(), empty,
                  std::vector<KleisliEndo<BoolQ>>(q.alphabet_size(), empty)};
    for (std::size_t r = 0; r < alpha.rows(); ++r)
        for (std::size_t c = 0; c < alpha.cols(); ++c)
            for (const auto &entry : alpha.at(r, c))
                (entry.first == kTau ? p.tau : p.letters[entry.first - 1]).set(r, c, true);
    return p;
}

/// Generator images of a presheaf on Sigma*: epsilon and the visible letters.
struct TauErasedPresheaf {
    StateSpace space;
    std::vector<std::string> alphabet;
    KleisliEndo<BoolQ> epsilon;
    std::vector<KleisliEndo<BoolQ>> letters;
};

} // namespace coweak

#endif // COWEAK_LAXFLOW_HPP
