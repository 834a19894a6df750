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

#ifndef COWEAK_QUANTALE_HPP
#define COWEAK_QUANTALE_HPP

#include <algorithm>
#include <concepts>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "coweak/common.hpp"
#include "coweak/monoid.hpp"

namespace coweak {

/**
 * A unital quantale restricted to the operations this library needs:
 * bottom and unit, binary join, the monoid product, the order, and a
 * printable form. Elements must be equality comparable; directed suprema
 * are obtained by iterating until two consecutive values coincide.
 */
template <class Q>
concept Quantale = std::equality_comparable<Q> &&
                   std::equality_comparable<typename Q::value_type> &&
                   requires(const Q &q, const typename Q::value_type &a) {
                       { q.bottom() } -> std::convertible_to<typename Q::value_type>;
                       { q.unit() } -> std::convertible_to<typename Q::value_type>;
                       { q.join(a, a) } -> std::convertible_to<typename Q::value_type>;
                       { q.mul(a, a) } -> std::convertible_to<typename Q::value_type>;
                       { q.leq(a, a) } -> std::same_as<bool>;
                       { q.format(a) } -> std::convertible_to<std::string>;
                   };

/// The two-element quantale ({false, true}, and, true, or).
struct BoolQ {
    using value_type = bool;

    bool bottom() const { return false; }
    bool unit() const { return true; }
    bool join(bool a, bool b) const { return a || b; }
    bool mul(bool a, bool b) const { return a && b; }
    bool leq(bool a, bool b) const { return !a || b; }
    std::string format(bool a) const { return a ? "1" : "0"; }

    std::vector<bool> elements() const { return {false, true}; }

    friend bool operator==(const BoolQ &, const BoolQ &) { return true; }
};

/**
 * Finite sets of (label, monoid value) pairs with union as join and the
 * product that lets a silent step on either side absorb into the other:
 *
 *   A . B = {(s, m.n) | (tau, m) in A, (s, n) in B  or  (s, m) in A, (tau, n) in B}
 *
 * The unit is {(tau, 1)}. Elements are kept as sorted, duplicate-free
 * vectors (labels ascending, then monoid values by M::less), which makes
 * equality structural and serialization deterministic.
 */
template <class M> class LabelSetQ {
public:
    using monoid_type = M;
    using monoid_value = typename M::value_type;
    using entry_type = std::pair<Label, monoid_value>;
    using value_type = std::vector<entry_type>;

    LabelSetQ() : alphabet_(std::make_shared<const std::vector<std::string>>()) {}

    /// `alphabet` lists the visible labels; label i + 1 is alphabet[i].
    explicit LabelSetQ(std::vector<std::string> alphabet, M monoid = {})
        : alphabet_(std::make_shared<const std::vector<std::string>>(std::move(alphabet))),
          monoid_(std::move(monoid)) {}

    const M &monoid() const noexcept { return monoid_; }
    const std::vector<std::string> &alphabet() const noexcept { return *alphabet_; }
    std::size_t alphabet_size() const noexcept { return alphabet_->size(); }

    std::string label_name(Label l) const {
        return l == kTau ? std::string("tau") : alphabet_->at(l - 1);
    }

    std::optional<Label> find_label(const std::string &name) const {
        if (name == "tau") return kTau;
        auto it = std::find(alphabet_->begin(), alphabet_->end(), name);
        if (it == alphabet_->end()) return std::nullopt;
        return static_cast<Label>(it - alphabet_->begin() + 1);
    }

    value_type bottom() const { return {}; }
    value_type unit() const { return {{kTau, monoid_.unit()}}; }
    value_type singleton(Label l, monoid_value m) const {
        if constexpr (requires { M::snap(m); }) m = M::snap(m);
        return {{l, std::move(m)}};
    }
    value_type singleton(Label l) const { return {{l, monoid_.unit()}}; }

    value_type join(const value_type &a, const value_type &b) const {
        if (a.empty()) return b;
        if (b.empty()) return a;
        value_type out;
        out.reserve(a.size() + b.size());
        std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
                       entry_less());
        return out;
    }

    value_type mul(const value_type &a, const value_type &b) const {
        value_type out;
        for (const auto &[la, ma] : a) {
            for (const auto &[lb, mb] : b) {
                if (la == kTau) {
                    out.emplace_back(lb, monoid_.op(ma, mb));
                } else if (lb == kTau) {
                    out.emplace_back(la, monoid_.op(ma, mb));
                }
            }
        }
        return normalize(std::move(out));
    }

    bool leq(const value_type &a, const value_type &b) const {
        return std::includes(b.begin(), b.end(), a.begin(), a.end(), entry_less());
    }

    /// Sorts and deduplicates an arbitrary list of entries.
    value_type normalize(value_type v) const {
        auto less = entry_less();
        std::sort(v.begin(), v.end(), less);
        v.erase(std::unique(v.begin(), v.end(),
                            [&](const entry_type &x, const entry_type &y) {
                                return !less(x, y) && !less(y, x);
                            }),
                v.end());
        return v;
    }

    std::string format(const value_type &v) const {
        std::string out = "{";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ",";
            out += "(" + label_name(v[i].first) + "," + monoid_.format(v[i].second) + ")";
        }
        return out + "}";
    }

    friend bool operator==(const LabelSetQ &a, const LabelSetQ &b) {
        return a.alphabet_ == b.alphabet_ || *a.alphabet_ == *b.alphabet_;
    }

private:
    auto entry_less() const {
        return [this](const entry_type &x, const entry_type &y) {
            if (x.first != y.first) return x.first < y.first;
            return monoid_.less(x.second, y.second);
        };
    }

    std::shared_ptr<const std::vector<std::string>> alphabet_;
    M monoid_{};
};

/// Labelled transition systems: silent moves absorb, no weights.
using LtsQ = LabelSetQ<TrivialMonoid>;

/// Left fold of join from bottom.
template <Quantale Q>
typename Q::value_type join_many(const Q &q, std::span<const typename Q::value_type> elems) {
    auto acc = q.bottom();
    for (const auto &e : elems) acc = q.join(acc, e);
    return acc;
}

template <Quantale Q>
typename Q::value_type join_many(const Q &q, const std::vector<typename Q::value_type> &elems) {
    auto acc = q.bottom();
    for (const auto &e : elems) acc = q.join(acc, e);
    return acc;
}

struct LawResult {
    std::string law;
    std::size_t checked = 0;
    std::size_t failures = 0;
    /// First counterexample, formatted.
    std::optional<std::string> counterexample;

    bool passed() const { return failures == 0; }
};

struct LawReport {
    std::vector<LawResult> laws;

    bool all_passed() const {
        return std::all_of(laws.begin(), laws.end(), [](const LawResult &l) { return l.passed(); });
    }

    const LawResult *find(const std::string &law) const {
        for (const auto &l : laws)
            if (l.law == law) return &l;
        return nullptr;
    }
};

/**
 * Checks the quantale axioms on every pair and triple drawn from `samples`:
 * monoid laws, join laws, two-sided distributivity of the product over
 * binary joins, and that leq is the partial order induced by join.
 */
template <Quantale Q>
LawReport check_quantale_laws(const Q &q, const std::vector<typename Q::value_type> &samples) {
    if (samples.empty()) throw PreconditionError("check_quantale_laws needs at least one sample");

    LawReport report;
    report.laws.reserve(16); // law() hands out references into this vector
    auto law = [&](std::string name) -> LawResult & {
        report.laws.push_back(LawResult{std::move(name), 0, 0, std::nullopt});
        return report.laws.back();
    };
    auto record = [&](LawResult &r, bool ok, auto &&describe) {
        ++r.checked;
        if (!ok) {
            ++r.failures;
            if (!r.counterexample) r.counterexample = describe();
        }
    };
    auto f = [&](const auto &v) { return q.format(v); };

    const auto unit = q.unit();
    const auto bot = q.bottom();

    LawResult &left_unit = law("mul-left-unit");
    LawResult &right_unit = law("mul-right-unit");
    LawResult &join_idem = law("join-idempotent");
    LawResult &bottom_neutral = law("join-bottom-neutral");
    LawResult &leq_refl = law("leq-reflexive");
    for (const auto &a : samples) {
        record(left_unit, q.mul(unit, a) == a, [&] { return "a=" + f(a); });
        record(right_unit, q.mul(a, unit) == a, [&] { return "a=" + f(a); });
        record(join_idem, q.join(a, a) == a, [&] { return "a=" + f(a); });
        record(bottom_neutral, q.join(bot, a) == a && q.join(a, bot) == a,
               [&] { return "a=" + f(a); });
        record(leq_refl, q.leq(a, a), [&] { return "a=" + f(a); });
    }

    LawResult &join_comm = law("join-commutative");
    LawResult &leq_join = law("leq-iff-join");
    LawResult &leq_antisym = law("leq-antisymmetric");
    for (const auto &a : samples) {
        for (const auto &b : samples) {
            auto pair = [&] { return "a=" + f(a) + " b=" + f(b); };
            record(join_comm, q.join(a, b) == q.join(b, a), pair);
            record(leq_join, q.leq(a, b) == (q.join(a, b) == b), pair);
            record(leq_antisym, !(q.leq(a, b) && q.leq(b, a)) || a == b, pair);
        }
    }

    LawResult &mul_assoc = law("mul-associative");
    LawResult &join_assoc = law("join-associative");
    LawResult &left_dist = law("left-distributive");
    LawResult &right_dist = law("right-distributive");
    LawResult &leq_trans = law("leq-transitive");
    for (const auto &a : samples) {
        for (const auto &b : samples) {
            for (const auto &c : samples) {
                auto triple = [&] { return "a=" + f(a) + " b=" + f(b) + " c=" + f(c); };
                record(mul_assoc, q.mul(a, q.mul(b, c)) == q.mul(q.mul(a, b), c), triple);
                record(join_assoc, q.join(a, q.join(b, c)) == q.join(q.join(a, b), c), triple);
                record(left_dist, q.mul(a, q.join(b, c)) == q.join(q.mul(a, b), q.mul(a, c)),
                       triple);
                record(right_dist, q.mul(q.join(b, c), a) == q.join(q.mul(b, a), q.mul(c, a)),
                       triple);
                record(leq_trans, !(q.leq(a, b) && q.leq(b, c)) || q.leq(a, c), triple);
            }
        }
    }
    return report;
}

} // namespace coweak

#endif // COWEAK_QUANTALE_HPP
