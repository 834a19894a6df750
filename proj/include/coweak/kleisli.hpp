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

#ifndef COWEAK_KLEISLI_HPP
#define COWEAK_KLEISLI_HPP

#include <string>
#include <utility>
#include <vector>

#include "coweak/common.hpp"
#include "coweak/quantale.hpp"
#include "coweak/state_space.hpp"

namespace coweak {

/**
 * A morphism src -> dst of the Kleisli category of the Q-valued monad,
 * i.e. a dense Q-matrix indexed by (src state, dst state). Every entry is
 * defined; entries never written are bottom.
 */
template <Quantale Q> class KleisliMorphism {
public:
    using quantale_type = Q;
    using value_type = typename Q::value_type;

    KleisliMorphism(Q q, StateSpace src, StateSpace dst)
        : q_(std::move(q)), src_(std::move(src)), dst_(std::move(dst)),
          weights_(src_.size() * dst_.size(), q_.bottom()) {}

    /// The unit of the monad: unit on the diagonal, bottom elsewhere.
    static KleisliMorphism identity(Q q, StateSpace space) {
        KleisliMorphism out(std::move(q), space, space);
        const auto u = out.q_.unit();
        for (std::size_t i = 0; i < out.rows(); ++i) out.set(i, i, u);
        return out;
    }

    const Q &quantale() const noexcept { return q_; }
    const StateSpace &src() const noexcept { return src_; }
    const StateSpace &dst() const noexcept { return dst_; }
    std::size_t rows() const noexcept { return src_.size(); }
    std::size_t cols() const noexcept { return dst_.size(); }
    bool is_endo() const { return src_ == dst_; }

    decltype(auto) at(std::size_t r, std::size_t c) const { return weights_[r * cols() + c]; }

    void set(std::size_t r, std::size_t c, value_type v) { weights_[r * cols() + c] = std::move(v); }

    void join_into(std::size_t r, std::size_t c, const value_type &v) {
        weights_[r * cols() + c] = q_.join(weights_[r * cols() + c], v);
    }

    bool is_bottom(std::size_t r, std::size_t c) const { return at(r, c) == q_.bottom(); }

    friend bool operator==(const KleisliMorphism &a, const KleisliMorphism &b) {
        return a.q_ == b.q_ && a.src_ == b.src_ && a.dst_ == b.dst_ && a.weights_ == b.weights_;
    }

private:
    Q q_;
    StateSpace src_;
    StateSpace dst_;
    std::vector<value_type> weights_;
};

/// An endomorphism: a coalgebra whose silent moves live inside the monad.
template <Quantale Q> using KleisliEndo = KleisliMorphism<Q>;

/// A plain function between state spaces (an arrow of the base category).
class StateMap {
public:
    StateMap(StateSpace src, StateSpace dst, std::vector<std::size_t> assignment)
        : src_(std::move(src)), dst_(std::move(dst)), assignment_(std::move(assignment)) {
        if (assignment_.size() != src_.size())
            throw PreconditionError("state map must assign every source state");
        for (auto a : assignment_)
            if (a >= dst_.size()) throw PreconditionError("state map target out of range");
    }

    static StateMap identity(const StateSpace &space) {
        std::vector<std::size_t> a(space.size());
        for (std::size_t i = 0; i < a.size(); ++i) a[i] = i;
        return StateMap(space, space, std::move(a));
    }

    const StateSpace &src() const noexcept { return src_; }
    const StateSpace &dst() const noexcept { return dst_; }
    std::size_t operator()(std::size_t x) const { return assignment_.at(x); }
    const std::vector<std::size_t> &assignment() const noexcept { return assignment_; }

private:
    StateSpace src_;
    StateSpace dst_;
    std::vector<std::size_t> assignment_;
};

/// A surjective state map; its kernel is an equivalence relation on src.
class QuotientMap : public StateMap {
public:
    QuotientMap(StateSpace src, StateSpace dst, std::vector<std::size_t> assignment)
        : StateMap(std::move(src), std::move(dst), std::move(assignment)) {
        std::vector<bool> hit(this->dst().size(), false);
        for (auto a : this->assignment()) hit[a] = true;
        for (bool h : hit)
            if (!h) throw PreconditionError("quotient map must be surjective");
    }

    static QuotientMap identity(const StateSpace &space) {
        auto id = StateMap::identity(space);
        return QuotientMap(space, space, id.assignment());
    }
};

/// f# : the Kleisli lift of a state map, unit at (x, f(x)).
template <Quantale Q> KleisliMorphism<Q> lift(const StateMap &f, const Q &q) {
    KleisliMorphism<Q> out(q, f.src(), f.dst());
    const auto u = q.unit();
    for (std::size_t x = 0; x < f.src().size(); ++x) out.set(x, f(x), u);
    return out;
}

/**
 * Kleisli composition g . f (f first):
 *   (g . f)(x, z) = join over y of f(x, y) * g(y, z).
 */
template <Quantale Q>
KleisliMorphism<Q> compose(const KleisliMorphism<Q> &g, const KleisliMorphism<Q> &f) {
    if (!(f.quantale() == g.quantale())) throw MismatchError("compose: quantales differ");
    if (!(f.dst() == g.src())) throw MismatchError("compose: f.dst does not match g.src");
    const Q &q = f.quantale();
    KleisliMorphism<Q> out(q, f.src(), g.dst());
    const auto bot = q.bottom();
    for (std::size_t x = 0; x < f.rows(); ++x) {
        for (std::size_t y = 0; y < f.cols(); ++y) {
            decltype(auto) fxy = f.at(x, y);
            if (fxy == bot) continue;
            for (std::size_t z = 0; z < g.cols(); ++z) {
                decltype(auto) gyz = g.at(y, z);
                if (gyz == bot) continue;
                out.join_into(x, z, q.mul(fxy, gyz));
            }
        }
    }
    return out;
}

template <Quantale Q> KleisliEndo<Q> identity_endo(const StateSpace &space, const Q &q) {
    return KleisliMorphism<Q>::identity(q, space);
}

template <Quantale Q>
KleisliMorphism<Q> join_endo(const KleisliMorphism<Q> &a, const KleisliMorphism<Q> &b) {
    if (!(a.quantale() == b.quantale())) throw MismatchError("join: quantales differ");
    if (!(a.src() == b.src()) || !(a.dst() == b.dst())) throw MismatchError("join: carriers differ");
    KleisliMorphism<Q> out = a;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) out.join_into(r, c, b.at(r, c));
    return out;
}

/// Pointwise order.
template <Quantale Q> bool leq_endo(const KleisliMorphism<Q> &a, const KleisliMorphism<Q> &b) {
    if (!(a.quantale() == b.quantale())) throw MismatchError("leq: quantales differ");
    if (!(a.src() == b.src()) || !(a.dst() == b.dst())) throw MismatchError("leq: carriers differ");
    const Q &q = a.quantale();
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (!q.leq(a.at(r, c), b.at(r, c))) return false;
    return true;
}

/**
 * f# . k: for each state x and target class C the join of k(x, y) over
 * the fiber f(y) = C. Two states with equal rows of this table are
 * indistinguishable by one step of k up to f.
 */
template <Quantale Q>
KleisliMorphism<Q> pushforward(const StateMap &f, const KleisliMorphism<Q> &k) {
    if (!(f.src() == k.dst())) throw MismatchError("pushforward: map source is not the carrier");
    return compose(lift(f, k.quantale()), k);
}

} // namespace coweak

#endif // COWEAK_KLEISLI_HPP
