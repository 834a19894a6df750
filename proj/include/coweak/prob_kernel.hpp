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

#ifndef COWEAK_PROB_KERNEL_HPP
#define COWEAK_PROB_KERNEL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "coweak/common.hpp"
#include "coweak/kleisli.hpp"
#include "coweak/state_space.hpp"

namespace coweak {

namespace detail {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Product on [0, inf] with 0 * inf = 0.
inline double ext_mul(double a, double b) {
    if (a == 0.0 || b == 0.0) return 0.0;
    return a * b;
}

/// Equality on [0, inf] up to kEps (or a caller-supplied tolerance).
inline bool ext_close(double a, double b, double tol = kEps) {
    if (std::isinf(a) || std::isinf(b)) return a == b;
    return std::fabs(a - b) <= tol;
}

/// Entrywise ext_close.
inline bool rows_close(const std::vector<double> &a, const std::vector<double> &b, double tol = kEps) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!ext_close(a[i], b[i], tol)) return false;
    return true;
}

inline std::optional<std::string> check_alphabet(const std::vector<std::string> &alphabet) {
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
        if (alphabet[i] == "tau") return "'tau' is reserved for the silent action";
        for (std::size_t j = 0; j < i; ++j)
            if (alphabet[i] == alphabet[j]) return "duplicate label '" + alphabet[i] + "'";
    }
    return std::nullopt;
}

} // namespace detail

/**
 * A fully probabilistic system: weight(x, label, y) in [0, inf], with label
 * 0 the silent action and 1..|alphabet| the visible ones. Also used as a
 * morphism of the Kleisli category of F_[0,inf](Sigma_tau x -).
 */
class ProbKernel {
public:
    ProbKernel(StateSpace space, std::vector<std::string> alphabet)
        : space_(std::move(space)), alphabet_(std::move(alphabet)),
          weights_(space_.size() * (alphabet_.size() + 1) * space_.size(), 0.0) {
        if (auto err = detail::check_alphabet(alphabet_)) throw PreconditionError(*err);
    }

    /// The monad unit: x goes to x silently with weight 1.
    static ProbKernel identity(StateSpace space, std::vector<std::string> alphabet) {
        ProbKernel k(std::move(space), std::move(alphabet));
        for (std::size_t x = 0; x < k.size(); ++x) k.set(x, kTau, x, 1.0);
        return k;
    }

    const StateSpace &space() const noexcept { return space_; }
    const std::vector<std::string> &alphabet() const noexcept { return alphabet_; }
    std::size_t size() const noexcept { return space_.size(); }
    /// Number of labels including the silent one.
    std::size_t label_count() const noexcept { return alphabet_.size() + 1; }

    std::string label_name(Label l) const {
        return l == kTau ? std::string("tau") : alphabet_.at(l - 1);
    }

    std::optional<Label> find_label(const std::string &name) const {
        if (name == "tau") return kTau;
        auto it = std::find(alphabet_.begin(), alphabet_.end(), name);
        if (it == alphabet_.end()) return std::nullopt;
        return static_cast<Label>(it - alphabet_.begin() + 1);
    }

    double at(std::size_t x, Label l, std::size_t y) const { return weights_[offset(x, l, y)]; }

    void set(std::size_t x, Label l, std::size_t y, double w) {
        if (!(w >= 0.0)) throw PreconditionError("probabilistic weights must be nonnegative");
        weights_[offset(x, l, y)] = w;
    }

    void add(std::size_t x, Label l, std::size_t y, double w) { set(x, l, y, at(x, l, y) + w); }

    double row_mass(std::size_t x) const {
        double s = 0.0;
        for (Label l = 0; l < label_count(); ++l)
            for (std::size_t y = 0; y < size(); ++y) s += at(x, l, y);
        return s;
    }

    /// Every row sums to 1 within `tol`.
    bool is_stochastic(double tol = 1e-12) const {
        for (std::size_t x = 0; x < size(); ++x)
            if (!(std::fabs(row_mass(x) - 1.0) <= tol)) return false;
        return true;
    }

    friend bool operator==(const ProbKernel &a, const ProbKernel &b) {
        return a.space_ == b.space_ && a.alphabet_ == b.alphabet_ && a.weights_ == b.weights_;
    }

private:
    std::size_t offset(std::size_t x, Label l, std::size_t y) const {
        return (x * label_count() + l) * size() + y;
    }

    StateSpace space_;
    std::vector<std::string> alphabet_;
    std::vector<double> weights_;
};

/**
 * Composition g . f (f first):
 *   (g.f)(x)(tau, z) = sum_y g(y)(tau, z) f(x)(tau, y)
 *   (g.f)(x)(a, z)   = sum_y g(y)(a, z) f(x)(tau, y) + g(y)(tau, z) f(x)(a, y)
 * with 0 * inf = 0.
 */
inline ProbKernel compose_prob(const ProbKernel &g, const ProbKernel &f) {
    if (!(f.space() == g.space())) throw MismatchError("compose_prob: state spaces differ");
    if (f.alphabet() != g.alphabet()) throw MismatchError("compose_prob: alphabets differ");
    using detail::ext_mul;
    ProbKernel out(f.space(), f.alphabet());
    const std::size_t n = f.size();
    for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t z = 0; z < n; ++z) {
            double tau = 0.0;
            for (std::size_t y = 0; y < n; ++y) tau += ext_mul(g.at(y, kTau, z), f.at(x, kTau, y));
            out.set(x, kTau, z, tau);
            for (Label a = 1; a < f.label_count(); ++a) {
                double s = 0.0;
                for (std::size_t y = 0; y < n; ++y) {
                    s += ext_mul(g.at(y, a, z), f.at(x, kTau, y));
                    s += ext_mul(g.at(y, kTau, z), f.at(x, a, y));
                }
                out.set(x, a, z, s);
            }
        }
    }
    return out;
}

/// Dense table (state, label, class) -> [0, inf].
class ProbTable {
public:
    ProbTable() = default;
    ProbTable(std::size_t states, std::size_t labels, std::size_t classes)
        : states_(states), labels_(labels), classes_(classes),
          data_(states * labels * classes, 0.0) {}

    std::size_t states() const noexcept { return states_; }
    std::size_t labels() const noexcept { return labels_; }
    std::size_t classes() const noexcept { return classes_; }

    double at(std::size_t x, Label l, std::size_t c) const { return data_[offset(x, l, c)]; }
    double &at(std::size_t x, Label l, std::size_t c) { return data_[offset(x, l, c)]; }

    /// All (label, class) entries of state x, label-major.
    std::vector<double> row(std::size_t x) const {
        auto first = data_.begin() + static_cast<std::ptrdiff_t>(x * labels_ * classes_);
        return {first, first + static_cast<std::ptrdiff_t>(labels_ * classes_)};
    }

    const std::vector<double> &data() const noexcept { return data_; }

private:
    std::size_t offset(std::size_t x, Label l, std::size_t c) const {
        return (x * labels_ + l) * classes_ + c;
    }

    std::size_t states_ = 0;
    std::size_t labels_ = 0;
    std::size_t classes_ = 0;
    std::vector<double> data_;
};

/// Sum of k(x)(label, y) over each fiber f(y) = C.
inline ProbTable pushforward(const StateMap &f, const ProbKernel &k) {
    if (!(f.src() == k.space())) throw MismatchError("pushforward: map source is not the carrier");
    ProbTable out(k.size(), k.label_count(), f.dst().size());
    for (std::size_t x = 0; x < k.size(); ++x)
        for (Label l = 0; l < k.label_count(); ++l)
            for (std::size_t y = 0; y < k.size(); ++y) out.at(x, l, f(y)) += k.at(x, l, y);
    return out;
}

} // namespace coweak

#endif // COWEAK_PROB_KERNEL_HPP
