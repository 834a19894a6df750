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

#ifndef COWEAK_MONOID_HPP
#define COWEAK_MONOID_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <variant>

namespace coweak {

// A monoid descriptor provides value_type, unit(), op(a, b), a strict total
// order less(a, b) used for canonical ordering, and format(a).
//
// kStrictlyIncreasing: op(a, m) != a for every m != unit(), so the powers of
// a non-unit element are pairwise distinct. Silent cycles carrying such an
// element generate infinitely many weights.

struct TrivialMonoid {
    using value_type = std::monostate;
    static constexpr bool kStrictlyIncreasing = false;

    value_type unit() const { return {}; }
    value_type op(value_type, value_type) const { return {}; }
    bool less(value_type, value_type) const { return false; }
    std::string format(value_type) const { return "1"; }

    friend bool operator==(const TrivialMonoid &, const TrivialMonoid &) { return true; }
};

/// (N, +, 0)
struct NatAdd {
    using value_type = std::uint64_t;
    static constexpr bool kStrictlyIncreasing = true;

    value_type unit() const { return 0; }
    value_type op(value_type a, value_type b) const { return a + b; }
    bool less(value_type a, value_type b) const { return a < b; }
    std::string format(value_type a) const { return std::to_string(a); }

    friend bool operator==(const NatAdd &, const NatAdd &) { return true; }
};

/**
 * ([0, inf), +, 0) over binary64. Every value is snapped to the grid
 * 2^-30 (about 9.3e-10), so sums of dyadic durations are exact and other
 * reals agree whenever they differ by less than one grid step.
 */
struct RealAdd {
    using value_type = double;
    static constexpr bool kStrictlyIncreasing = true;
    static constexpr int kGridExponent = 30;

    static double snap(double x) {
        return std::ldexp(std::nearbyint(std::ldexp(x, kGridExponent)), -kGridExponent);
    }

    value_type unit() const { return 0.0; }
    value_type op(value_type a, value_type b) const { return snap(a + b); }
    bool less(value_type a, value_type b) const { return a < b; }

    std::string format(value_type a) const {
        char buf[32];
        auto res = std::to_chars(buf, buf + sizeof buf, a);
        return std::string(buf, res.ptr);
    }

    friend bool operator==(const RealAdd &, const RealAdd &) { return true; }
};

/// Componentwise product of two monoids, ordered lexicographically.
template <class A, class B> struct ProductMonoid {
    using value_type = std::pair<typename A::value_type, typename B::value_type>;
    static constexpr bool kStrictlyIncreasing = A::kStrictlyIncreasing && B::kStrictlyIncreasing;

    A first{};
    B second{};

    value_type unit() const { return {first.unit(), second.unit()}; }

    value_type op(const value_type &a, const value_type &b) const {
        return {first.op(a.first, b.first), second.op(a.second, b.second)};
    }

    bool less(const value_type &a, const value_type &b) const {
        if (first.less(a.first, b.first)) return true;
        if (first.less(b.first, a.first)) return false;
        return second.less(a.second, b.second);
    }

    std::string format(const value_type &a) const {
        return "(" + first.format(a.first) + "," + second.format(a.second) + ")";
    }

    friend bool operator==(const ProductMonoid &, const ProductMonoid &) { return true; }
};

} // namespace coweak

#endif // COWEAK_MONOID_HPP
