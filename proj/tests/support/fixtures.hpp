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

// Conversions from the oracle's plain systems to library values.

#ifndef COWEAK_TESTS_FIXTURES_HPP
#define COWEAK_TESTS_FIXTURES_HPP

#include <string>
#include <vector>

#include "coweak/coweak.hpp"
#include "oracles.hpp"

namespace fixtures {

inline std::vector<std::string> alphabet(std::size_t visible) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < visible; ++i) out.push_back(std::string(1, static_cast<char>('a' + i)));
    return out;
}

inline coweak::KleisliEndo<coweak::LtsQ> to_endo(const oracle::Lts &s) {
    coweak::LtsQ q(alphabet(s.visible));
    auto space = coweak::StateSpace::numbered(s.n);
    coweak::KleisliEndo<coweak::LtsQ> out(q, space, space);
    for (const auto &[x, l, y] : s.edges) out.join_into(x, y, q.singleton(l));
    return out;
}

inline coweak::ProbKernel to_kernel(const oracle::Fps &s) {
    coweak::ProbKernel k(coweak::StateSpace::numbered(s.n), alphabet(s.visible));
    for (std::size_t x = 0; x < s.n; ++x)
        for (std::uint32_t l = 0; l <= s.visible; ++l)
            for (std::size_t y = 0; y < s.n; ++y) k.set(x, l, y, s.at(x, l, y));
    return k;
}

inline coweak::TimedSystem to_timed(const oracle::Timed &s) {
    auto space = coweak::StateSpace::numbered(s.n);
    coweak::TimedSystem ts(space, alphabet(s.visible));
    const auto names = alphabet(s.visible);
    for (const auto &[x, l, y] : s.actions) ts.add_action(space.name(x), l == 0 ? "tau" : names[l - 1], space.name(y));
    for (const auto &[x, t, y] : s.delays) ts.add_delay(space.name(x), t, space.name(y));
    return ts;
}

inline coweak::KleisliEndo<coweak::BoolQ> to_bool(const oracle::Rel &r) {
    auto space = coweak::StateSpace::numbered(r.size());
    coweak::KleisliEndo<coweak::BoolQ> out(coweak::BoolQ{}, space, space);
    for (std::size_t x = 0; x < r.size(); ++x)
        for (std::size_t y = 0; y < r.size(); ++y) out.set(x, y, r[x][y]);
    return out;
}

inline oracle::Rel from_bool(const coweak::KleisliEndo<coweak::BoolQ> &k) {
    auto r = oracle::empty_rel(k.rows());
    for (std::size_t x = 0; x < k.rows(); ++x)
        for (std::size_t y = 0; y < k.cols(); ++y) r[x][y] = k.at(x, y);
    return r;
}

/// Entry (x, y) of a label-set endomorphism as a set of labels.
template <class M> oracle::LabelRel labels_of(const coweak::KleisliEndo<coweak::LabelSetQ<M>> &k) {
    oracle::LabelRel out(k.rows(), std::vector<std::set<std::uint32_t>>(k.cols()));
    for (std::size_t x = 0; x < k.rows(); ++x)
        for (std::size_t y = 0; y < k.cols(); ++y)
            for (const auto &e : k.at(x, y)) out[x][y].insert(e.first);
    return out;
}

inline oracle::Rel random_rel(std::mt19937_64 &rng, std::size_t n, double density) {
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    auto r = oracle::empty_rel(n);
    for (auto &row : r)
        for (std::size_t y = 0; y < n; ++y) row[y] = coin(rng) < density;
    return r;
}

} // namespace fixtures

#endif // COWEAK_TESTS_FIXTURES_HPP
