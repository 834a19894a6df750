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

#ifndef COWEAK_PROBWEAK_HPP
#define COWEAK_PROBWEAK_HPP

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "coweak/common.hpp"
#include "coweak/partition.hpp"
#include "coweak/prob_kernel.hpp"
#include "coweak/saturation.hpp"

namespace coweak {

struct ProbWeakWitness {
    std::string first;
    std::string second;
    std::string label;
    std::string target_class; // "[s,u]" style block name
    double first_value = 0.0;
    double second_value = 0.0;
};

struct ProbWeakCheckResult {
    bool holds = true;
    std::optional<ProbWeakWitness> witness;
    ProbSaturation saturation;
};

/// Pairs in one block must agree on alpha*_P(.)(label, C) within EPS for all labels and blocks C.
inline ProbWeakCheckResult prob_weak_check(const ProbKernel &alpha, const Partition &p,
                                           const FixpointConfig &cfg = {}, double tol = kEps) {
    if (!(p.space() == alpha.space())) throw MismatchError("prob_weak_check: partition of another space");
    const auto f = p.quotient();
    ProbWeakCheckResult out{true, std::nullopt, saturate_prob_through(alpha, f, cfg)};
    const auto &t = out.saturation.table;
    for (const auto &block : p.blocks())
        for (std::size_t i = 0; i < block.size(); ++i)
            for (std::size_t j = i + 1; j < block.size(); ++j)
                for (Label l = 0; l < alpha.label_count(); ++l)
                    for (std::size_t c = 0; c < p.block_count(); ++c) {
                        const double a = t.at(block[i], l, c);
                        const double b = t.at(block[j], l, c);
                        if (detail::ext_close(a, b, tol)) continue;
                        out.holds = false;
                        out.witness = ProbWeakWitness{alpha.space().name(block[i]), alpha.space().name(block[j]),
                                                      alpha.label_name(l), f.dst().name(c), a, b};
                        return out;
                    }
    return out;
}

/// Refinement with recomputation: each round saturates relative to the current partition.
inline Partition prob_weak_minimize(const ProbKernel &alpha, const FixpointConfig &cfg = {}, double tol = kEps) {
    using Row = std::vector<double>;
    auto signature = [&](const Partition &p) {
        const auto s = saturate_prob_through(alpha, p.quotient(), cfg);
        std::vector<Row> rows;
        for (std::size_t x = 0; x < alpha.size(); ++x) rows.push_back(s.table.row(x));
        return rows;
    };
    auto equal = [tol](const Row &a, const Row &b) { return detail::rows_close(a, b, tol); };
    return refine<Row>(Partition::single_block(alpha.space()), signature, equal).partition;
}

/// Coarsest partition passing prob_weak_check, by exhaustive enumeration.
inline Partition brute_force_prob_weak(const ProbKernel &alpha, const FixpointConfig &cfg = {},
                                       double tol = kEps, std::size_t max_states = 7) {
    if (alpha.size() > max_states)
        throw TooLargeError("brute-force search is limited to " + std::to_string(max_states) + " states");
    std::optional<Partition> best;
    for_each_partition(alpha.space(), [&](const Partition &p) {
        if (!prob_weak_check(alpha, p, cfg, tol).holds) return;
        if (!best || p.block_count() < best->block_count()) best = p;
    });
    const auto coarsest = *best; // the discrete partition always passes
    for_each_partition(alpha.space(), [&](const Partition &p) {
        if (prob_weak_check(alpha, p, cfg, tol).holds && !p.refines(coarsest))
            throw Error("Invariant", "passing partitions " + p.to_string() + " and " + coarsest.to_string() +
                                         " have no passing upper bound");
    });
    return coarsest;
}

} // namespace coweak

#endif // COWEAK_PROBWEAK_HPP
