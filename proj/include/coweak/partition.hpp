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

#ifndef COWEAK_PARTITION_HPP
#define COWEAK_PARTITION_HPP

#include <algorithm>
#include <functional>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coweak/common.hpp"
#include "coweak/kleisli.hpp"
#include "coweak/state_space.hpp"

namespace coweak {

/**
 * An equivalence relation on a finite state space, stored as its blocks.
 * Blocks are sorted internally and ordered by their least member, so two
 * partitions of the same relation compare equal.
 */
class Partition {
public:
    /// `block_ids[x]` is any label for x's block; labels are renumbered.
    Partition(StateSpace space, const std::vector<std::size_t> &block_ids) : space_(std::move(space)) {
        if (block_ids.size() != space_.size())
            throw PreconditionError("partition must assign a block to every state");
        std::vector<std::size_t> seen_ids;
        block_of_.resize(block_ids.size());
        for (std::size_t x = 0; x < block_ids.size(); ++x) {
            auto it = std::find(seen_ids.begin(), seen_ids.end(), block_ids[x]);
            std::size_t b;
            if (it == seen_ids.end()) {
                b = seen_ids.size();
                seen_ids.push_back(block_ids[x]);
                blocks_.emplace_back();
            } else {
                b = static_cast<std::size_t>(it - seen_ids.begin());
            }
            block_of_[x] = b;
            blocks_[b].push_back(x);
        }
    }

    static Partition single_block(const StateSpace &space) {
        return Partition(space, std::vector<std::size_t>(space.size(), 0));
    }

    static Partition discrete(const StateSpace &space) {
        std::vector<std::size_t> ids(space.size());
        std::iota(ids.begin(), ids.end(), 0);
        return Partition(space, ids);
    }

    static Partition from_blocks(const StateSpace &space,
                                 const std::vector<std::vector<std::string>> &blocks) {
        std::vector<std::size_t> ids(space.size(), static_cast<std::size_t>(-1));
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            if (blocks[b].empty()) throw PreconditionError("partition blocks must be nonempty");
            for (const auto &name : blocks[b]) {
                auto x = space.index(name);
                if (ids[x] != static_cast<std::size_t>(-1))
                    throw PreconditionError("state '" + name + "' occurs in two blocks");
                ids[x] = b;
            }
        }
        for (std::size_t x = 0; x < ids.size(); ++x)
            if (ids[x] == static_cast<std::size_t>(-1))
                throw PreconditionError("state '" + space.name(x) + "' is not covered");
        return Partition(space, ids);
    }

    const StateSpace &space() const noexcept { return space_; }
    const std::vector<std::vector<std::size_t>> &blocks() const noexcept { return blocks_; }
    std::size_t block_count() const noexcept { return blocks_.size(); }
    std::size_t block_of(std::size_t x) const { return block_of_.at(x); }
    const std::vector<std::size_t> &block_ids() const noexcept { return block_of_; }
    bool same_block(std::size_t x, std::size_t y) const { return block_of_.at(x) == block_of_.at(y); }

    /// Every block of *this lies inside a block of `coarser`.
    bool refines(const Partition &coarser) const {
        for (const auto &b : blocks_)
            for (auto x : b)
                if (!coarser.same_block(b.front(), x)) return false;
        return true;
    }

    /// Quotient onto block states named "[x,y,...]".
    QuotientMap quotient() const {
        std::vector<std::string> names;
        names.reserve(blocks_.size());
        for (const auto &b : blocks_) {
            std::string n = "[";
            for (std::size_t i = 0; i < b.size(); ++i) n += (i ? "," : "") + space_.name(b[i]);
            names.push_back(n + "]");
        }
        return QuotientMap(space_, StateSpace(std::move(names)), block_of_);
    }

    /// Blocks as state names, each block sorted, blocks sorted.
    std::vector<std::vector<std::string>> named_blocks() const {
        std::vector<std::vector<std::string>> out;
        for (const auto &b : blocks_) {
            std::vector<std::string> names;
            for (auto x : b) names.push_back(space_.name(x));
            std::sort(names.begin(), names.end());
            out.push_back(std::move(names));
        }
        std::sort(out.begin(), out.end());
        return out;
    }

    std::string to_string() const {
        std::string out = "{";
        auto named = named_blocks();
        for (std::size_t b = 0; b < named.size(); ++b) {
            out += b ? ",{" : "{";
            for (std::size_t i = 0; i < named[b].size(); ++i) out += (i ? "," : "") + named[b][i];
            out += "}";
        }
        return out + "}";
    }

    friend bool operator==(const Partition &a, const Partition &b) {
        return a.space_ == b.space_ && a.block_of_ == b.block_of_;
    }

private:
    StateSpace space_;
    std::vector<std::vector<std::size_t>> blocks_;
    std::vector<std::size_t> block_of_;
};

/// Finest partition coarser than both (transitive closure of the union).
inline Partition join(const Partition &a, const Partition &b) {
    if (!(a.space() == b.space())) throw MismatchError("join: partitions of different spaces");
    std::vector<std::size_t> parent(a.space().size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    auto unite = [&](std::size_t x, std::size_t y) {
        x = find(x);
        y = find(y);
        if (x != y) parent[std::max(x, y)] = std::min(x, y);
    };
    for (const Partition *p : {&a, &b})
        for (const auto &blk : p->blocks())
            for (auto x : blk) unite(blk.front(), x);
    std::vector<std::size_t> ids(parent.size());
    for (std::size_t x = 0; x < ids.size(); ++x) ids[x] = find(x);
    return Partition(a.space(), ids);
}

/// Calls fn(partition) for every partition of `space` (restricted growth strings).
template <class Fn> void for_each_partition(const StateSpace &space, Fn &&fn) {
    const std::size_t n = space.size();
    if (n == 0) {
        fn(Partition(space, {}));
        return;
    }
    std::vector<std::size_t> rgs(n, 0);
    std::vector<std::size_t> max_prefix(n, 0); // max of rgs[0..i-1]
    while (true) {
        fn(Partition(space, rgs));
        // advance to the next restricted growth string
        std::size_t i = n - 1;
        while (i > 0 && rgs[i] == max_prefix[i] + 1) --i;
        if (i == 0) return;
        ++rgs[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            max_prefix[j] = std::max(max_prefix[j - 1], rgs[j - 1]);
            rgs[j] = 0;
        }
    }
}

/// Where two watched states first ended up in different blocks.
template <class Sig> struct SplitWitness {
    std::size_t round = 0;
    Partition before;
    Sig first;
    Sig second;
};

template <class Sig> struct RefinementResult {
    Partition partition;
    std::size_t rounds = 0;
    std::optional<SplitWitness<Sig>> witness;
};

/**
 * Signature-splitting refinement: each round computes signature(P) for the
 * current partition P and splits every block into groups of states whose
 * signatures are `equal` to the group's first (least-index) member. Stops
 * when a round splits nothing. When `watch` is given, the round at which
 * the two states are separated is recorded together with their signatures.
 */
template <class Sig, class SignatureFn, class EqualFn>
RefinementResult<Sig> refine(Partition start, SignatureFn &&signature, EqualFn &&equal,
                             std::optional<std::pair<std::size_t, std::size_t>> watch = {}) {
    RefinementResult<Sig> result{std::move(start), 0, std::nullopt};
    const std::size_t n = result.partition.space().size();
    while (true) {
        const Partition &current = result.partition;
        std::vector<Sig> sigs = signature(current);
        std::vector<std::size_t> ids(n);
        std::size_t next_id = 0;
        for (const auto &block : current.blocks()) {
            std::vector<std::size_t> reps;
            std::vector<std::size_t> rep_ids;
            for (auto x : block) {
                std::size_t g = 0;
                while (g < reps.size() && !equal(sigs[reps[g]], sigs[x])) ++g;
                if (g == reps.size()) {
                    reps.push_back(x);
                    rep_ids.push_back(next_id++);
                }
                ids[x] = rep_ids[g];
            }
        }
        ++result.rounds;
        Partition next(current.space(), ids);
        if (next.block_count() == current.block_count()) return result;
        if (watch && !result.witness && current.same_block(watch->first, watch->second) &&
            !next.same_block(watch->first, watch->second)) {
            result.witness = SplitWitness<Sig>{result.rounds, current, sigs[watch->first],
                                               sigs[watch->second]};
        }
        result.partition = std::move(next);
    }
}

} // namespace coweak

#endif // COWEAK_PARTITION_HPP
