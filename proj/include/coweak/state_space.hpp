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

#ifndef COWEAK_STATE_SPACE_HPP
#define COWEAK_STATE_SPACE_HPP

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "coweak/common.hpp"

namespace coweak {

/**
 * Ordered, finite set of named states. Index `i` is the position of the
 * i-th name; names are distinct.
 */
class StateSpace {
public:
    StateSpace() = default;

    explicit StateSpace(std::vector<std::string> names) : names_(std::move(names)) {
        index_.reserve(names_.size());
        for (std::size_t i = 0; i < names_.size(); ++i) {
            if (!index_.emplace(names_[i], i).second) {
                throw PreconditionError("duplicate state name '" + names_[i] + "'");
            }
        }
    }

    /// States "<prefix>0", "<prefix>1", ...
    static StateSpace numbered(std::size_t n, const std::string &prefix = "s") {
        std::vector<std::string> names;
        names.reserve(n);
        for (std::size_t i = 0; i < n; ++i) names.push_back(prefix + std::to_string(i));
        return StateSpace(std::move(names));
    }

    std::size_t size() const noexcept { return names_.size(); }
    bool empty() const noexcept { return names_.empty(); }
    const std::vector<std::string> &names() const noexcept { return names_; }
    const std::string &name(std::size_t i) const { return names_.at(i); }

    std::optional<std::size_t> find(const std::string &name) const {
        auto it = index_.find(name);
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t index(const std::string &name) const {
        auto it = index_.find(name);
        if (it == index_.end()) throw PreconditionError("unknown state '" + name + "'");
        return it->second;
    }

    friend bool operator==(const StateSpace &a, const StateSpace &b) {
        return a.names_ == b.names_;
    }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, std::size_t> index_;
};

} // namespace coweak

#endif // COWEAK_STATE_SPACE_HPP
