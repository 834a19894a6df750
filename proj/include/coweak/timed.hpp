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

#ifndef COWEAK_TIMED_HPP
#define COWEAK_TIMED_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "coweak/bisim.hpp"
#include "coweak/common.hpp"
#include "coweak/kleisli.hpp"
#include "coweak/monoid.hpp"
#include "coweak/partition.hpp"
#include "coweak/prob_kernel.hpp"
#include "coweak/quantale.hpp"
#include "coweak/saturation.hpp"

namespace coweak {

using TimedQ = LabelSetQ<RealAdd>;

/// An action (label set, delay 0) or a delay (no label, delay > 0).
struct TimedTransition {
    std::size_t from = 0;
    std::optional<Label> label;
    double delay = 0.0;
    std::size_t to = 0;
};

class TimedSystem {
public:
    TimedSystem(StateSpace space, std::vector<std::string> alphabet)
        : space_(std::move(space)), alphabet_(std::move(alphabet)) {
        if (auto err = detail::check_alphabet(alphabet_)) throw PreconditionError(*err);
    }

    void add_action(const std::string &from, const std::string &label, const std::string &to) {
        Label l = kTau;
        if (label != "tau") {
            auto it = std::find(alphabet_.begin(), alphabet_.end(), label);
            if (it == alphabet_.end()) throw PreconditionError("undeclared label '" + label + "'");
            l = static_cast<Label>(it - alphabet_.begin() + 1);
        }
        transitions_.push_back({space_.index(from), l, 0.0, space_.index(to)});
    }

    void add_delay(const std::string &from, double delay, const std::string &to) {
        if (!(delay > 0.0) || !std::isfinite(delay)) throw PreconditionError("delays must be positive and finite");
        transitions_.push_back({space_.index(from), std::nullopt, delay, space_.index(to)});
    }

    const StateSpace &space() const noexcept { return space_; }
    const std::vector<std::string> &alphabet() const noexcept { return alphabet_; }
    const std::vector<TimedTransition> &transitions() const noexcept { return transitions_; }

private:
    StateSpace space_;
    std::vector<std::string> alphabet_;
    std::vector<TimedTransition> transitions_;
};

/// Actions become (label, 0), delays become (tau, duration).
inline KleisliEndo<TimedQ> encode(const TimedSystem &ts) {
    TimedQ q(ts.alphabet());
    KleisliEndo<TimedQ> out(q, ts.space(), ts.space());
    for (const auto &t : ts.transitions())
        out.join_into(t.from, t.to,
                      t.label ? q.singleton(*t.label, 0.0) : q.singleton(kTau, RealAdd::snap(t.delay)));
    return out;
}

/// alpha^T: forget durations (delays become silent steps), then saturate.
inline KleisliEndo<LtsQ> time_abstract(const TimedSystem &ts, const FixpointConfig &cfg = {}) {
    LtsQ q(ts.alphabet());
    KleisliEndo<LtsQ> erased(q, ts.space(), ts.space());
    for (const auto &t : ts.transitions()) erased.join_into(t.from, t.to, q.singleton(t.label.value_or(kTau)));
    return saturate(erased, cfg);
}

inline Partition time_abstract_minimize(const TimedSystem &ts, const FixpointConfig &cfg = {}) {
    return strong_minimize(time_abstract(ts, cfg));
}

struct DelayAcyclicity {
    bool acyclic = true;
    std::vector<std::string> cycle; // first == last when present
};

/// A cycle of silent/delay edges containing a delay makes accumulated durations unbounded.
inline DelayAcyclicity check_delay_acyclicity(const TimedSystem &ts) {
    if (auto c = find_weight_cycle(encode(ts))) return {false, *c};
    return {};
}

/// Weak timed bisimulation: strong bisimulation of the saturated duration-carrying system.
inline Partition timed_weak_minimize(const TimedSystem &ts, const FixpointConfig &cfg = {}) {
    auto acyc = check_delay_acyclicity(ts);
    if (!acyc.acyclic) {
        std::string text;
        for (std::size_t i = 0; i < acyc.cycle.size(); ++i) text += (i ? " -> " : "") + acyc.cycle[i];
        throw DelayCycleError("delay cycle " + text, acyc.cycle);
    }
    return weak_minimize(encode(ts), cfg);
}

} // namespace coweak

#endif // COWEAK_TIMED_HPP
