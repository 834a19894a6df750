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

#ifndef COWEAK_CTMC_HPP
#define COWEAK_CTMC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "coweak/common.hpp"
#include "coweak/partition.hpp"
#include "coweak/state_space.hpp"

namespace coweak {

using DenseMatrix = Eigen::MatrixXd;

/// A finite CTMC given by its off-diagonal rates.
class CtmcSpec {
public:
    explicit CtmcSpec(StateSpace space)
        : space_(std::move(space)), rates_(DenseMatrix::Zero(space_.size(), space_.size())) {}

    void set_rate(std::size_t i, std::size_t j, double r) {
        if (i >= size() || j >= size()) throw PreconditionError("rate index out of range");
        if (i == j) throw PreconditionError("self-rates are not part of a generator");
        if (!(r >= 0.0) || !std::isfinite(r)) throw PreconditionError("rates must be finite and nonnegative");
        rates_(i, j) = r;
    }
    void set_rate(const std::string &i, const std::string &j, double r) {
        set_rate(space_.index(i), space_.index(j), r);
    }

    double rate(std::size_t i, std::size_t j) const { return rates_(i, j); }
    double exit(std::size_t i) const { return rates_.row(i).sum(); }
    bool absorbing(std::size_t i) const { return exit(i) == 0.0; }
    std::size_t size() const noexcept { return space_.size(); }
    const StateSpace &space() const noexcept { return space_; }

    DenseMatrix generator() const {
        DenseMatrix q = rates_;
        for (std::size_t i = 0; i < size(); ++i) q(i, i) = -exit(i);
        return q;
    }

private:
    StateSpace space_;
    DenseMatrix rates_;
};

/**
 * P(t) = sum_k Poisson(k; lambda t) U^k with U = I + Q / lambda and lambda the
 * largest exit rate. Terms are added until a bound on the remaining Poisson
 * mass is below 1e-12. Long horizons (lambda t > 64) are evaluated as
 * P(t / 2^m) squared m times.
 */
inline DenseMatrix uniformize(const CtmcSpec &spec, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw PreconditionError("uniformize: t must be finite and nonnegative");
    const auto n = static_cast<Eigen::Index>(spec.size());
    double lambda = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) lambda = std::max(lambda, spec.exit(i));
    DenseMatrix id = DenseMatrix::Identity(n, n);
    if (lambda == 0.0 || t == 0.0) return id;
    constexpr double kMaxStep = 64.0;
    int squarings = 0;
    double step = t;
    while (lambda * step > kMaxStep) {
        step /= 2.0;
        ++squarings;
    }
    const DenseMatrix U = id + spec.generator() / lambda;
    const double lt = lambda * step;
    DenseMatrix power = id;
    DenseMatrix out = DenseMatrix::Zero(n, n);
    for (std::uint64_t k = 0;; ++k) {
        const double kk = static_cast<double>(k);
        const double w = std::exp(-lt + kk * std::log(lt) - std::lgamma(kk + 1.0));
        out += w * power;
        // past the mode the terms shrink at least by lt / (k + 2), so the tail is geometric
        if (kk + 2.0 > lt && w * lt / (kk + 2.0 - lt) < 1e-12) break;
        power = power * U;
    }
    for (int i = 0; i < squarings; ++i) out = out * out;
    return out;
}

/// The transition functor t -> P(t) of a spec.
class TransitionFunctor {
public:
    explicit TransitionFunctor(CtmcSpec spec) : spec_(std::move(spec)) {}
    DenseMatrix operator()(double t) const { return uniformize(spec_, t); }
    const CtmcSpec &spec() const noexcept { return spec_; }

private:
    CtmcSpec spec_;
};

struct FunctorViolation {
    double t = 0.0;
    double s = 0.0;
    double error = 0.0;
};

struct FunctorLawReport {
    double identity_error = 0.0;  // ||P(0) - I||
    double stochastic_error = 0.0; // worst |row sum - 1| over all evaluated P
    double max_error = 0.0;       // worst ||P(t+s) - P(t)P(s)||
    std::vector<FunctorViolation> violations;

    bool passed() const { return violations.empty() && identity_error < 1e-12 && stochastic_error < 1e-9; }
};

inline double inf_norm(const DenseMatrix &m) {
    return m.rows() == 0 ? 0.0 : m.cwiseAbs().rowwise().sum().maxCoeff();
}

/// Checks P(0) = I and ||P(t+s) - P(t) P(s)||_inf < tol on each sample pair.
template <class Evaluator>
FunctorLawReport validate_transition_functor(const Evaluator &P, const std::vector<std::pair<double, double>> &samples,
                                             double tol = 1e-9) {
    FunctorLawReport report;
    const DenseMatrix p0 = P(0.0);
    report.identity_error = inf_norm(p0 - DenseMatrix::Identity(p0.rows(), p0.cols()));
    auto stochastic = [&](const DenseMatrix &m) {
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            report.stochastic_error = std::max(report.stochastic_error, std::fabs(m.row(i).sum() - 1.0));
    };
    stochastic(p0);
    for (const auto &[t, s] : samples) {
        if (!(t >= 0.0) || !(s >= 0.0)) throw PreconditionError("functor samples must be nonnegative");
        const DenseMatrix pt = P(t), ps = P(s), pts = P(t + s);
        stochastic(pt);
        stochastic(ps);
        stochastic(pts);
        const double err = inf_norm(pts - pt * ps);
        report.max_error = std::max(report.max_error, err);
        if (!(err < tol)) report.violations.push_back({t, s, err});
    }
    return report;
}

inline FunctorLawReport validate_transition_functor(const CtmcSpec &spec,
                                                    const std::vector<std::pair<double, double>> &samples,
                                                    double tol = 1e-9) {
    return validate_transition_functor(TransitionFunctor(spec), samples, tol);
}

/// States from which `target` is reachable along positive rates (targets included).
inline std::vector<bool> can_reach(const CtmcSpec &spec, const std::vector<bool> &target) {
    std::vector<bool> reach = target;
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i < spec.size(); ++i) {
            if (reach[i]) continue;
            for (std::size_t j = 0; j < spec.size(); ++j)
                if (reach[j] && spec.rate(i, j) > 0.0) {
                    reach[i] = changed = true;
                    break;
                }
        }
    }
    return reach;
}

/**
 * p_{i,C}: probability of ever visiting C from i. Least solution of the
 * embedded jump chain equations; states that cannot reach C get 0, the
 * rest is solved directly, with value iteration as fallback.
 */
inline std::vector<double> hitting(const CtmcSpec &spec, const std::vector<std::size_t> &C) {
    if (C.empty()) throw PreconditionError("hitting: target set must be nonempty");
    const std::size_t n = spec.size();
    std::vector<bool> in_c(n, false);
    for (auto c : C) {
        if (c >= n) throw PreconditionError("hitting: target state out of range");
        in_c[c] = true;
    }
    const auto reach = can_reach(spec, in_c);
    std::vector<double> h(n, 0.0);
    std::vector<std::size_t> unknown;
    for (std::size_t i = 0; i < n; ++i) {
        if (in_c[i]) h[i] = 1.0;
        else if (reach[i]) unknown.push_back(i);
    }
    if (unknown.empty()) return h;

    const auto m = static_cast<Eigen::Index>(unknown.size());
    std::vector<Eigen::Index> slot(n, -1);
    for (Eigen::Index k = 0; k < m; ++k) slot[unknown[k]] = k;
    DenseMatrix A = DenseMatrix::Identity(m, m);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const auto i = unknown[k];
        const double e = spec.exit(i);
        for (std::size_t j = 0; j < n; ++j) {
            const double p = spec.rate(i, j) / e;
            if (p == 0.0) continue;
            if (in_c[j]) b(k) += p;
            else if (slot[j] >= 0) A(k, slot[j]) -= p;
        }
    }
    Eigen::VectorXd x = A.fullPivLu().solve(b);
    if ((A * x - b).lpNorm<Eigen::Infinity>() < 1e-12 && x.allFinite()) {
        for (Eigen::Index k = 0; k < m; ++k) h[unknown[k]] = std::clamp(x(k), 0.0, 1.0);
        return h;
    }
    // monotone value iteration from zero
    for (std::size_t it = 0; it < 10'000'000; ++it) {
        double change = 0.0;
        for (auto i : unknown) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j) s += spec.rate(i, j) / spec.exit(i) * h[j];
            change = std::max(change, std::fabs(s - h[i]));
            h[i] = s;
        }
        if (change < 1e-14) return h;
    }
    throw MaxIterationsError("hitting probabilities did not converge", 10'000'000, 0.0);
}

struct CtmcWitness {
    std::string first;
    std::string second;
    std::string target_class;
    double first_value = 0.0;
    double second_value = 0.0;
};

struct CtmcCheckResult {
    bool holds = true;
    std::optional<CtmcWitness> witness;
};

/// States in one block must hit every block with equal probability.
inline CtmcCheckResult ctmc_weak_check(const CtmcSpec &spec, const Partition &p, double tol = kEps) {
    if (!(p.space() == spec.space())) throw MismatchError("ctmc_weak_check: partition of another space");
    const auto names = p.quotient().dst();
    for (std::size_t c = 0; c < p.block_count(); ++c) {
        const auto h = hitting(spec, p.blocks()[c]);
        for (const auto &block : p.blocks())
            for (auto x : block)
                if (std::fabs(h[x] - h[block.front()]) > tol)
                    return {false, CtmcWitness{spec.space().name(block.front()), spec.space().name(x), names.name(c),
                                               h[block.front()], h[x]}};
    }
    return {};
}

/// Every absorbing state on its own, all other states together.
inline Partition absorbing_split(const CtmcSpec &spec) {
    std::vector<std::size_t> ids(spec.size());
    for (std::size_t i = 0; i < spec.size(); ++i) ids[i] = spec.absorbing(i) ? i + 1 : 0;
    return Partition(spec.space(), ids);
}

/**
 * Refinement by hitting signatures i -> (p_{i,C})_C over the current blocks,
 * starting from `start` (default: one block).
 */
inline Partition ctmc_weak_minimize(const CtmcSpec &spec, std::optional<Partition> start = std::nullopt,
                                    double tol = kEps) {
    using Row = std::vector<double>;
    auto signature = [&](const Partition &p) {
        std::vector<Row> rows(spec.size());
        for (const auto &block : p.blocks()) {
            const auto h = hitting(spec, block);
            for (std::size_t i = 0; i < spec.size(); ++i) rows[i].push_back(h[i]);
        }
        return rows;
    };
    auto equal = [tol](const Row &a, const Row &b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (std::fabs(a[i] - b[i]) > tol) return false;
        return true;
    };
    return refine<Row>(start ? *start : Partition::single_block(spec.space()), signature, equal).partition;
}

struct MonteCarloEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::size_t runs = 0;
    double mean_hitting_time = 0.0; // over the runs that reached C
};

/// Simulated trajectories with exponential holding times; a run stops once it
/// enters C or a state from which C is unreachable.
inline MonteCarloEstimate monte_carlo_hitting(const CtmcSpec &spec, std::size_t from, const std::vector<std::size_t> &C,
                                              std::size_t runs, std::uint64_t seed) {
    if (runs == 0) throw PreconditionError("monte_carlo_hitting: runs must be positive");
    const std::size_t n = spec.size();
    std::vector<bool> in_c(n, false);
    for (auto c : C) in_c.at(c) = true;
    const auto reach = can_reach(spec, in_c);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::size_t hits = 0;
    double time_sum = 0.0;
    for (std::size_t r = 0; r < runs; ++r) {
        std::size_t s = from;
        double clock = 0.0;
        while (!in_c[s] && reach[s]) {
            const double e = spec.exit(s);
            clock += std::exponential_distribution<double>(e)(rng);
            double u = unit(rng) * e;
            std::size_t next = n;
            for (std::size_t j = 0; j < n; ++j) {
                if (spec.rate(s, j) <= 0.0) continue;
                next = j;
                if (u < spec.rate(s, j)) break;
                u -= spec.rate(s, j);
            }
            s = next;
        }
        if (in_c[s]) {
            ++hits;
            time_sum += clock;
        }
    }
    const double p = static_cast<double>(hits) / static_cast<double>(runs);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(runs)), runs,
            hits ? time_sum / static_cast<double>(hits) : 0.0};
}

} // namespace coweak

#endif // COWEAK_CTMC_HPP
