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

#ifndef COWEAK_CLI_HPP
#define COWEAK_CLI_HPP

// Requires CLI11 ("CLI11.hpp") and nlohmann/json ("json.hpp") on the include path.

#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "coweak/bisim.hpp"
#include "coweak/ctmc.hpp"
#include "coweak/io.hpp"
#include "coweak/probweak.hpp"
#include "coweak/saturation.hpp"
#include "coweak/timed.hpp"

namespace coweak::cli {

using io::json;

enum ExitCode : int { kOk = 0, kNegative = 1, kInputError = 2, kDivergence = 3 };

struct Options {
    std::string format = "json";
    double tolerance = kEps;
    std::size_t max_iterations = 1'000'000;
    std::uint64_t seed = 1;

    FixpointConfig config() const {
        FixpointConfig cfg;
        cfg.max_iterations = max_iterations;
        return cfg;
    }
};

namespace detail {

inline std::string render_text(const json &doc) {
    std::ostringstream out;
    const std::string kind = doc.value("kind", "");
    if (kind == "partition" || kind == "oracle") {
        out << "relation: " << doc["relation"].get<std::string>() << "\n";
        for (const auto &b : doc["blocks"]) {
            out << "  {";
            for (std::size_t i = 0; i < b.size(); ++i) out << (i ? ", " : "") << b[i].get<std::string>();
            out << "}\n";
        }
        return out.str();
    }
    if (kind == "check") {
        out << doc["first"].get<std::string>() << (doc["equivalent"].get<bool>() ? " ~ " : " !~ ")
            << doc["second"].get<std::string>() << " (" << doc["relation"].get<std::string>() << ")\n";
        if (doc.contains("witness")) out << "  witness: " << doc["witness"].dump() << "\n";
        return out.str();
    }
    if (kind == "hitting") {
        for (const auto &[state, v] : doc["values"].items()) out << "  " << state << ": " << v.dump() << "\n";
        for (const auto &[key, v] : doc.items())
            if (key != "values" && key != "kind" && key != "version") out << key << ": " << v.dump() << "\n";
        return out.str();
    }
    return doc.dump(2) + "\n";
}

inline void print(std::ostream &out, const Options &opt, const json &doc) {
    if (opt.format == "text") out << render_text(doc);
    else out << doc.dump(2) << "\n";
}

inline Partition merged(const Partition &p, std::size_t a, std::size_t b) {
    auto ids = p.block_ids();
    const auto from = ids[b], to = ids[a];
    for (auto &id : ids)
        if (id == from) id = to;
    return Partition(p.space(), ids);
}

/// First pair in one block of `p` whose rows of f# . beta differ.
template <Quantale Q> std::optional<json> strong_witness(const KleisliEndo<Q> &beta, const Partition &p) {
    const auto f = p.quotient();
    const auto sig = pushforward(f, beta);
    const auto &q = beta.quantale();
    for (const auto &block : p.blocks())
        for (auto x : block)
            for (std::size_t c = 0; c < sig.cols(); ++c)
                if (!(sig.at(x, c) == sig.at(block.front(), c)))
                    return json{{"pair", {beta.src().name(block.front()), beta.src().name(x)}},
                                {"class", f.dst().name(c)},
                                {"values", {q.format(sig.at(block.front(), c)), q.format(sig.at(x, c))}}};
    return std::nullopt;
}

inline std::optional<json> strong_prob_witness(const ProbKernel &k, const Partition &p, double tol) {
    const auto f = p.quotient();
    const auto t = pushforward(f, k);
    for (const auto &block : p.blocks())
        for (auto x : block)
            for (Label l = 0; l < k.label_count(); ++l)
                for (std::size_t c = 0; c < t.classes(); ++c)
                    if (!coweak::detail::ext_close(t.at(x, l, c), t.at(block.front(), l, c), tol))
                        return json{{"pair", {k.space().name(block.front()), k.space().name(x)}},
                                    {"label", k.label_name(l)},
                                    {"class", f.dst().name(c)},
                                    {"values", {io::detail::number(t.at(block.front(), l, c)), io::detail::number(t.at(x, l, c))}}};
    return std::nullopt;
}

/// Coarsest partition for `relation`; `witness_for` (if set) receives a witness
/// explaining why the two given states are not related.
inline Partition minimize(const io::SystemFile &f, const std::string &relation, const Options &opt,
                          const std::string &ctmc_initial, std::optional<std::pair<std::string, std::string>> pair,
                          std::optional<json> *witness) {
    const auto cfg = opt.config();
    auto explain = [&](const Partition &p, auto &&witness_of) {
        if (!pair || !witness) return;
        const auto a = p.space().index(pair->first), b = p.space().index(pair->second);
        if (p.same_block(a, b)) return;
        *witness = witness_of(merged(p, a, b));
    };
    auto weak_json = [](const WeakCheckResult &r) -> std::optional<json> {
        if (r.holds) return std::nullopt;
        return json{{"pair", {r.witness->first, r.witness->second}},
                    {"class", r.witness->target},
                    {"values", {r.witness->first_value, r.witness->second_value}}};
    };
    if (relation == "strong") {
        if (f.kind == "fps") {
            auto k = io::to_prob(f);
            auto p = strong_minimize(k, opt.tolerance);
            explain(p, [&](const Partition &m) { return strong_prob_witness(k, m, opt.tolerance); });
            return p;
        }
        if (f.kind == "weighted-lts" && f.monoid == "nat") {
            auto a = io::to_weighted_nat(f);
            auto p = strong_minimize(a);
            explain(p, [&](const Partition &m) { return strong_witness(a, m); });
            return p;
        }
        if (f.kind == "weighted-lts" && f.monoid == "real") {
            auto a = io::to_weighted_real(f);
            auto p = strong_minimize(a);
            explain(p, [&](const Partition &m) { return strong_witness(a, m); });
            return p;
        }
        auto a = io::to_lts(f);
        auto p = strong_minimize(a);
        explain(p, [&](const Partition &m) { return strong_witness(a, m); });
        return p;
    }
    if (relation == "weak") {
        auto run = [&](const auto &a) {
            auto p = weak_minimize(a, cfg);
            explain(p, [&](const Partition &m) { return weak_json(weak_check(a, m, cfg)); });
            return p;
        };
        if (f.kind == "weighted-lts" && f.monoid == "nat") return run(io::to_weighted_nat(f));
        if (f.kind == "weighted-lts" && f.monoid == "real") return run(io::to_weighted_real(f));
        return run(io::to_lts(f));
    }
    if (relation == "prob-weak") {
        auto k = io::to_prob(f);
        auto p = prob_weak_minimize(k, cfg, opt.tolerance);
        explain(p, [&](const Partition &m) -> std::optional<json> {
            auto r = prob_weak_check(k, m, cfg, opt.tolerance);
            if (r.holds) return std::nullopt;
            const auto &w = *r.witness;
            return json{{"pair", {w.first, w.second}}, {"label", w.label}, {"class", w.target_class},
                        {"values", {io::detail::number(w.first_value), io::detail::number(w.second_value)}}};
        });
        return p;
    }
    if (relation == "time-abstract" || relation == "timed-weak") {
        auto ts = io::to_timed(f);
        if (relation == "time-abstract") {
            auto beta = time_abstract(ts, cfg);
            auto p = strong_minimize(beta);
            explain(p, [&](const Partition &m) { return strong_witness(beta, m); });
            return p;
        }
        auto p = timed_weak_minimize(ts, cfg);
        auto beta = saturate(encode(ts), cfg);
        explain(p, [&](const Partition &m) { return strong_witness(beta, m); });
        return p;
    }
    if (relation == "ctmc-weak") {
        auto spec = io::to_ctmc(f);
        std::optional<Partition> start;
        if (ctmc_initial == "absorbing") start = absorbing_split(spec);
        auto p = ctmc_weak_minimize(spec, start, opt.tolerance);
        explain(p, [&](const Partition &m) -> std::optional<json> {
            auto r = ctmc_weak_check(spec, m, opt.tolerance);
            if (r.holds) {
                // the hitting condition alone would allow the merge; the start partition forbids it
                if (!start) return std::nullopt;
                return json{{"pair", {pair->first, pair->second}},
                            {"reason", "separated by the absorbing initial partition"}};
            }
            const auto &w = *r.witness;
            return json{{"pair", {w.first, w.second}}, {"class", w.target_class},
                        {"values", {w.first_value, w.second_value}}};
        });
        return p;
    }
    throw PreconditionError("unknown relation '" + relation + "'");
}

inline json saturate_doc(const io::SystemFile &f, const Options &opt) {
    const auto cfg = opt.config();
    if (f.kind == "lts") return io::emit(io::from_endo(saturate(io::to_lts(f), cfg)));
    if (f.kind == "weighted-lts") {
        if (f.monoid == "nat") return io::emit(io::from_endo(saturate(io::to_weighted_nat(f), cfg), "nat"));
        if (f.monoid == "real") return io::emit(io::from_endo(saturate(io::to_weighted_real(f), cfg), "real"));
        return io::emit(io::from_endo(saturate(io::to_lts(f), cfg)));
    }
    if (f.kind == "timed") {
        auto ts = io::to_timed(f);
        auto acyc = check_delay_acyclicity(ts);
        if (!acyc.acyclic) throw DelayCycleError("delay cycle prevents exact saturation", acyc.cycle);
        return io::emit(io::from_endo(saturate(encode(ts), cfg), "real"));
    }
    if (f.kind == "nflow") return io::emit(io::from_endo(sigma_bang_flow(io::to_nflow(f), cfg)));
    if (f.kind == "mflow") return io::emit(io::from_endo(sigma_bang_flow(io::to_mflow(f), cfg)));
    if (f.kind == "diagram") return io::emit(io::from_endo(sigma_bang_diagram(io::to_diagram(f), cfg)));
    throw SemanticError("$.kind", "saturate does not apply to kind '" + f.kind + "'");
}

inline json flow_report_json(const FlowLawReport &r) {
    json v = json::array();
    for (const auto &x : r.violations)
        v.push_back({{"law", x.law}, {"m", x.m}, {"n", x.n}, {"row", x.row}, {"col", x.col}, {"lhs", x.lhs}, {"rhs", x.rhs}});
    return {{"version", 1}, {"kind", "flow-report"}, {"passed", r.passed()}, {"checks", r.checks}, {"violations", v}};
}

inline std::vector<std::string> split_names(const std::string &s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

inline json error_doc(const Error &e) {
    json err = {{"kind", e.kind()}, {"message", e.what()}};
    if (auto *c = dynamic_cast<const NonStabilizingError *>(&e); c && !c->cycle().empty()) err["cycle"] = c->cycle();
    if (auto *c = dynamic_cast<const DelayCycleError *>(&e)) err["cycle"] = c->cycle();
    if (auto *m = dynamic_cast<const MaxIterationsError *>(&e)) {
        err["iterations"] = m->iterations();
        err["residual"] = io::detail::number(m->residual());
    }
    if (auto *p = dynamic_cast<const ParseError *>(&e)) {
        err["line"] = p->line();
        err["column"] = p->column();
    }
    if (auto *s = dynamic_cast<const SemanticError *>(&e)) err["path"] = s->path();
    return {{"version", 1}, {"error", err}};
}

} // namespace detail

/// Runs one command line (args excludes the program name). Returns the exit code.
inline int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"coweak: saturation and weak bisimulation for finite systems", "coweak"};
    app.require_subcommand(1);
    Options opt;
    auto add_common = [&](CLI::App *sub) {
        sub->add_option("--format", opt.format, "Output format")->check(CLI::IsMember({"json", "text"}));
        sub->add_option("--tolerance", opt.tolerance, "Equality tolerance for real-valued signatures")
            ->check(CLI::PositiveNumber);
        sub->add_option("--max-iter", opt.max_iterations, "Fixed-point iteration cap")->check(CLI::PositiveNumber);
        sub->add_option("--seed", opt.seed, "Seed for Monte-Carlo estimates");
    };
    const std::vector<std::string> relations{"strong", "weak", "prob-weak", "time-abstract", "timed-weak", "ctmc-weak"};

    std::string file, file2, relation = "weak", state1, state2, target, ctmc_initial = "single";
    std::size_t runs = 0;

    auto *sat = app.add_subcommand("saturate", "Saturate a system (alpha*, or Sigma_! for flows and diagrams)");
    sat->add_option("FILE", file)->required();
    auto *min = app.add_subcommand("minimize", "Coarsest partition for a relation");
    min->add_option("FILE", file)->required();
    auto *chk = app.add_subcommand("check", "Decide whether two states are related");
    chk->add_option("FILE", file)->required();
    chk->add_option("STATE1", state1)->required();
    chk->add_option("STATE2", state2)->required();
    for (auto *sub : {min, chk}) {
        sub->add_option("--relation", relation, "Relation")->check(CLI::IsMember(relations));
        sub->add_option("--ctmc-initial", ctmc_initial, "Initial partition for ctmc-weak")
            ->check(CLI::IsMember({"single", "absorbing"}));
    }
    auto *val = app.add_subcommand("validate-flow", "Check the flow laws of an nflow or mflow");
    val->add_option("FILE", file)->required();
    auto *adj = app.add_subcommand("adjoint-check", "Exhaustive check of the Sigma_! adjunction over relations");
    adj->add_option("FILE_PI", file)->required();
    adj->add_option("FILE_PI_PRIME", file2)->required();
    auto *hit = app.add_subcommand("ctmc-hit", "Hitting probabilities of a target set");
    hit->add_option("FILE", file)->required();
    hit->add_option("--target", target, "Comma-separated target states")->required();
    hit->add_option("--monte-carlo", runs, "Also estimate by simulation with this many runs");
    auto *orc = app.add_subcommand("oracle", "Brute-force coarsest partition (small systems only)");
    orc->add_option("FILE", file)->required();
    orc->add_option("--relation", relation, "Relation")->check(CLI::IsMember({"weak", "prob-weak"}));
    for (auto *sub : {sat, min, chk, val, adj, hit, orc}) add_common(sub);

    std::vector<std::string> argv_store{"coweak"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char *> argv;
    for (const auto &a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*sat) {
            detail::print(out, opt, detail::saturate_doc(io::parse_file(file), opt));
            return kOk;
        }
        if (*min) {
            auto f = io::parse_file(file);
            auto p = detail::minimize(f, relation, opt, ctmc_initial, std::nullopt, nullptr);
            detail::print(out, opt, io::emit_partition(p, relation));
            return kOk;
        }
        if (*chk) {
            auto f = io::parse_file(file);
            std::optional<json> witness;
            auto p = detail::minimize(f, relation, opt, ctmc_initial, std::make_pair(state1, state2), &witness);
            const bool same = p.same_block(p.space().index(state1), p.space().index(state2));
            json doc = {{"version", 1}, {"kind", "check"}, {"relation", relation}, {"first", state1},
                        {"second", state2}, {"equivalent", same}};
            if (witness) doc["witness"] = *witness;
            detail::print(out, opt, doc);
            return same ? kOk : kNegative;
        }
        if (*val) {
            auto f = io::parse_file(file);
            FlowLawReport r;
            if (f.kind == "nflow") r = validate_flow(io::to_nflow(f));
            else if (f.kind == "mflow") r = validate_flow(io::to_mflow(f));
            else throw SemanticError("$.kind", "validate-flow expects an nflow or mflow document");
            detail::print(out, opt, detail::flow_report_json(r));
            return r.passed() ? kOk : kNegative;
        }
        if (*adj) {
            auto pi = io::to_relational_diagram(io::parse_file(file));
            auto target_rel = io::to_relation(io::parse_file(file2));
            auto r = adjoint_check(pi, target_rel, 3, opt.config());
            json dis = json::array();
            for (const auto &d : r.disagreements) dis.push_back({{"family", d.family}, {"left", d.left}, {"right", d.right}});
            detail::print(out, opt, {{"version", 1}, {"kind", "adjoint-report"}, {"candidates", r.candidates},
                                     {"left_holds", r.left_holds}, {"right_holds", r.right_holds},
                                     {"agrees", r.agrees()}, {"disagreements", dis}});
            return r.agrees() ? kOk : kNegative;
        }
        if (*hit) {
            auto spec = io::to_ctmc(io::parse_file(file));
            std::vector<std::size_t> C;
            auto names = detail::split_names(target);
            for (const auto &n : names) C.push_back(spec.space().index(n));
            auto h = hitting(spec, C);
            json values = json::object();
            for (std::size_t i = 0; i < spec.size(); ++i) values[spec.space().name(i)] = h[i];
            std::sort(names.begin(), names.end());
            json doc = {{"version", 1}, {"kind", "hitting"}, {"target", names}, {"values", values}};
            if (runs > 0) {
                json mc = json::object();
                for (std::size_t i = 0; i < spec.size(); ++i) {
                    auto e = monte_carlo_hitting(spec, i, C, runs, opt.seed + i);
                    mc[spec.space().name(i)] = {{"estimate", e.estimate}, {"standard_error", e.standard_error}};
                }
                doc["monte_carlo"] = {{"runs", runs}, {"seed", opt.seed}, {"values", mc}};
            }
            detail::print(out, opt, doc);
            return kOk;
        }
        if (*orc) {
            auto f = io::parse_file(file);
            Partition p = relation == "prob-weak" ? brute_force_prob_weak(io::to_prob(f), opt.config(), opt.tolerance)
                                                  : brute_force_weak(io::to_lts(f), opt.config());
            auto doc = io::emit_partition(p, relation);
            doc["kind"] = "oracle";
            detail::print(out, opt, doc);
            return kOk;
        }
    } catch (const Error &e) {
        const std::string k = e.kind();
        const bool divergence = k == "NonStabilizing" || k == "DelayCycle" || k == "MaxIterations";
        err << "coweak: " << k << ": " << e.what() << "\n";
        if (opt.format == "json") out << detail::error_doc(e).dump(2) << "\n";
        return divergence ? kDivergence : kInputError;
    }
    return kInputError;
}

} // namespace coweak::cli

#endif // COWEAK_CLI_HPP
