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

#ifndef COWEAK_IO_HPP
#define COWEAK_IO_HPP

// Requires the single-header nlohmann/json ("json.hpp") on the include path.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "coweak/common.hpp"
#include "coweak/ctmc.hpp"
#include "coweak/kleisli.hpp"
#include "coweak/laxflow.hpp"
#include "coweak/monoid.hpp"
#include "coweak/partition.hpp"
#include "coweak/prob_kernel.hpp"
#include "coweak/quantale.hpp"
#include "coweak/timed.hpp"

namespace coweak::io {

using json = nlohmann::json;

inline const std::vector<std::string> &known_kinds() {
    static const std::vector<std::string> kinds{"lts", "weighted-lts", "fps", "timed", "ctmc", "nflow", "mflow", "diagram"};
    return kinds;
}

struct Transition {
    std::string from;
    std::string to;
    std::optional<std::string> label;
    std::optional<double> p;     // fps
    std::optional<double> rate;  // ctmc
    std::optional<double> delay; // timed
    std::optional<double> m;     // weighted-lts monoid value
};

struct FlowEntry {
    std::uint64_t index = 0;
    std::vector<Transition> transitions;
};

struct DiagramObject {
    std::string name;
    std::vector<std::string> states;
};

struct DiagramArrow {
    std::string name;
    std::string from;
    std::string to;
    std::vector<Transition> pairs; // from is a state of `from`, to a state of `to`
};

/// Parsed, validated form of a system document.
struct SystemFile {
    std::string kind;
    std::vector<std::string> states;
    std::vector<std::string> labels;
    std::string monoid = "trivial"; // weighted-lts: trivial | nat | real
    bool stochastic = false;        // fps
    std::vector<Transition> transitions;
    std::optional<std::uint64_t> depth; // nflow generated by `transitions`
    std::vector<FlowEntry> entries;     // nflow (tabulated) / mflow
    std::vector<DiagramObject> objects;
    std::vector<DiagramArrow> arrows;
};

namespace detail {

/// 1-based line and column of the byte before `byte` (the last character the parser read).
inline std::pair<std::size_t, std::size_t> line_column(const std::string &text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

inline const json &field(const json &obj, const std::string &key, const std::string &path) {
    if (!obj.is_object()) throw SemanticError(path, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw SemanticError(path + "." + key, "missing field");
    return *it;
}

inline std::string as_string(const json &v, const std::string &path) {
    if (!v.is_string()) throw SemanticError(path, "expected a string");
    return v.get<std::string>();
}

/// A number, or the string "inf" when `allow_inf`.
inline double as_number(const json &v, const std::string &path, bool allow_inf = false) {
    if (v.is_number()) return v.get<double>();
    if (allow_inf && v.is_string() && v.get<std::string>() == "inf") return coweak::detail::kInf;
    throw SemanticError(path, allow_inf ? "expected a number or \"inf\"" : "expected a number");
}

inline std::vector<std::string> as_names(const json &v, const std::string &path) {
    if (!v.is_array()) throw SemanticError(path, "expected an array of names");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto name = as_string(v[i], path + "[" + std::to_string(i) + "]");
        if (std::find(out.begin(), out.end(), name) != out.end())
            throw SemanticError(path + "[" + std::to_string(i) + "]", "duplicate name '" + name + "'");
        out.push_back(std::move(name));
    }
    return out;
}

inline void require_member(const std::vector<std::string> &names, const std::string &name, const std::string &path,
                           const char *what) {
    if (std::find(names.begin(), names.end(), name) == names.end())
        throw SemanticError(path, std::string("undeclared ") + what + " '" + name + "'");
}

struct TransitionRules {
    const std::vector<std::string> *from_states;
    const std::vector<std::string> *to_states;
    const std::vector<std::string> *labels;
    std::string kind;
};

inline Transition parse_transition(const json &t, const std::string &path, const TransitionRules &rules) {
    if (!t.is_object()) throw SemanticError(path, "expected a transition object");
    Transition out;
    out.from = as_string(field(t, "from", path), path + ".from");
    out.to = as_string(field(t, "to", path), path + ".to");
    require_member(*rules.from_states, out.from, path + ".from", "state");
    require_member(*rules.to_states, out.to, path + ".to", "state");
    const auto &k = rules.kind;
    if (t.contains("label")) {
        if (k == "ctmc") throw SemanticError(path + ".label", "ctmc transitions carry no label");
        out.label = as_string(t["label"], path + ".label");
        if (*out.label != "tau") require_member(*rules.labels, *out.label, path + ".label", "label");
    }
    if (k == "fps") {
        out.p = as_number(field(t, "p", path), path + ".p", true);
        if (!(*out.p >= 0.0)) throw SemanticError(path + ".p", "probability weights must be nonnegative");
        if (!out.label) throw SemanticError(path + ".label", "missing field");
    } else if (k == "ctmc") {
        out.rate = as_number(field(t, "rate", path), path + ".rate");
        if (!(*out.rate >= 0.0)) throw SemanticError(path + ".rate", "rates must be nonnegative");
        if (out.from == out.to) throw SemanticError(path, "self-rates are not allowed");
    } else if (k == "timed") {
        if (t.contains("delay")) {
            if (out.label) throw SemanticError(path, "a transition has either a label or a delay");
            out.delay = as_number(t["delay"], path + ".delay");
            if (!(*out.delay > 0.0) || !std::isfinite(*out.delay))
                throw SemanticError(path + ".delay", "delays must be positive and finite");
        } else if (!out.label) {
            throw SemanticError(path, "a timed transition needs a label or a delay");
        }
    } else {
        if (!out.label) out.label = "tau";
        if (k == "weighted-lts" && t.contains("m")) {
            out.m = as_number(t["m"], path + ".m");
            if (!(*out.m >= 0.0) || !std::isfinite(*out.m))
                throw SemanticError(path + ".m", "monoid values must be finite and nonnegative");
        }
    }
    return out;
}

inline std::vector<Transition> parse_transitions(const json &arr, const std::string &path, const TransitionRules &rules) {
    if (!arr.is_array()) throw SemanticError(path, "expected an array of transitions");
    std::vector<Transition> out;
    for (std::size_t i = 0; i < arr.size(); ++i)
        out.push_back(parse_transition(arr[i], path + "[" + std::to_string(i) + "]", rules));
    return out;
}

} // namespace detail

/// Parses and validates a document.
inline SystemFile parse(const std::string &text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error &e) {
        auto [line, col] = detail::line_column(text, e.byte);
        std::string msg = e.what();
        auto pos = msg.find("parse error");
        throw ParseError(pos == std::string::npos ? msg : msg.substr(pos), line, col);
    }
    if (!doc.is_object()) throw SemanticError("$", "document must be an object");
    const auto &version = detail::field(doc, "version", "$");
    if (!version.is_number_integer() || version.get<int>() != 1) throw SemanticError("$.version", "expected 1");
    SystemFile out;
    out.kind = detail::as_string(detail::field(doc, "kind", "$"), "$.kind");
    const auto &kinds = known_kinds();
    if (std::find(kinds.begin(), kinds.end(), out.kind) == kinds.end())
        throw SemanticError("$.kind", "unknown kind '" + out.kind + "'");
    if (doc.contains("labels")) {
        if (out.kind == "ctmc") throw SemanticError("$.labels", "ctmc documents have no labels");
        out.labels = detail::as_names(doc["labels"], "$.labels");
        if (auto err = coweak::detail::check_alphabet(out.labels)) throw SemanticError("$.labels", *err);
    }

    if (out.kind == "diagram") {
        const auto &objs = detail::field(doc, "objects", "$");
        if (!objs.is_array()) throw SemanticError("$.objects", "expected an array");
        std::vector<std::string> object_names;
        for (std::size_t i = 0; i < objs.size(); ++i) {
            const std::string path = "$.objects[" + std::to_string(i) + "]";
            DiagramObject o{detail::as_string(detail::field(objs[i], "name", path), path + ".name"),
                            detail::as_names(detail::field(objs[i], "states", path), path + ".states")};
            if (std::find(object_names.begin(), object_names.end(), o.name) != object_names.end())
                throw SemanticError(path + ".name", "duplicate object '" + o.name + "'");
            object_names.push_back(o.name);
            out.objects.push_back(std::move(o));
        }
        const auto &arrows = detail::field(doc, "arrows", "$");
        if (!arrows.is_array()) throw SemanticError("$.arrows", "expected an array");
        for (std::size_t i = 0; i < arrows.size(); ++i) {
            const std::string path = "$.arrows[" + std::to_string(i) + "]";
            DiagramArrow a;
            a.name = detail::as_string(detail::field(arrows[i], "name", path), path + ".name");
            a.from = detail::as_string(detail::field(arrows[i], "from", path), path + ".from");
            a.to = detail::as_string(detail::field(arrows[i], "to", path), path + ".to");
            detail::require_member(object_names, a.from, path + ".from", "object");
            detail::require_member(object_names, a.to, path + ".to", "object");
            auto find = [&](const std::string &n) -> const std::vector<std::string> & {
                for (const auto &o : out.objects)
                    if (o.name == n) return o.states;
                throw SemanticError(path, "unknown object");
            };
            detail::TransitionRules rules{&find(a.from), &find(a.to), &out.labels, "diagram"};
            a.pairs = detail::parse_transitions(detail::field(arrows[i], "pairs", path), path + ".pairs", rules);
            out.arrows.push_back(std::move(a));
        }
        return out;
    }

    out.states = detail::as_names(detail::field(doc, "states", "$"), "$.states");
    detail::TransitionRules rules{&out.states, &out.states, &out.labels, out.kind};
    if (out.kind == "weighted-lts") {
        if (doc.contains("monoid")) out.monoid = detail::as_string(doc["monoid"], "$.monoid");
        if (out.monoid != "trivial" && out.monoid != "nat" && out.monoid != "real")
            throw SemanticError("$.monoid", "expected \"trivial\", \"nat\" or \"real\"");
    }
    if (out.kind == "nflow" || out.kind == "mflow") {
        if (doc.contains("entries")) {
            const auto &entries = doc["entries"];
            if (!entries.is_array()) throw SemanticError("$.entries", "expected an array");
            for (std::size_t i = 0; i < entries.size(); ++i) {
                const std::string path = "$.entries[" + std::to_string(i) + "]";
                const auto &idx = detail::field(entries[i], "index", path);
                if (!idx.is_number_unsigned()) throw SemanticError(path + ".index", "expected a natural number");
                FlowEntry e{idx.get<std::uint64_t>(),
                            detail::parse_transitions(detail::field(entries[i], "transitions", path),
                                                      path + ".transitions", rules)};
                for (const auto &prev : out.entries)
                    if (prev.index == e.index) throw SemanticError(path + ".index", "duplicate index");
                out.entries.push_back(std::move(e));
            }
            if (out.kind == "nflow") {
                std::sort(out.entries.begin(), out.entries.end(),
                          [](const FlowEntry &a, const FlowEntry &b) { return a.index < b.index; });
                for (std::size_t i = 0; i < out.entries.size(); ++i)
                    if (out.entries[i].index != i)
                        throw SemanticError("$.entries", "tabulated nflow needs indices 0.." +
                                                             std::to_string(out.entries.size() - 1));
                if (out.entries.empty()) throw SemanticError("$.entries", "tabulated nflow needs index 0");
            }
        } else if (out.kind == "nflow") {
            out.transitions = detail::parse_transitions(detail::field(doc, "transitions", "$"), "$.transitions", rules);
            const auto &d = detail::field(doc, "depth", "$");
            if (!d.is_number_unsigned()) throw SemanticError("$.depth", "expected a natural number");
            out.depth = d.get<std::uint64_t>();
        } else {
            throw SemanticError("$.entries", "missing field");
        }
        return out;
    }
    out.transitions = detail::parse_transitions(detail::field(doc, "transitions", "$"), "$.transitions", rules);
    if (out.kind == "fps") {
        std::vector<double> mass(out.states.size(), 0.0);
        for (const auto &t : out.transitions)
            mass[std::find(out.states.begin(), out.states.end(), t.from) - out.states.begin()] += *t.p;
        auto unit_row = [](double m) { return std::fabs(m - 1.0) <= 1e-12; };
        if (doc.contains("stochastic")) {
            if (!doc["stochastic"].is_boolean()) throw SemanticError("$.stochastic", "expected a boolean");
            out.stochastic = doc["stochastic"].get<bool>();
            if (out.stochastic)
                for (std::size_t i = 0; i < mass.size(); ++i)
                    if (!unit_row(mass[i]))
                        throw SemanticError("$.transitions", "row of state '" + out.states[i] + "' sums to " +
                                                                 std::to_string(mass[i]) + ", not 1");
        } else {
            // undeclared: flagged when every row sums to 1
            out.stochastic = !mass.empty() && std::all_of(mass.begin(), mass.end(), unit_row);
        }
    }
    return out;
}

inline SystemFile parse_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PreconditionError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

namespace detail {

inline json number(double v) {
    if (std::isinf(v)) return "inf";
    if (v == std::floor(v) && std::fabs(v) < 9.0e15) return static_cast<std::int64_t>(v);
    return v;
}

inline json emit_transition(const Transition &t) {
    json j = {{"from", t.from}, {"to", t.to}};
    if (t.label) j["label"] = *t.label;
    if (t.p) j["p"] = number(*t.p);
    if (t.rate) j["rate"] = number(*t.rate);
    if (t.delay) j["delay"] = number(*t.delay);
    if (t.m) j["m"] = number(*t.m);
    return j;
}

inline json emit_transitions(const std::vector<Transition> &ts) {
    std::vector<json> items;
    for (const auto &t : ts) items.push_back(emit_transition(t));
    std::sort(items.begin(), items.end(), [](const json &a, const json &b) { return a.dump() < b.dump(); });
    return json(items);
}

} // namespace detail

/// Canonical document: sorted keys, transitions sorted by their serialization.
inline json emit(const SystemFile &f) {
    json j = {{"version", 1}, {"kind", f.kind}};
    if (!f.labels.empty() || (f.kind != "ctmc" && f.kind != "diagram")) j["labels"] = f.labels;
    if (f.kind == "diagram") {
        json objs = json::array();
        for (const auto &o : f.objects) objs.push_back({{"name", o.name}, {"states", o.states}});
        json arrows = json::array();
        for (const auto &a : f.arrows)
            arrows.push_back({{"name", a.name}, {"from", a.from}, {"to", a.to}, {"pairs", detail::emit_transitions(a.pairs)}});
        j["objects"] = objs;
        j["arrows"] = arrows;
        return j;
    }
    j["states"] = f.states;
    if (f.kind == "weighted-lts") j["monoid"] = f.monoid;
    if (f.kind == "fps") j["stochastic"] = f.stochastic;
    if (!f.entries.empty()) {
        auto entries = f.entries;
        std::sort(entries.begin(), entries.end(), [](const FlowEntry &a, const FlowEntry &b) { return a.index < b.index; });
        json arr = json::array();
        for (const auto &e : entries) arr.push_back({{"index", e.index}, {"transitions", detail::emit_transitions(e.transitions)}});
        j["entries"] = arr;
    } else {
        j["transitions"] = detail::emit_transitions(f.transitions);
        if (f.depth) j["depth"] = *f.depth;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Conversions

namespace detail {

inline void require_kind(const SystemFile &f, std::initializer_list<const char *> kinds) {
    std::string list;
    for (const char *k : kinds) {
        if (f.kind == k) return;
        list += (list.empty() ? "" : ", ") + std::string(k);
    }
    throw SemanticError("$.kind", "expected one of " + list + ", got '" + f.kind + "'");
}

template <class M>
KleisliEndo<LabelSetQ<M>> endo_from(const LabelSetQ<M> &q, const StateSpace &space,
                                    const std::vector<Transition> &ts) {
    KleisliEndo<LabelSetQ<M>> out(q, space, space);
    for (const auto &t : ts) {
        const Label l = *q.find_label(t.label.value_or("tau"));
        typename M::value_type m = q.monoid().unit();
        if constexpr (std::is_same_v<M, NatAdd>) {
            if (t.m) {
                if (*t.m != std::floor(*t.m)) throw SemanticError("$.transitions", "nat monoid values must be integers");
                m = static_cast<std::uint64_t>(*t.m);
            }
        } else if constexpr (std::is_same_v<M, RealAdd>) {
            if (t.m) m = RealAdd::snap(*t.m);
        }
        out.join_into(space.index(t.from), space.index(t.to), q.singleton(l, m));
    }
    return out;
}

} // namespace detail

inline KleisliEndo<LtsQ> to_lts(const SystemFile &f) {
    detail::require_kind(f, {"lts", "weighted-lts"});
    if (f.kind == "weighted-lts" && f.monoid != "trivial")
        throw SemanticError("$.monoid", "expected a trivial monoid here");
    return detail::endo_from(LtsQ(f.labels), StateSpace(f.states), f.transitions);
}

inline KleisliEndo<LabelSetQ<NatAdd>> to_weighted_nat(const SystemFile &f) {
    detail::require_kind(f, {"weighted-lts"});
    return detail::endo_from(LabelSetQ<NatAdd>(f.labels), StateSpace(f.states), f.transitions);
}

inline KleisliEndo<LabelSetQ<RealAdd>> to_weighted_real(const SystemFile &f) {
    detail::require_kind(f, {"weighted-lts"});
    return detail::endo_from(LabelSetQ<RealAdd>(f.labels), StateSpace(f.states), f.transitions);
}

/// A silent-only system read as a relation.
inline KleisliEndo<BoolQ> to_relation(const SystemFile &f) {
    detail::require_kind(f, {"lts"});
    StateSpace space(f.states);
    KleisliEndo<BoolQ> out(BoolQ{}, space, space);
    for (const auto &t : f.transitions) {
        if (t.label.value_or("tau") != "tau") throw SemanticError("$.transitions", "a relation has only silent edges");
        out.set(space.index(t.from), space.index(t.to), true);
    }
    return out;
}

inline ProbKernel to_prob(const SystemFile &f) {
    detail::require_kind(f, {"fps"});
    ProbKernel k(StateSpace(f.states), f.labels);
    for (const auto &t : f.transitions)
        k.add(k.space().index(t.from), *k.find_label(*t.label), k.space().index(t.to), *t.p);
    return k;
}

inline TimedSystem to_timed(const SystemFile &f) {
    detail::require_kind(f, {"timed"});
    TimedSystem ts(StateSpace(f.states), f.labels);
    for (const auto &t : f.transitions) {
        if (t.delay) ts.add_delay(t.from, *t.delay, t.to);
        else ts.add_action(t.from, *t.label, t.to);
    }
    return ts;
}

inline CtmcSpec to_ctmc(const SystemFile &f) {
    detail::require_kind(f, {"ctmc"});
    CtmcSpec spec{StateSpace(f.states)};
    for (const auto &t : f.transitions) {
        const auto i = spec.space().index(t.from), j = spec.space().index(t.to);
        spec.set_rate(i, j, spec.rate(i, j) + *t.rate);
    }
    return spec;
}

inline NFlow<LtsQ> to_nflow(const SystemFile &f) {
    detail::require_kind(f, {"nflow"});
    LtsQ q(f.labels);
    StateSpace space(f.states);
    if (f.depth) return NFlow<LtsQ>::generated(detail::endo_from(q, space, f.transitions), *f.depth);
    std::vector<KleisliEndo<LtsQ>> table;
    for (const auto &e : f.entries) table.push_back(detail::endo_from(q, space, e.transitions));
    return NFlow<LtsQ>::tabulated(std::move(table));
}

inline MFlow<LtsQ, NatAdd> to_mflow(const SystemFile &f) {
    detail::require_kind(f, {"mflow"});
    LtsQ q(f.labels);
    StateSpace space(f.states);
    MFlow<LtsQ, NatAdd> out(space, q);
    for (const auto &e : f.entries) out.add(e.index, detail::endo_from(q, space, e.transitions));
    return out;
}

inline Diagram<LtsQ> to_diagram(const SystemFile &f) {
    detail::require_kind(f, {"diagram"});
    LtsQ q(f.labels);
    Diagram<LtsQ> d(q);
    for (const auto &o : f.objects) d.add_object(o.name, StateSpace(o.states));
    for (const auto &a : f.arrows) {
        auto from = d.object_index(a.from), to = d.object_index(a.to);
        KleisliMorphism<LtsQ> img(q, d.carriers()[from], d.carriers()[to]);
        for (const auto &t : a.pairs)
            img.join_into(img.src().index(t.from), img.dst().index(t.to), q.singleton(*q.find_label(t.label.value_or("tau"))));
        d.add_arrow(a.name, from, to, std::move(img));
    }
    return d;
}

/// The relational diagram of a silent-only diagram, mflow or nflow (entries 0..depth).
inline Diagram<BoolQ> to_relational_diagram(const SystemFile &f) {
    detail::require_kind(f, {"diagram", "mflow", "nflow"});
    Diagram<LtsQ> d = f.kind == "diagram" ? to_diagram(f)
                      : f.kind == "mflow" ? as_diagram(to_mflow(f))
                                          : as_diagram(tabulate(to_nflow(f)));
    Diagram<BoolQ> out{BoolQ{}};
    for (std::size_t o = 0; o < d.objects().size(); ++o) out.add_object(d.objects()[o], d.carriers()[o]);
    for (const auto &a : d.arrows()) {
        KleisliMorphism<BoolQ> img(BoolQ{}, a.image.src(), a.image.dst());
        for (std::size_t r = 0; r < img.rows(); ++r)
            for (std::size_t c = 0; c < img.cols(); ++c)
                for (const auto &e : a.image.at(r, c)) {
                    if (e.first != kTau) throw SemanticError("$", "a relational diagram has only silent edges");
                    img.set(r, c, true);
                }
        out.add_arrow(a.name, a.from, a.to, std::move(img));
    }
    return out;
}

/// The system document of a label-set endomorphism; `monoid` selects the kind.
template <class M>
SystemFile from_endo(const KleisliEndo<LabelSetQ<M>> &alpha, const std::string &monoid = "trivial") {
    const auto &q = alpha.quantale();
    SystemFile f;
    f.kind = monoid == "trivial" ? "lts" : "weighted-lts";
    f.monoid = monoid;
    f.states = alpha.src().names();
    f.labels = q.alphabet();
    for (std::size_t r = 0; r < alpha.rows(); ++r)
        for (std::size_t c = 0; c < alpha.cols(); ++c)
            for (const auto &[l, m] : alpha.at(r, c)) {
                Transition t{alpha.src().name(r), alpha.dst().name(c), q.label_name(l), {}, {}, {}, {}};
                if constexpr (std::is_same_v<M, NatAdd>) t.m = static_cast<double>(m);
                else if constexpr (std::is_same_v<M, RealAdd>) t.m = m;
                f.transitions.push_back(std::move(t));
            }
    return f;
}

inline json emit_partition(const Partition &p, const std::string &relation) {
    return {{"version", 1}, {"kind", "partition"}, {"relation", relation}, {"blocks", p.named_blocks()}};
}

} // namespace coweak::io

#endif // COWEAK_IO_HPP
