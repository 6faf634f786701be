#include "cstree/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cstree/algebra.hpp"
#include "cstree/error.hpp"

namespace cstree {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        fail(Errc::Io, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        fail(Errc::Io, "cannot write " + path);
    out << text;
}

std::string digest(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        fail(Errc::Parse, std::string("invalid JSON: ") + e.what());
    }
}

namespace {

[[noreturn]] void bad(const std::string& what) { fail(Errc::Parse, what); }

int to_int(const json& j, const std::string& what) {
    if (!j.is_number_integer())
        bad(what + " must be an integer");
    return j.get<int>();
}

int key_var(const std::string& key) {
    std::size_t used = 0;
    int v = 0;
    try {
        v = std::stoi(key, &used);
    } catch (const std::exception&) {
        bad("context key '" + key + "' is not a variable index");
    }
    if (used != key.size())
        bad("context key '" + key + "' is not a variable index");
    return v;
}

Outcome full_outcome(const VariableSystem& sys, VarId x) { return prefix_outcome(sys, sys.p, x); }

json outcome_json(const Outcome& x) {
    json a = json::array();
    for (int v : x)
        a.push_back(std::to_string(v));
    return a;
}

VarId outcome_from_json(const json& j, const VariableSystem& sys) {
    if (!j.is_array() || static_cast<int>(j.size()) != sys.p)
        bad("outcome must be an array of " + std::to_string(sys.p) + " digit strings");
    Outcome x;
    for (const json& d : j) {
        if (!d.is_string())
            bad("outcome digits must be strings");
        Outcome part = parse_outcome(d.get<std::string>());
        if (part.size() != 1)
            bad("outcome digits must be single digits");
        x.push_back(part[0]);
    }
    for (int v = 1; v <= sys.p; ++v)
        if (x[v - 1] >= sys.card(v))
            fail(Errc::BadIndex, "outcome " + outcome_string(x) + " out of range");
    return static_cast<VarId>(prefix_index(sys, x));
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\')
            out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

json context_to_json(const Context& ctx) {
    json j = json::object();
    for (const auto& [v, val] : ctx.entries())
        j[std::to_string(v)] = val;
    return j;
}

Context context_from_json(const json& j) {
    if (!j.is_object())
        bad("context must be an object");
    std::vector<Context::Entry> e;
    for (const auto& [k, val] : j.items())
        e.emplace_back(key_var(k), to_int(val, "context value"));
    return Context(std::move(e));
}

RawSpec raw_spec_from_json(const json& j) {
    if (!j.is_object())
        bad("fixture must be a JSON object");
    if (!j.contains("p") || !j.contains("cards"))
        bad("fixture needs \"p\" and \"cards\"");
    int p = to_int(j["p"], "p");
    if (!j["cards"].is_array())
        bad("cards must be an array");
    std::vector<int> cards;
    for (const json& c : j["cards"])
        cards.push_back(to_int(c, "cardinality"));
    if (static_cast<int>(cards.size()) != p)
        fail(Errc::BadCardinality, "p = " + std::to_string(p) + " but " + std::to_string(cards.size()) +
                                       " cardinalities given");
    RawSpec raw;
    raw.system = VariableSystem(cards);
    raw.system.check();
    if (j.contains("levels")) {
        if (!j["levels"].is_array())
            bad("levels must be an array");
        for (const json& lj : j["levels"]) {
            if (!lj.is_object() || !lj.contains("level"))
                bad("each level needs a \"level\" index");
            RawLevel lvl;
            lvl.level = to_int(lj["level"], "level");
            lvl.complete = lj.value("complete", false);
            if (lj.contains("stages")) {
                if (!lj["stages"].is_array())
                    bad("stages must be an array");
                for (const json& sj : lj["stages"]) {
                    RawStage st;
                    if (sj.contains("context") == sj.contains("members"))
                        bad("a stage needs exactly one of \"context\" or \"members\"");
                    if (sj.contains("context")) {
                        st.context = context_from_json(sj["context"]);
                    } else {
                        if (!sj["members"].is_array())
                            bad("members must be an array");
                        for (const json& m : sj["members"]) {
                            if (!m.is_string())
                                bad("members must be digit strings");
                            st.members.push_back(m.get<std::string>());
                        }
                    }
                    lvl.stages.push_back(std::move(st));
                }
            }
            raw.levels.push_back(std::move(lvl));
        }
    }
    return raw;
}

CStreeSpec cstree_from_json(const json& j) { return validate(raw_spec_from_json(j)); }

json to_json(const CStreeSpec& tree) {
    json j;
    j["p"] = tree.p();
    j["cards"] = tree.system.cards;
    j["levels"] = json::array();
    for (int k = 1; k <= tree.p(); ++k) {
        if (tree.stages(k).empty())
            continue;
        json stages = json::array();
        for (const Context& c : tree.stages(k))
            stages.push_back({{"context", context_to_json(c)}});
        j["levels"].push_back({{"level", k}, {"stages", std::move(stages)}});
    }
    return j;
}

json to_json(const Dag& dag) {
    json edges = json::array();
    for (const auto& [i, k] : dag.edges())
        edges.push_back({i, k});
    return {{"vertices", dag.vertices()}, {"edges", std::move(edges)}};
}

json to_json(const ContextDag& cd) {
    json j = to_json(cd.dag);
    j["context"] = context_to_json(cd.context);
    return j;
}

ContextDag context_dag_from_json(const json& j) {
    if (!j.is_object() || !j.contains("vertices") || !j["vertices"].is_array())
        bad("DAG needs a \"vertices\" array");
    std::vector<int> vs;
    for (const json& v : j["vertices"])
        vs.push_back(to_int(v, "vertex"));
    for (int v : vs)
        if (v < 1 || v > VarSet::kMaxVar)
            fail(Errc::BadGraph, "vertex " + std::to_string(v) + " out of range");
    VarSet verts = VarSet::of(vs);
    if (static_cast<std::size_t>(verts.size()) != vs.size())
        fail(Errc::BadGraph, "duplicate vertex");
    std::vector<Edge> edges;
    if (j.contains("edges")) {
        if (!j["edges"].is_array())
            bad("edges must be an array");
        for (const json& e : j["edges"]) {
            if (!e.is_array() || e.size() != 2)
                bad("each edge must be a pair");
            edges.emplace_back(to_int(e[0], "edge endpoint"), to_int(e[1], "edge endpoint"));
        }
    }
    ContextDag cd{Context{}, Dag(verts, edges)};
    if (j.contains("context"))
        cd.context = context_from_json(j["context"]);
    if (!cd.context.keys().disjoint(verts))
        fail(Errc::BadGraph, "context variables must not be DAG vertices");
    return cd;
}

std::vector<ContextDag> context_dags_from_json(const json& j) {
    std::vector<ContextDag> out;
    if (j.is_object() && j.contains("dags")) {
        if (!j["dags"].is_array())
            bad("dags must be an array");
        for (const json& d : j["dags"])
            out.push_back(context_dag_from_json(d));
    } else {
        out.push_back(context_dag_from_json(j));
    }
    return out;
}

json basis_to_json(const std::vector<SaturatedBinomial>& bs, const VariableSystem& sys) {
    json arr = json::array();
    for (const SaturatedBinomial& b : bs) {
        json e;
        e["plus"] = {outcome_json(full_outcome(sys, b.plus[0])), outcome_json(full_outcome(sys, b.plus[1]))};
        e["minus"] = {outcome_json(full_outcome(sys, b.minus[0])), outcome_json(full_outcome(sys, b.minus[1]))};
        e["source"] = b.source;
        e["context"] = b.context;
        arr.push_back(std::move(e));
    }
    return {{"binomials", std::move(arr)}};
}

std::vector<SaturatedBinomial> basis_from_json(const json& j, const VariableSystem& sys) {
    if (!j.is_object() || !j.contains("binomials") || !j["binomials"].is_array())
        bad("basis needs a \"binomials\" array");
    std::vector<SaturatedBinomial> out;
    for (const json& e : j["binomials"]) {
        if (!e.is_object() || !e.contains("plus") || !e.contains("minus") || e["plus"].size() != 2 ||
            e["minus"].size() != 2)
            bad("binomial needs two-cell \"plus\" and \"minus\"");
        auto b = make_binomial(outcome_from_json(e["plus"][0], sys), outcome_from_json(e["plus"][1], sys),
                               outcome_from_json(e["minus"][0], sys), outcome_from_json(e["minus"][1], sys),
                               e.value("source", ""), e.value("context", ""));
        if (!b)
            bad("zero binomial");
        out.push_back(*b);
    }
    return out;
}

std::string basis_to_text(const std::vector<SaturatedBinomial>& bs, const VariableSystem& sys) {
    std::string out;
    for (const SaturatedBinomial& b : bs)
        out += to_text(b, sys) + "\n";
    return out;
}

std::string to_dot(const ContextDag& cd) {
    std::string label = cd.context.empty() ? "∅" : cd.context.to_string();
    std::string out = "digraph G {\n  label=" + quote(label) + ";\n";
    for (int v : cd.dag.vertices())
        out += "  " + std::to_string(v) + " [label=\"X" + std::to_string(v) + "\"];\n";
    for (const auto& [i, k] : cd.dag.edges())
        out += "  " + std::to_string(i) + " -> " + std::to_string(k) + ";\n";
    return out + "}\n";
}

std::string to_dot(const UndirectedGraph& g, const std::string& name) {
    std::string out = "graph " + quote(name) + " {\n";
    for (int v : g.vertex_set())
        out += "  " + std::to_string(v) + " [label=\"X" + std::to_string(v) + "\"];\n";
    for (const auto& [u, v] : g.edges())
        out += "  " + std::to_string(u) + " -- " + std::to_string(v) + ";\n";
    return out + "}\n";
}

std::string to_dot(const CStreeSpec& tree) {
    static const char* palette[] = {"#e41a1c", "#377eb8", "#4daf4a", "#984ea3", "#ff7f00", "#ffff33",
                                    "#a65628", "#f781bf", "#66c2a5", "#fc8d62", "#8da0cb", "#e78ac3"};
    const VariableSystem& sys = tree.system;
    Labeling lab(tree);
    auto node = [](const Outcome& x) { return "\"v" + outcome_string(x) + "\""; };
    std::string out = "digraph cstree {\n  rankdir=LR;\n  node [shape=circle, style=filled, fillcolor=white, label=\"\"];\n";
    std::size_t colour = 0;
    for (int depth = 0; depth <= sys.p; ++depth) {
        std::vector<std::string> fill;
        if (depth < sys.p) {
            int k = depth + 1;
            for (int s = 0; s < lab.stage_count(k); ++s) {
                bool shared = lab.stage_members(k, s).size() > 1;
                fill.push_back(shared ? palette[colour++ % (sizeof palette / sizeof *palette)] : "");
            }
        }
        for (std::size_t i = 0; i < sys.prefix_count(depth); ++i) {
            Outcome x = prefix_outcome(sys, depth, i);
            out += "  " + node(x);
            if (depth < sys.p) {
                int s = lab.stage_index(depth + 1, i);
                out += " [class=\"L" + std::to_string(depth) + "_s" + std::to_string(s) + "\"";
                if (!fill[static_cast<std::size_t>(s)].empty())
                    out += ", fillcolor=\"" + fill[static_cast<std::size_t>(s)] + "\"";
                out += "]";
            }
            out += ";\n";
        }
    }
    for (int depth = 1; depth <= sys.p; ++depth)
        for (std::size_t i = 0; i < sys.prefix_count(depth); ++i) {
            Outcome x = prefix_outcome(sys, depth, i);
            Outcome parent(x.begin(), x.end() - 1);
            out += "  " + node(parent) + " -> " + node(x) + " [label=\"" + std::to_string(x.back()) + "\"];\n";
        }
    return out + "}\n";
}

}  // namespace cstree
