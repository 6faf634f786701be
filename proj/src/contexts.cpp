#include "cstree/contexts.hpp"

#include <algorithm>
#include <map>

#include "cstree/error.hpp"

namespace cstree {

namespace {

// Listed stage index, or a negative key unique to an implicit singleton.
long stage_key(const CStreeSpec& tree, int k, const Outcome& y) {
    const auto& stages = tree.stages(k);
    for (std::size_t s = 0; s < stages.size(); ++s)
        if (stages[s].matches_prefix(y))
            return static_cast<long>(s);
    return -1 - static_cast<long>(prefix_index(tree.system, y));
}

// Coordinates i in `free` such that changing y_i alone changes the stage of some member
// of the level-k fiber of ctx.
VarSet stage_changing_coords(const CStreeSpec& tree, int k, const Context& ctx, VarSet free) {
    VarSet out;
    const VariableSystem& sys = tree.system;
    std::vector<Outcome> members = cylinder_members(sys, k, ctx.restrict_to(VarSet::range(1, k - 1)));
    for (int i : free) {
        bool changes = false;
        for (const Outcome& y : members) {
            if (y[i - 1] != 0)
                continue;
            long base = stage_key(tree, k, y);
            Outcome z = y;
            for (int a = 1; a < sys.card(i) && !changes; ++a) {
                z[i - 1] = a;
                changes = stage_key(tree, k, z) != base;
            }
            if (changes)
                break;
        }
        if (changes)
            out.insert(i);
    }
    return out;
}

}  // namespace

Dag factor_graph(const CStreeSpec& tree, const Context& ctx) {
    ctx.check(tree.system);
    VarSet C = ctx.keys();
    Dag g = Dag::empty(tree.system.all());
    for (int j = 1; j <= tree.p(); ++j)
        for (int i : stage_changing_coords(tree, j, ctx, VarSet::range(1, j - 1) - C))
            g.add_edge(i, j);
    return g;
}

Dag fiber_rule_dag(const CStreeSpec& tree, const Context& ctx) {
    ctx.check(tree.system);
    VarSet C = ctx.keys();
    VarSet V = tree.system.all() - C;
    Dag g = Dag::empty(V);
    for (int j : V)
        for (int i : stage_changing_coords(tree, j, ctx, VarSet::range(1, j - 1) - C))
            g.add_edge(i, j);
    return g;
}

bool holds_graphically(const CStreeSpec& tree, const CsiStatement& st) {
    check_statement(st, tree.system);
    Dag g = factor_graph(tree, st.ctx);
    return d_separated(g, st.A, st.B, st.S | st.ctx.keys());
}

namespace {

Dag boundary_dag(const Dag& g, VarSet V, VarSet C) {
    Dag out = Dag::empty(V);
    for (int j : V) {
        VarSet preds = V & VarSet::range(1, j - 1);
        for (int i : preds)
            if (!d_separated(g, VarSet{i}, VarSet{j}, (preds - VarSet{i}) | C))
                out.add_edge(i, j);
    }
    return out;
}

// Calls fn(A, B, S) for every canonical triple of disjoint subsets of V with A, B nonempty.
// With saturated set, only triples covering V are produced.  fn returns true to stop.
template <typename Fn>
bool for_each_triple(VarSet V, bool saturated, Fn&& fn) {
    std::vector<int> vs = V.to_vector();
    std::size_t n = vs.size();
    std::size_t total = 1;
    for (std::size_t t = 0; t < n; ++t)
        total *= saturated ? 3 : 4;
    for (std::size_t code = 0; code < total; ++code) {
        VarSet A, B, S;
        std::size_t c = code;
        for (std::size_t t = 0; t < n; ++t) {
            std::size_t r = c % (saturated ? 3 : 4);
            c /= saturated ? 3 : 4;
            if (r == 0)
                A.insert(vs[t]);
            else if (r == 1)
                B.insert(vs[t]);
            else if (r == 2)
                S.insert(vs[t]);
        }
        if (A.empty() || B.empty() || A.min() > B.min())
            continue;
        if (fn(A, B, S))
            return true;
    }
    return false;
}

}  // namespace

ContextDag context_dag(const CStreeSpec& tree, const Context& ctx) {
    Dag g = factor_graph(tree, ctx);
    VarSet C = ctx.keys();
    return ContextDag{ctx, boundary_dag(g, tree.system.all() - C, C)};
}

std::vector<ContextDag> minimal_contexts(const CStreeSpec& tree, Exec exec) {
    const VariableSystem& sys = tree.system;
    std::vector<Context> contexts = all_contexts(sys, sys.all(), true);
    std::map<Context, std::size_t> index;
    for (std::size_t c = 0; c < contexts.size(); ++c)
        index.emplace(contexts[c], c);

    const long n = static_cast<long>(contexts.size());
    std::vector<Dag> graphs(contexts.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
    for (long c = 0; c < n; ++c)
        graphs[static_cast<std::size_t>(c)] = factor_graph(tree, contexts[static_cast<std::size_t>(c)]);

    std::vector<char> keep(contexts.size(), 0);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
    for (long c = 0; c < n; ++c) {
        const Context& ctx = contexts[static_cast<std::size_t>(c)];
        VarSet C = ctx.keys();
        VarSet V = sys.all() - C;
        if (ctx.empty()) {
            keep[0] = 1;
            continue;
        }
        if (V.size() < 2)
            continue;
        const Dag& g = graphs[static_cast<std::size_t>(c)];
        keep[static_cast<std::size_t>(c)] = for_each_triple(V, false, [&](VarSet A, VarSet B, VarSet S) {
            if (!d_separated(g, A, B, S | C))
                return false;
            bool absorbable = false;
            for_each_subset(C, [&](VarSet T) {
                if (absorbable || T.empty())
                    return;
                const Dag& h = graphs[index.at(ctx.without(T))];
                absorbable = d_separated(h, A, B, S | C);
            });
            return !absorbable;
        });
    }

    std::vector<ContextDag> out;
    for (std::size_t c = 0; c < contexts.size(); ++c) {
        if (!keep[c])
            continue;
        VarSet C = contexts[c].keys();
        out.push_back(ContextDag{contexts[c], boundary_dag(graphs[c], sys.all() - C, C)});
    }
    return out;
}

std::vector<CsiStatement> saturated_statements(const ContextDag& cdag) {
    std::vector<CsiStatement> out;
    VarSet V = cdag.dag.vertex_set();
    if (V.size() < 2)
        return out;
    for_each_triple(V, true, [&](VarSet A, VarSet B, VarSet S) {
        if (d_separated(cdag.dag, A, B, S))
            out.push_back(make_statement(A, B, S, cdag.context));
        return false;
    });
    std::sort(out.begin(), out.end(), statement_less);
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

std::vector<Edge> induced_edges(const Dag& dag, VarSet s) {
    std::vector<Edge> out;
    for (int u : s)
        for (int v : s)
            if (u < v && dag.has_edge(u, v))
                out.emplace_back(u, v);
    return out;
}

bool same_edges(std::vector<Edge> a, std::vector<Edge> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    return a == b;
}

}  // namespace

ObstructionReport moralization_obstructions(const Dag& dag, int i, int j) {
    VarSet V = dag.vertex_set();
    if (!V.contains(i) || !V.contains(j) || i == j)
        fail(Errc::Precondition, "obstruction query needs two distinct vertices");
    if (dag.adjacent(i, j))
        fail(Errc::Precondition, std::to_string(i) + " and " + std::to_string(j) + " are adjacent");
    if (!(dag.children(i) & dag.children(j)).empty())
        fail(Errc::Precondition, std::to_string(i) + " and " + std::to_string(j) + " have a common child");
    ObstructionReport rep;
    int lo = std::max(i, j);
    for (int k : V) {
        if (k <= lo)
            continue;
        for (int l : V) {
            if (l <= k)
                continue;
            std::vector<Edge> got = induced_edges(dag, VarSet{i, j, k, l});
            auto e = [](int a, int b) { return Edge{a, b}; };
            if (same_edges(got, {e(i, k), e(j, l), e(k, l)}) || same_edges(got, {e(i, l), e(j, k), e(k, l)}))
                rep.case1.emplace_back(k, l);
        }
        for (int l1 : V) {
            if (l1 <= k)
                continue;
            for (int l2 : V) {
                if (l2 <= k || l2 == l1)
                    continue;
                std::vector<Edge> got = induced_edges(dag, VarSet{i, j, k, l1, l2});
                std::vector<Edge> want = {{i, l1}, {j, l2}, {k, l1}, {k, l2}};
                if (same_edges(got, want))
                    rep.case2.emplace_back(k, l1, l2);
            }
        }
    }
    return rep;
}

}  // namespace cstree
