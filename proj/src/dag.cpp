#include "cstree/dag.hpp"

#include <deque>

#include "cstree/error.hpp"

namespace cstree {

Dag::Dag(VarSet vertices, const std::vector<Edge>& edges) : verts_(vertices) {
    if (vertices.contains(0))
        fail(Errc::BadIndex, "vertex indices start at 1");
    for (const auto& [i, j] : edges)
        add_edge(i, j);
}

Dag Dag::complete(VarSet vertices) {
    Dag g(vertices, {});
    for (int j : vertices)
        g.pa_[j] = vertices & VarSet::range(1, j - 1);
    return g;
}

std::vector<Edge> Dag::edges() const {
    std::vector<Edge> out;
    for (int i : verts_)
        for (int j : verts_)
            if (pa_[j].contains(i))
                out.emplace_back(i, j);
    return out;
}

std::size_t Dag::edge_count() const {
    std::size_t n = 0;
    for (int j : verts_)
        n += static_cast<std::size_t>(pa_[j].size());
    return n;
}

VarSet Dag::children(int v) const {
    VarSet c;
    for (int j : verts_)
        if (pa_[j].contains(v))
            c.insert(j);
    return c;
}

void Dag::add_edge(int i, int j) {
    if (!verts_.contains(i) || !verts_.contains(j))
        fail(Errc::BadGraph, "edge " + std::to_string(i) + "->" + std::to_string(j) + " has an endpoint outside the vertex set");
    if (i >= j)
        fail(Errc::BadGraph, "edge " + std::to_string(i) + "->" + std::to_string(j) + " goes against the variable order");
    pa_[j].insert(i);
}

VarSet Dag::ancestors_of(VarSet s) const {
    VarSet an = s & verts_;
    // Parents precede children, so one descending sweep closes the set.
    for (int v = an.empty() ? 0 : an.max(); v >= 1; --v)
        if (an.contains(v))
            an |= pa_[v];
    return an;
}

VarSet Dag::descendants(int v) const {
    VarSet de;
    for (int j : verts_)
        if (j > v && (pa_[j].contains(v) || !(pa_[j] & de).empty()))
            de.insert(j);
    return de;
}

VarSet Dag::nondescendants(int v) const {
    VarSet nd = verts_ - descendants(v);
    nd.erase(v);
    return nd;
}

void UndirectedGraph::add_edge(int u, int v) {
    if (u == v || !verts_.contains(u) || !verts_.contains(v))
        fail(Errc::BadGraph, "bad undirected edge " + std::to_string(u) + "-" + std::to_string(v));
    nb_[u].insert(v);
    nb_[v].insert(u);
}

std::vector<Edge> UndirectedGraph::edges() const {
    std::vector<Edge> out;
    for (int u : verts_)
        for (int v : nb_[u])
            if (u < v)
                out.emplace_back(u, v);
    return out;
}

VarSet UndirectedGraph::reachable(VarSet from, VarSet blocked) const {
    VarSet seen = from - blocked;
    std::deque<int> queue(seen.begin(), seen.end());
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (int w : nb_[u] - blocked - seen) {
            seen.insert(w);
            queue.push_back(w);
        }
    }
    return seen;
}

namespace {

void check_query(const Dag& dag, VarSet A, VarSet B, VarSet S) {
    if (A.empty() || B.empty())
        fail(Errc::OverlappingSets, "d-separation query needs nonempty A and B");
    if (!(A | B | S).subset_of(dag.vertex_set()))
        fail(Errc::BadIndex, "d-separation query mentions a vertex outside the graph");
    if (!A.disjoint(B) || !A.disjoint(S) || !B.disjoint(S))
        fail(Errc::OverlappingSets, "d-separation query sets must be pairwise disjoint");
}

UndirectedGraph moral_of_subset(const Dag& dag, VarSet keep) {
    UndirectedGraph m(keep);
    for (int v : keep) {
        VarSet pa = dag.parents(v) & keep;
        for (int u : pa)
            m.add_edge(u, v);
        for (int u : pa)
            for (int w : pa)
                if (u < w)
                    m.add_edge(u, w);
    }
    return m;
}

}  // namespace

bool d_separated(const Dag& dag, VarSet A, VarSet B, VarSet S) {
    check_query(dag, A, B, S);
    VarSet an = dag.ancestors_of(A | B | S);
    UndirectedGraph m = moral_of_subset(dag, an);
    return (m.reachable(A, S) & B).empty();
}

bool d_separated_reachability(const Dag& dag, VarSet A, VarSet B, VarSet S) {
    check_query(dag, A, B, S);
    VarSet anS = dag.ancestors_of(S);
    // State: (vertex, arrived from a child = going up) or (vertex, arrived from a parent).
    VarSet seen_up, seen_down, reached;
    struct Visit {
        int v;
        bool up;
    };
    std::deque<Visit> queue;
    for (int a : A) {
        queue.push_back({a, true});
        seen_up.insert(a);
    }
    auto push = [&](int v, bool up) {
        VarSet& seen = up ? seen_up : seen_down;
        if (!seen.contains(v)) {
            seen.insert(v);
            queue.push_back({v, up});
        }
    };
    while (!queue.empty()) {
        Visit cur = queue.front();
        queue.pop_front();
        if (!S.contains(cur.v))
            reached.insert(cur.v);
        if (cur.up) {
            if (S.contains(cur.v))
                continue;
            for (int u : dag.parents(cur.v))
                push(u, true);
            for (int c : dag.children(cur.v))
                push(c, false);
        } else {
            if (!S.contains(cur.v))
                for (int c : dag.children(cur.v))
                    push(c, false);
            if (anS.contains(cur.v))
                for (int u : dag.parents(cur.v))
                    push(u, true);
        }
    }
    return (reached & B).empty();
}

std::vector<CsiStatement> local_markov(const Dag& dag) {
    std::vector<CsiStatement> out;
    for (int v : dag.vertex_set()) {
        VarSet pa = dag.parents(v);
        VarSet rest = dag.nondescendants(v) - pa;
        if (!rest.empty())
            out.push_back(make_statement(VarSet{v}, rest, pa));
    }
    return out;
}

UndirectedGraph moralize(const Dag& dag) {
    return moral_of_subset(dag, dag.vertex_set());
}

Dag directed_moralize(const Dag& dag) {
    Dag out = dag;
    for (int v : dag.vertex_set()) {
        VarSet pa = dag.parents(v);
        for (int u : pa)
            for (int w : pa)
                if (u < w && !dag.adjacent(u, w))
                    out.add_edge(u, w);
    }
    return out;
}

std::vector<std::vector<Edge>> to_perfect_trace(const Dag& dag) {
    std::vector<std::vector<Edge>> rounds;
    Dag cur = dag;
    while (true) {
        Dag next = directed_moralize(cur);
        std::vector<Edge> added;
        for (const Edge& e : next.edges())
            if (!cur.has_edge(e.first, e.second))
                added.push_back(e);
        if (added.empty())
            break;
        rounds.push_back(std::move(added));
        cur = std::move(next);
    }
    return rounds;
}

Dag to_perfect(const Dag& dag) {
    Dag cur = dag;
    while (true) {
        Dag next = directed_moralize(cur);
        if (next == cur)
            return cur;
        cur = std::move(next);
    }
}

bool is_perfect(const Dag& dag) {
    for (int v : dag.vertex_set()) {
        VarSet pa = dag.parents(v);
        for (int u : pa)
            for (int w : pa)
                if (u < w && !dag.adjacent(u, w))
                    return false;
    }
    return true;
}

}  // namespace cstree
