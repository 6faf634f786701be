#ifndef CSTREE_DAG_HPP
#define CSTREE_DAG_HPP

#include <array>
#include <utility>
#include <vector>

#include "cstree/csi.hpp"
#include "cstree/varset.hpp"

namespace cstree {

using Edge = std::pair<int, int>;

// DAG whose vertices are variable indices; every edge i -> j has i < j, so the
// identity order is topological and acyclicity holds by construction.
class Dag {
public:
    Dag() = default;
    // Throws BadGraph on an edge against the order or with an endpoint outside the vertex set.
    Dag(VarSet vertices, const std::vector<Edge>& edges);
    static Dag complete(VarSet vertices);
    static Dag empty(VarSet vertices) { return Dag(vertices, {}); }

    VarSet vertex_set() const { return verts_; }
    std::vector<int> vertices() const { return verts_.to_vector(); }
    std::vector<Edge> edges() const;
    std::size_t edge_count() const;

    VarSet parents(int v) const { return pa_[v]; }
    VarSet children(int v) const;
    bool has_edge(int i, int j) const { return pa_[j].contains(i); }
    bool adjacent(int i, int j) const { return has_edge(i, j) || has_edge(j, i); }
    void add_edge(int i, int j);

    VarSet ancestors_of(VarSet s) const;     // s together with all its ancestors
    VarSet descendants(int v) const;         // strict descendants
    VarSet nondescendants(int v) const;      // vertices minus v and its descendants

    friend bool operator==(const Dag& a, const Dag& b) { return a.verts_ == b.verts_ && a.pa_ == b.pa_; }

private:
    VarSet verts_;
    std::array<VarSet, VarSet::kMaxVar + 1> pa_{};
};

class UndirectedGraph {
public:
    UndirectedGraph() = default;
    explicit UndirectedGraph(VarSet vertices) : verts_(vertices) {}

    VarSet vertex_set() const { return verts_; }
    void add_edge(int u, int v);
    bool adjacent(int u, int v) const { return nb_[u].contains(v); }
    VarSet neighbors(int v) const { return nb_[v]; }
    // Sorted pairs (u, v) with u < v.
    std::vector<Edge> edges() const;
    // Vertices of `from` reachable without passing through `blocked`.
    VarSet reachable(VarSet from, VarSet blocked) const;

    friend bool operator==(const UndirectedGraph& a, const UndirectedGraph& b) {
        return a.verts_ == b.verts_ && a.nb_ == b.nb_;
    }

private:
    VarSet verts_;
    std::array<VarSet, VarSet::kMaxVar + 1> nb_{};
};

// Separation of A and B by S in the moral graph of the ancestral closure of A u B u S.
bool d_separated(const Dag& dag, VarSet A, VarSet B, VarSet S);
// Independent reachability ("Bayes-ball") formulation of the same criterion.
bool d_separated_reachability(const Dag& dag, VarSet A, VarSet B, VarSet S);

std::vector<CsiStatement> local_markov(const Dag& dag);
UndirectedGraph moralize(const Dag& dag);
Dag directed_moralize(const Dag& dag);
// Edges added by each round of directed moralization until the fixpoint.
std::vector<std::vector<Edge>> to_perfect_trace(const Dag& dag);
Dag to_perfect(const Dag& dag);
bool is_perfect(const Dag& dag);

}  // namespace cstree

#endif
