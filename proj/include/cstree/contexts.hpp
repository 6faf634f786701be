#ifndef CSTREE_CONTEXTS_HPP
#define CSTREE_CONTEXTS_HPP

#include <tuple>
#include <vector>

#include "cstree/dag.hpp"
#include "cstree/exec.hpp"
#include "cstree/model.hpp"

namespace cstree {

struct ContextDag {
    Context context;
    Dag dag;

    friend bool operator==(const ContextDag&, const ContextDag&) = default;
};

// DAG on all of [p] describing the factorization of the tree in context x_C: the parents
// of j are the coordinates i outside C such that two level-(j-1) vertices consistent
// with x_C and differing only in coordinate i lie in different stages.  Vertices of C
// keep their incoming edges.
Dag factor_graph(const CStreeSpec& tree, const Context& ctx);

// The fiber rule applied to the context subtree: the DAG on [p] \ C whose parent sets
// are the coordinates that change stages within the context fiber.
Dag fiber_rule_dag(const CStreeSpec& tree, const Context& ctx);

// Graphical validity of X_A _||_ X_B | X_S, X_C = x_C: d-separation of A and B given S u C
// in factor_graph(tree, x_C).
bool holds_graphically(const CStreeSpec& tree, const CsiStatement& st);

// Ordered minimal I-MAP on [p] \ C of the statements valid in context x_C.  Agrees with
// fiber_rule_dag whenever conditioning on x_C does not couple the remaining variables.
ContextDag context_dag(const CStreeSpec& tree, const Context& ctx);

// Minimal contexts in (|C|, lex) order, each with its context DAG.  The empty context is
// always reported (with the complete DAG when no statement holds).
std::vector<ContextDag> minimal_contexts(const CStreeSpec& tree, Exec exec = Exec::Parallel);

// Context-appended saturated statements X_A _||_ X_B | X_S, x_C with A u B u S = vertices.
std::vector<CsiStatement> saturated_statements(const ContextDag& cdag);

struct ObstructionReport {
    std::vector<std::pair<int, int>> case1;            // (k, l)
    std::vector<std::tuple<int, int, int>> case2;      // (k, l1, l2)
    std::size_t n1() const { return case1.size(); }
    std::size_t n2() const { return case2.size(); }
    bool empty() const { return case1.empty() && case2.empty(); }
};

// Induced subgraphs through which directed moralization joins i and j.  Requires i, j
// non-adjacent without a common child.
ObstructionReport moralization_obstructions(const Dag& dag, int i, int j);

}  // namespace cstree

#endif
