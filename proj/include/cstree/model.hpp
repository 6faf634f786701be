#ifndef CSTREE_MODEL_HPP
#define CSTREE_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "cstree/context.hpp"
#include "cstree/csi.hpp"

namespace cstree {

class Dag;

// A stage in level L_{k-1}: the cylinder {x in R_[k-1] : x_C = context}, governing X_k.
struct Stage {
    int level = 0;
    Context context;

    bool singleton() const { return context.keys() == VarSet::range(1, level - 1); }
    friend bool operator==(const Stage&, const Stage&) = default;
};

// Stage as read from input: either a context or an explicit member list.
struct RawStage {
    std::optional<Context> context;
    std::vector<std::string> members;
};

struct RawLevel {
    int level = 0;
    std::vector<RawStage> stages;
    // When set, the listed stages must cover the level on their own (no implicit singletons).
    bool complete = false;
};

struct RawSpec {
    VariableSystem system;
    std::vector<RawLevel> levels;
};

// Canonical CStree: levels[k-1] lists the non-singleton stage contexts governing X_k,
// ordered by their smallest member.  Every other vertex is an implicit singleton.
// origin[i] is the variable of the parent tree that variable i+1 came from (identity
// unless the tree was produced by context_subtree).
struct CStreeSpec {
    VariableSystem system;
    std::vector<std::vector<Context>> levels;
    std::vector<int> origin;

    int p() const { return system.p; }
    const std::vector<Context>& stages(int k) const { return levels[k - 1]; }

    friend bool operator==(const CStreeSpec& a, const CStreeSpec& b) {
        return a.system == b.system && a.levels == b.levels;
    }
};

CStreeSpec validate(const RawSpec& raw);
// Validates a tree given directly in context form.
CStreeSpec make_cstree(const VariableSystem& sys, const std::vector<std::vector<Context>>& levels);

// Members of the cylinder {x in R_[k-1] : x_C = ctx}, in lexicographic order.
std::vector<Outcome> cylinder_members(const VariableSystem& sys, int k, const Context& ctx);
std::size_t cylinder_size(const VariableSystem& sys, int k, const Context& ctx);

// vertex is an outcome over [k-1] for some 1 <= k <= p.
Stage stage_of(const CStreeSpec& tree, const Outcome& vertex);
std::optional<CsiStatement> stage_statement(const Stage& stage);

CStreeSpec tree_of_dag(const Dag& dag, const VariableSystem& sys);
CStreeSpec context_subtree(const CStreeSpec& tree, const Context& ctx);
// Applies a permutation to the outcomes of one variable (perm[old] = new).
CStreeSpec relabel_outcomes(const CStreeSpec& tree, int var, const std::vector<int>& perm);

}  // namespace cstree

#endif
