#ifndef CSTREE_LAB_HPP
#define CSTREE_LAB_HPP

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cstree/contexts.hpp"
#include "cstree/exec.hpp"
#include "cstree/model.hpp"

namespace cstree {

inline constexpr std::size_t kDefaultEnumerationBudget = 20'000'000;

// All partitions of R_[k-1] into context cylinders, each given by its non-singleton
// contexts.  `budget` bounds the number of search nodes; throws BudgetExceeded.
std::vector<std::vector<Context>> level_partitions(const VariableSystem& sys, int k,
                                                   std::size_t budget = kDefaultEnumerationBudget);

// Odometer over the product of per-level partition lists.
class EnumerationCursor {
public:
    explicit EnumerationCursor(const VariableSystem& sys, std::size_t budget = kDefaultEnumerationBudget);

    // Number of trees the cursor will produce.
    std::size_t total() const { return total_; }
    std::optional<CStreeSpec> next();

private:
    VariableSystem sys_;
    std::vector<std::vector<std::vector<Context>>> parts_;
    std::vector<std::size_t> pos_;
    std::size_t total_ = 1;
    bool done_ = false;
};

std::vector<CStreeSpec> enumerate_cstrees(const VariableSystem& sys, std::size_t budget = kDefaultEnumerationBudget);

// Random tree: each level is a random cylinder partition built by the same
// smallest-uncovered-vertex recursion.  `merge_bias` in [0, 1] favours coarse stages.
CStreeSpec random_cstree(const VariableSystem& sys, std::mt19937_64& rng, double merge_bias = 0.5);
// Random DAG on [p] with independent edges i -> j (i < j) of probability `density`.
Dag random_dag(int p, double density, std::mt19937_64& rng);

enum class TreeKind { DagTree, Family1, Family2, Family3, Family4, Unclassified };
const char* tree_kind_name(TreeKind k);

struct ClassificationResult {
    TreeKind kind = TreeKind::Unclassified;
    bool g1_complete = false;  // G1 complete, otherwise the collider 1->3<-2
    int context_var = 0;       // variable fixed in the non-empty minimal contexts
    std::vector<int> I;        // its outcomes appearing as minimal contexts
};

// Families: (complete, contexts on X2) = 1, (complete, X1) = 2, (collider, X2) = 3,
// (collider, X1) = 4.
ClassificationResult classify_p3(const CStreeSpec& tree);

bool all_contexts_perfect(const std::vector<ContextDag>& contexts);

struct LabOptions {
    bool classify = false;
    // For p = 3: balanced <=> all minimal context DAGs perfect.  Otherwise only the
    // one-sided implication perfect => balanced is checked.
    bool check_equivalence = true;
    std::function<bool(const CStreeSpec&)> balance_oracle;  // defaults to is_balanced
    std::size_t budget = kDefaultEnumerationBudget;
    Exec exec = Exec::Parallel;
};

struct LabReport {
    std::size_t total = 0;
    std::size_t balanced = 0;
    std::size_t perfect_contexts = 0;
    std::size_t nonperfect_balanced = 0;
    std::vector<std::string> violations;
    std::map<std::string, std::size_t> classification_histogram;
};

LabReport run_lab(const VariableSystem& sys, const LabOptions& opts = {});
LabReport check_theorem_p3(const VariableSystem& sys, const LabOptions& opts = {});

// Balanced trees with at least one non-perfect minimal context DAG.
std::vector<CStreeSpec> find_nonperfect_balanced(const VariableSystem& sys,
                                                 std::size_t budget = kDefaultEnumerationBudget,
                                                 Exec exec = Exec::Parallel);

}  // namespace cstree

#endif
