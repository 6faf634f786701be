#ifndef CSTREE_ALGEBRA_HPP
#define CSTREE_ALGEBRA_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cstree/csi.hpp"
#include "cstree/model.hpp"
#include "cstree/poly.hpp"

namespace cstree {

struct LabelInfo {
    int level;    // k: the label sits on an edge into level k (governs X_k)
    int stage;    // stage index within the level, by smallest member
    int outcome;  // s in [d_k]
};

// Canonical edge labels: one variable per (stage, outcome).  Stages of a level are
// numbered in order of their smallest member, implicit singletons included.
class Labeling {
public:
    explicit Labeling(const CStreeSpec& tree);

    const CStreeSpec& tree() const { return tree_; }
    int stage_count(int k) const { return counts_[k - 1]; }
    int stage_index(int k, std::size_t vertex_index) const { return stage_[k - 1][vertex_index]; }
    int stage_index(const Outcome& vertex) const;
    VarId label(int k, int stage, int s) const;
    std::size_t label_count() const { return total_; }
    LabelInfo info(VarId label) const;
    // "t3.1.0" for level 3, stage 1, outcome 0
    std::string name(VarId label) const;
    // Vertex indices (over R_[k-1]) of one stage.
    std::vector<std::size_t> stage_members(int k, int stage) const;

private:
    CStreeSpec tree_;
    std::vector<std::vector<int>> stage_;
    std::vector<int> counts_;
    std::vector<std::size_t> offset_;
    std::size_t total_ = 0;
};

// Probability coordinates p_x are polynomial variables indexed by the lexicographic rank
// of the full outcome x.
VarId pvar(const VariableSystem& sys, const Outcome& x);
std::string pvar_name(const VariableSystem& sys, VarId v);  // "p010"

SparsePoly interpolant(const CStreeSpec& tree, const Outcome& vertex);

// Interpolating polynomials with memoization, for repeated balance queries.
class Interpolator {
public:
    explicit Interpolator(const CStreeSpec& tree) : lab_(tree) {}
    explicit Interpolator(Labeling lab) : lab_(std::move(lab)) {}
    const Labeling& labeling() const { return lab_; }
    const SparsePoly& t(const Outcome& vertex);

private:
    Labeling lab_;
    std::vector<std::unordered_map<std::size_t, SparsePoly>> memo_;
};

struct BalanceWitness {
    Outcome v, w;
    int s = 0, r = 0;
    SparsePoly lhs;  // t(vs) t(wr)
    SparsePoly rhs;  // t(vr) t(ws)
};

struct BalanceReport {
    bool balanced = true;
    std::optional<BalanceWitness> witness;
    std::size_t pairs_checked = 0;
};

enum class BalanceMode { Representative, AllPairs };

bool balanced_pair(const CStreeSpec& tree, const Outcome& v, const Outcome& w);
BalanceReport is_balanced(const CStreeSpec& tree, BalanceMode mode = BalanceMode::Representative);

Monomial psi_monomial(const Labeling& lab, const Outcome& x);
Monomial psi_monomial(const CStreeSpec& tree, const Outcome& x);

// One marginal 2x2 minor of a statement: rows x_A, y_A, columns x_B, y_B, at x_S in context x_C.
struct MarginalQuadric {
    VarSet A, B, S;
    Outcome xA, yA, xB, yB, xS;
    Context ctx;

    // Fixed coordinates of the marginal p_{a b x_S x_C +}.
    Context cell(const Outcome& a, const Outcome& b) const;
    SparsePoly expand(const VariableSystem& sys) const;
};

// The marginal coordinate p_{y +}: sum of p_x over full outcomes x agreeing with `fixed`.
SparsePoly marginal_coordinate(const VariableSystem& sys, const Context& fixed);
std::vector<MarginalQuadric> statement_quadrics(const CsiStatement& st, const VariableSystem& sys);
std::vector<SparsePoly> statement_polynomials(const CsiStatement& st, const VariableSystem& sys);

// Membership in ker psi_T modulo the sum-to-one relations, decided by exact expansion.
class VanishingOracle {
public:
    explicit VanishingOracle(const CStreeSpec& tree);
    const Labeling& labeling() const { return lab_; }

    bool vanishes(const SparsePoly& poly_in_p);
    // Every marginal minor of the statement vanishes.
    bool statement_holds(const CsiStatement& st);

    // psi image in the label ring, without the sum-to-one quotient.
    SparsePoly free_image(const SparsePoly& poly_in_p) const;
    // Image with the last label of every stage replaced by 1 - (sum of the others).
    SparsePoly reduce(const SparsePoly& poly_in_labels);
    SparsePoly reduced_marginal(const Context& fixed);

private:
    const SparsePoly& reduced_label(VarId label);

    Labeling lab_;
    std::unordered_map<VarId, SparsePoly> reduced_label_;
    std::map<Context, SparsePoly> marginal_;
};

bool vanishes(const CStreeSpec& tree, const SparsePoly& poly_in_p);
bool statement_holds(const CStreeSpec& tree, const CsiStatement& st);

// Exact rational parameter point: numerators in [1, 97] normalized within each stage.
class RandomPoint {
public:
    RandomPoint(const CStreeSpec& tree, std::uint64_t seed);

    const Labeling& labeling() const { return lab_; }
    const Rational& theta(VarId label) const { return theta_[label]; }
    Rational p(VarId outcome) const;
    Rational evaluate(const SparsePoly& poly_in_p) const;

private:
    Labeling lab_;
    std::vector<Rational> theta_;
    std::vector<Rational> p_;
};

}  // namespace cstree

#endif
