#ifndef CSTREE_BASIS_HPP
#define CSTREE_BASIS_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cstree/contexts.hpp"
#include "cstree/exec.hpp"
#include "cstree/model.hpp"
#include "cstree/poly.hpp"

namespace cstree {

// p_{u1} p_{u2} - p_{v1} p_{v2} over full-outcome ranks.  Canonical: u1 <= u2, v1 <= v2,
// (u1, u2) < (v1, v2).
struct SaturatedBinomial {
    std::array<VarId, 2> plus{};
    std::array<VarId, 2> minus{};
    std::string source;   // "sat", "quad", "lift"
    std::string context;  // context string of the generating statement, if any

    // Identity ignores provenance.
    friend bool operator==(const SaturatedBinomial& a, const SaturatedBinomial& b) {
        return a.plus == b.plus && a.minus == b.minus;
    }
};

// Sorts each pair and orders the pairs; returns nullopt for the zero binomial.
std::optional<SaturatedBinomial> make_binomial(VarId u1, VarId u2, VarId v1, VarId v2, std::string source = "",
                                               std::string context = "");
// Reads a quadratic binomial polynomial in probability coordinates; nullopt if it is not one.
std::optional<SaturatedBinomial> binomial_from_poly(const SparsePoly& f);
SparsePoly to_poly(const SaturatedBinomial& b);
bool binomial_less(const SaturatedBinomial& a, const SaturatedBinomial& b);
// "p00000*p00011 - p00001*p00010"
std::string to_text(const SaturatedBinomial& b, const VariableSystem& sys);
// Sorts canonically and removes duplicates, keeping the first provenance seen.
std::vector<SaturatedBinomial> dedup_binomials(std::vector<SaturatedBinomial> bs);

struct BasisResult {
    std::vector<SaturatedBinomial> binomials;
    bool unbalanced_warning = false;
};

BasisResult markov_basis_saturated(const CStreeSpec& tree, const std::vector<ContextDag>& contexts);
BasisResult perfect_context_basis(const CStreeSpec& tree, const std::vector<ContextDag>& contexts);
// Quad u Lift(F) recursion; throws Unbalanced when the tree is not balanced.
std::vector<SaturatedBinomial> quad_lift_basis(const CStreeSpec& tree);

// Checks every binomial against the symbolic vanishing oracle; returns the failures.
std::vector<SaturatedBinomial> non_vanishing(const CStreeSpec& tree, const std::vector<SaturatedBinomial>& bs,
                                             Exec exec = Exec::Parallel);

}  // namespace cstree

#endif
