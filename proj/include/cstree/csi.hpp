#ifndef CSTREE_CSI_HPP
#define CSTREE_CSI_HPP

#include <cstddef>
#include <functional>
#include <span>
#include <string>

#include "cstree/context.hpp"

namespace cstree {

// X_A _||_ X_B | X_S, X_C = x_C.  Always held in canonical form (min(A) < min(B)).
struct CsiStatement {
    VarSet A;
    VarSet B;
    VarSet S;
    Context ctx;

    friend bool operator==(const CsiStatement&, const CsiStatement&) = default;
};

// Checks disjointness/non-emptiness and canonicalizes; throws OverlappingSets or BadIndex.
CsiStatement make_statement(VarSet A, VarSet B, VarSet S = {}, Context ctx = {});
CsiStatement canonicalize(CsiStatement st);
bool is_saturated(const CsiStatement& st, const VariableSystem& sys);
// Throws BadIndex when a variable or context value falls outside the system.
void check_statement(const CsiStatement& st, const VariableSystem& sys);
bool statement_less(const CsiStatement& a, const CsiStatement& b);

enum class Axiom {
    Symmetry,
    Decomposition,
    WeakUnion,
    Contraction,
    Intersection,
    Specialization,
    Absorption,
};

const char* axiom_name(Axiom a);

// subset: the set D dropped (decomposition) or moved into S (weak union), the set T
// specialized (specialization, with values giving x_T) or absorbed (absorption).
struct AxiomArgs {
    VarSet subset;
    Context values;
};

// One application of a CSI axiom.  Absorption takes the whole outcome family of T as inputs.
CsiStatement apply_axiom(const VariableSystem& sys, Axiom axiom, std::span<const CsiStatement> inputs,
                         const AxiomArgs& args = {});

// X_k _||_ X_A | X_{B u C} = x_B x_C  and  X_k _||_ X_B | X_{A u C} = x_A x_C
// with A u B u C = [k-1] give X_k _||_ X_{A u B} | X_C = x_C.
CsiStatement cstree_rule(const CsiStatement& s1, const CsiStatement& s2);

// "1 _||_ 3 | 2 [X2=0]"; sets are comma separated, "| S" and "[ctx]" are omitted when empty.
std::string to_string(const CsiStatement& st);
CsiStatement parse_statement(const std::string& text);

}  // namespace cstree

template <>
struct std::hash<cstree::CsiStatement> {
    std::size_t operator()(const cstree::CsiStatement& st) const noexcept;
};

#endif
