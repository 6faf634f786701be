#ifndef CSTREE_CONTEXT_HPP
#define CSTREE_CONTEXT_HPP

#include <compare>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "cstree/varset.hpp"

namespace cstree {

// p ordered discrete variables X_1..X_p with outcome sets {0, ..., d_i - 1}.
struct VariableSystem {
    int p = 0;
    std::vector<int> cards;

    VariableSystem() = default;
    explicit VariableSystem(std::vector<int> c);

    int card(int var) const { return cards[var - 1]; }
    VarSet all() const { return VarSet::range(1, p); }
    // Size of R_S, the product of the cardinalities of S.
    std::size_t outcome_count(VarSet s) const;
    // Size of R_{[k]}.
    std::size_t prefix_count(int k) const;
    // Throws BadCardinality / BadIndex on a malformed system.
    void check() const;

    friend bool operator==(const VariableSystem&, const VariableSystem&) = default;
};

// Coordinates of an outcome over a stated variable subset, in increasing variable order.
using Outcome = std::vector<int>;

// Lexicographic rank of a prefix outcome x_1..x_len (X_1 most significant).
std::size_t prefix_index(const VariableSystem& sys, const Outcome& x);
Outcome prefix_outcome(const VariableSystem& sys, int len, std::size_t index);
// "0101"
std::string outcome_string(const Outcome& x);
// Parses a digit string; throws BadIndex on non-digits.
Outcome parse_outcome(const std::string& s);
// Lexicographic enumeration of R_S for an arbitrary subset S.
std::vector<Outcome> all_outcomes(const VariableSystem& sys, VarSet s);

// Assignment x_C of outcomes to a set C of variables; keys strictly increasing.
class Context {
public:
    using Entry = std::pair<int, int>;

    Context() = default;
    // Sorts entries; throws BadIndex on duplicate keys.
    explicit Context(std::vector<Entry> entries);
    Context(std::initializer_list<Entry> entries) : Context(std::vector<Entry>(entries)) {}
    // Context fixing variables of s to the matching coordinates of x (x indexed over s in order).
    static Context over(VarSet s, const Outcome& x);
    // Context fixing every variable 1..len of a prefix outcome.
    static Context of_prefix(const Outcome& prefix);

    const std::vector<Entry>& entries() const& { return a_; }
    std::vector<Entry> entries() && { return std::move(a_); }
    std::size_t size() const { return a_.size(); }
    bool empty() const { return a_.empty(); }
    VarSet keys() const;
    bool has(int var) const;
    int value(int var) const;

    Context restrict_to(VarSet s) const;
    Context without(VarSet s) const;
    // Union of two consistent assignments; throws ShapeMismatch on a conflict.
    Context merged(const Context& other) const;
    bool consistent_with(const Context& other) const;
    // True when every assignment of *this also appears in other.
    bool subsumed_by(const Context& other) const;
    // True when the prefix outcome (over 1..len) agrees with every assignment.
    bool matches_prefix(const Outcome& prefix) const;
    // Values in key order.
    Outcome values() const;
    // Values and membership checked against the system; throws BadIndex.
    void check(const VariableSystem& sys) const;

    // "X1=0,X2=1"; empty string for the empty context.
    std::string to_string() const;

    friend bool operator==(const Context&, const Context&) = default;
    // (|C|, then lexicographic on entries): the enumeration order of contexts.
    friend std::strong_ordering operator<=>(const Context& a, const Context& b);

private:
    std::vector<Entry> a_;
};

// Accepts "X1=0,X2=1", "1=0,2=1", "X1X2=01" or "" (the empty context).
Context parse_context(const std::string& s);

// Every context over every subset of vars, sorted by (|C|, lex); optionally excluding C = vars.
std::vector<Context> all_contexts(const VariableSystem& sys, VarSet vars, bool proper);

}  // namespace cstree

#endif
