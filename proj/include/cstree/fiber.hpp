#ifndef CSTREE_FIBER_HPP
#define CSTREE_FIBER_HPP

#include <cstddef>
#include <vector>

#include "cstree/algebra.hpp"
#include "cstree/basis.hpp"
#include "cstree/exec.hpp"

namespace cstree {

// Matrix of the monomial map psi_T: rows are edge labels in (level, stage, outcome)
// order, columns are full outcomes in lexicographic order, entries 0/1.
struct ExponentMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<LabelInfo> row_labels;
    // column_support[x] lists the rows with a 1 in column x (one per level).
    std::vector<std::vector<std::size_t>> column_support;

    int at(std::size_t row, std::size_t col) const;
};

ExponentMatrix exponent_matrix(const CStreeSpec& tree);

// A table as the sorted multiset of its cells.
using Table = std::vector<VarId>;

struct FiberReport {
    bool connected = true;
    std::size_t tables = 0;
    std::size_t fibers = 0;
    // Two tables of one fiber with no connecting path of moves.
    Table witness_a, witness_b;
};

inline constexpr std::size_t kDefaultTableCap = 5'000'000;

// Enumerates all tables with total count <= bound, groups them by A u, and checks that
// each group is connected under +/- applications of the moves.  Throws BoundTooLarge.
FiberReport fibers_connected(const ExponentMatrix& matrix, const std::vector<SaturatedBinomial>& moves,
                             int bound, std::size_t table_cap = kDefaultTableCap, Exec exec = Exec::Parallel);

}  // namespace cstree

#endif
