#include "cstree/fiber.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "cstree/error.hpp"

namespace cstree {

int ExponentMatrix::at(std::size_t row, std::size_t col) const {
    const auto& s = column_support.at(col);
    return std::find(s.begin(), s.end(), row) != s.end() ? 1 : 0;
}

ExponentMatrix exponent_matrix(const CStreeSpec& tree) {
    Labeling lab(tree);
    const VariableSystem& sys = tree.system;
    ExponentMatrix m;
    m.rows = lab.label_count();
    m.cols = sys.prefix_count(sys.p);
    for (std::size_t r = 0; r < m.rows; ++r)
        m.row_labels.push_back(lab.info(static_cast<VarId>(r)));
    for (std::size_t x = 0; x < m.cols; ++x) {
        std::vector<std::size_t> support;
        for (const auto& [label, e] : psi_monomial(lab, prefix_outcome(sys, sys.p, x)).factors())
            support.push_back(label);
        m.column_support.push_back(std::move(support));
    }
    return m;
}

namespace {

// C(n + N, N) with saturation at cap + 1.
std::size_t table_count(std::size_t n, int bound, std::size_t cap) {
    long double c = 1;
    for (int t = 1; t <= bound; ++t) {
        c = c * static_cast<long double>(n + static_cast<std::size_t>(t)) / t;
        if (c > static_cast<long double>(cap))
            return cap + 1;
    }
    return static_cast<std::size_t>(c + 0.5L);
}

void enumerate_tables(std::size_t n, int bound, std::vector<Table>& out) {
    Table cur;
    auto rec = [&](auto&& self, VarId start, int left) -> void {
        out.push_back(cur);
        if (left == 0)
            return;
        for (VarId x = start; x < n; ++x) {
            cur.push_back(x);
            self(self, x, left - 1);
            cur.pop_back();
        }
    };
    rec(rec, 0, bound);
}

// Removes the pair from the multiset table; false if it is not contained.
bool remove_pair(Table& t, const std::array<VarId, 2>& pair) {
    for (VarId x : pair) {
        auto it = std::lower_bound(t.begin(), t.end(), x);
        if (it == t.end() || *it != x)
            return false;
        t.erase(it);
    }
    return true;
}

void add_pair(Table& t, const std::array<VarId, 2>& pair) {
    for (VarId x : pair)
        t.insert(std::upper_bound(t.begin(), t.end(), x), x);
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b)
            parent[std::max(a, b)] = std::min(a, b);
    }
};

// Returns the index of a table not connected to the first one, or -1.
long disconnected_member(const std::vector<Table>& group, const std::vector<SaturatedBinomial>& moves) {
    if (group.size() < 2)
        return -1;
    std::map<Table, std::size_t> index;
    for (std::size_t i = 0; i < group.size(); ++i)
        index.emplace(group[i], i);
    UnionFind uf(group.size());
    for (std::size_t i = 0; i < group.size(); ++i) {
        for (const SaturatedBinomial& mv : moves) {
            for (int sign = 0; sign < 2; ++sign) {
                Table t = group[i];
                if (!remove_pair(t, sign == 0 ? mv.plus : mv.minus))
                    continue;
                add_pair(t, sign == 0 ? mv.minus : mv.plus);
                if (auto it = index.find(t); it != index.end())
                    uf.unite(i, it->second);
            }
        }
    }
    for (std::size_t i = 1; i < group.size(); ++i)
        if (uf.find(i) != uf.find(0))
            return static_cast<long>(i);
    return -1;
}

}  // namespace

FiberReport fibers_connected(const ExponentMatrix& matrix, const std::vector<SaturatedBinomial>& moves, int bound,
                             std::size_t table_cap, Exec exec) {
    if (bound < 0)
        fail(Errc::BoundTooLarge, "fiber bound must be nonnegative");
    std::size_t count = table_count(matrix.cols, bound, table_cap);
    if (count > table_cap)
        fail(Errc::BoundTooLarge, "fiber bound " + std::to_string(bound) + " needs more than " +
                                      std::to_string(table_cap) + " tables");
    for (const SaturatedBinomial& mv : moves)
        for (VarId x : {mv.plus[0], mv.plus[1], mv.minus[0], mv.minus[1]})
            if (x >= matrix.cols)
                fail(Errc::BadIndex, "move refers to a cell outside the table");

    std::vector<Table> tables;
    tables.reserve(count);
    enumerate_tables(matrix.cols, bound, tables);

    std::map<std::vector<std::uint32_t>, std::vector<Table>> by_rhs;
    for (Table& t : tables) {
        std::vector<std::uint32_t> rhs(matrix.rows, 0);
        for (VarId x : t)
            for (std::size_t r : matrix.column_support[x])
                ++rhs[r];
        by_rhs[std::move(rhs)].push_back(std::move(t));
    }
    std::vector<const std::vector<Table>*> groups;
    for (const auto& [rhs, g] : by_rhs)
        groups.push_back(&g);

    std::vector<long> bad(groups.size(), -1);
    const long n = static_cast<long>(groups.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
    for (long g = 0; g < n; ++g)
        bad[static_cast<std::size_t>(g)] = disconnected_member(*groups[static_cast<std::size_t>(g)], moves);

    FiberReport rep;
    rep.tables = count;
    rep.fibers = groups.size();
    for (std::size_t g = 0; g < groups.size(); ++g) {
        if (bad[g] >= 0) {
            rep.connected = false;
            rep.witness_a = (*groups[g])[0];
            rep.witness_b = (*groups[g])[static_cast<std::size_t>(bad[g])];
            break;
        }
    }
    return rep;
}

}  // namespace cstree
