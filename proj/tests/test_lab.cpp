#include <doctest.h>

#include <algorithm>
#include <random>

#include "cstree/algebra.hpp"
#include "cstree/basis.hpp"
#include "cstree/error.hpp"
#include "cstree/fiber.hpp"
#include "cstree/lab.hpp"
#include "oracles.hpp"

using namespace cstree;

namespace {

using Histogram = std::map<std::string, std::size_t>;

}  // namespace

TEST_CASE("p = 3 equivalence: frozen census for every card shape") {
    struct Row {
        std::vector<int> cards;
        std::size_t total, balanced;
        Histogram hist;
    };
    std::vector<Row> rows = {
        {{2, 2, 2}, 16, 11, {{"dag", 8}, {"family1", 2}, {"family2", 2}, {"family3", 2}, {"family4", 2}}},
        {{3, 2, 2}, 24, 15, {}},
        {{2, 3, 2}, 24, 15, {}},
        {{2, 2, 3}, 16, 11, {}},
    };
    for (const Row& r : rows) {
        LabOptions opts;
        opts.classify = true;
        LabReport rep = check_theorem_p3(VariableSystem(r.cards), opts);
        CHECK(rep.total == r.total);
        CHECK(rep.balanced == r.balanced);
        CHECK(rep.perfect_contexts == r.balanced);
        CHECK(rep.nonperfect_balanced == 0);
        CHECK(rep.violations.empty());
        std::size_t sum = 0;
        for (const auto& [k, n] : rep.classification_histogram)
            sum += n;
        CHECK(sum == r.total);
        if (!r.hist.empty()) {
            Histogram h = rep.classification_histogram;
            h.erase("unclassified");
            CHECK(h == r.hist);
        }
        if (r.cards == std::vector<int>{3, 2, 2}) {
            CHECK(rep.classification_histogram["family2"] == 6);
            CHECK(rep.classification_histogram["family4"] == 6);
        }
        if (r.cards == std::vector<int>{2, 3, 2}) {
            CHECK(rep.classification_histogram["family1"] == 6);
            CHECK(rep.classification_histogram["family3"] == 6);
        }
    }
    CHECK_THROWS_AS(check_theorem_p3(VariableSystem({2, 2, 2, 2})), Error);
}

TEST_CASE("classification of the fixtures") {
    ClassificationResult f1 = classify_p3(oracle::load_fixture("fig1.json"));
    CHECK(f1.kind == TreeKind::Family3);
    CHECK(!f1.g1_complete);
    CHECK(f1.context_var == 2);
    CHECK(f1.I == std::vector<int>{0});
    CHECK(classify_p3(oracle::load_fixture("chain123.json")).kind == TreeKind::DagTree);
    CHECK_THROWS_AS(classify_p3(oracle::load_fixture("fig4.json")), Error);
    CHECK(std::string(tree_kind_name(TreeKind::Family3)) == "family3");
}

TEST_CASE("classification is total at p = 3 and consistent with the minimal contexts") {
    for (auto cards : std::vector<std::vector<int>>{{2, 2, 2}, {3, 2, 2}, {2, 3, 2}, {2, 2, 3}}) {
        for (const CStreeSpec& t : enumerate_cstrees(VariableSystem(cards))) {
            ClassificationResult c = classify_p3(t);
            std::vector<ContextDag> mc = minimal_contexts(t);
            CHECK(c.kind != TreeKind::Unclassified);
            CHECK((c.kind == TreeKind::DagTree) == (mc.size() == 1));
            if (c.kind == TreeKind::DagTree) {
                CHECK(is_balanced(t).balanced == is_perfect(mc[0].dag));
                continue;
            }
            CHECK(c.g1_complete == (c.kind == TreeKind::Family1 || c.kind == TreeKind::Family2));
            CHECK(c.context_var == (c.kind == TreeKind::Family1 || c.kind == TreeKind::Family3 ? 2 : 1));
            CHECK(c.I.size() + 1 == mc.size());
            CHECK(static_cast<int>(c.I.size()) < t.system.card(c.context_var));
        }
    }
}

TEST_CASE("binary p = 4: perfect implies balanced, and the non-perfect balanced trees") {
    LabReport rep = run_lab(VariableSystem({2, 2, 2, 2}));
    CHECK(rep.total == 2464);
    CHECK(rep.violations.empty());
    CHECK(rep.perfect_contexts <= rep.balanced);
    CHECK(rep.balanced == rep.perfect_contexts + rep.nonperfect_balanced);
    CHECK(rep.balanced == 357);
    CHECK(rep.perfect_contexts == 353);
    CHECK(rep.nonperfect_balanced == 4);
    LabOptions numeric;
    numeric.balance_oracle = [](const CStreeSpec& t) { return oracle::balanced_numeric(t); };
    CHECK(run_lab(VariableSystem({2, 2, 2, 2}), numeric).balanced == rep.balanced);
    std::vector<CStreeSpec> np = find_nonperfect_balanced(VariableSystem({2, 2, 2, 2}));
    CHECK(np.size() == rep.nonperfect_balanced);
    for (const CStreeSpec& t : np) {
        CHECK(is_balanced(t).balanced);
        CHECK(oracle::balanced_numeric(t));
        CHECK(!all_contexts_perfect(minimal_contexts(t)));
    }
    MESSAGE("binary p=4: balanced ", rep.balanced, ", perfect ", rep.perfect_contexts, ", non-perfect balanced ",
            rep.nonperfect_balanced);
}

TEST_CASE("serial and parallel lab runs agree") {
    LabOptions ser;
    ser.exec = Exec::Serial;
    ser.classify = true;
    LabOptions par = ser;
    par.exec = Exec::Parallel;
    LabReport a = run_lab(VariableSystem({3, 2, 2}), ser);
    LabReport b = run_lab(VariableSystem({3, 2, 2}), par);
    CHECK(a.total == b.total);
    CHECK(a.balanced == b.balanced);
    CHECK(a.perfect_contexts == b.perfect_contexts);
    CHECK(a.classification_histogram == b.classification_histogram);
    CHECK(a.violations == b.violations);
}

TEST_CASE("mutation: a corrupted balance oracle is detected") {
    LabOptions opts;
    opts.balance_oracle = [](const CStreeSpec&) { return false; };
    LabReport rep = check_theorem_p3(VariableSystem({2, 2, 2}), opts);
    CHECK(rep.violations.size() == 11);
    opts.balance_oracle = [](const CStreeSpec&) { return true; };
    rep = check_theorem_p3(VariableSystem({2, 2, 2}), opts);
    CHECK(rep.violations.size() == 5);
    // The numeric oracle is a drop-in replacement.
    opts.balance_oracle = [](const CStreeSpec& t) { return oracle::balanced_numeric(t); };
    CHECK(check_theorem_p3(VariableSystem({2, 2, 2}), opts).violations.empty());
}

TEST_CASE("mutation: corrupted DAGs and binomials are detected") {
    CStreeSpec t = oracle::load_fixture("fig3.json");
    std::vector<ContextDag> mc = minimal_contexts(t);
    // Dropping an edge of a context DAG yields a local Markov statement that fails.
    ContextDag bad = mc[1];
    std::vector<Edge> e = bad.dag.edges();
    REQUIRE(!e.empty());
    e.pop_back();
    bad.dag = Dag(bad.dag.vertex_set(), e);
    VanishingOracle o(t);
    bool caught = false;
    for (const CsiStatement& s : local_markov(bad.dag))
        caught |= !o.statement_holds(make_statement(s.A, s.B, s.S, bad.context));
    CHECK(caught);
    // A basis missing a move leaves a disconnected fiber.
    std::vector<SaturatedBinomial> bs = quad_lift_basis(t);
    bs.pop_back();
    CHECK(!fibers_connected(exponent_matrix(t), bs, 2).connected);
}

TEST_CASE("enumeration cursor and random generators") {
    EnumerationCursor cur(VariableSystem({2, 3, 2}));
    CHECK(cur.total() == 24);
    std::size_t n = 0;
    while (cur.next())
        ++n;
    CHECK(n == 24);
    CHECK(!cur.next());
    std::mt19937_64 a(5), b(5);
    CHECK(random_cstree(VariableSystem({2, 2, 2, 2}), a) == random_cstree(VariableSystem({2, 2, 2, 2}), b));
    CHECK(random_dag(6, 0.4, a) == random_dag(6, 0.4, b));
    CHECK(random_dag(5, 0.0, a).edge_count() == 0);
    CHECK(random_dag(5, 1.0, a) == Dag::complete(VarSet::range(1, 5)));
}

TEST_CASE("non-perfect balanced search: fig3 appears, p = 3 gives nothing") {
    CStreeSpec f3 = oracle::load_fixture("fig3.json");
    CStreeSpec swapped = relabel_outcomes(f3, 1, {1, 0});
    std::vector<CStreeSpec> np = find_nonperfect_balanced(VariableSystem({2, 2, 2, 2}));
    bool found = std::any_of(np.begin(), np.end(), [&](const CStreeSpec& t) { return t == f3 || t == swapped; });
    CHECK(found);
    CHECK(find_nonperfect_balanced(VariableSystem({2, 2, 2})).empty());
    CStreeSpec f4 = oracle::load_fixture("fig4.json");
    CHECK(is_balanced(f4).balanced);
    CHECK(!is_perfect(minimal_contexts(f4)[0].dag));
}
