#include <doctest.h>

#include <random>
#include <set>

#include "cstree/algebra.hpp"
#include "cstree/error.hpp"
#include "cstree/lab.hpp"
#include "oracles.hpp"

using namespace cstree;

namespace {

Dag dag(int p, std::vector<Edge> edges) { return Dag(VarSet::range(1, p), edges); }

std::vector<Dag> all_dags(int p) {
    std::vector<Edge> slots;
    for (int j = 2; j <= p; ++j)
        for (int i = 1; i < j; ++i)
            slots.emplace_back(i, j);
    std::vector<Dag> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << slots.size()); ++mask) {
        std::vector<Edge> e;
        for (std::size_t b = 0; b < slots.size(); ++b)
            if (mask >> b & 1)
                e.push_back(slots[b]);
        out.push_back(dag(p, e));
    }
    return out;
}

std::set<std::string> sat_set(const Dag& g) {
    std::set<std::string> out;
    for (const CsiStatement& s : saturated_statements(ContextDag{Context{}, g}))
        out.insert(to_string(s));
    return out;
}

std::vector<CStreeSpec> mixed_corpus(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> shapes = {{2, 2, 2, 2}, {3, 2, 2}, {2, 3, 2}, {2, 2, 3, 2}, {2, 2, 2}};
    std::vector<CStreeSpec> out;
    for (std::size_t i = 0; i < n; ++i)
        out.push_back(random_cstree(VariableSystem(shapes[i % shapes.size()]), rng, 0.35 + 0.1 * (i % 4)));
    return out;
}

}  // namespace

TEST_CASE("d-separation: hand examples") {
    Dag collider = dag(3, {{1, 3}, {2, 3}});
    CHECK(d_separated(collider, VarSet{1}, VarSet{2}, {}));
    CHECK(!d_separated(collider, VarSet{1}, VarSet{2}, VarSet{3}));
    Dag chain = dag(3, {{1, 2}, {2, 3}});
    CHECK(!d_separated(chain, VarSet{1}, VarSet{3}, {}));
    CHECK(d_separated(chain, VarSet{1}, VarSet{3}, VarSet{2}));
    Dag desc = dag(4, {{1, 3}, {2, 3}, {3, 4}});
    CHECK(!d_separated(desc, VarSet{1}, VarSet{2}, VarSet{4}));
    CHECK(!d_separated_reachability(desc, VarSet{1}, VarSet{2}, VarSet{4}));
}

TEST_CASE("d-separation: three implementations agree on 500 random DAGs") {
    std::mt19937_64 rng(2024);
    std::size_t queries = 0;
    for (int n = 0; n < 500; ++n) {
        int p = 2 + n % 6;
        Dag g = random_dag(p, 0.15 + 0.1 * (n % 6), rng);
        for (int a = 1; a <= p; ++a)
            for (int b = a + 1; b <= p; ++b)
                for_each_subset(VarSet::range(1, p) - VarSet{a, b}, [&](VarSet S) {
                    bool m = d_separated(g, VarSet{a}, VarSet{b}, S);
                    CHECK(m == d_separated_reachability(g, VarSet{a}, VarSet{b}, S));
                    if (p <= 6)
                        CHECK(m == oracle::d_separated_paths(g, a, b, S));
                    ++queries;
                });
    }
    CHECK(queries > 10000);
}

TEST_CASE("moralization and perfectness") {
    Dag collider = dag(3, {{1, 3}, {2, 3}});
    CHECK(!is_perfect(collider));
    CHECK(moralize(collider).edges() == std::vector<Edge>{{1, 2}, {1, 3}, {2, 3}});
    CHECK(directed_moralize(collider) == Dag::complete(VarSet::range(1, 3)));
    CHECK(is_perfect(dag(3, {{1, 2}, {2, 3}})));
    CHECK(is_perfect(Dag::empty(VarSet{2, 4})));
    CHECK_THROWS_AS(dag(3, {{3, 1}}), Error);
}

TEST_CASE("directed moralization properties on random DAGs") {
    std::mt19937_64 rng(99);
    for (int n = 0; n < 300; ++n) {
        int p = 2 + n % 6;
        Dag g = random_dag(p, 0.2 + 0.1 * (n % 5), rng);
        Dag dm = directed_moralize(g);
        for (const Edge& e : g.edges())
            CHECK(dm.has_edge(e.first, e.second));
        auto trace = to_perfect_trace(g);
        CHECK(trace.size() <= static_cast<std::size_t>(p * (p - 1) / 2));
        Dag per = to_perfect(g);
        CHECK(is_perfect(per));
        CHECK(to_perfect(per) == per);
        CHECK(is_perfect(g) == trace.empty());
        std::set<std::string> s_dm = sat_set(dm), s_g = sat_set(g);
        for (const std::string& s : s_dm)
            CHECK(s_g.count(s) == 1);
    }
}

TEST_CASE("fig5: two passes of directed moralization") {
    ContextDag g = context_dags_from_json(parse_json(read_text_file(FIXTURE_DIR "/fig5_g_empty.json")))[0];
    auto trace = to_perfect_trace(g.dag);
    REQUIRE(trace.size() == 2);
    CHECK(trace[0] == std::vector<Edge>{{3, 4}});
    CHECK(trace[1] == std::vector<Edge>{{2, 3}});
    CHECK(is_perfect(to_perfect(g.dag)));
    // The same DAG is the empty-context DAG of the fixture tree.
    CStreeSpec t = oracle::load_fixture("fig5_dags.json");
    std::vector<ContextDag> mc = minimal_contexts(t);
    REQUIRE(mc.size() == 3);
    CHECK(mc[0].dag == g.dag);
    CHECK(mc[1].context == Context{{1, 0}});
    CHECK(mc[1].dag == Dag(VarSet{2, 3, 4, 5}, {{2, 4}, {3, 5}}));
    CHECK(mc[2].dag == Dag(VarSet{2, 3, 4, 5}, {{2, 4}, {4, 5}}));
}

TEST_CASE("moralization obstructions match the saturated statement test, exhaustive p <= 5") {
    std::size_t cases = 0, nonempty = 0;
    for (int p = 2; p <= 5; ++p)
        for (const Dag& g : all_dags(p)) {
            Dag dm = directed_moralize(g);
            VarSet V = g.vertex_set();
            for (int i = 1; i <= p; ++i)
                for (int j = i + 1; j <= p; ++j) {
                    if (g.adjacent(i, j) || !(g.children(i) & g.children(j)).empty())
                        continue;
                    ObstructionReport r = moralization_obstructions(g, i, j);
                    bool in_dm = d_separated(dm, VarSet{i}, VarSet{j}, V - VarSet{i, j});
                    CHECK(r.empty() == in_dm);
                    ++cases;
                    nonempty += !r.empty();
                }
        }
    CHECK(cases > 1000);
    CHECK(nonempty > 0);
    Dag g = dag(4, {{1, 3}, {2, 4}, {3, 4}});
    ObstructionReport r = moralization_obstructions(g, 1, 2);
    CHECK(r.n1() == 1);
    CHECK(r.n2() == 0);
    CHECK_THROWS_AS(moralization_obstructions(g, 3, 4), Error);
}

TEST_CASE("fig1 minimal contexts") {
    CStreeSpec t = oracle::load_fixture("fig1.json");
    std::vector<ContextDag> mc = minimal_contexts(t);
    REQUIRE(mc.size() == 2);
    CHECK(mc[0].context.empty());
    CHECK(mc[0].dag == dag(3, {{1, 3}, {2, 3}}));
    CHECK(mc[1].context == Context{{2, 0}});
    CHECK(mc[1].dag == Dag::empty(VarSet{1, 3}));
}

TEST_CASE("fig3 and fig4 minimal contexts") {
    std::vector<ContextDag> f3 = minimal_contexts(oracle::load_fixture("fig3.json"));
    REQUIRE(f3.size() == 3);
    CHECK(!is_perfect(f3[0].dag));
    CHECK(f3[1].dag == Dag(VarSet{2, 3, 4}, {{2, 4}}));
    CHECK(f3[2].dag == Dag(VarSet{2, 3, 4}, {{3, 4}}));

    std::vector<ContextDag> f4 = minimal_contexts(oracle::load_fixture("fig4.json"));
    std::vector<Context> got;
    for (const ContextDag& c : f4)
        got.push_back(c.context);
    CHECK(got == std::vector<Context>{Context{}, Context{{1, 1}}, Context{{2, 0}}, Context{{1, 0}, {2, 1}}});
    CHECK(f4[3].dag == Dag(VarSet{3, 4, 5}, {{4, 5}}));
    // The text reading merges everything into the empty context.
    CHECK(minimal_contexts(oracle::load_fixture("fig4_textreading.json")).size() == 1);
}

TEST_CASE("literal fiber rule versus the factor graph") {
    CStreeSpec t = oracle::load_fixture("fig1.json");
    // Conditioning on X3 = 0 couples X1 and X2; the literal rule misses this.
    Context c{{3, 0}};
    CHECK(fiber_rule_dag(t, c) == Dag::empty(VarSet{1, 2}));
    CHECK(context_dag(t, c).dag == dag(2, {{1, 2}}));
    CHECK(!holds_graphically(t, make_statement(VarSet{1}, VarSet{2}, {}, c)));
    oracle::ModelOracle m(t);
    CHECK(!m.holds(make_statement(VarSet{1}, VarSet{2}, {}, c)));
    // Away from such later contexts both constructions agree.
    CHECK(fiber_rule_dag(t, Context{{2, 0}}) == context_dag(t, Context{{2, 0}}).dag);
}

TEST_CASE("graphical validity agrees with the distribution oracle") {
    std::vector<CStreeSpec> trees = enumerate_cstrees(VariableSystem({2, 2, 2}));
    for (const CStreeSpec& t : mixed_corpus(120, 5))
        trees.push_back(t);
    std::size_t checked = 0;
    for (const CStreeSpec& t : trees) {
        oracle::ModelOracle m(t);
        for (const Context& ctx : all_contexts(t.system, t.system.all(), true)) {
            std::vector<int> V = (t.system.all() - ctx.keys()).to_vector();
            std::size_t total = std::size_t{1} << (2 * V.size());
            for (std::size_t code = 0; code < total; ++code) {
                VarSet A, B, S;
                std::size_t c = code;
                for (int v : V) {
                    if (c % 4 == 1)
                        A.insert(v);
                    else if (c % 4 == 2)
                        B.insert(v);
                    else if (c % 4 == 3)
                        S.insert(v);
                    c /= 4;
                }
                if (A.empty() || B.empty() || A.min() > B.min())
                    continue;
                CsiStatement st = make_statement(A, B, S, ctx);
                CHECK_MESSAGE(holds_graphically(t, st) == m.holds(st), to_string(st));
                ++checked;
            }
        }
    }
    CHECK(checked > 2000);
}

TEST_CASE("minimal contexts agree with the brute-force definition") {
    std::vector<CStreeSpec> trees = enumerate_cstrees(VariableSystem({2, 2, 2}));
    for (const CStreeSpec& t : mixed_corpus(40, 77))
        trees.push_back(t);
    for (const char* f : {"fig1.json", "fig3.json", "fig4.json", "fig5_dags.json", "chain123.json"})
        trees.push_back(oracle::load_fixture(f));
    for (const CStreeSpec& t : trees) {
        std::vector<ContextDag> got = minimal_contexts(t, Exec::Serial);
        CHECK(got == oracle::minimal_contexts(t));
        CHECK(got == minimal_contexts(t, Exec::Parallel));
    }
}

TEST_CASE("local Markov statements of every minimal context DAG pass the algebraic oracle") {
    std::vector<CStreeSpec> trees = mixed_corpus(40, 123);
    for (const char* f : {"fig1.json", "fig3.json", "fig4.json", "fig5_dags.json"})
        trees.push_back(oracle::load_fixture(f));
    for (const CStreeSpec& t : trees) {
        VanishingOracle o(t);
        for (const ContextDag& cd : minimal_contexts(t))
            for (const CsiStatement& s : local_markov(cd.dag)) {
                CsiStatement with_ctx = make_statement(s.A, s.B, s.S, cd.context);
                CHECK_MESSAGE(o.statement_holds(with_ctx), to_string(with_ctx));
            }
    }
}

TEST_CASE("saturated statements cover every vertex") {
    CStreeSpec t = oracle::load_fixture("fig4.json");
    for (const ContextDag& cd : minimal_contexts(t))
        for (const CsiStatement& s : saturated_statements(cd)) {
            CHECK(is_saturated(s, t.system));
            CHECK(d_separated(cd.dag, s.A, s.B, s.S));
        }
}

TEST_CASE("fiber rule versus minimal I-MAP census") {
    std::vector<CStreeSpec> trees = enumerate_cstrees(VariableSystem({2, 2, 2, 2}));
    std::size_t minimal = 0, minimal_disagree = 0, later_var = 0;
    for (const CStreeSpec& t : trees)
        for (const ContextDag& cd : minimal_contexts(t)) {
            ++minimal;
            if (!(fiber_rule_dag(t, cd.context) == cd.dag)) {
                ++minimal_disagree;
                // Disagreements only occur for contexts that are not an initial segment of the order.
                bool prefix = cd.context.keys() == VarSet::range(1, cd.context.size());
                later_var += !prefix;
            }
        }
    CHECK(minimal == 7640);
    CHECK(minimal_disagree == 230);
    CHECK(later_var == minimal_disagree);
}
