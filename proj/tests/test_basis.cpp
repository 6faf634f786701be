#include <doctest.h>

#include <algorithm>
#include <random>

#include "cstree/basis.hpp"
#include "cstree/error.hpp"
#include "cstree/fiber.hpp"
#include "cstree/lab.hpp"
#include "oracles.hpp"

using namespace cstree;

namespace {

std::vector<SaturatedBinomial> basis(const CStreeSpec& t, const std::string& method) {
    if (method == "quad-lift")
        return quad_lift_basis(t);
    std::vector<ContextDag> mc = minimal_contexts(t);
    return method == "perfect" ? perfect_context_basis(t, mc).binomials : markov_basis_saturated(t, mc).binomials;
}

std::size_t count_source(const std::vector<SaturatedBinomial>& bs, const std::string& src) {
    return static_cast<std::size_t>(
        std::count_if(bs.begin(), bs.end(), [&](const SaturatedBinomial& b) { return b.source == src; }));
}

bool contains_text(const std::vector<SaturatedBinomial>& bs, const VariableSystem& sys, const std::string& text) {
    return std::any_of(bs.begin(), bs.end(), [&](const SaturatedBinomial& b) { return to_text(b, sys) == text; });
}

std::vector<CStreeSpec> balanced_corpus(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<std::vector<int>> shapes = {{2, 2, 2, 2}, {3, 2, 2}, {2, 2, 3}, {2, 2, 2}};
    std::vector<CStreeSpec> out;
    std::size_t i = 0;
    while (out.size() < n) {
        CStreeSpec t = random_cstree(VariableSystem(shapes[i % shapes.size()]), rng, 0.5);
        ++i;
        if (is_balanced(t).balanced)
            out.push_back(t);
    }
    return out;
}

}  // namespace

TEST_CASE("binomial canonical form") {
    auto b = make_binomial(5, 2, 3, 4);
    REQUIRE(b);
    CHECK(b->plus == std::array<VarId, 2>{2, 5});
    CHECK(b->minus == std::array<VarId, 2>{3, 4});
    auto c = make_binomial(4, 3, 5, 2);
    REQUIRE(c);
    CHECK(*c == *b);
    CHECK(!make_binomial(1, 2, 2, 1));
    CHECK(binomial_from_poly(to_poly(*b)) == b);
    CHECK(!binomial_from_poly(SparsePoly::var(1)));
    std::vector<SaturatedBinomial> d = dedup_binomials({*b, *c, *make_binomial(0, 1, 2, 3)});
    CHECK(d.size() == 2);
    CHECK(binomial_less(d[0], d[1]));
}

TEST_CASE("frozen basis sizes on the fixtures") {
    CStreeSpec f4 = oracle::load_fixture("fig4.json");
    std::vector<SaturatedBinomial> ql = quad_lift_basis(f4);
    CHECK(ql.size() == 24);
    CHECK(count_source(ql, "quad") == 8);
    CHECK(count_source(ql, "lift") == 16);
    CHECK(basis(f4, "sat").size() == 24);
    CHECK(basis(f4, "perfect").size() == 24);
    CHECK(quad_lift_basis(oracle::load_fixture("fig4_textreading.json")).size() == 24);
    CHECK(contains_text(ql, f4.system, "p00000*p00011 - p00001*p00010"));
    CHECK(contains_text(ql, f4.system, "p00000*p00110 - p00010*p00100"));

    CStreeSpec chain = oracle::load_fixture("chain123.json");
    CHECK(basis(chain, "sat").size() == 2);
    CHECK(quad_lift_basis(chain).size() == 2);

    CStreeSpec f5 = oracle::load_fixture("fig5_dags.json");
    CHECK(basis(f5, "sat").size() == 76);
    CHECK(quad_lift_basis(f5).size() == 72);
}

TEST_CASE("quad-lift refuses unbalanced trees; the other bases warn") {
    CStreeSpec f1 = oracle::load_fixture("fig1.json");
    CHECK_THROWS_AS(quad_lift_basis(f1), Error);
    try {
        quad_lift_basis(f1);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::Unbalanced);
    }
    std::vector<ContextDag> mc = minimal_contexts(f1);
    BasisResult sat = markov_basis_saturated(f1, mc);
    CHECK(sat.unbalanced_warning);
    CHECK(non_vanishing(f1, sat.binomials).empty());
    BasisResult per = perfect_context_basis(oracle::load_fixture("fig4.json"),
                                            minimal_contexts(oracle::load_fixture("fig4.json")));
    CHECK(!per.unbalanced_warning);
}

TEST_CASE("every basis vanishes on the model") {
    std::vector<CStreeSpec> trees = balanced_corpus(40, 6);
    for (const char* f : {"chain123.json", "fig3.json", "fig4.json", "fig4_textreading.json", "fig5_dags.json"})
        trees.push_back(oracle::load_fixture(f));
    for (const CStreeSpec& t : trees) {
        for (const char* m : {"sat", "quad-lift", "perfect"}) {
            std::vector<SaturatedBinomial> bs = basis(t, m);
            CHECK_MESSAGE(non_vanishing(t, bs).empty(), m);
            CHECK(dedup_binomials(bs).size() == bs.size());
            RandomPoint pt(t, 77);
            for (const SaturatedBinomial& b : bs)
                CHECK(pt.evaluate(to_poly(b)) == 0);
        }
    }
}

TEST_CASE("non_vanishing catches a corrupted binomial") {
    CStreeSpec t = oracle::load_fixture("fig4.json");
    std::vector<SaturatedBinomial> bs = quad_lift_basis(t);
    SaturatedBinomial bad = *make_binomial(0, 31, 1, 30);
    bs.push_back(bad);
    std::vector<SaturatedBinomial> f = non_vanishing(t, bs);
    REQUIRE(f.size() == 1);
    CHECK(f[0] == bad);
    CHECK(non_vanishing(t, bs, Exec::Serial) == f);
}

TEST_CASE("fibers at bound 2: frozen sizes and connectivity") {
    struct Row {
        const char* file;
        std::size_t tables, fibers;
    };
    for (Row r : {Row{"chain123.json", 45, 43}, Row{"fig3.json", 153, 141}, Row{"fig4.json", 561, 537}}) {
        CStreeSpec t = oracle::load_fixture(r.file);
        ExponentMatrix A = exponent_matrix(t);
        for (const char* m : {"sat", "quad-lift", "perfect"}) {
            FiberReport rep = fibers_connected(A, basis(t, m), 2);
            CHECK_MESSAGE(rep.connected, r.file, " ", m);
            CHECK(rep.tables == r.tables);
            CHECK(rep.fibers == r.fibers);
        }
    }
}

TEST_CASE("fibers: the empty move set is disconnected and reports a witness") {
    CStreeSpec t = oracle::load_fixture("chain123.json");
    ExponentMatrix A = exponent_matrix(t);
    FiberReport rep = fibers_connected(A, {}, 2);
    CHECK(!rep.connected);
    CHECK(rep.witness_a != rep.witness_b);
    CHECK(rep.witness_a.size() == rep.witness_b.size());
    // Both tables have the same image under the exponent matrix.
    auto image = [&](const Table& tab) {
        std::vector<int> u(A.rows, 0);
        for (VarId x : tab)
            for (std::size_t r : A.column_support[x])
                ++u[r];
        return u;
    };
    CHECK(image(rep.witness_a) == image(rep.witness_b));
    CHECK(fibers_connected(A, {}, 1).connected);
}

TEST_CASE("fibers: bound limits") {
    CStreeSpec t = oracle::load_fixture("fig4.json");
    ExponentMatrix A = exponent_matrix(t);
    std::vector<SaturatedBinomial> bs = quad_lift_basis(t);
    CHECK_THROWS_AS(fibers_connected(A, bs, -1), Error);
    try {
        fibers_connected(A, bs, 6, 1000);
        FAIL("expected BoundTooLarge");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::BoundTooLarge);
    }
}

TEST_CASE("fibers on random balanced trees, serial and parallel agree") {
    for (const CStreeSpec& t : balanced_corpus(25, 19)) {
        ExponentMatrix A = exponent_matrix(t);
        std::vector<SaturatedBinomial> ql = quad_lift_basis(t);
        FiberReport par = fibers_connected(A, ql, 2, kDefaultTableCap, Exec::Parallel);
        FiberReport ser = fibers_connected(A, ql, 2, kDefaultTableCap, Exec::Serial);
        CHECK(par.connected);
        CHECK(par.connected == ser.connected);
        CHECK(par.tables == ser.tables);
        CHECK(par.fibers == ser.fibers);
        CHECK(fibers_connected(A, basis(t, "sat"), 2).connected);
    }
}

TEST_CASE("fibers at bound 3 on the chain") {
    CStreeSpec t = oracle::load_fixture("chain123.json");
    CHECK(fibers_connected(exponent_matrix(t), quad_lift_basis(t), 3).connected);
}

TEST_CASE("trivial bases") {
    CStreeSpec one = make_cstree(VariableSystem({3}), {{}});
    CHECK(quad_lift_basis(one).empty());
    CStreeSpec full = tree_of_dag(Dag::complete(VarSet::range(1, 3)), VariableSystem({2, 2, 2}));
    CHECK(basis(full, "sat").empty());
    CHECK(quad_lift_basis(full).empty());
    std::vector<SaturatedBinomial> chain = quad_lift_basis(oracle::load_fixture("chain123.json"));
    CHECK(count_source(chain, "quad") == 2);
    CHECK(count_source(chain, "lift") == 0);
    CStreeSpec f3 = oracle::load_fixture("fig3.json");
    std::vector<ContextDag> mc = minimal_contexts(f3);
    std::vector<ContextDag> perfect_only(mc.begin() + 1, mc.end());
    CHECK(perfect_context_basis(f3, perfect_only).binomials == markov_basis_saturated(f3, perfect_only).binomials);
}
