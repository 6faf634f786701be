#include <doctest.h>

#include <filesystem>
#include <random>
#include <regex>
#include <set>

#include "cstree/algebra.hpp"
#include "cstree/error.hpp"
#include "cstree/io.hpp"
#include "cstree/lab.hpp"
#include "oracles.hpp"

using namespace cstree;

namespace {

Errc code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error raised");
    return Errc::Parse;
}

std::set<std::string> matches(const std::string& text, const std::string& pattern) {
    std::set<std::string> out;
    std::regex re(pattern);
    for (auto it = std::sregex_iterator(text.begin(), text.end(), re); it != std::sregex_iterator(); ++it)
        out.insert((*it)[1].str());
    return out;
}

}  // namespace

TEST_CASE("digest and file helpers") {
    CHECK(digest("") == "fnv1a64:cbf29ce484222325");
    CHECK(digest("a") == "fnv1a64:af63dc4c8601ec8c");
    CHECK(code_of([] { read_text_file("/nonexistent/cstree.json"); }) == Errc::Io);
    CHECK(code_of([] { parse_json("{\"p\":"); }) == Errc::Parse);
    std::string path = (std::filesystem::temp_directory_path() / "cstree_io_test.txt").string();
    write_text_file(path, "hello\n");
    CHECK(read_text_file(path) == "hello\n");
    std::filesystem::remove(path);
}

TEST_CASE("tree JSON round trips") {
    std::mt19937_64 rng(8);
    std::vector<CStreeSpec> trees;
    for (const char* f : {"fig1.json", "fig3.json", "fig4.json", "fig5_dags.json", "chain123.json"})
        trees.push_back(oracle::load_fixture(f));
    for (int i = 0; i < 50; ++i)
        trees.push_back(random_cstree(VariableSystem({2, 3, 2, 2}), rng, 0.5));
    for (const CStreeSpec& t : trees) {
        json j = to_json(t);
        CHECK(cstree_from_json(j) == t);
        CHECK(to_json(cstree_from_json(parse_json(j.dump()))) == j);
    }
}

TEST_CASE("tree JSON errors") {
    CHECK(code_of([] { cstree_from_json(parse_json(R"({"cards":[2,2]})")); }) == Errc::Parse);
    CHECK(code_of([] { cstree_from_json(parse_json(R"({"p":2,"cards":[2,2],"levels":[{"level":2,"stages":5}]})")); }) ==
          Errc::Parse);
    CHECK(code_of([] {
              cstree_from_json(
                  parse_json(R"({"p":2,"cards":[2,2],"levels":[{"level":2,"stages":[{"context":{"1":5}}]}]})"));
          }) == Errc::BadIndex);
}

TEST_CASE("DAG JSON round trips") {
    std::vector<ContextDag> mc = minimal_contexts(oracle::load_fixture("fig4.json"));
    for (const ContextDag& cd : mc)
        CHECK(context_dag_from_json(to_json(cd)) == cd);
    json many = {{"dags", json::array()}};
    for (const ContextDag& cd : mc)
        many["dags"].push_back(to_json(cd));
    CHECK(context_dags_from_json(many) == mc);
    CHECK(to_json(mc[0].dag).contains("edges"));
    CHECK(context_dags_from_json(to_json(mc[0].dag)).size() == 1);
    CHECK(code_of([] { context_dag_from_json(parse_json(R"({"vertices":[1,2],"edges":[[2,1]]})")); }) ==
          Errc::BadGraph);
}

TEST_CASE("basis JSON and text") {
    CStreeSpec t = oracle::load_fixture("fig4.json");
    std::vector<SaturatedBinomial> bs = quad_lift_basis(t);
    json j = basis_to_json(bs, t.system);
    std::vector<SaturatedBinomial> back = basis_from_json(j, t.system);
    CHECK(back == bs);
    for (std::size_t i = 0; i < bs.size(); ++i)
        CHECK(back[i].source == bs[i].source);
    std::string text = basis_to_text(bs, t.system);
    CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == bs.size());
    CHECK(j["binomials"][0]["plus"][0].is_array());
}

TEST_CASE("DOT: context DAGs and moral graphs") {
    std::vector<ContextDag> mc = minimal_contexts(oracle::load_fixture("fig1.json"));
    std::string g = to_dot(mc[0]);
    CHECK(g.rfind("digraph G {", 0) == 0);
    CHECK(g.find("label=\"∅\";") != std::string::npos);
    CHECK(matches(g, R"((\d+ -> \d+);)") == std::set<std::string>{"1 -> 3", "2 -> 3"});
    std::string c = to_dot(mc[1]);
    CHECK(c.find("label=\"X2=0\";") != std::string::npos);
    CHECK(c.find("->") == std::string::npos);
    CHECK(matches(c, R"((\d+) \[label)") == std::set<std::string>{"1", "3"});
    std::string m = to_dot(moralize(mc[0].dag));
    CHECK(matches(m, R"((\d+ -- \d+);)") == std::set<std::string>{"1 -- 2", "1 -- 3", "2 -- 3"});
    CHECK(to_dot(mc[0]) == g);
}

TEST_CASE("DOT: event trees carry one class per stage") {
    CStreeSpec t = oracle::load_fixture("fig3.json");
    Labeling lab(t);
    std::string d = to_dot(t);
    CHECK(d == to_dot(oracle::load_fixture("fig3.json")));
    for (int depth = 0; depth < t.p(); ++depth) {
        std::set<std::string> classes = matches(d, "class=\"(L" + std::to_string(depth) + "_s\\d+)\"");
        CHECK(classes.size() == static_cast<std::size_t>(lab.stage_count(depth + 1)));
    }
    // The four shared stages over [3] are filled; the root edges are labelled by outcome.
    std::regex filled("class=\"L3_s\\d+\", fillcolor");
    CHECK(std::distance(std::sregex_iterator(d.begin(), d.end(), filled), std::sregex_iterator()) == 8);
    CHECK(d.find("\"v\" -> \"v0\" [label=\"0\"]") != std::string::npos);
    CHECK(d.find("\"v0110\"") != std::string::npos);
}
