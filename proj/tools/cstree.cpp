// cstree: command-line front end for CStree analyses.
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cstree/algebra.hpp"
#include "cstree/basis.hpp"
#include "cstree/contexts.hpp"
#include "cstree/error.hpp"
#include "cstree/fiber.hpp"
#include "cstree/io.hpp"
#include "cstree/lab.hpp"

using namespace cstree;

namespace {

constexpr std::uint64_t kDefaultSeed = 20240117;

enum Exit { kOk = 0, kUsage = 1, kViolation = 2 };

struct Input {
    std::string bytes;
    json doc;
};

Input load(const std::string& path) {
    Input in;
    in.bytes = read_text_file(path);
    in.doc = parse_json(in.bytes);
    return in;
}

json header(const std::string& command, const Input* in) {
    json j;
    j["tool"] = "cstree";
    j["version"] = kVersion;
    j["command"] = command;
    if (in)
        j["input_digest"] = digest(in->bytes);
    return j;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

void emit_error(const std::string& kind, const std::string& message) {
    json e{{"error", kind}, {"message", message}, {"version", kVersion}};
    std::cerr << e.dump() << "\n";
}

json witness_json(const BalanceWitness& w) {
    return {{"v", outcome_string(w.v)}, {"w", outcome_string(w.w)}, {"s", w.s}, {"r", w.r},
            {"lhs_terms", w.lhs.size()}, {"rhs_terms", w.rhs.size()}};
}

std::map<std::string, std::size_t> count_sources(const std::vector<SaturatedBinomial>& bs) {
    std::map<std::string, std::size_t> m;
    for (const SaturatedBinomial& b : bs)
        ++m[b.source];
    return m;
}

std::vector<SaturatedBinomial> build_basis(const CStreeSpec& tree, const std::string& method, bool& warning) {
    warning = false;
    if (method == "quad-lift")
        return quad_lift_basis(tree);
    std::vector<ContextDag> mc = minimal_contexts(tree);
    BasisResult r = method == "perfect" ? perfect_context_basis(tree, mc) : markov_basis_saturated(tree, mc);
    warning = r.unbalanced_warning;
    return r.binomials;
}

int cmd_validate(const std::string& path) {
    Input in = load(path);
    CStreeSpec tree = cstree_from_json(in.doc);
    json j = header("validate", &in);
    j["valid"] = true;
    j["tree"] = to_json(tree);
    emit(j);
    return kOk;
}

int cmd_contexts(const std::string& path, const std::string& dot_dir, bool check_oracle) {
    Input in = load(path);
    CStreeSpec tree = cstree_from_json(in.doc);
    std::vector<ContextDag> mc = minimal_contexts(tree);
    json j = header("contexts", &in);
    j["minimal_contexts"] = json::array();
    for (const ContextDag& cd : mc) {
        json e = to_json(cd);
        e["label"] = cd.context.empty() ? "∅" : cd.context.to_string();
        e["perfect"] = is_perfect(cd.dag);
        j["minimal_contexts"].push_back(std::move(e));
    }
    if (!dot_dir.empty()) {
        std::filesystem::create_directories(dot_dir);
        for (std::size_t i = 0; i < mc.size(); ++i)
            write_text_file((std::filesystem::path(dot_dir) / ("context_" + std::to_string(i) + ".dot")).string(),
                            to_dot(mc[i]));
    }
    int code = kOk;
    if (check_oracle) {
        VanishingOracle oracle(tree);
        std::size_t checked = 0;
        json failures = json::array();
        for (const ContextDag& cd : mc)
            for (const CsiStatement& st : saturated_statements(cd)) {
                ++checked;
                if (!oracle.statement_holds(st))
                    failures.push_back(to_string(st));
            }
        j["oracle"] = {{"statements_checked", checked}, {"failures", failures}};
        if (!failures.empty())
            code = kViolation;
    }
    emit(j);
    return code;
}

int cmd_balance(const std::string& path, bool witness, bool all_pairs) {
    Input in = load(path);
    CStreeSpec tree = cstree_from_json(in.doc);
    BalanceReport r = is_balanced(tree, all_pairs ? BalanceMode::AllPairs : BalanceMode::Representative);
    json j = header("balance", &in);
    j["balanced"] = r.balanced;
    j["pairs_checked"] = r.pairs_checked;
    j["mode"] = all_pairs ? "all-pairs" : "representative";
    if (witness && r.witness)
        j["witness"] = witness_json(*r.witness);
    emit(j);
    return r.balanced ? kOk : kViolation;
}

int cmd_basis(const std::string& path, const std::string& method, const std::string& format) {
    Input in = load(path);
    CStreeSpec tree = cstree_from_json(in.doc);
    bool warning = false;
    std::vector<SaturatedBinomial> bs = build_basis(tree, method, warning);
    if (format == "text") {
        std::cout << "# cstree " << kVersion << " " << digest(in.bytes) << " method=" << method << "\n"
                  << basis_to_text(bs, tree.system);
        return kOk;
    }
    json j = header("basis", &in);
    j["method"] = method;
    j["count"] = bs.size();
    j["by_source"] = count_sources(bs);
    j["unbalanced_warning"] = warning;
    j.update(basis_to_json(bs, tree.system));
    emit(j);
    return kOk;
}

std::uint64_t fiber_cap(std::uint64_t requested, json& report) {
    const char* env = std::getenv("CSTREE_MAX_FIBER");
    if (!env)
        return requested;
    char* end = nullptr;
    unsigned long long cap = std::strtoull(env, &end, 10);
    if (end == env || *end != '\0')
        fail(Errc::Parse, "CSTREE_MAX_FIBER must be a nonnegative integer");
    if (requested > cap) {
        report["fiber_bound_requested"] = requested;
        return cap;
    }
    return requested;
}

int cmd_verify(const std::string& path, const std::string& method, bool symbolic, bool random, int trials,
               std::uint64_t seed, int fiber_bound) {
    Input in = load(path);
    CStreeSpec tree = cstree_from_json(in.doc);
    bool warning = false;
    std::vector<SaturatedBinomial> bs = build_basis(tree, method, warning);
    json j = header("verify", &in);
    j["method"] = method;
    j["count"] = bs.size();
    j["unbalanced_warning"] = warning;
    bool ok = true;
    if (!symbolic && !random && fiber_bound < 0)
        symbolic = true;
    if (symbolic) {
        std::vector<SaturatedBinomial> bad = non_vanishing(tree, bs);
        j["symbolic"] = {{"passed", bad.empty()}, {"failures", basis_to_json(bad, tree.system)["binomials"]}};
        ok = ok && bad.empty();
    }
    if (random) {
        std::size_t failures = 0;
        for (int t = 0; t < trials; ++t) {
            RandomPoint pt(tree, seed + static_cast<std::uint64_t>(t));
            for (const SaturatedBinomial& b : bs)
                if (pt.evaluate(to_poly(b)) != 0)
                    ++failures;
        }
        j["random"] = {{"trials", trials}, {"seed", seed}, {"failures", failures}};
        ok = ok && failures == 0;
    }
    if (fiber_bound >= 0) {
        json fj;
        auto bound = static_cast<int>(fiber_cap(static_cast<std::uint64_t>(fiber_bound), fj));
        FiberReport r = fibers_connected(exponent_matrix(tree), bs, bound);
        fj["bound"] = bound;
        fj["connected"] = r.connected;
        fj["tables"] = r.tables;
        fj["fibers"] = r.fibers;
        if (!r.connected) {
            auto cells = [&](const Table& t) {
                json a = json::array();
                for (VarId x : t)
                    a.push_back(outcome_string(prefix_outcome(tree.system, tree.p(), x)));
                return a;
            };
            fj["witness"] = {cells(r.witness_a), cells(r.witness_b)};
        }
        j["fibers"] = fj;
        ok = ok && r.connected;
    }
    j["passed"] = ok;
    emit(j);
    return ok ? kOk : kViolation;
}

json edges_json(const std::vector<Edge>& es) {
    json a = json::array();
    for (const auto& [u, v] : es)
        a.push_back({u, v});
    return a;
}

int cmd_moralize(const std::string& path, bool iterate) {
    Input in = load(path);
    std::vector<ContextDag> dags = context_dags_from_json(in.doc);
    json j = header("moralize", &in);
    j["dags"] = json::array();
    for (const ContextDag& cd : dags) {
        json e;
        e["context"] = context_to_json(cd.context);
        e["perfect"] = is_perfect(cd.dag);
        e["moral_edges"] = edges_json(moralize(cd.dag).edges());
        e["directed_moralization"] = to_json(directed_moralize(cd.dag));
        if (iterate) {
            json rounds = json::array();
            for (const auto& r : to_perfect_trace(cd.dag))
                rounds.push_back(edges_json(r));
            e["rounds"] = rounds;
            Dag perfect = to_perfect(cd.dag);
            e["result"] = to_json(perfect);
            e["result_perfect"] = is_perfect(perfect);
        }
        j["dags"].push_back(std::move(e));
    }
    emit(j);
    return kOk;
}

int cmd_subtree(const std::string& path, const std::string& context) {
    Input in = load(path);
    CStreeSpec tree = cstree_from_json(in.doc);
    Context ctx = parse_context(context);
    CStreeSpec sub = context_subtree(tree, ctx);
    json j = header("subtree", &in);
    j["context"] = context_to_json(ctx);
    j["tree"] = to_json(sub);
    j["origin"] = sub.origin;
    emit(j);
    return kOk;
}

std::vector<int> parse_cards(const std::string& s) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t next = s.find(',', pos);
        std::string tok = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
        try {
            std::size_t used = 0;
            out.push_back(std::stoi(tok, &used));
            if (used != tok.size())
                throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            fail(Errc::Parse, "bad cardinality list '" + s + "'");
        }
        if (next == std::string::npos)
            break;
        pos = next + 1;
    }
    return out;
}

int cmd_enumerate(const std::string& cards, bool check, bool classify) {
    VariableSystem sys(parse_cards(cards));
    sys.check();
    json j = header("enumerate", nullptr);
    j["cards"] = sys.cards;
    if (!check && !classify) {
        EnumerationCursor cur(sys);
        j["total"] = cur.total();
        emit(j);
        return kOk;
    }
    LabOptions opts;
    opts.classify = classify;
    opts.check_equivalence = check;
    LabReport r = run_lab(sys, opts);
    j["total"] = r.total;
    j["balanced"] = r.balanced;
    j["perfect_contexts"] = r.perfect_contexts;
    j["nonperfect_balanced"] = r.nonperfect_balanced;
    j["violations"] = r.violations;
    j["classification_histogram"] = r.classification_histogram;
    emit(j);
    return r.violations.empty() ? kOk : kViolation;
}

int cmd_classify(const std::string& path) {
    Input in = load(path);
    CStreeSpec tree = cstree_from_json(in.doc);
    ClassificationResult c = classify_p3(tree);
    json j = header("classify", &in);
    j["kind"] = tree_kind_name(c.kind);
    if (c.kind != TreeKind::DagTree && c.kind != TreeKind::Unclassified) {
        j["g1"] = c.g1_complete ? "complete" : "collider";
        j["context_var"] = c.context_var;
        j["I"] = c.I;
    }
    emit(j);
    return c.kind == TreeKind::Unclassified ? kViolation : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CStree analyses: validation, minimal contexts, balance, Markov bases"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);
    std::uint64_t seed = kDefaultSeed;
    app.add_option("--seed", seed, "seed for all randomness")->capture_default_str();
    app.fallthrough();

    std::string file, dot_dir, method = "sat", format = "json", context, cards;
    bool check_oracle = false, witness = false, all_pairs = false, symbolic = false, random = false;
    bool iterate = false, check = false, classify = false;
    int trials = 10, fiber_bound = -1;

    auto* validate = app.add_subcommand("validate", "validate a fixture and print its canonical form");
    validate->add_option("file", file)->required();

    auto* contexts = app.add_subcommand("contexts", "minimal contexts and their DAGs");
    contexts->add_option("file", file)->required();
    contexts->add_option("--dot", dot_dir, "write one DOT file per context into DIR");
    contexts->add_flag("--check-oracle", check_oracle, "check saturated statements against the algebraic oracle");

    auto* balance = app.add_subcommand("balance", "decide the balance condition");
    balance->add_option("file", file)->required();
    balance->add_flag("--witness", witness);
    balance->add_flag("--audit-all-pairs", all_pairs);

    auto* basis = app.add_subcommand("basis", "binomial generating sets");
    basis->add_option("file", file)->required();
    basis->add_option("--method", method)->check(CLI::IsMember({"sat", "quad-lift", "perfect"}))->capture_default_str();
    basis->add_option("--format", format)->check(CLI::IsMember({"json", "text"}))->capture_default_str();

    auto* verify = app.add_subcommand("verify", "check a basis symbolically, numerically, or by fibers");
    verify->add_option("file", file)->required();
    verify->add_option("--method", method)->check(CLI::IsMember({"sat", "quad-lift", "perfect"}))->capture_default_str();
    verify->add_flag("--symbolic", symbolic);
    verify->add_flag("--random", random);
    verify->add_option("--trials", trials)->check(CLI::NonNegativeNumber)->capture_default_str();
    verify->add_option("--fiber-bound", fiber_bound, "total-count bound N for fiber connectivity")
        ->check(CLI::NonNegativeNumber);

    auto* moral = app.add_subcommand("moralize", "moral graph and directed moralization of DAG JSON");
    moral->add_option("file", file)->required();
    moral->add_flag("--iterate", iterate, "iterate directed moralization to a perfect DAG");

    auto* subtree = app.add_subcommand("subtree", "context subtree");
    subtree->add_option("file", file)->required();
    subtree->add_option("--context", context)->required();

    auto* enumerate = app.add_subcommand("enumerate", "enumerate CStrees over a variable system");
    enumerate->add_option("--cards", cards)->required();
    enumerate->add_flag("--check-thm32", check, "check balance against perfect minimal contexts");
    enumerate->add_flag("--classify", classify, "classify p = 3 trees into families");

    auto* cls = app.add_subcommand("classify", "classify a p = 3 tree");
    cls->add_option("file", file)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error("UsageError", e.what());
        return kUsage;
    }

    try {
        if (*validate)
            return cmd_validate(file);
        if (*contexts)
            return cmd_contexts(file, dot_dir, check_oracle);
        if (*balance)
            return cmd_balance(file, witness, all_pairs);
        if (*basis)
            return cmd_basis(file, method, format);
        if (*verify)
            return cmd_verify(file, method, symbolic, random, trials, seed, fiber_bound);
        if (*moral)
            return cmd_moralize(file, iterate);
        if (*subtree)
            return cmd_subtree(file, context);
        if (*enumerate)
            return cmd_enumerate(cards, check, classify);
        if (*cls)
            return cmd_classify(file);
    } catch (const Error& e) {
        emit_error(errc_name(e.code()), e.what());
        return e.code() == Errc::Unbalanced ? kViolation : kUsage;
    } catch (const std::exception& e) {
        emit_error("InternalError", e.what());
        return kUsage;
    }
    return kUsage;
}
