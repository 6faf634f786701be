#include "cstree/lab.hpp"

#include <algorithm>
#include <numeric>

#include "cstree/algebra.hpp"
#include "cstree/error.hpp"

namespace cstree {

std::vector<std::vector<Context>> level_partitions(const VariableSystem& sys, int k, std::size_t budget) {
    if (k < 1 || k > sys.p)
        fail(Errc::BadIndex, "level " + std::to_string(k) + " outside [1, " + std::to_string(sys.p) + "]");
    const VarSet prefix = VarSet::range(1, k - 1);
    const std::size_t n = sys.prefix_count(k - 1);
    std::vector<Outcome> verts;
    for (std::size_t i = 0; i < n; ++i)
        verts.push_back(prefix_outcome(sys, k - 1, i));

    std::vector<std::vector<Context>> out;
    std::vector<char> covered(n, 0);
    std::vector<Context> cur;
    std::size_t nodes = 0;

    auto rec = [&](auto&& self, std::size_t from) -> void {
        if (++nodes > budget)
            fail(Errc::BudgetExceeded, "enumeration of level " + std::to_string(k) + " exceeded " +
                                           std::to_string(budget) + " search nodes");
        while (from < n && covered[from])
            ++from;
        if (from == n) {
            out.push_back(cur);
            return;
        }
        Outcome v = verts[from];
        std::vector<VarSet> subsets;
        for_each_subset(prefix, [&](VarSet C) { subsets.push_back(C); });
        std::sort(subsets.begin(), subsets.end(), size_lex_less);
        for (VarSet C : subsets) {
            Context ctx = Context::over(C, Context::of_prefix(v).restrict_to(C).values());
            std::vector<std::size_t> members;
            bool free = true;
            for (const Outcome& m : cylinder_members(sys, k, ctx)) {
                std::size_t idx = prefix_index(sys, m);
                if (covered[idx]) {
                    free = false;
                    break;
                }
                members.push_back(idx);
            }
            if (!free)
                continue;
            for (std::size_t idx : members)
                covered[idx] = 1;
            bool singleton = C == prefix;
            if (!singleton)
                cur.push_back(ctx);
            self(self, from + 1);
            if (!singleton)
                cur.pop_back();
            for (std::size_t idx : members)
                covered[idx] = 0;
        }
    };
    rec(rec, 0);
    return out;
}

EnumerationCursor::EnumerationCursor(const VariableSystem& sys, std::size_t budget) : sys_(sys) {
    sys_.check();
    for (int k = 1; k <= sys_.p; ++k) {
        parts_.push_back(level_partitions(sys_, k, budget));
        std::size_t c = parts_.back().size();
        if (total_ > budget / c)
            fail(Errc::BudgetExceeded, "more than " + std::to_string(budget) + " trees");
        total_ *= c;
    }
    pos_.assign(parts_.size(), 0);
}

std::optional<CStreeSpec> EnumerationCursor::next() {
    if (done_)
        return std::nullopt;
    CStreeSpec tree;
    tree.system = sys_;
    tree.origin.resize(static_cast<std::size_t>(sys_.p));
    std::iota(tree.origin.begin(), tree.origin.end(), 1);
    for (std::size_t k = 0; k < parts_.size(); ++k)
        tree.levels.push_back(parts_[k][pos_[k]]);
    std::size_t k = parts_.size();
    while (k > 0) {
        --k;
        if (++pos_[k] < parts_[k].size())
            break;
        pos_[k] = 0;
        if (k == 0)
            done_ = true;
    }
    if (parts_.empty())
        done_ = true;
    return tree;
}

std::vector<CStreeSpec> enumerate_cstrees(const VariableSystem& sys, std::size_t budget) {
    EnumerationCursor cur(sys, budget);
    std::vector<CStreeSpec> out;
    out.reserve(cur.total());
    while (auto t = cur.next())
        out.push_back(std::move(*t));
    return out;
}

CStreeSpec random_cstree(const VariableSystem& sys, std::mt19937_64& rng, double merge_bias) {
    sys.check();
    std::vector<std::vector<Context>> levels;
    std::bernoulli_distribution coarse(merge_bias);
    for (int k = 1; k <= sys.p; ++k) {
        const VarSet prefix = VarSet::range(1, k - 1);
        const std::size_t n = sys.prefix_count(k - 1);
        std::vector<char> covered(n, 0);
        std::vector<Context> lvl;
        std::vector<VarSet> subsets;
        for_each_subset(prefix, [&](VarSet C) { subsets.push_back(C); });
        std::sort(subsets.begin(), subsets.end(), size_lex_less);
        for (std::size_t from = 0; from < n; ++from) {
            if (covered[from])
                continue;
            Context full = Context::of_prefix(prefix_outcome(sys, k - 1, from));
            std::vector<Context> options;
            for (VarSet C : subsets) {
                Context ctx = full.restrict_to(C);
                bool free = true;
                for (const Outcome& m : cylinder_members(sys, k, ctx))
                    if (covered[prefix_index(sys, m)]) {
                        free = false;
                        break;
                    }
                if (free)
                    options.push_back(ctx);
            }
            // options always ends with the singleton; coarse picks among the rest.
            Context pick = options.back();
            if (options.size() > 1 && coarse(rng)) {
                std::uniform_int_distribution<std::size_t> u(0, options.size() - 2);
                pick = options[u(rng)];
            }
            for (const Outcome& m : cylinder_members(sys, k, pick))
                covered[prefix_index(sys, m)] = 1;
            if (pick.keys() != prefix)
                lvl.push_back(pick);
        }
        levels.push_back(std::move(lvl));
    }
    return make_cstree(sys, levels);
}

Dag random_dag(int p, double density, std::mt19937_64& rng) {
    std::bernoulli_distribution edge(density);
    std::vector<Edge> edges;
    for (int j = 2; j <= p; ++j)
        for (int i = 1; i < j; ++i)
            if (edge(rng))
                edges.emplace_back(i, j);
    return Dag(VarSet::range(1, p), edges);
}

const char* tree_kind_name(TreeKind k) {
    switch (k) {
    case TreeKind::DagTree: return "dag";
    case TreeKind::Family1: return "family1";
    case TreeKind::Family2: return "family2";
    case TreeKind::Family3: return "family3";
    case TreeKind::Family4: return "family4";
    case TreeKind::Unclassified: return "unclassified";
    }
    return "?";
}

ClassificationResult classify_p3(const CStreeSpec& tree) {
    if (tree.p() != 3)
        fail(Errc::NotP3, "classification needs p = 3, got p = " + std::to_string(tree.p()));
    ClassificationResult res;
    std::vector<ContextDag> mc = minimal_contexts(tree, Exec::Serial);
    if (mc.size() == 1) {
        res.kind = TreeKind::DagTree;
        return res;
    }
    const Dag& g1 = mc[0].dag;
    const Dag complete = Dag::complete(VarSet::range(1, 3));
    const Dag collider(VarSet::range(1, 3), {{1, 3}, {2, 3}});
    if (g1 == complete)
        res.g1_complete = true;
    else if (!(g1 == collider))
        return res;

    int var = 0;
    for (std::size_t i = 1; i < mc.size(); ++i) {
        const Context& c = mc[i].context;
        if (c.size() != 1)
            return res;
        int v = c.entries()[0].first;
        if (v == 3 || (var != 0 && v != var))
            return res;
        var = v;
        VarSet rest = VarSet::range(1, 3) - VarSet{v};
        if (!(mc[i].dag == Dag::empty(rest)))
            return res;
        res.I.push_back(c.entries()[0].second);
    }
    std::sort(res.I.begin(), res.I.end());
    if (static_cast<int>(res.I.size()) >= tree.system.card(var))
        return res;
    res.context_var = var;
    if (res.g1_complete)
        res.kind = var == 2 ? TreeKind::Family1 : TreeKind::Family2;
    else
        res.kind = var == 2 ? TreeKind::Family3 : TreeKind::Family4;
    return res;
}

bool all_contexts_perfect(const std::vector<ContextDag>& contexts) {
    return std::all_of(contexts.begin(), contexts.end(), [](const ContextDag& c) { return is_perfect(c.dag); });
}

namespace {

struct TreeResult {
    bool balanced = false;
    bool perfect = false;
    TreeKind kind = TreeKind::Unclassified;
};

std::string describe(const CStreeSpec& tree) {
    std::string s;
    for (int k = 1; k <= tree.p(); ++k) {
        s += "L" + std::to_string(k) + "{";
        bool first = true;
        for (const Context& c : tree.stages(k)) {
            s += (first ? "" : ";") + c.to_string();
            first = false;
        }
        s += "}";
    }
    return s;
}

}  // namespace

LabReport run_lab(const VariableSystem& sys, const LabOptions& opts) {
    std::vector<CStreeSpec> trees = enumerate_cstrees(sys, opts.budget);
    if (opts.classify && sys.p != 3)
        fail(Errc::NotP3, "classification needs p = 3, got p = " + std::to_string(sys.p));
    std::function<bool(const CStreeSpec&)> oracle = opts.balance_oracle;
    if (!oracle)
        oracle = [](const CStreeSpec& t) { return is_balanced(t).balanced; };

    std::vector<TreeResult> res(trees.size());
    const long n = static_cast<long>(trees.size());
#pragma omp parallel for schedule(dynamic) if (opts.exec == Exec::Parallel)
    for (long i = 0; i < n; ++i) {
        const CStreeSpec& t = trees[static_cast<std::size_t>(i)];
        TreeResult& r = res[static_cast<std::size_t>(i)];
        r.balanced = oracle(t);
        r.perfect = all_contexts_perfect(minimal_contexts(t, Exec::Serial));
        if (opts.classify)
            r.kind = classify_p3(t).kind;
    }

    LabReport rep;
    rep.total = trees.size();
    bool equivalence = opts.check_equivalence && sys.p == 3;
    for (std::size_t i = 0; i < trees.size(); ++i) {
        const TreeResult& r = res[i];
        rep.balanced += r.balanced;
        rep.perfect_contexts += r.perfect;
        if (r.balanced && !r.perfect)
            ++rep.nonperfect_balanced;
        if (r.perfect && !r.balanced)
            rep.violations.push_back("perfect but not balanced: " + describe(trees[i]));
        else if (equivalence && r.balanced && !r.perfect)
            rep.violations.push_back("balanced but not perfect: " + describe(trees[i]));
        if (opts.classify) {
            ++rep.classification_histogram[tree_kind_name(r.kind)];
            if (r.kind == TreeKind::Unclassified)
                rep.violations.push_back("unclassified: " + describe(trees[i]));
        }
    }
    return rep;
}

LabReport check_theorem_p3(const VariableSystem& sys, const LabOptions& opts) {
    if (sys.p != 3)
        fail(Errc::NotP3, "the p = 3 equivalence needs p = 3, got p = " + std::to_string(sys.p));
    LabOptions o = opts;
    o.check_equivalence = true;
    return run_lab(sys, o);
}

std::vector<CStreeSpec> find_nonperfect_balanced(const VariableSystem& sys, std::size_t budget, Exec exec) {
    std::vector<CStreeSpec> trees = enumerate_cstrees(sys, budget);
    std::vector<char> hit(trees.size(), 0);
    const long n = static_cast<long>(trees.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
    for (long i = 0; i < n; ++i) {
        const CStreeSpec& t = trees[static_cast<std::size_t>(i)];
        hit[static_cast<std::size_t>(i)] =
            is_balanced(t).balanced && !all_contexts_perfect(minimal_contexts(t, Exec::Serial));
    }
    std::vector<CStreeSpec> out;
    for (std::size_t i = 0; i < trees.size(); ++i)
        if (hit[i])
            out.push_back(trees[i]);
    return out;
}

}  // namespace cstree
