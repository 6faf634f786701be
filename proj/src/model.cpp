#include "cstree/model.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "cstree/dag.hpp"
#include "cstree/error.hpp"

namespace cstree {

std::size_t cylinder_size(const VariableSystem& sys, int k, const Context& ctx) {
    return sys.outcome_count(VarSet::range(1, k - 1) - ctx.keys());
}

std::vector<Outcome> cylinder_members(const VariableSystem& sys, int k, const Context& ctx) {
    VarSet free = VarSet::range(1, k - 1) - ctx.keys();
    std::vector<Outcome> out;
    for (const Outcome& z : all_outcomes(sys, free)) {
        Outcome x(static_cast<std::size_t>(k - 1));
        std::size_t i = 0;
        for (int v = 1; v < k; ++v)
            x[v - 1] = free.contains(v) ? z[i++] : ctx.value(v);
        out.push_back(std::move(x));
    }
    return out;
}

namespace {

std::string level_name(int k) {
    return "level " + std::to_string(k);
}

Context cylinder_of_members(const VariableSystem& sys, int k, const std::vector<std::string>& members) {
    if (members.empty())
        fail(Errc::NotACylinder, level_name(k) + ": empty stage");
    std::set<Outcome> set;
    for (const std::string& m : members) {
        Outcome x = parse_outcome(m);
        if (static_cast<int>(x.size()) != k - 1)
            fail(Errc::BadIndex, level_name(k) + ": member '" + m + "' should have " + std::to_string(k - 1) + " digits");
        for (int v = 1; v < k; ++v)
            if (x[v - 1] >= sys.card(v))
                fail(Errc::BadIndex, level_name(k) + ": member '" + m + "' has an outcome out of range for X" + std::to_string(v));
        set.insert(std::move(x));
    }
    const Outcome& first = *set.begin();
    std::vector<Context::Entry> fixed;
    for (int v = 1; v < k; ++v) {
        bool constant = std::all_of(set.begin(), set.end(), [&](const Outcome& x) { return x[v - 1] == first[v - 1]; });
        if (constant)
            fixed.emplace_back(v, first[v - 1]);
    }
    Context ctx(std::move(fixed));
    if (cylinder_size(sys, k, ctx) != set.size()) {
        std::string list;
        for (const Outcome& x : set)
            list += (list.empty() ? "" : ",") + outcome_string(x);
        fail(Errc::NotACylinder, level_name(k) + ": stage {" + list + "} is not a context cylinder");
    }
    return ctx;
}

std::size_t min_member(const VariableSystem& sys, int k, const Context& ctx) {
    Outcome x(static_cast<std::size_t>(k - 1), 0);
    for (const auto& [v, val] : ctx.entries())
        x[v - 1] = val;
    return prefix_index(sys, x);
}

// Checks one level's cylinders and returns them in canonical form.
std::vector<Context> canonical_level(const VariableSystem& sys, int k, std::vector<Context> stages, bool complete) {
    VarSet prefix = VarSet::range(1, k - 1);
    for (const Context& c : stages) {
        if (!c.keys().subset_of(prefix))
            fail(Errc::BadIndex, level_name(k) + ": context " + c.to_string() + " mentions a variable outside [" +
                                     std::to_string(k - 1) + "]");
        c.check(sys);
    }
    for (std::size_t i = 0; i < stages.size(); ++i)
        for (std::size_t j = i + 1; j < stages.size(); ++j)
            if (stages[i].consistent_with(stages[j]))
                fail(Errc::Overlap, level_name(k) + ": stages {" + stages[i].to_string() + "} and {" +
                                        stages[j].to_string() + "} intersect");
    if (complete) {
        std::size_t covered = 0;
        for (const Context& c : stages)
            covered += cylinder_size(sys, k, c);
        if (covered != sys.prefix_count(k - 1))
            fail(Errc::Gap, level_name(k) + ": stages cover " + std::to_string(covered) + " of " +
                                std::to_string(sys.prefix_count(k - 1)) + " vertices");
    }
    std::erase_if(stages, [&](const Context& c) { return c.keys() == prefix; });
    std::sort(stages.begin(), stages.end(), [&](const Context& a, const Context& b) {
        return min_member(sys, k, a) < min_member(sys, k, b);
    });
    return stages;
}

std::vector<int> identity_origin(int p) {
    std::vector<int> o(static_cast<std::size_t>(p));
    std::iota(o.begin(), o.end(), 1);
    return o;
}

}  // namespace

CStreeSpec validate(const RawSpec& raw) {
    const VariableSystem& sys = raw.system;
    sys.check();
    std::vector<std::vector<Context>> stages(static_cast<std::size_t>(sys.p));
    std::vector<bool> complete(static_cast<std::size_t>(sys.p), false);
    for (const RawLevel& lvl : raw.levels) {
        int k = lvl.level;
        if (k < 1 || k > sys.p)
            fail(Errc::BadIndex, "level " + std::to_string(k) + " outside [1, " + std::to_string(sys.p) + "]");
        for (const RawStage& st : lvl.stages) {
            if (st.context)
                stages[k - 1].push_back(*st.context);
            else
                stages[k - 1].push_back(cylinder_of_members(sys, k, st.members));
        }
        if (lvl.complete)
            complete[k - 1] = true;
    }
    CStreeSpec tree;
    tree.system = sys;
    tree.origin = identity_origin(sys.p);
    for (int k = 1; k <= sys.p; ++k)
        tree.levels.push_back(canonical_level(sys, k, std::move(stages[k - 1]), complete[k - 1]));
    return tree;
}

CStreeSpec make_cstree(const VariableSystem& sys, const std::vector<std::vector<Context>>& levels) {
    RawSpec raw;
    raw.system = sys;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        RawLevel lvl;
        lvl.level = static_cast<int>(i) + 1;
        for (const Context& c : levels[i])
            lvl.stages.push_back(RawStage{c, {}});
        raw.levels.push_back(std::move(lvl));
    }
    return validate(raw);
}

Stage stage_of(const CStreeSpec& tree, const Outcome& vertex) {
    int k = static_cast<int>(vertex.size()) + 1;
    if (k > tree.p())
        fail(Errc::BadIndex, "vertex " + outcome_string(vertex) + " is a leaf; leaves carry no stage");
    for (int v = 1; v < k; ++v)
        if (vertex[v - 1] < 0 || vertex[v - 1] >= tree.system.card(v))
            fail(Errc::BadIndex, "vertex " + outcome_string(vertex) + " has an outcome out of range for X" + std::to_string(v));
    for (const Context& c : tree.stages(k))
        if (c.matches_prefix(vertex))
            return Stage{k, c};
    return Stage{k, Context::of_prefix(vertex)};
}

std::optional<CsiStatement> stage_statement(const Stage& stage) {
    if (stage.singleton())
        return std::nullopt;
    VarSet rest = VarSet::range(1, stage.level - 1) - stage.context.keys();
    return make_statement(VarSet{stage.level}, rest, {}, stage.context);
}

CStreeSpec tree_of_dag(const Dag& dag, const VariableSystem& sys) {
    sys.check();
    if (dag.vertex_set() != sys.all())
        fail(Errc::BadGraph, "DAG vertex set must be [" + std::to_string(sys.p) + "]");
    std::vector<std::vector<Context>> levels;
    for (int k = 1; k <= sys.p; ++k) {
        VarSet pa = dag.parents(k);
        std::vector<Context> lvl;
        if (pa != VarSet::range(1, k - 1))
            for (const Outcome& x : all_outcomes(sys, pa))
                lvl.push_back(Context::over(pa, x));
        levels.push_back(std::move(lvl));
    }
    return make_cstree(sys, levels);
}

CStreeSpec context_subtree(const CStreeSpec& tree, const Context& ctx) {
    ctx.check(tree.system);
    VarSet C = ctx.keys();
    VarSet keep = tree.system.all() - C;
    if (keep.empty())
        fail(Errc::BadIndex, "context " + ctx.to_string() + " fixes every variable");
    std::vector<int> renum(static_cast<std::size_t>(tree.p()) + 1, 0);
    std::vector<int> cards, origin;
    for (int v : keep) {
        cards.push_back(tree.system.card(v));
        origin.push_back(tree.origin.at(static_cast<std::size_t>(v) - 1));
        renum[v] = static_cast<int>(cards.size());
    }
    VariableSystem sys(cards);
    std::vector<std::vector<Context>> levels;
    for (int k : keep) {
        std::vector<Context> lvl;
        for (const Context& d : tree.stages(k)) {
            if (!d.consistent_with(ctx))
                continue;
            std::vector<Context::Entry> e;
            for (const auto& [v, val] : d.without(C).entries())
                e.emplace_back(renum[v], val);
            Context restricted(std::move(e));
            if (restricted.keys() != VarSet::range(1, renum[k] - 1))
                lvl.push_back(std::move(restricted));
        }
        levels.push_back(std::move(lvl));
    }
    CStreeSpec out = make_cstree(sys, levels);
    out.origin = std::move(origin);
    return out;
}

CStreeSpec relabel_outcomes(const CStreeSpec& tree, int var, const std::vector<int>& perm) {
    if (var < 1 || var > tree.p() || static_cast<int>(perm.size()) != tree.system.card(var))
        fail(Errc::BadIndex, "bad outcome relabeling for X" + std::to_string(var));
    std::vector<int> check = perm;
    std::sort(check.begin(), check.end());
    for (std::size_t i = 0; i < check.size(); ++i)
        if (check[i] != static_cast<int>(i))
            fail(Errc::BadIndex, "relabeling is not a permutation");
    std::vector<std::vector<Context>> levels;
    for (const auto& lvl : tree.levels) {
        std::vector<Context> out;
        for (const Context& c : lvl) {
            std::vector<Context::Entry> e = c.entries();
            for (auto& [v, val] : e)
                if (v == var)
                    val = perm[static_cast<std::size_t>(val)];
            out.emplace_back(std::move(e));
        }
        levels.push_back(std::move(out));
    }
    CStreeSpec res = make_cstree(tree.system, levels);
    res.origin = tree.origin;
    return res;
}

}  // namespace cstree
