#include "cstree/basis.hpp"

#include <algorithm>

#include "cstree/algebra.hpp"
#include "cstree/error.hpp"

namespace cstree {

std::optional<SaturatedBinomial> make_binomial(VarId u1, VarId u2, VarId v1, VarId v2, std::string source,
                                               std::string context) {
    std::array<VarId, 2> a{std::min(u1, u2), std::max(u1, u2)};
    std::array<VarId, 2> b{std::min(v1, v2), std::max(v1, v2)};
    if (a == b)
        return std::nullopt;
    if (b < a)
        std::swap(a, b);
    return SaturatedBinomial{a, b, std::move(source), std::move(context)};
}

std::optional<SaturatedBinomial> binomial_from_poly(const SparsePoly& f) {
    if (f.size() != 2)
        return std::nullopt;
    std::array<VarId, 2> pair[2];
    Integer coef[2];
    int i = 0;
    for (const auto& [m, c] : f.terms()) {
        if (m.degree() != 2)
            return std::nullopt;
        const auto& fs = m.factors();
        pair[i] = fs.size() == 1 ? std::array<VarId, 2>{fs[0].first, fs[0].first}
                                 : std::array<VarId, 2>{fs[0].first, fs[1].first};
        coef[i] = c;
        ++i;
    }
    if (!((coef[0] == 1 && coef[1] == -1) || (coef[0] == -1 && coef[1] == 1)))
        return std::nullopt;
    return make_binomial(pair[0][0], pair[0][1], pair[1][0], pair[1][1]);
}

SparsePoly to_poly(const SaturatedBinomial& b) {
    SparsePoly f;
    f.add_term(Monomial::of({{b.plus[0], 1}, {b.plus[1], 1}}), 1);
    f.add_term(Monomial::of({{b.minus[0], 1}, {b.minus[1], 1}}), -1);
    return f;
}

bool binomial_less(const SaturatedBinomial& a, const SaturatedBinomial& b) {
    return std::tie(a.plus, a.minus) < std::tie(b.plus, b.minus);
}

std::string to_text(const SaturatedBinomial& b, const VariableSystem& sys) {
    return pvar_name(sys, b.plus[0]) + "*" + pvar_name(sys, b.plus[1]) + " - " + pvar_name(sys, b.minus[0]) + "*" +
           pvar_name(sys, b.minus[1]);
}

std::vector<SaturatedBinomial> dedup_binomials(std::vector<SaturatedBinomial> bs) {
    std::stable_sort(bs.begin(), bs.end(), binomial_less);
    bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
    return bs;
}

namespace {

std::vector<SaturatedBinomial> binomials_of(const VariableSystem& sys, const std::vector<ContextDag>& contexts,
                                            bool perfect) {
    std::vector<SaturatedBinomial> out;
    for (const ContextDag& cd : contexts) {
        ContextDag g = perfect ? ContextDag{cd.context, to_perfect(cd.dag)} : cd;
        for (const CsiStatement& st : saturated_statements(g)) {
            for (const SparsePoly& f : statement_polynomials(st, sys)) {
                auto b = binomial_from_poly(f);
                if (!b)
                    fail(Errc::ShapeMismatch, "saturated statement " + to_string(st) + " produced a non-binomial");
                b->source = "sat";
                b->context = cd.context.to_string();
                out.push_back(*b);
            }
        }
    }
    return dedup_binomials(std::move(out));
}

}  // namespace

BasisResult markov_basis_saturated(const CStreeSpec& tree, const std::vector<ContextDag>& contexts) {
    return BasisResult{binomials_of(tree.system, contexts, false), !is_balanced(tree).balanced};
}

BasisResult perfect_context_basis(const CStreeSpec& tree, const std::vector<ContextDag>& contexts) {
    return BasisResult{binomials_of(tree.system, contexts, true), !is_balanced(tree).balanced};
}

std::vector<SaturatedBinomial> quad_lift_basis(const CStreeSpec& tree) {
    if (!is_balanced(tree).balanced)
        fail(Errc::Unbalanced, "quad-lift construction needs a balanced tree");
    Labeling lab(tree);
    const VariableSystem& sys = tree.system;
    std::vector<SaturatedBinomial> F;
    for (int m = 2; m <= sys.p; ++m) {
        auto d = static_cast<VarId>(sys.card(m));
        bool top = m == sys.p;
        std::vector<SaturatedBinomial> next;
        for (int st = 0; st < lab.stage_count(m); ++st) {
            std::vector<std::size_t> members = lab.stage_members(m, st);
            for (std::size_t a = 0; a < members.size(); ++a)
                for (std::size_t b = a + 1; b < members.size(); ++b)
                    for (VarId k1 = 0; k1 < d; ++k1)
                        for (VarId k2 = k1 + 1; k2 < d; ++k2) {
                            auto x = static_cast<VarId>(members[a]);
                            auto y = static_cast<VarId>(members[b]);
                            if (auto bin = make_binomial(x * d + k1, y * d + k2, x * d + k2, y * d + k1,
                                                         top ? "quad" : "lift"))
                                next.push_back(*bin);
                        }
        }
        for (const SaturatedBinomial& g : F) {
            auto stage = [&](VarId r) { return lab.stage_index(m, r); };
            VarId x1 = g.plus[0], y1 = g.plus[1];
            VarId x2, y2;
            if (stage(x1) == stage(g.minus[0]) && stage(y1) == stage(g.minus[1])) {
                x2 = g.minus[0];
                y2 = g.minus[1];
            } else if (stage(x1) == stage(g.minus[1]) && stage(y1) == stage(g.minus[0])) {
                x2 = g.minus[1];
                y2 = g.minus[0];
            } else {
                fail(Errc::Unbalanced, "binomial is not homogeneous for the level-" + std::to_string(m) + " stage grading");
            }
            for (VarId k1 = 0; k1 < d; ++k1)
                for (VarId k2 = 0; k2 < d; ++k2)
                    if (auto bin = make_binomial(x1 * d + k1, y1 * d + k2, x2 * d + k1, y2 * d + k2, "lift"))
                        next.push_back(*bin);
        }
        F = dedup_binomials(std::move(next));
    }
    return F;
}

std::vector<SaturatedBinomial> non_vanishing(const CStreeSpec& tree, const std::vector<SaturatedBinomial>& bs,
                                             Exec exec) {
    std::vector<char> bad(bs.size(), 0);
    const long n = static_cast<long>(bs.size());
#pragma omp parallel if (exec == Exec::Parallel)
    {
        VanishingOracle oracle(tree);
#pragma omp for schedule(dynamic)
        for (long i = 0; i < n; ++i)
            bad[static_cast<std::size_t>(i)] = !oracle.vanishes(to_poly(bs[static_cast<std::size_t>(i)]));
    }
    std::vector<SaturatedBinomial> out;
    for (std::size_t i = 0; i < bs.size(); ++i)
        if (bad[i])
            out.push_back(bs[i]);
    return out;
}

}  // namespace cstree
