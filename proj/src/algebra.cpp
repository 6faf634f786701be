#include "cstree/algebra.hpp"

#include <random>

#include "cstree/error.hpp"

namespace cstree {

Labeling::Labeling(const CStreeSpec& tree) : tree_(tree) {
    const VariableSystem& sys = tree_.system;
    for (int k = 1; k <= sys.p; ++k) {
        const auto& listed = tree_.stages(k);
        std::size_t n = sys.prefix_count(k - 1);
        std::vector<int> ids(n, -1);
        std::vector<int> listed_id(listed.size(), -1);
        int next = 0;
        for (std::size_t idx = 0; idx < n; ++idx) {
            Outcome y = prefix_outcome(sys, k - 1, idx);
            int found = -1;
            for (std::size_t s = 0; s < listed.size(); ++s)
                if (listed[s].matches_prefix(y)) {
                    found = static_cast<int>(s);
                    break;
                }
            if (found < 0) {
                ids[idx] = next++;
            } else {
                if (listed_id[static_cast<std::size_t>(found)] < 0)
                    listed_id[static_cast<std::size_t>(found)] = next++;
                ids[idx] = listed_id[static_cast<std::size_t>(found)];
            }
        }
        stage_.push_back(std::move(ids));
        counts_.push_back(next);
        offset_.push_back(total_);
        total_ += static_cast<std::size_t>(next) * static_cast<std::size_t>(sys.card(k));
    }
}

int Labeling::stage_index(const Outcome& vertex) const {
    int k = static_cast<int>(vertex.size()) + 1;
    if (k > tree_.p())
        fail(Errc::BadIndex, "leaf " + outcome_string(vertex) + " has no stage");
    return stage_index(k, prefix_index(tree_.system, vertex));
}

VarId Labeling::label(int k, int stage, int s) const {
    return static_cast<VarId>(offset_[k - 1] + static_cast<std::size_t>(stage) * static_cast<std::size_t>(tree_.system.card(k)) +
                              static_cast<std::size_t>(s));
}

LabelInfo Labeling::info(VarId label) const {
    int k = tree_.p();
    while (k > 1 && offset_[k - 1] > label)
        --k;
    std::size_t rel = label - offset_[k - 1];
    auto d = static_cast<std::size_t>(tree_.system.card(k));
    return LabelInfo{k, static_cast<int>(rel / d), static_cast<int>(rel % d)};
}

std::string Labeling::name(VarId label) const {
    LabelInfo i = info(label);
    return "t" + std::to_string(i.level) + "." + std::to_string(i.stage) + "." + std::to_string(i.outcome);
}

std::vector<std::size_t> Labeling::stage_members(int k, int stage) const {
    std::vector<std::size_t> out;
    const auto& ids = stage_[k - 1];
    for (std::size_t i = 0; i < ids.size(); ++i)
        if (ids[i] == stage)
            out.push_back(i);
    return out;
}

VarId pvar(const VariableSystem& sys, const Outcome& x) {
    if (static_cast<int>(x.size()) != sys.p)
        fail(Errc::BadIndex, "probability coordinate needs a full outcome");
    for (int v = 1; v <= sys.p; ++v)
        if (x[v - 1] < 0 || x[v - 1] >= sys.card(v))
            fail(Errc::BadIndex, "outcome " + outcome_string(x) + " out of range");
    return static_cast<VarId>(prefix_index(sys, x));
}

std::string pvar_name(const VariableSystem& sys, VarId v) {
    return "p" + outcome_string(prefix_outcome(sys, sys.p, v));
}

const SparsePoly& Interpolator::t(const Outcome& vertex) {
    const CStreeSpec& tree = lab_.tree();
    std::size_t len = vertex.size();
    if (memo_.empty())
        memo_.resize(static_cast<std::size_t>(tree.p()) + 1);
    if (len > static_cast<std::size_t>(tree.p()))
        fail(Errc::BadIndex, "vertex " + outcome_string(vertex) + " is deeper than the tree");
    std::size_t idx = prefix_index(tree.system, vertex);
    auto& level = memo_[len];
    if (auto it = level.find(idx); it != level.end())
        return it->second;
    SparsePoly out;
    if (len == static_cast<std::size_t>(tree.p())) {
        out = SparsePoly::constant(1);
    } else {
        int k = static_cast<int>(len) + 1;
        int stage = lab_.stage_index(k, idx);
        Outcome child = vertex;
        child.push_back(0);
        for (int s = 0; s < tree.system.card(k); ++s) {
            child.back() = s;
            out += SparsePoly::var(lab_.label(k, stage, s)) * t(child);
        }
    }
    return memo_[len].emplace(idx, std::move(out)).first->second;
}

SparsePoly interpolant(const CStreeSpec& tree, const Outcome& vertex) {
    Interpolator it(tree);
    return it.t(vertex);
}

namespace {

std::optional<BalanceWitness> check_pair(Interpolator& ip, const Outcome& v, const Outcome& w, int d) {
    Outcome vs = v, ws = w, vr = v, wr = w;
    vs.push_back(0);
    ws.push_back(0);
    vr.push_back(0);
    wr.push_back(0);
    for (int s = 0; s < d; ++s) {
        for (int r = s + 1; r < d; ++r) {
            vs.back() = ws.back() = s;
            vr.back() = wr.back() = r;
            SparsePoly lhs = ip.t(vs) * ip.t(wr);
            SparsePoly rhs = ip.t(vr) * ip.t(ws);
            if (lhs != rhs)
                return BalanceWitness{v, w, s, r, std::move(lhs), std::move(rhs)};
        }
    }
    return std::nullopt;
}

}  // namespace

bool balanced_pair(const CStreeSpec& tree, const Outcome& v, const Outcome& w) {
    Interpolator ip(tree);
    if (v.size() != w.size() || ip.labeling().stage_index(v) != ip.labeling().stage_index(w))
        fail(Errc::NotSameStage, outcome_string(v) + " and " + outcome_string(w) + " are not in the same stage");
    int k = static_cast<int>(v.size()) + 1;
    return !check_pair(ip, v, w, tree.system.card(k));
}

BalanceReport is_balanced(const CStreeSpec& tree, BalanceMode mode) {
    Interpolator ip(tree);
    const Labeling& lab = ip.labeling();
    const VariableSystem& sys = tree.system;
    BalanceReport rep;
    for (int k = 1; k <= sys.p; ++k) {
        int d = sys.card(k);
        for (int st = 0; st < lab.stage_count(k); ++st) {
            std::vector<std::size_t> members = lab.stage_members(k, st);
            for (std::size_t a = 0; a < members.size(); ++a) {
                for (std::size_t b = a + 1; b < members.size(); ++b) {
                    Outcome v = prefix_outcome(sys, k - 1, members[a]);
                    Outcome w = prefix_outcome(sys, k - 1, members[b]);
                    ++rep.pairs_checked;
                    if (auto wit = check_pair(ip, v, w, d)) {
                        rep.balanced = false;
                        rep.witness = std::move(wit);
                        return rep;
                    }
                }
                if (mode == BalanceMode::Representative)
                    break;
            }
        }
    }
    return rep;
}

Monomial psi_monomial(const Labeling& lab, const Outcome& x) {
    const VariableSystem& sys = lab.tree().system;
    pvar(sys, x);
    std::vector<Monomial::Factor> f;
    std::size_t idx = 0;
    for (int k = 1; k <= sys.p; ++k) {
        int st = lab.stage_index(k, idx);
        f.emplace_back(lab.label(k, st, x[k - 1]), 1);
        idx = idx * static_cast<std::size_t>(sys.card(k)) + static_cast<std::size_t>(x[k - 1]);
    }
    return Monomial::of(std::move(f));
}

Monomial psi_monomial(const CStreeSpec& tree, const Outcome& x) {
    return psi_monomial(Labeling(tree), x);
}

Context MarginalQuadric::cell(const Outcome& a, const Outcome& b) const {
    return Context::over(A, a).merged(Context::over(B, b)).merged(Context::over(S, xS)).merged(ctx);
}

SparsePoly marginal_coordinate(const VariableSystem& sys, const Context& fixed) {
    SparsePoly out;
    for (const Outcome& x : cylinder_members(sys, sys.p + 1, fixed))
        out.add_term(Monomial::var(pvar(sys, x)), 1);
    return out;
}

SparsePoly MarginalQuadric::expand(const VariableSystem& sys) const {
    SparsePoly m1 = marginal_coordinate(sys, cell(xA, xB));
    SparsePoly m2 = marginal_coordinate(sys, cell(yA, yB));
    SparsePoly m3 = marginal_coordinate(sys, cell(xA, yB));
    SparsePoly m4 = marginal_coordinate(sys, cell(yA, xB));
    return m1 * m2 - m3 * m4;
}

std::vector<MarginalQuadric> statement_quadrics(const CsiStatement& st, const VariableSystem& sys) {
    check_statement(st, sys);
    std::vector<Outcome> ra = all_outcomes(sys, st.A);
    std::vector<Outcome> rb = all_outcomes(sys, st.B);
    std::vector<Outcome> rs = all_outcomes(sys, st.S);
    std::vector<MarginalQuadric> out;
    for (const Outcome& xs : rs)
        for (std::size_t a1 = 0; a1 < ra.size(); ++a1)
            for (std::size_t a2 = a1 + 1; a2 < ra.size(); ++a2)
                for (std::size_t b1 = 0; b1 < rb.size(); ++b1)
                    for (std::size_t b2 = b1 + 1; b2 < rb.size(); ++b2)
                        out.push_back(MarginalQuadric{st.A, st.B, st.S, ra[a1], ra[a2], rb[b1], rb[b2], xs, st.ctx});
    return out;
}

std::vector<SparsePoly> statement_polynomials(const CsiStatement& st, const VariableSystem& sys) {
    std::vector<SparsePoly> out;
    for (const MarginalQuadric& q : statement_quadrics(st, sys)) {
        SparsePoly f = q.expand(sys);
        if (!f.is_zero())
            out.push_back(std::move(f));
    }
    return out;
}

VanishingOracle::VanishingOracle(const CStreeSpec& tree) : lab_(tree) {}

SparsePoly VanishingOracle::free_image(const SparsePoly& poly) const {
    const VariableSystem& sys = lab_.tree().system;
    SparsePoly out;
    for (const auto& [m, c] : poly.terms()) {
        Monomial img;
        for (const auto& [v, e] : m.factors()) {
            Monomial psi = psi_monomial(lab_, prefix_outcome(sys, sys.p, v));
            for (std::uint32_t t = 0; t < e; ++t)
                img = img * psi;
        }
        out.add_term(img, c);
    }
    return out;
}

const SparsePoly& VanishingOracle::reduced_label(VarId label) {
    if (auto it = reduced_label_.find(label); it != reduced_label_.end())
        return it->second;
    LabelInfo i = lab_.info(label);
    int d = lab_.tree().system.card(i.level);
    SparsePoly img;
    if (i.outcome == d - 1) {
        img = SparsePoly::constant(1);
        for (int s = 0; s < d - 1; ++s)
            img -= SparsePoly::var(lab_.label(i.level, i.stage, s));
    } else {
        img = SparsePoly::var(label);
    }
    return reduced_label_.emplace(label, std::move(img)).first->second;
}

SparsePoly VanishingOracle::reduce(const SparsePoly& poly) {
    return poly.substitute([&](VarId label) -> const SparsePoly* {
        LabelInfo i = lab_.info(label);
        if (i.outcome != lab_.tree().system.card(i.level) - 1)
            return nullptr;
        return &reduced_label(label);
    });
}

bool VanishingOracle::vanishes(const SparsePoly& poly) {
    SparsePoly free = free_image(poly);
    if (free.is_zero())
        return true;
    return reduce(free).is_zero();
}

SparsePoly VanishingOracle::reduced_marginal(const Context& fixed) {
    if (auto it = marginal_.find(fixed); it != marginal_.end())
        return it->second;
    const VariableSystem& sys = lab_.tree().system;
    SparsePoly sum;
    for (const Outcome& x : cylinder_members(sys, sys.p + 1, fixed)) {
        SparsePoly prod = SparsePoly::constant(1);
        for (const auto& [label, e] : psi_monomial(lab_, x).factors())
            prod *= reduced_label(label);
        sum += prod;
    }
    return marginal_.emplace(fixed, std::move(sum)).first->second;
}

bool VanishingOracle::statement_holds(const CsiStatement& st) {
    for (const MarginalQuadric& q : statement_quadrics(st, lab_.tree().system)) {
        SparsePoly lhs = reduced_marginal(q.cell(q.xA, q.xB)) * reduced_marginal(q.cell(q.yA, q.yB));
        SparsePoly rhs = reduced_marginal(q.cell(q.xA, q.yB)) * reduced_marginal(q.cell(q.yA, q.xB));
        if (lhs != rhs)
            return false;
    }
    return true;
}

bool vanishes(const CStreeSpec& tree, const SparsePoly& poly) {
    VanishingOracle o(tree);
    return o.vanishes(poly);
}

bool statement_holds(const CStreeSpec& tree, const CsiStatement& st) {
    VanishingOracle o(tree);
    return o.statement_holds(st);
}

RandomPoint::RandomPoint(const CStreeSpec& tree, std::uint64_t seed) : lab_(tree) {
    const VariableSystem& sys = tree.system;
    std::mt19937_64 rng(seed);
    theta_.resize(lab_.label_count());
    for (int k = 1; k <= sys.p; ++k) {
        int d = sys.card(k);
        for (int st = 0; st < lab_.stage_count(k); ++st) {
            std::vector<long> num(static_cast<std::size_t>(d));
            long total = 0;
            for (int s = 0; s < d; ++s) {
                num[static_cast<std::size_t>(s)] = 1 + static_cast<long>(rng() % 97);
                total += num[static_cast<std::size_t>(s)];
            }
            for (int s = 0; s < d; ++s) {
                Rational q(num[static_cast<std::size_t>(s)], total);
                q.canonicalize();
                theta_[lab_.label(k, st, s)] = q;
            }
        }
    }
    std::size_t n = sys.prefix_count(sys.p);
    p_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        Rational v = 1;
        for (const auto& [label, e] : psi_monomial(lab_, prefix_outcome(sys, sys.p, i)).factors())
            for (std::uint32_t t = 0; t < e; ++t)
                v *= theta_[label];
        p_[i] = v;
    }
}

Rational RandomPoint::p(VarId outcome) const {
    return p_.at(outcome);
}

Rational RandomPoint::evaluate(const SparsePoly& poly) const {
    return poly.evaluate([&](VarId v) { return p_.at(v); });
}

}  // namespace cstree
