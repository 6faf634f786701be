#include "cstree/csi.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

#include "cstree/error.hpp"

namespace cstree {

CsiStatement canonicalize(CsiStatement st) {
    if (!st.A.empty() && !st.B.empty() && st.B.min() < st.A.min())
        std::swap(st.A, st.B);
    return st;
}

CsiStatement make_statement(VarSet A, VarSet B, VarSet S, Context ctx) {
    if (A.empty() || B.empty())
        fail(Errc::OverlappingSets, "both sides of an independence statement must be nonempty");
    VarSet C = ctx.keys();
    if (!A.disjoint(B) || !A.disjoint(S) || !A.disjoint(C) || !B.disjoint(S) || !B.disjoint(C) || !S.disjoint(C))
        fail(Errc::OverlappingSets, "sets A, B, S, C of a statement must be pairwise disjoint");
    if (A.contains(0) || B.contains(0) || S.contains(0))
        fail(Errc::BadIndex, "variable indices start at 1");
    return canonicalize(CsiStatement{A, B, S, std::move(ctx)});
}

bool is_saturated(const CsiStatement& st, const VariableSystem& sys) {
    return (st.A | st.B | st.S | st.ctx.keys()) == sys.all();
}

void check_statement(const CsiStatement& st, const VariableSystem& sys) {
    VarSet all = st.A | st.B | st.S;
    if (!all.subset_of(sys.all()))
        fail(Errc::BadIndex, "statement " + to_string(st) + " mentions a variable outside [p]");
    st.ctx.check(sys);
}

bool statement_less(const CsiStatement& a, const CsiStatement& b) {
    if (a.ctx != b.ctx)
        return a.ctx < b.ctx;
    auto key = [](const CsiStatement& s) {
        return std::make_tuple(s.A.to_vector(), s.B.to_vector(), s.S.to_vector());
    };
    return key(a) < key(b);
}

const char* axiom_name(Axiom a) {
    switch (a) {
    case Axiom::Symmetry: return "symmetry";
    case Axiom::Decomposition: return "decomposition";
    case Axiom::WeakUnion: return "weak-union";
    case Axiom::Contraction: return "contraction";
    case Axiom::Intersection: return "intersection";
    case Axiom::Specialization: return "specialization";
    case Axiom::Absorption: return "absorption";
    }
    return "?";
}

namespace {

// A statement viewed with a chosen side as "A".
struct Oriented {
    VarSet A, B, S;
    const Context* ctx;
};

Oriented orient(const CsiStatement& s, bool flip) {
    return flip ? Oriented{s.B, s.A, s.S, &s.ctx} : Oriented{s.A, s.B, s.S, &s.ctx};
}

[[noreturn]] void mismatch(Axiom a, const std::string& why) {
    fail(Errc::ShapeMismatch, std::string(axiom_name(a)) + ": " + why);
}

void need_inputs(Axiom a, std::span<const CsiStatement> in, std::size_t n) {
    if (in.size() != n)
        mismatch(a, "expected " + std::to_string(n) + " input statement(s), got " + std::to_string(in.size()));
}

CsiStatement split_side(Axiom a, const CsiStatement& s, VarSet D, bool move_to_s) {
    if (D.empty())
        mismatch(a, "the removed set must be nonempty");
    for (bool flip : {false, true}) {
        Oriented o = orient(s, flip);
        if (D.subset_of(o.B) && D != o.B) {
            VarSet S = move_to_s ? (o.S | D) : o.S;
            return make_statement(o.A, o.B - D, S, *o.ctx);
        }
    }
    mismatch(a, "set {" + D.to_string() + "} is not a proper subset of either side of " + to_string(s));
}

CsiStatement contraction(std::span<const CsiStatement> in) {
    // X_A _||_ X_B | X_{S u D}  and  X_A _||_ X_D | X_S  =>  X_A _||_ X_{B u D} | X_S
    const CsiStatement& s1 = in[0];
    const CsiStatement& s2 = in[1];
    if (s1.ctx != s2.ctx)
        mismatch(Axiom::Contraction, "contexts differ");
    for (bool f1 : {false, true}) {
        for (bool f2 : {false, true}) {
            Oriented a = orient(s1, f1);
            Oriented b = orient(s2, f2);
            if (a.A != b.A)
                continue;
            VarSet D = b.B;
            if (a.S != (b.S | D) || !b.S.disjoint(D))
                continue;
            return make_statement(a.A, a.B | D, b.S, s1.ctx);
        }
    }
    mismatch(Axiom::Contraction, "inputs " + to_string(s1) + " and " + to_string(s2) + " do not chain");
}

CsiStatement intersection(std::span<const CsiStatement> in) {
    // X_A _||_ X_B | X_{S u D}  and  X_A _||_ X_S | X_{B u D}  =>  X_A _||_ X_{B u S} | X_D
    const CsiStatement& s1 = in[0];
    const CsiStatement& s2 = in[1];
    if (s1.ctx != s2.ctx)
        mismatch(Axiom::Intersection, "contexts differ");
    for (bool f1 : {false, true}) {
        for (bool f2 : {false, true}) {
            Oriented a = orient(s1, f1);
            Oriented b = orient(s2, f2);
            if (a.A != b.A)
                continue;
            VarSet B = a.B;
            VarSet S = b.B;
            VarSet D = a.S - S;
            if (a.S != (S | D) || b.S != (B | D))
                continue;
            return make_statement(a.A, B | S, D, s1.ctx);
        }
    }
    mismatch(Axiom::Intersection, "inputs " + to_string(s1) + " and " + to_string(s2) + " do not match");
}

CsiStatement specialization(const VariableSystem& sys, const CsiStatement& s, const AxiomArgs& args) {
    VarSet T = args.subset;
    if (!T.subset_of(s.S))
        mismatch(Axiom::Specialization, "T must be a subset of the conditioning set");
    if (args.values.keys() != T)
        mismatch(Axiom::Specialization, "values must assign exactly the variables of T");
    args.values.check(sys);
    return make_statement(s.A, s.B, s.S - T, s.ctx.merged(args.values));
}

CsiStatement absorption(const VariableSystem& sys, std::span<const CsiStatement> in, const AxiomArgs& args) {
    VarSet T = args.subset;
    if (in.empty())
        mismatch(Axiom::Absorption, "empty family");
    const CsiStatement& first = in.front();
    if (!T.subset_of(first.ctx.keys()))
        mismatch(Axiom::Absorption, "T must be a subset of the context variables");
    Context rest = first.ctx.without(T);
    std::vector<Outcome> seen;
    for (const CsiStatement& s : in) {
        if (s.A != first.A || s.B != first.B || s.S != first.S || s.ctx.keys() != first.ctx.keys() ||
            s.ctx.without(T) != rest)
            mismatch(Axiom::Absorption, "family members differ outside T: " + to_string(s));
        seen.push_back(s.ctx.restrict_to(T).values());
    }
    std::sort(seen.begin(), seen.end());
    seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
    if (seen.size() != sys.outcome_count(T))
        fail(Errc::IncompleteFamily, "absorption over {" + T.to_string() + "} needs all " +
                                         std::to_string(sys.outcome_count(T)) + " outcomes, got " +
                                         std::to_string(seen.size()));
    return make_statement(first.A, first.B, first.S | T, rest);
}

}  // namespace

CsiStatement apply_axiom(const VariableSystem& sys, Axiom axiom, std::span<const CsiStatement> inputs,
                         const AxiomArgs& args) {
    switch (axiom) {
    case Axiom::Symmetry:
        need_inputs(axiom, inputs, 1);
        return canonicalize(inputs[0]);
    case Axiom::Decomposition:
        need_inputs(axiom, inputs, 1);
        return split_side(axiom, inputs[0], args.subset, false);
    case Axiom::WeakUnion:
        need_inputs(axiom, inputs, 1);
        return split_side(axiom, inputs[0], args.subset, true);
    case Axiom::Contraction:
        need_inputs(axiom, inputs, 2);
        return contraction(inputs);
    case Axiom::Intersection:
        need_inputs(axiom, inputs, 2);
        return intersection(inputs);
    case Axiom::Specialization:
        need_inputs(axiom, inputs, 1);
        return specialization(sys, inputs[0], args);
    case Axiom::Absorption:
        return absorption(sys, inputs, args);
    }
    mismatch(axiom, "unknown axiom");
}

CsiStatement cstree_rule(const CsiStatement& s1, const CsiStatement& s2) {
    auto shape = [](const std::string& why) -> CsiStatement { fail(Errc::ShapeMismatch, "cstree rule: " + why); };
    if (!s1.S.empty() || !s2.S.empty())
        return shape("conditioning sets must be empty");
    for (bool f1 : {false, true}) {
        for (bool f2 : {false, true}) {
            Oriented a = orient(s1, f1);
            Oriented b = orient(s2, f2);
            if (a.A.size() != 1 || a.A != b.A)
                continue;
            int k = a.A.min();
            VarSet A = a.B;
            VarSet B = b.B;
            VarSet C = s1.ctx.keys() - B;
            if (!A.disjoint(B) || s1.ctx.keys() != (B | C) || s2.ctx.keys() != (A | C))
                continue;
            if ((A | B | C) != VarSet::range(1, k - 1))
                return shape("A, B, C must partition [" + std::to_string(k - 1) + "]");
            Context c1 = s1.ctx.restrict_to(C);
            if (c1 != s2.ctx.restrict_to(C))
                return shape("the shared context x_C differs");
            return make_statement(a.A, A | B, {}, c1);
        }
    }
    return shape("statements do not share a singleton side with complementary contexts");
}

std::string to_string(const CsiStatement& st) {
    std::string s = st.A.to_string() + " _||_ " + st.B.to_string();
    if (!st.S.empty())
        s += " | " + st.S.to_string();
    if (!st.ctx.empty())
        s += " [" + st.ctx.to_string() + "]";
    return s;
}

namespace {

VarSet parse_set(const std::string& text, const std::string& whole) {
    VarSet s;
    std::string tok;
    auto flush = [&] {
        if (tok.empty())
            return;
        int v = std::stoi(tok);
        if (v < 1 || v > VarSet::kMaxVar)
            fail(Errc::Parse, "variable out of range in '" + whole + "'");
        s.insert(v);
        tok.clear();
    };
    for (char c : text) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
            tok += c;
        } else if (c == ',' || c == ' ' || c == '\t') {
            flush();
        } else if (c == 'X' || c == 'x') {
            flush();
        } else {
            fail(Errc::Parse, "unexpected '" + std::string(1, c) + "' in statement '" + whole + "'");
        }
    }
    flush();
    return s;
}

}  // namespace

CsiStatement parse_statement(const std::string& text) {
    std::string body = text;
    Context ctx;
    std::size_t lb = body.find('[');
    if (lb != std::string::npos) {
        std::size_t rb = body.find(']', lb);
        if (rb == std::string::npos)
            fail(Errc::Parse, "unterminated context in '" + text + "'");
        ctx = parse_context(body.substr(lb + 1, rb - lb - 1));
        body = body.substr(0, lb);
    }
    std::size_t ind = body.find("_||_");
    if (ind == std::string::npos)
        fail(Errc::Parse, "missing '_||_' in '" + text + "'");
    std::string lhs = body.substr(0, ind);
    std::string rhs = body.substr(ind + 4);
    std::string cond;
    std::size_t bar = rhs.find('|');
    if (bar != std::string::npos) {
        cond = rhs.substr(bar + 1);
        rhs = rhs.substr(0, bar);
    }
    VarSet A = parse_set(lhs, text);
    VarSet B = parse_set(rhs, text);
    VarSet S = parse_set(cond, text);
    if (A.empty() || B.empty())
        fail(Errc::Parse, "empty side in '" + text + "'");
    return make_statement(A, B, S, ctx);
}

}  // namespace cstree

std::size_t std::hash<cstree::CsiStatement>::operator()(const cstree::CsiStatement& st) const noexcept {
    std::size_t h = std::hash<std::uint64_t>{}(st.A.bits());
    auto mix = [&](std::size_t v) { h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2); };
    mix(std::hash<std::uint64_t>{}(st.B.bits()));
    mix(std::hash<std::uint64_t>{}(st.S.bits()));
    for (const auto& [k, v] : st.ctx.entries())
        mix(static_cast<std::size_t>(k) * 131 + static_cast<std::size_t>(v));
    return h;
}
