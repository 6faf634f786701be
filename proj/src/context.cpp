#include "cstree/context.hpp"

#include <algorithm>
#include <cctype>

#include "cstree/error.hpp"

namespace cstree {

const char* errc_name(Errc code) {
    switch (code) {
    case Errc::NotACylinder: return "NotACylinder";
    case Errc::Overlap: return "Overlap";
    case Errc::Gap: return "Gap";
    case Errc::BadCardinality: return "BadCardinality";
    case Errc::BadIndex: return "BadIndex";
    case Errc::BadGraph: return "BadGraph";
    case Errc::OverlappingSets: return "OverlappingSets";
    case Errc::Precondition: return "Precondition";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::IncompleteFamily: return "IncompleteFamily";
    case Errc::NotSameStage: return "NotSameStage";
    case Errc::Unbalanced: return "UnbalancedError";
    case Errc::BoundTooLarge: return "BoundTooLarge";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::NotP3: return "NotP3";
    case Errc::Parse: return "ParseError";
    case Errc::Io: return "IoError";
    }
    return "Unknown";
}

std::string VarSet::to_string() const {
    std::string out;
    for (int v : *this) {
        if (!out.empty())
            out += ',';
        out += std::to_string(v);
    }
    return out;
}

bool size_lex_less(VarSet a, VarSet b) {
    if (a.size() != b.size())
        return a.size() < b.size();
    return a.to_vector() < b.to_vector();
}

VariableSystem::VariableSystem(std::vector<int> c) : p(static_cast<int>(c.size())), cards(std::move(c)) {
    check();
}

std::size_t VariableSystem::outcome_count(VarSet s) const {
    std::size_t n = 1;
    for (int v : s)
        n *= static_cast<std::size_t>(card(v));
    return n;
}

std::size_t VariableSystem::prefix_count(int k) const {
    return outcome_count(VarSet::range(1, k));
}

void VariableSystem::check() const {
    if (p < 1 || p > VarSet::kMaxVar)
        fail(Errc::BadIndex, "variable count must be in [1, 63], got " + std::to_string(p));
    if (static_cast<int>(cards.size()) != p)
        fail(Errc::BadIndex, "cards has " + std::to_string(cards.size()) + " entries, expected " + std::to_string(p));
    for (int i = 0; i < p; ++i)
        if (cards[i] < 2)
            fail(Errc::BadCardinality, "X" + std::to_string(i + 1) + " has cardinality " + std::to_string(cards[i]));
}

std::size_t prefix_index(const VariableSystem& sys, const Outcome& x) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < x.size(); ++i)
        idx = idx * static_cast<std::size_t>(sys.cards[i]) + static_cast<std::size_t>(x[i]);
    return idx;
}

Outcome prefix_outcome(const VariableSystem& sys, int len, std::size_t index) {
    Outcome x(static_cast<std::size_t>(len));
    for (int i = len - 1; i >= 0; --i) {
        auto d = static_cast<std::size_t>(sys.cards[i]);
        x[i] = static_cast<int>(index % d);
        index /= d;
    }
    return x;
}

std::string outcome_string(const Outcome& x) {
    std::string s;
    for (int c : x) {
        if (c < 10)
            s += static_cast<char>('0' + c);
        else
            s += '(' + std::to_string(c) + ')';
    }
    return s;
}

Outcome parse_outcome(const std::string& s) {
    Outcome x;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c)))
            fail(Errc::BadIndex, "bad outcome digit string '" + s + "'");
        x.push_back(c - '0');
    }
    return x;
}

std::vector<Outcome> all_outcomes(const VariableSystem& sys, VarSet s) {
    std::vector<int> vars = s.to_vector();
    std::vector<Outcome> out;
    Outcome x(vars.size(), 0);
    while (true) {
        out.push_back(x);
        int i = static_cast<int>(vars.size()) - 1;
        while (i >= 0 && x[i] + 1 == sys.card(vars[i])) {
            x[i] = 0;
            --i;
        }
        if (i < 0)
            break;
        ++x[i];
    }
    return out;
}

Context::Context(std::vector<Entry> entries) : a_(std::move(entries)) {
    std::sort(a_.begin(), a_.end());
    for (std::size_t i = 0; i < a_.size(); ++i) {
        if (a_[i].first < 1 || a_[i].first > VarSet::kMaxVar)
            fail(Errc::BadIndex, "context variable " + std::to_string(a_[i].first) + " out of range");
        if (a_[i].second < 0)
            fail(Errc::BadIndex, "negative outcome in context");
        if (i > 0 && a_[i].first == a_[i - 1].first)
            fail(Errc::BadIndex, "variable X" + std::to_string(a_[i].first) + " assigned twice in context");
    }
}

Context Context::over(VarSet s, const Outcome& x) {
    std::vector<Entry> e;
    std::size_t i = 0;
    for (int v : s)
        e.emplace_back(v, x.at(i++));
    Context c;
    c.a_ = std::move(e);
    return c;
}

Context Context::of_prefix(const Outcome& prefix) {
    return over(VarSet::range(1, static_cast<int>(prefix.size())), prefix);
}

VarSet Context::keys() const {
    VarSet s;
    for (const auto& [k, v] : a_)
        s.insert(k);
    return s;
}

bool Context::has(int var) const {
    return std::any_of(a_.begin(), a_.end(), [&](const Entry& e) { return e.first == var; });
}

int Context::value(int var) const {
    for (const auto& [k, v] : a_)
        if (k == var)
            return v;
    fail(Errc::BadIndex, "X" + std::to_string(var) + " not in context");
}

Context Context::restrict_to(VarSet s) const {
    Context c;
    for (const auto& e : a_)
        if (s.contains(e.first))
            c.a_.push_back(e);
    return c;
}

Context Context::without(VarSet s) const {
    Context c;
    for (const auto& e : a_)
        if (!s.contains(e.first))
            c.a_.push_back(e);
    return c;
}

bool Context::consistent_with(const Context& other) const {
    for (const auto& [k, v] : a_)
        for (const auto& [k2, v2] : other.a_)
            if (k == k2 && v != v2)
                return false;
    return true;
}

Context Context::merged(const Context& other) const {
    if (!consistent_with(other))
        fail(Errc::ShapeMismatch, "contexts " + to_string() + " and " + other.to_string() + " conflict");
    std::vector<Entry> e = a_;
    for (const auto& x : other.a_)
        if (!has(x.first))
            e.push_back(x);
    return Context(std::move(e));
}

bool Context::subsumed_by(const Context& other) const {
    for (const auto& [k, v] : a_)
        if (!other.has(k) || other.value(k) != v)
            return false;
    return true;
}

bool Context::matches_prefix(const Outcome& prefix) const {
    for (const auto& [k, v] : a_) {
        if (k > static_cast<int>(prefix.size()) || prefix[k - 1] != v)
            return false;
    }
    return true;
}

Outcome Context::values() const {
    Outcome x;
    for (const auto& e : a_)
        x.push_back(e.second);
    return x;
}

void Context::check(const VariableSystem& sys) const {
    for (const auto& [k, v] : a_) {
        if (k > sys.p)
            fail(Errc::BadIndex, "context variable X" + std::to_string(k) + " exceeds p=" + std::to_string(sys.p));
        if (v >= sys.card(k))
            fail(Errc::BadIndex, "outcome " + std::to_string(v) + " out of range for X" + std::to_string(k));
    }
}

std::string Context::to_string() const {
    std::string s;
    for (const auto& [k, v] : a_) {
        if (!s.empty())
            s += ',';
        s += "X" + std::to_string(k) + "=" + std::to_string(v);
    }
    return s;
}

std::strong_ordering operator<=>(const Context& a, const Context& b) {
    if (auto c = a.a_.size() <=> b.a_.size(); c != 0)
        return c;
    for (std::size_t i = 0; i < a.a_.size(); ++i)
        if (auto c = a.a_[i].first <=> b.a_[i].first; c != 0)
            return c;
    for (std::size_t i = 0; i < a.a_.size(); ++i)
        if (auto c = a.a_[i].second <=> b.a_[i].second; c != 0)
            return c;
    return std::strong_ordering::equal;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos)
        return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

int parse_int(const std::string& s, const std::string& whole) {
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        fail(Errc::Parse, "bad context '" + whole + "'");
    return std::stoi(s);
}

}  // namespace

Context parse_context(const std::string& text) {
    std::string s = trim(text);
    if (s.empty() || s == "{}" || s == "\xE2\x88\x85")
        return Context();
    std::vector<Context::Entry> e;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        std::string item = trim(s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos));
        std::size_t eq = item.find('=');
        if (eq == std::string::npos)
            fail(Errc::Parse, "bad context '" + text + "'");
        std::string lhs = trim(item.substr(0, eq));
        std::string rhs = trim(item.substr(eq + 1));
        if (!lhs.empty() && (lhs[0] == 'X' || lhs[0] == 'x')) {
            // X1 or X1X2 (compact form, values as a digit string)
            std::vector<int> vars;
            std::size_t i = 0;
            while (i < lhs.size()) {
                if (lhs[i] != 'X' && lhs[i] != 'x')
                    fail(Errc::Parse, "bad context '" + text + "'");
                std::size_t j = i + 1;
                while (j < lhs.size() && std::isdigit(static_cast<unsigned char>(lhs[j])))
                    ++j;
                vars.push_back(parse_int(lhs.substr(i + 1, j - i - 1), text));
                i = j;
            }
            if (vars.size() == 1) {
                e.emplace_back(vars[0], parse_int(rhs, text));
            } else {
                if (rhs.size() != vars.size())
                    fail(Errc::Parse, "bad context '" + text + "'");
                for (std::size_t t = 0; t < vars.size(); ++t)
                    e.emplace_back(vars[t], parse_int(rhs.substr(t, 1), text));
            }
        } else {
            e.emplace_back(parse_int(lhs, text), parse_int(rhs, text));
        }
        if (comma == std::string::npos)
            break;
        pos = comma + 1;
    }
    return Context(std::move(e));
}

std::vector<Context> all_contexts(const VariableSystem& sys, VarSet vars, bool proper) {
    std::vector<VarSet> subsets;
    for_each_subset(vars, [&](VarSet c) {
        if (!(proper && c == vars))
            subsets.push_back(c);
    });
    std::sort(subsets.begin(), subsets.end(), size_lex_less);
    std::vector<Context> out;
    for (VarSet c : subsets)
        for (const Outcome& x : all_outcomes(sys, c))
            out.push_back(Context::over(c, x));
    return out;
}

}  // namespace cstree
