#include "cstree/poly.hpp"

#include <algorithm>

namespace cstree {

Monomial Monomial::var(VarId v, std::uint32_t e) {
    Monomial m;
    if (e > 0)
        m.f_.emplace_back(v, e);
    return m;
}

Monomial Monomial::of(std::vector<Factor> factors) {
    std::sort(factors.begin(), factors.end());
    Monomial m;
    for (const auto& [v, e] : factors) {
        if (e == 0)
            continue;
        if (!m.f_.empty() && m.f_.back().first == v)
            m.f_.back().second += e;
        else
            m.f_.emplace_back(v, e);
    }
    return m;
}

std::uint32_t Monomial::degree() const {
    std::uint32_t d = 0;
    for (const auto& f : f_)
        d += f.second;
    return d;
}

std::uint32_t Monomial::exponent(VarId v) const {
    for (const auto& f : f_)
        if (f.first == v)
            return f.second;
    return 0;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    Monomial m;
    m.f_.reserve(a.f_.size() + b.f_.size());
    auto i = a.f_.begin();
    auto j = b.f_.begin();
    while (i != a.f_.end() && j != b.f_.end()) {
        if (i->first < j->first) {
            m.f_.push_back(*i++);
        } else if (j->first < i->first) {
            m.f_.push_back(*j++);
        } else {
            m.f_.emplace_back(i->first, i->second + j->second);
            ++i;
            ++j;
        }
    }
    m.f_.insert(m.f_.end(), i, a.f_.end());
    m.f_.insert(m.f_.end(), j, b.f_.end());
    return m;
}

SparsePoly SparsePoly::constant(const Integer& c) {
    return term(Monomial(), c);
}

SparsePoly SparsePoly::var(VarId v) {
    return term(Monomial::var(v));
}

SparsePoly SparsePoly::term(const Monomial& m, const Integer& c) {
    SparsePoly p;
    p.add_term(m, c);
    return p;
}

Integer SparsePoly::coefficient(const Monomial& m) const {
    auto it = t_.find(m);
    return it == t_.end() ? Integer(0) : it->second;
}

void SparsePoly::add_term(const Monomial& m, const Integer& c) {
    if (c == 0)
        return;
    auto [it, inserted] = t_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            t_.erase(it);
    }
}

SparsePoly& SparsePoly::operator+=(const SparsePoly& o) {
    for (const auto& [m, c] : o.t_)
        add_term(m, c);
    return *this;
}

SparsePoly& SparsePoly::operator-=(const SparsePoly& o) {
    for (const auto& [m, c] : o.t_)
        add_term(m, -c);
    return *this;
}

SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    SparsePoly out;
    Integer prod;
    for (const auto& [ma, ca] : a.t_) {
        for (const auto& [mb, cb] : b.t_) {
            prod = ca * cb;
            out.add_term(ma * mb, prod);
        }
    }
    return out;
}

SparsePoly& SparsePoly::operator*=(const SparsePoly& o) {
    *this = *this * o;
    return *this;
}

SparsePoly SparsePoly::operator-() const {
    SparsePoly out = *this;
    for (auto& [m, c] : out.t_)
        c = -c;
    return out;
}

SparsePoly SparsePoly::pow(unsigned e) const {
    SparsePoly result = constant(1);
    SparsePoly base = *this;
    while (e > 0) {
        if (e & 1U)
            result *= base;
        e >>= 1U;
        if (e > 0)
            base *= base;
    }
    return result;
}

SparsePoly SparsePoly::substitute(const std::function<const SparsePoly*(VarId)>& image) const {
    SparsePoly out;
    for (const auto& [m, c] : t_) {
        SparsePoly acc = constant(c);
        std::vector<Monomial::Factor> kept;
        for (const auto& [v, e] : m.factors()) {
            if (const SparsePoly* img = image(v))
                acc *= img->pow(e);
            else
                kept.emplace_back(v, e);
        }
        if (!kept.empty())
            acc *= term(Monomial::of(std::move(kept)));
        out += acc;
    }
    return out;
}

Rational SparsePoly::evaluate(const std::function<Rational(VarId)>& value) const {
    Rational sum = 0;
    for (const auto& [m, c] : t_) {
        Rational t(c);
        for (const auto& [v, e] : m.factors()) {
            Rational x = value(v);
            for (std::uint32_t k = 0; k < e; ++k)
                t *= x;
        }
        sum += t;
    }
    sum.canonicalize();
    return sum;
}

std::string SparsePoly::to_string(const std::function<std::string(VarId)>& name) const {
    if (t_.empty())
        return "0";
    std::string out;
    for (auto it = t_.rbegin(); it != t_.rend(); ++it) {
        const Monomial& m = it->first;
        Integer c = it->second;
        bool neg = c < 0;
        if (neg)
            c = -c;
        if (out.empty())
            out += neg ? "-" : "";
        else
            out += neg ? " - " : " + ";
        std::string body;
        for (const auto& [v, e] : m.factors()) {
            if (!body.empty())
                body += '*';
            body += name(v);
            if (e > 1)
                body += "^" + std::to_string(e);
        }
        if (body.empty())
            out += c.get_str();
        else if (c == 1)
            out += body;
        else
            out += c.get_str() + "*" + body;
    }
    return out;
}

}  // namespace cstree
