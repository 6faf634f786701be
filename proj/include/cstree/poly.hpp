#ifndef CSTREE_POLY_HPP
#define CSTREE_POLY_HPP

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace cstree {

using Integer = mpz_class;
using Rational = mpq_class;
using VarId = std::uint32_t;

// Product of variables with positive exponents, sorted by variable id.
class Monomial {
public:
    using Factor = std::pair<VarId, std::uint32_t>;

    Monomial() = default;
    static Monomial var(VarId v, std::uint32_t e = 1);
    // Builds from unsorted factors; repeated variables have their exponents added.
    static Monomial of(std::vector<Factor> factors);

    const std::vector<Factor>& factors() const& { return f_; }
    std::vector<Factor> factors() && { return std::move(f_); }
    bool is_one() const { return f_.empty(); }
    std::uint32_t degree() const;
    std::uint32_t exponent(VarId v) const;

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial&, const Monomial&) = default;
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) { return a.f_ <=> b.f_; }

private:
    std::vector<Factor> f_;
};

// Polynomial with exact integer coefficients; zero coefficients are never stored.
class SparsePoly {
public:
    using Terms = std::map<Monomial, Integer>;

    SparsePoly() = default;
    static SparsePoly constant(const Integer& c);
    static SparsePoly var(VarId v);
    static SparsePoly term(const Monomial& m, const Integer& c = 1);

    const Terms& terms() const& { return t_; }
    Terms terms() && { return std::move(t_); }
    bool is_zero() const { return t_.empty(); }
    std::size_t size() const { return t_.size(); }
    Integer coefficient(const Monomial& m) const;

    void add_term(const Monomial& m, const Integer& c);
    SparsePoly& operator+=(const SparsePoly& o);
    SparsePoly& operator-=(const SparsePoly& o);
    SparsePoly& operator*=(const SparsePoly& o);
    friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
    friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
    friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b);
    SparsePoly operator-() const;
    SparsePoly pow(unsigned e) const;

    // Replaces variables through `image` (ring homomorphism); unmapped variables stay.
    SparsePoly substitute(const std::function<const SparsePoly*(VarId)>& image) const;

    // Evaluates with exact rational values for every variable.
    Rational evaluate(const std::function<Rational(VarId)>& value) const;

    // Terms in decreasing monomial order, e.g. "3*a*b^2 - c + 1".
    std::string to_string(const std::function<std::string(VarId)>& name) const;

    friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

private:
    Terms t_;
};

}  // namespace cstree

#endif
