#ifndef CSTREE_VARSET_HPP
#define CSTREE_VARSET_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <initializer_list>
#include <string>
#include <vector>

namespace cstree {

// Set of variable indices in [1, 63], stored as a bitmask (bit v = variable v).
class VarSet {
public:
    static constexpr int kMaxVar = 63;

    constexpr VarSet() = default;
    constexpr VarSet(std::initializer_list<int> vs) {
        for (int v : vs)
            bits_ |= bit(v);
    }

    static constexpr VarSet from_bits(std::uint64_t b) {
        VarSet s;
        s.bits_ = b;
        return s;
    }
    // {lo, ..., hi}; empty when hi < lo.
    static constexpr VarSet range(int lo, int hi) {
        VarSet s;
        for (int v = lo; v <= hi; ++v)
            s.bits_ |= bit(v);
        return s;
    }
    static VarSet of(const std::vector<int>& vs) {
        VarSet s;
        for (int v : vs)
            s.insert(v);
        return s;
    }

    constexpr std::uint64_t bits() const { return bits_; }
    constexpr bool empty() const { return bits_ == 0; }
    constexpr int size() const { return std::popcount(bits_); }
    constexpr bool contains(int v) const { return v >= 1 && v <= kMaxVar && (bits_ & bit(v)); }
    constexpr int min() const { return std::countr_zero(bits_); }
    constexpr int max() const { return 63 - std::countl_zero(bits_); }

    constexpr void insert(int v) { bits_ |= bit(v); }
    constexpr void erase(int v) { bits_ &= ~bit(v); }

    constexpr bool subset_of(VarSet o) const { return (bits_ & ~o.bits_) == 0; }
    constexpr bool disjoint(VarSet o) const { return (bits_ & o.bits_) == 0; }

    friend constexpr VarSet operator|(VarSet a, VarSet b) { return from_bits(a.bits_ | b.bits_); }
    friend constexpr VarSet operator&(VarSet a, VarSet b) { return from_bits(a.bits_ & b.bits_); }
    friend constexpr VarSet operator-(VarSet a, VarSet b) { return from_bits(a.bits_ & ~b.bits_); }
    constexpr VarSet& operator|=(VarSet o) { bits_ |= o.bits_; return *this; }
    constexpr VarSet& operator&=(VarSet o) { bits_ &= o.bits_; return *this; }
    constexpr VarSet& operator-=(VarSet o) { bits_ &= ~o.bits_; return *this; }
    friend constexpr bool operator==(VarSet a, VarSet b) = default;

    class iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = int;
        using difference_type = std::ptrdiff_t;
        using pointer = const int*;
        using reference = int;

        constexpr iterator() : b_(0) {}
        constexpr explicit iterator(std::uint64_t b) : b_(b) {}
        constexpr int operator*() const { return std::countr_zero(b_); }
        constexpr iterator& operator++() { b_ &= b_ - 1; return *this; }
        constexpr iterator operator++(int) { iterator t = *this; ++*this; return t; }
        friend constexpr bool operator==(iterator a, iterator b) = default;

    private:
        std::uint64_t b_;
    };
    constexpr iterator begin() const { return iterator(bits_); }
    constexpr iterator end() const { return iterator(0); }

    std::vector<int> to_vector() const {
        std::vector<int> out;
        for (int v : *this)
            out.push_back(v);
        return out;
    }
    // "1,2,4"
    std::string to_string() const;

private:
    static constexpr std::uint64_t bit(int v) { return std::uint64_t{1} << v; }
    std::uint64_t bits_ = 0;
};

// Orders sets by (size, ascending element list), the order used for context enumeration.
bool size_lex_less(VarSet a, VarSet b);

// Calls fn(T) for every subset T of s, including the empty set and s itself.
template <typename Fn>
void for_each_subset(VarSet s, Fn&& fn) {
    std::uint64_t m = s.bits();
    std::uint64_t t = 0;
    while (true) {
        fn(VarSet::from_bits(t));
        if (t == m)
            break;
        t = (t - m) & m;
    }
}

}  // namespace cstree

#endif
