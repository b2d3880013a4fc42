// Exact integers and sorted sparse integer vectors.
//
// Every chain, cochain, matrix row and matrix column in the library is a
// SparseVector: an index-sorted list of (index, nonzero Integer) pairs.

#ifndef AMTOPO_SPARSE_HPP
#define AMTOPO_SPARSE_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace amtopo {

using Integer = boost::multiprecision::cpp_int;
using Index = std::int32_t;

/// Truncating quotient a / b (b != 0).
Integer trunc_div(const Integer& a, const Integer& b);

/// Nonnegative gcd; gcd(0, 0) = 0.
Integer gcd(const Integer& a, const Integer& b);

/// Extended Euclid: returns g = gcd(a, b) >= 0 with s*a + t*b = g.
Integer ext_gcd(const Integer& a, const Integer& b, Integer& s, Integer& t);

std::string to_string(const Integer& v);

class SparseVector
{
public:
    using Entry = std::pair<Index, Integer>;

    SparseVector() = default;

    /// Unit vector e_i.
    static SparseVector unit(Index i);

    /// Builds from unsorted entries; duplicates are summed, zeros dropped.
    static SparseVector from_entries(std::vector<Entry> entries);

    [[nodiscard]] bool empty() const { return entries_.empty(); }
    [[nodiscard]] std::size_t size() const { return entries_.size(); }
    [[nodiscard]] const std::vector<Entry>& entries() const { return entries_; }
    [[nodiscard]] auto begin() const { return entries_.begin(); }
    [[nodiscard]] auto end() const { return entries_.end(); }

    /// Coefficient at i (zero when absent).
    [[nodiscard]] Integer get(Index i) const;
    [[nodiscard]] bool contains(Index i) const;
    [[nodiscard]] const Integer* find(Index i) const;

    void set(Index i, const Integer& v);

    /// this += k * other
    void axpy(const Integer& k, const SparseVector& other);
    void negate();
    void scale(const Integer& k);
    void clear() { entries_.clear(); }

    /// Largest index, or -1 when empty.
    [[nodiscard]] Index max_index() const { return entries_.empty() ? -1 : entries_.back().first; }

    /// Applies an index map (old -> new); entries mapped to negative indices are dropped.
    void remap(const std::vector<Index>& map);

    [[nodiscard]] Integer dot(const SparseVector& other) const;

    friend bool operator==(const SparseVector& a, const SparseVector& b) = default;

private:
    std::vector<Entry> entries_;
};

SparseVector operator+(const SparseVector& a, const SparseVector& b);
SparseVector operator-(const SparseVector& a, const SparseVector& b);
SparseVector operator*(const Integer& k, const SparseVector& a);

}  // namespace amtopo

#endif
