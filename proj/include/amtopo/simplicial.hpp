// Simplices, face-closed simplicial complexes, integer chains and the
// simplicial boundary operator.
//
// Chains here are carried by simplices. Chains expressed in a model basis
// are plain SparseVectors over basis indices (see am_model.hpp); converting
// between the two is always explicit.

#ifndef AMTOPO_SIMPLICIAL_HPP
#define AMTOPO_SIMPLICIAL_HPP

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "amtopo/integer_matrix.hpp"

namespace amtopo {

using Vertex = std::int64_t;

class Simplex
{
public:
    Simplex() = default;

    /// Vertices in any order; they are sorted. Duplicates are rejected.
    Simplex(std::initializer_list<Vertex> vertices);
    explicit Simplex(std::vector<Vertex> vertices);

    [[nodiscard]] int dim() const { return static_cast<int>(v_.size()) - 1; }
    [[nodiscard]] const std::vector<Vertex>& vertices() const { return v_; }
    [[nodiscard]] Vertex operator[](std::size_t i) const { return v_[i]; }

    /// The face with vertex i omitted.
    [[nodiscard]] Simplex face(int i) const;

    /// <v_0, ..., v_p>
    [[nodiscard]] Simplex front(int p) const;
    /// <v_{dim-q}, ..., v_dim>
    [[nodiscard]] Simplex back(int q) const;

    [[nodiscard]] bool contains(Vertex v) const;

    friend auto operator<=>(const Simplex&, const Simplex&) = default;
    friend bool operator==(const Simplex&, const Simplex&) = default;

private:
    struct Sorted {};
    Simplex(Sorted, std::vector<Vertex> v) : v_(std::move(v)) {}

    std::vector<Vertex> v_;
};

std::ostream& operator<<(std::ostream& os, const Simplex& s);

struct SimplexHash
{
    std::size_t operator()(const Simplex& s) const noexcept;
};

class SimplicialComplex
{
public:
    SimplicialComplex() = default;

    /// Closes the given simplices under taking faces.
    static SimplicialComplex from_simplices(const std::vector<Simplex>& simplices);

    /// Highest dimension present, -1 for the empty complex.
    [[nodiscard]] int dim() const { return static_cast<int>(by_dim_.size()) - 1; }
    [[nodiscard]] Index count(int q) const;
    [[nodiscard]] std::size_t size() const;
    [[nodiscard]] bool empty() const { return by_dim_.empty(); }

    /// Simplices of dimension q in lexicographic order.
    [[nodiscard]] const std::vector<Simplex>& simplices(int q) const;
    [[nodiscard]] std::optional<Index> index_of(const Simplex& s) const;
    [[nodiscard]] bool contains(const Simplex& s) const { return index_of(s).has_value(); }

    [[nodiscard]] std::vector<Vertex> vertices() const;
    [[nodiscard]] bool is_face_closed() const;

    friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b)
    {
        return a.by_dim_ == b.by_dim_;
    }

private:
    std::vector<std::vector<Simplex>> by_dim_;
    std::vector<std::unordered_map<Simplex, Index, SimplexHash>> index_;
};

/// Integer chain of simplices of one dimension.
class Chain
{
public:
    explicit Chain(int dim = 0) : dim_(dim) {}

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] const std::map<Simplex, Integer>& terms() const { return terms_; }
    [[nodiscard]] bool is_zero() const { return terms_.empty(); }
    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] Integer coefficient(const Simplex& s) const;

    /// this += k * s
    void add(const Simplex& s, const Integer& k);
    /// this += k * other
    void axpy(const Integer& k, const Chain& other);

    friend bool operator==(const Chain& a, const Chain& b) { return a.terms_ == b.terms_ && (a.dim_ == b.dim_ || a.is_zero()); }

private:
    int dim_;
    std::map<Simplex, Integer> terms_;
};

Chain operator+(const Chain& a, const Chain& b);
Chain operator-(const Chain& a, const Chain& b);
Chain operator*(const Integer& k, const Chain& a);
std::ostream& operator<<(std::ostream& os, const Chain& c);

/// Alternating sum of faces; zero for vertices.
Chain boundary(const Simplex& s);
Chain boundary_chain(const Chain& c);

/// Chain <-> coordinate vector over the simplex order of K.
SparseVector to_vector(const SimplicialComplex& K, const Chain& c);
Chain from_vector(const SimplicialComplex& K, int q, const SparseVector& v);

/// Matrix of d_q in the simplex bases: rows are (q-1)-simplices, columns q-simplices.
IntMatrix boundary_matrix(const SimplicialComplex& K, int q);

/// Matrix of d_q with respect to the given bases of C_q(K) (columns) and
/// C_{q-1}(K) (rows). Both bases must be unimodular; throws otherwise.
IntMatrix boundary_matrix(const SimplicialComplex& K, int q, const std::vector<Chain>& row_basis,
                          const std::vector<Chain>& col_basis);

class ParseError : public std::runtime_error
{
public:
    ParseError(const std::string& what, std::size_t line)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    [[nodiscard]] std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// One simplex per line (whitespace-separated vertex ids), '#' comments.
/// Faces are added automatically. Input without any simplex is an error.
SimplicialComplex parse_complex(std::istream& in);
void write_complex(std::ostream& out, const SimplicialComplex& K);

}  // namespace amtopo

#endif
