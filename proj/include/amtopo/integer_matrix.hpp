// Exact sparse integer matrices and Smith normal form with change of basis.

#ifndef AMTOPO_INTEGER_MATRIX_HPP
#define AMTOPO_INTEGER_MATRIX_HPP

#include <iosfwd>
#include <set>
#include <vector>

#include "amtopo/snf_engine.hpp"
#include "amtopo/sparse.hpp"

namespace amtopo {

/// Column-stored sparse matrix over the integers. Only nonzero entries are stored.
class IntMatrix
{
public:
    IntMatrix() = default;
    IntMatrix(Index rows, Index cols);

    static IntMatrix identity(Index n);
    static IntMatrix from_dense(const std::vector<std::vector<long long>>& rows);
    static IntMatrix from_columns(Index rows, std::vector<SparseVector> cols);

    [[nodiscard]] Index rows() const { return rows_; }
    [[nodiscard]] Index cols() const { return static_cast<Index>(cols_.size()); }

    [[nodiscard]] Integer get(Index r, Index c) const;
    void set(Index r, Index c, const Integer& v);

    [[nodiscard]] const SparseVector& column(Index c) const;
    SparseVector& column_mut(Index c);
    [[nodiscard]] const std::vector<SparseVector>& columns() const { return cols_; }

    [[nodiscard]] std::size_t nonzeros() const;
    [[nodiscard]] bool is_zero() const { return nonzeros() == 0; }

    [[nodiscard]] IntMatrix transpose() const;
    [[nodiscard]] std::vector<SparseVector> row_vectors() const;
    [[nodiscard]] std::vector<std::vector<Integer>> to_dense() const;

    /// Appends a column of matching height.
    void append_column(SparseVector v);

    friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
    friend bool operator==(const IntMatrix& a, const IntMatrix& b) = default;

private:
    Index rows_ = 0;
    std::vector<SparseVector> cols_;
};

std::ostream& operator<<(std::ostream& os, const IntMatrix& m);

/// One recorded elementary operation of a reduction; applied to the
/// transforms they produce U (row operations) and V (column operations).
struct ElementaryOp
{
    enum class Kind { RowAxpy, ColAxpy, ColNegate, ColTransform, RowPermute, ColPermute };
    Kind kind;
    Index a = 0;
    Index b = 0;
    Integer k;                        // axpy multiplier
    Integer m11, m12, m21, m22;       // ColTransform
    std::vector<Index> permutation;   // new position -> old index
};

struct SnfResult
{
    IntMatrix S;
    IntMatrix U;
    IntMatrix V;
    Index rank_ones = 0;
    Index rank_total = 0;
    std::vector<Integer> diag;
    /// The row/column operations in application order. Replaying them onto
    /// identity matrices reproduces U and V.
    std::vector<ElementaryOp> ops;
};

/// Smith normal form with full change of basis: U * A * V == S.
SnfResult snf(const IntMatrix& A);

/// SNF of a matrix already in Smith form except in column `col`. Rows listed
/// in `frozen` keep their pivots: the column is cleared against them with
/// column operations only (their pivots must divide the column entries).
SnfResult partial_column_snf(const IntMatrix& A, Index col, const std::set<Index>& frozen);

/// Same, freezing every unit-pivot row.
SnfResult partial_column_snf(const IntMatrix& A, Index col);

/// Rank of A as a rational matrix.
Index rank_over_rationals(const IntMatrix& A);

/// Replays `ops` onto identity matrices of the given sizes.
std::pair<IntMatrix, IntMatrix> replay_ops(const std::vector<ElementaryOp>& ops, Index rows, Index cols);

/// Applies the inverses of `ops` in reverse order to (U, V); for a valid
/// reduction log the result is a pair of identities.
std::pair<IntMatrix, IntMatrix> undo_ops(const std::vector<ElementaryOp>& ops, IntMatrix U, IntMatrix V);

}  // namespace amtopo

#endif
