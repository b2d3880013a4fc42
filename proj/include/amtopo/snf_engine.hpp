// Sparse Smith normal form reduction.
//
// The engine diagonalises an integer matrix by elementary unimodular row and
// column operations and then repairs the diagonal into a divisibility chain.
// Every operation is reported to an SnfListener so callers can carry along
// whatever the operations act on (explicit transforms, chain bases, logs).

#ifndef AMTOPO_SNF_ENGINE_HPP
#define AMTOPO_SNF_ENGINE_HPP

#include <vector>

#include "amtopo/sparse.hpp"

namespace amtopo {

/// Receives the elementary operations performed on the matrix A, in order.
/// Row operations act as A <- E A, column operations as A <- A F.
class SnfListener
{
public:
    virtual ~SnfListener() = default;
    /// column dst += k * column src
    virtual void col_axpy(Index dst, Index src, const Integer& k) = 0;
    /// row dst += k * row src
    virtual void row_axpy(Index dst, Index src, const Integer& k) = 0;
    /// column c *= -1
    virtual void col_negate(Index c) = 0;
    /// [col c1, col c2] <- [col c1, col c2] * [[m11, m12], [m21, m22]], determinant 1
    virtual void col_transform(Index c1, Index c2, const Integer& m11, const Integer& m12,
                               const Integer& m21, const Integer& m22) = 0;
};

struct Pivot
{
    Index row;
    Index col;
    Integer value;
};

class SnfEngine
{
public:
    SnfEngine(Index rows, Index cols);

    [[nodiscard]] Index rows() const { return rows_; }
    [[nodiscard]] Index cols() const { return static_cast<Index>(cols_.size()); }

    /// Loads column c; only valid before reduce().
    void set_column(Index c, SparseVector v);

    /// Runs the reduction. Returned pivots are positive and ordered so that
    /// each value divides the next; unit pivots come first. Zero columns and
    /// rows are simply absent from the result.
    std::vector<Pivot> reduce(SnfListener* listener);

    /// Diagonalisation only (no divisibility repair, signs left as found).
    /// Used where only the rank is needed.
    std::vector<Pivot> diagonalize(SnfListener* listener);

private:
    struct Candidate;

    void col_add(Index dst, Index src, const Integer& k, SnfListener* listener);
    void row_add_single(Index dst, Index src, Index col, const Integer& k, SnfListener* listener);
    [[nodiscard]] std::vector<Index> live_row(Index r);
    [[nodiscard]] Integer min_abs(Index c) const;

    Index rows_;
    std::vector<SparseVector> cols_;
    std::vector<std::vector<Index>> row_support_;
    std::vector<std::size_t> row_count_;
    std::vector<char> row_active_;
    std::vector<char> col_active_;
    std::vector<unsigned> col_version_;
    std::vector<Index> dirty_;
};

/// Brings a positive diagonal into divisibility order in place, reporting the
/// needed operations. `pivots` must have distinct rows and columns, and the
/// matrix must be zero outside the pivot positions.
void repair_divisibility(std::vector<Pivot>& pivots, SnfListener* listener);

}  // namespace amtopo

#endif
