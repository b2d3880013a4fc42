#include "amtopo/integer_matrix.hpp"

#include <algorithm>
#include <map>
#include <ostream>
#include <stdexcept>

namespace amtopo {

IntMatrix::IntMatrix(Index rows, Index cols) : rows_(rows), cols_(static_cast<std::size_t>(cols))
{
    if (rows < 0 || cols < 0) {
        throw std::invalid_argument("IntMatrix: negative dimension");
    }
}

IntMatrix IntMatrix::identity(Index n)
{
    IntMatrix m(n, n);
    for (Index i = 0; i < n; ++i) {
        m.cols_[static_cast<std::size_t>(i)] = SparseVector::unit(i);
    }
    return m;
}

IntMatrix IntMatrix::from_dense(const std::vector<std::vector<long long>>& rows)
{
    Index r = static_cast<Index>(rows.size());
    Index c = rows.empty() ? 0 : static_cast<Index>(rows.front().size());
    IntMatrix m(r, c);
    for (Index i = 0; i < r; ++i) {
        if (static_cast<Index>(rows[static_cast<std::size_t>(i)].size()) != c) {
            throw std::invalid_argument("IntMatrix::from_dense: ragged rows");
        }
        for (Index j = 0; j < c; ++j) {
            long long v = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (v != 0) {
                m.cols_[static_cast<std::size_t>(j)].set(i, Integer(v));
            }
        }
    }
    return m;
}

IntMatrix IntMatrix::from_columns(Index rows, std::vector<SparseVector> cols)
{
    IntMatrix m(rows, static_cast<Index>(cols.size()));
    for (auto& c : cols) {
        if (c.max_index() >= rows || (!c.empty() && c.begin()->first < 0)) {
            throw std::out_of_range("IntMatrix::from_columns: row index out of range");
        }
    }
    m.cols_ = std::move(cols);
    return m;
}

Integer IntMatrix::get(Index r, Index c) const
{
    return column(c).get(r);
}

void IntMatrix::set(Index r, Index c, const Integer& v)
{
    if (r < 0 || r >= rows_) {
        throw std::out_of_range("IntMatrix::set: row out of range");
    }
    column_mut(c).set(r, v);
}

const SparseVector& IntMatrix::column(Index c) const
{
    if (c < 0 || c >= cols()) {
        throw std::out_of_range("IntMatrix: column out of range");
    }
    return cols_[static_cast<std::size_t>(c)];
}

SparseVector& IntMatrix::column_mut(Index c)
{
    if (c < 0 || c >= cols()) {
        throw std::out_of_range("IntMatrix: column out of range");
    }
    return cols_[static_cast<std::size_t>(c)];
}

std::size_t IntMatrix::nonzeros() const
{
    std::size_t n = 0;
    for (const auto& c : cols_) {
        n += c.size();
    }
    return n;
}

std::vector<SparseVector> IntMatrix::row_vectors() const
{
    std::vector<std::vector<SparseVector::Entry>> rows(static_cast<std::size_t>(rows_));
    for (Index j = 0; j < cols(); ++j) {
        for (const auto& [i, x] : cols_[static_cast<std::size_t>(j)]) {
            rows[static_cast<std::size_t>(i)].emplace_back(j, x);
        }
    }
    std::vector<SparseVector> out;
    out.reserve(rows.size());
    for (auto& r : rows) {
        out.push_back(SparseVector::from_entries(std::move(r)));
    }
    return out;
}

IntMatrix IntMatrix::transpose() const
{
    return from_columns(cols(), row_vectors());
}

std::vector<std::vector<Integer>> IntMatrix::to_dense() const
{
    std::vector<std::vector<Integer>> d(static_cast<std::size_t>(rows_),
                                        std::vector<Integer>(static_cast<std::size_t>(cols()), 0));
    for (Index j = 0; j < cols(); ++j) {
        for (const auto& [i, x] : cols_[static_cast<std::size_t>(j)]) {
            d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = x;
        }
    }
    return d;
}

void IntMatrix::append_column(SparseVector v)
{
    if (v.max_index() >= rows_) {
        throw std::out_of_range("IntMatrix::append_column: row index out of range");
    }
    cols_.push_back(std::move(v));
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b)
{
    if (a.cols() != b.rows()) {
        throw std::invalid_argument("IntMatrix: dimension mismatch in product");
    }
    IntMatrix out(a.rows(), b.cols());
    for (Index j = 0; j < b.cols(); ++j) {
        SparseVector acc;
        for (const auto& [k, x] : b.column(j)) {
            acc.axpy(x, a.column(k));
        }
        out.column_mut(j) = std::move(acc);
    }
    return out;
}

std::ostream& operator<<(std::ostream& os, const IntMatrix& m)
{
    auto d = m.to_dense();
    for (const auto& row : d) {
        os << '[';
        for (std::size_t j = 0; j < row.size(); ++j) {
            os << (j ? " " : "") << row[j];
        }
        os << "]\n";
    }
    return os;
}

namespace {

// Tracks U (as rows) and V (as columns) and logs every operation.
class TransformTracker final : public SnfListener
{
public:
    TransformTracker(Index rows, Index cols)
    {
        u_rows.reserve(static_cast<std::size_t>(rows));
        for (Index i = 0; i < rows; ++i) {
            u_rows.push_back(SparseVector::unit(i));
        }
        v_cols.reserve(static_cast<std::size_t>(cols));
        for (Index j = 0; j < cols; ++j) {
            v_cols.push_back(SparseVector::unit(j));
        }
    }

    void col_axpy(Index dst, Index src, const Integer& k) override
    {
        v_cols[static_cast<std::size_t>(dst)].axpy(k, v_cols[static_cast<std::size_t>(src)]);
        ops.push_back(ElementaryOp{ElementaryOp::Kind::ColAxpy, dst, src, k, {}, {}, {}, {}, {}});
    }
    void row_axpy(Index dst, Index src, const Integer& k) override
    {
        u_rows[static_cast<std::size_t>(dst)].axpy(k, u_rows[static_cast<std::size_t>(src)]);
        ops.push_back(ElementaryOp{ElementaryOp::Kind::RowAxpy, dst, src, k, {}, {}, {}, {}, {}});
    }
    void col_negate(Index c) override
    {
        v_cols[static_cast<std::size_t>(c)].negate();
        ops.push_back(ElementaryOp{ElementaryOp::Kind::ColNegate, c, 0, {}, {}, {}, {}, {}, {}});
    }
    void col_transform(Index c1, Index c2, const Integer& m11, const Integer& m12, const Integer& m21,
                       const Integer& m22) override
    {
        auto& a = v_cols[static_cast<std::size_t>(c1)];
        auto& b = v_cols[static_cast<std::size_t>(c2)];
        SparseVector na = m11 * a + m21 * b;
        SparseVector nb = m12 * a + m22 * b;
        a = std::move(na);
        b = std::move(nb);
        ops.push_back(ElementaryOp{ElementaryOp::Kind::ColTransform, c1, c2, {}, m11, m12, m21, m22, {}});
    }

    std::vector<SparseVector> u_rows;
    std::vector<SparseVector> v_cols;
    std::vector<ElementaryOp> ops;
};

// Forwards operations from a sub-engine with local indices to global ones.
class IndexMappingListener final : public SnfListener
{
public:
    IndexMappingListener(SnfListener& inner, const std::vector<Index>& rows, const std::vector<Index>& cols)
        : inner_(inner), rows_(rows), cols_(cols)
    {
    }
    void col_axpy(Index dst, Index src, const Integer& k) override
    {
        inner_.col_axpy(cols_[static_cast<std::size_t>(dst)], cols_[static_cast<std::size_t>(src)], k);
    }
    void row_axpy(Index dst, Index src, const Integer& k) override
    {
        inner_.row_axpy(rows_[static_cast<std::size_t>(dst)], rows_[static_cast<std::size_t>(src)], k);
    }
    void col_negate(Index c) override { inner_.col_negate(cols_[static_cast<std::size_t>(c)]); }
    void col_transform(Index c1, Index c2, const Integer& m11, const Integer& m12, const Integer& m21,
                       const Integer& m22) override
    {
        inner_.col_transform(cols_[static_cast<std::size_t>(c1)], cols_[static_cast<std::size_t>(c2)], m11, m12,
                             m21, m22);
    }

private:
    SnfListener& inner_;
    const std::vector<Index>& rows_;
    const std::vector<Index>& cols_;
};

std::vector<Index> order_with_pivots_first(Index n, const std::vector<Index>& pivot_order)
{
    std::vector<Index> order = pivot_order;
    std::vector<char> used(static_cast<std::size_t>(n), 0);
    for (Index i : pivot_order) {
        used[static_cast<std::size_t>(i)] = 1;
    }
    for (Index i = 0; i < n; ++i) {
        if (!used[static_cast<std::size_t>(i)]) {
            order.push_back(i);
        }
    }
    return order;
}

// Applies the final permutation so that S is literally diagonal.
SnfResult finish(Index rows, Index cols, std::vector<Pivot> pivots, TransformTracker& tracker)
{
    std::stable_sort(pivots.begin(), pivots.end(),
                     [](const Pivot& a, const Pivot& b) { return a.value < b.value; });
    std::vector<Index> prow, pcol;
    for (const auto& p : pivots) {
        prow.push_back(p.row);
        pcol.push_back(p.col);
    }
    std::vector<Index> row_order = order_with_pivots_first(rows, prow);
    std::vector<Index> col_order = order_with_pivots_first(cols, pcol);

    SnfResult out;
    std::vector<SparseVector> u_rows;
    u_rows.reserve(row_order.size());
    for (Index r : row_order) {
        u_rows.push_back(tracker.u_rows[static_cast<std::size_t>(r)]);
    }
    out.U = IntMatrix::from_columns(cols == 0 && rows == 0 ? 0 : rows, std::move(u_rows)).transpose();
    std::vector<SparseVector> v_cols;
    v_cols.reserve(col_order.size());
    for (Index c : col_order) {
        v_cols.push_back(tracker.v_cols[static_cast<std::size_t>(c)]);
    }
    out.V = IntMatrix::from_columns(cols, std::move(v_cols));
    out.S = IntMatrix(rows, cols);
    for (std::size_t k = 0; k < pivots.size(); ++k) {
        out.S.set(static_cast<Index>(k), static_cast<Index>(k), pivots[k].value);
        out.diag.push_back(pivots[k].value);
        if (pivots[k].value == 1) {
            ++out.rank_ones;
        }
    }
    out.rank_total = static_cast<Index>(pivots.size());
    out.ops = std::move(tracker.ops);
    out.ops.push_back(ElementaryOp{ElementaryOp::Kind::RowPermute, 0, 0, {}, {}, {}, {}, {}, row_order});
    out.ops.push_back(ElementaryOp{ElementaryOp::Kind::ColPermute, 0, 0, {}, {}, {}, {}, {}, col_order});
    return out;
}

}  // namespace

SnfResult snf(const IntMatrix& A)
{
    SnfEngine engine(A.rows(), A.cols());
    for (Index j = 0; j < A.cols(); ++j) {
        engine.set_column(j, A.column(j));
    }
    TransformTracker tracker(A.rows(), A.cols());
    std::vector<Pivot> pivots = engine.reduce(&tracker);
    return finish(A.rows(), A.cols(), std::move(pivots), tracker);
}

SnfResult partial_column_snf(const IntMatrix& A, Index col, const std::set<Index>& frozen)
{
    if (col < 0 || col >= A.cols()) {
        throw std::out_of_range("partial_column_snf: column index out of range");
    }
    // Existing pivots outside `col`.
    std::map<Index, Pivot> pivot_of_row;
    for (Index c = 0; c < A.cols(); ++c) {
        if (c == col) {
            continue;
        }
        const auto& v = A.column(c);
        if (v.size() > 1) {
            throw std::invalid_argument("partial_column_snf: matrix is not in Smith form outside the column");
        }
        if (v.size() == 1) {
            Index r = v.begin()->first;
            if (pivot_of_row.count(r)) {
                throw std::invalid_argument("partial_column_snf: two pivots share a row");
            }
            pivot_of_row[r] = Pivot{r, c, v.begin()->second};
        }
    }

    TransformTracker tracker(A.rows(), A.cols());
    SparseVector work = A.column(col);
    for (const auto& [r, x] : A.column(col)) {
        auto it = pivot_of_row.find(r);
        if (it == pivot_of_row.end() || !frozen.count(r)) {
            continue;
        }
        const Pivot& p = it->second;
        if (x % p.value != 0) {
            throw std::invalid_argument("partial_column_snf: frozen pivot does not divide the column entry");
        }
        Integer q = x / p.value;
        work.axpy(-q, A.column(p.col));
        tracker.col_axpy(col, p.col, -q);
    }

    std::vector<Pivot> pivots;
    std::vector<Index> sub_cols{col};
    for (const auto& [r, p] : pivot_of_row) {
        if (frozen.count(r)) {
            pivots.push_back(p);
        } else {
            sub_cols.push_back(p.col);
        }
    }
    std::vector<Index> sub_rows;
    for (Index r = 0; r < A.rows(); ++r) {
        if (!(pivot_of_row.count(r) && frozen.count(r))) {
            sub_rows.push_back(r);
        }
    }
    std::vector<Index> local_row(static_cast<std::size_t>(A.rows()), -1);
    for (std::size_t k = 0; k < sub_rows.size(); ++k) {
        local_row[static_cast<std::size_t>(sub_rows[k])] = static_cast<Index>(k);
    }
    SnfEngine engine(static_cast<Index>(sub_rows.size()), static_cast<Index>(sub_cols.size()));
    for (std::size_t k = 0; k < sub_cols.size(); ++k) {
        const SparseVector& src = sub_cols[k] == col ? work : A.column(sub_cols[k]);
        SparseVector local = src;
        local.remap(local_row);
        engine.set_column(static_cast<Index>(k), std::move(local));
    }
    IndexMappingListener mapper(tracker, sub_rows, sub_cols);
    for (auto p : engine.reduce(&mapper)) {
        pivots.push_back(Pivot{sub_rows[static_cast<std::size_t>(p.row)], sub_cols[static_cast<std::size_t>(p.col)],
                               p.value});
    }
    for (auto& p : pivots) {
        if (p.value < 0) {
            p.value = -p.value;
            tracker.col_negate(p.col);
        }
    }
    repair_divisibility(pivots, &tracker);
    return finish(A.rows(), A.cols(), std::move(pivots), tracker);
}

SnfResult partial_column_snf(const IntMatrix& A, Index col)
{
    if (col < 0 || col >= A.cols()) {
        throw std::out_of_range("partial_column_snf: column index out of range");
    }
    std::set<Index> frozen;
    for (Index c = 0; c < A.cols(); ++c) {
        const auto& v = A.column(c);
        if (c != col && v.size() == 1 && abs(v.begin()->second) == 1) {
            frozen.insert(v.begin()->first);
        }
    }
    return partial_column_snf(A, col, frozen);
}

Index rank_over_rationals(const IntMatrix& A)
{
    SnfEngine engine(A.rows(), A.cols());
    for (Index j = 0; j < A.cols(); ++j) {
        engine.set_column(j, A.column(j));
    }
    return static_cast<Index>(engine.diagonalize(nullptr).size());
}

namespace {

void apply_row_op(std::vector<SparseVector>& rows, const ElementaryOp& op, bool inverse)
{
    using K = ElementaryOp::Kind;
    if (op.kind == K::RowAxpy) {
        rows[static_cast<std::size_t>(op.a)].axpy(inverse ? Integer(-op.k) : op.k, rows[static_cast<std::size_t>(op.b)]);
    } else if (op.kind == K::RowPermute) {
        std::vector<SparseVector> next(rows.size());
        for (std::size_t p = 0; p < op.permutation.size(); ++p) {
            auto old = static_cast<std::size_t>(op.permutation[p]);
            if (inverse) {
                next[old] = std::move(rows[p]);
            } else {
                next[p] = std::move(rows[old]);
            }
        }
        rows = std::move(next);
    }
}

void apply_col_op(std::vector<SparseVector>& cols, const ElementaryOp& op, bool inverse)
{
    using K = ElementaryOp::Kind;
    switch (op.kind) {
    case K::ColAxpy:
        cols[static_cast<std::size_t>(op.a)].axpy(inverse ? Integer(-op.k) : op.k, cols[static_cast<std::size_t>(op.b)]);
        break;
    case K::ColNegate:
        cols[static_cast<std::size_t>(op.a)].negate();
        break;
    case K::ColTransform: {
        auto& a = cols[static_cast<std::size_t>(op.a)];
        auto& b = cols[static_cast<std::size_t>(op.b)];
        Integer m11 = op.m11, m12 = op.m12, m21 = op.m21, m22 = op.m22;
        if (inverse) {
            m11 = op.m22;
            m12 = -op.m12;
            m21 = -op.m21;
            m22 = op.m11;
        }
        SparseVector na = m11 * a + m21 * b;
        SparseVector nb = m12 * a + m22 * b;
        a = std::move(na);
        b = std::move(nb);
        break;
    }
    case K::ColPermute: {
        std::vector<SparseVector> next(cols.size());
        for (std::size_t p = 0; p < op.permutation.size(); ++p) {
            auto old = static_cast<std::size_t>(op.permutation[p]);
            if (inverse) {
                next[old] = std::move(cols[p]);
            } else {
                next[p] = std::move(cols[old]);
            }
        }
        cols = std::move(next);
        break;
    }
    default:
        break;
    }
}

bool is_row_op(ElementaryOp::Kind k)
{
    return k == ElementaryOp::Kind::RowAxpy || k == ElementaryOp::Kind::RowPermute;
}

}  // namespace

std::pair<IntMatrix, IntMatrix> replay_ops(const std::vector<ElementaryOp>& ops, Index rows, Index cols)
{
    std::vector<SparseVector> u = IntMatrix::identity(rows).columns();  // identity rows == identity columns
    std::vector<SparseVector> v = IntMatrix::identity(cols).columns();
    for (const auto& op : ops) {
        if (is_row_op(op.kind)) {
            apply_row_op(u, op, false);
        } else {
            apply_col_op(v, op, false);
        }
    }
    return {IntMatrix::from_columns(cols == 0 && rows == 0 ? 0 : rows, std::move(u)).transpose(),
            IntMatrix::from_columns(cols, std::move(v))};
}

std::pair<IntMatrix, IntMatrix> undo_ops(const std::vector<ElementaryOp>& ops, IntMatrix U, IntMatrix V)
{
    std::vector<SparseVector> u = U.row_vectors();
    std::vector<SparseVector> v = V.columns();
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        if (is_row_op(it->kind)) {
            apply_row_op(u, *it, true);
        } else {
            apply_col_op(v, *it, true);
        }
    }
    return {IntMatrix::from_columns(U.cols(), std::move(u)).transpose(),
            IntMatrix::from_columns(V.rows(), std::move(v))};
}

}  // namespace amtopo
