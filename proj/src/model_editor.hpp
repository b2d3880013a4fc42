// Internal editing access to AmModel, shared by construction and updates.

#ifndef AMTOPO_MODEL_EDITOR_HPP
#define AMTOPO_MODEL_EDITOR_HPP

#include "amtopo/am_model.hpp"
#include "amtopo/snf_engine.hpp"

namespace amtopo {

class ModelEditor
{
public:
    explicit ModelEditor(AmModel& m) : m_(m) {}

    SimplexRegistry& registry() { return m_.reg_; }
    AmModel::Level& level(int q);
    void set_snf_form(bool v) { m_.snf_form_ = v; }

    Index add_element(int q, SparseVector basis, SparseVector dual, std::string name);
    /// Drops element k (its links are cleared first); the last element takes its index.
    void remove_element(int q, Index k);

    /// d(a_source) = lambda * e_target, source in dimension q.
    void set_link(int q, Index source, Index target, const Integer& lambda);
    /// Clears the down link of element k of dimension q and its mirror.
    void clear_down(int q, Index k);
    void clear_up(int q, Index k);

    // Elementary changes of basis. Column operations act on dimension q;
    // row operations act on dimension q as the row space of d_{q+1}.
    // Basis chains and coordinate functionals are updated together.
    void col_axpy(int q, Index dst, Index src, const Integer& k);
    void row_axpy(int q, Index dst, Index src, const Integer& k);
    void col_negate(int q, Index c);
    void col_transform(int q, Index c1, Index c2, const Integer& m11, const Integer& m12, const Integer& m21,
                       const Integer& m22);

private:
    AmModel& m_;
};

/// Maps a local reduction of d_q (rows: some elements of dimension q-1,
/// columns: some elements of dimension q) onto model basis changes.
class LevelListener final : public SnfListener
{
public:
    LevelListener(ModelEditor& ed, int q, const std::vector<Index>& rows, const std::vector<Index>& cols)
        : ed_(ed), q_(q), rows_(rows), cols_(cols)
    {
    }
    void col_axpy(Index dst, Index src, const Integer& k) override
    {
        ed_.col_axpy(q_, col(dst), col(src), k);
    }
    void row_axpy(Index dst, Index src, const Integer& k) override
    {
        ed_.row_axpy(q_ - 1, row(dst), row(src), k);
    }
    void col_negate(Index c) override { ed_.col_negate(q_, col(c)); }
    void col_transform(Index c1, Index c2, const Integer& m11, const Integer& m12, const Integer& m21,
                       const Integer& m22) override
    {
        ed_.col_transform(q_, col(c1), col(c2), m11, m12, m21, m22);
    }

private:
    Index row(Index r) const { return rows_[static_cast<std::size_t>(r)]; }
    Index col(Index c) const { return cols_[static_cast<std::size_t>(c)]; }

    ModelEditor& ed_;
    int q_;
    const std::vector<Index>& rows_;
    const std::vector<Index>& cols_;
};

}  // namespace amtopo

#endif
