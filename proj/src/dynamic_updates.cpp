#include "amtopo/dynamic_updates.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "amtopo/snf_engine.hpp"
#include "model_editor.hpp"

namespace amtopo {

namespace {

std::string simplex_name(const Simplex& s)
{
    std::ostringstream os;
    os << s;
    return os.str();
}

// Re-reduces d_q on the columns `cols` (dimension q) and the rows `rows`
// (dimension q-1, all cycles) after their links were cleared. `matrix` holds
// the boundary coordinates of each column.
void local_reduce(ModelEditor& ed, int q, const std::vector<Index>& rows, const std::vector<Index>& cols,
                  const std::map<Index, SparseVector>& matrix)
{
    std::vector<Index> local(static_cast<std::size_t>(ed.level(q - 1).basis.size()), -1);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        local[static_cast<std::size_t>(rows[i])] = static_cast<Index>(i);
    }
    SnfEngine engine(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        auto it = matrix.find(cols[j]);
        if (it == matrix.end()) {
            continue;
        }
        SparseVector v = it->second;
        for (const auto& [r, x] : v) {
            if (local[static_cast<std::size_t>(r)] < 0) {
                throw std::logic_error("local_reduce: column reaches a row outside the local block");
            }
        }
        v.remap(local);
        engine.set_column(static_cast<Index>(j), std::move(v));
    }
    LevelListener listener(ed, q, rows, cols);
    for (const auto& p : engine.reduce(&listener)) {
        ed.set_link(q, cols[static_cast<std::size_t>(p.col)], rows[static_cast<std::size_t>(p.row)], p.value);
    }
}

}  // namespace

void add_simplex(AmModel& m, const Simplex& s)
{
    ModelEditor ed(m);
    const int q = s.dim();
    const Index id = ed.registry().insert(s);
    ed.level(q);
    if (q == 0) {
        ed.add_element(0, SparseVector::unit(id), SparseVector::unit(id), simplex_name(s));
        return;
    }
    // Boundary of s in the current basis of C_{q-1}.
    const SparseVector rho = m.coordinates(q - 1, m.registry().boundary(q, SparseVector::unit(id)));
    const Index a = ed.add_element(q, SparseVector::unit(id), SparseVector::unit(id), simplex_name(s));

    // a := s - sum rho_l phi(e_l) over the paired targets e_l.
    SparseVector residual;
    for (const auto& [l, r] : rho) {
        const Link& u = m.up(q - 1, l);
        if (u.present() && u.lambda == 1) {
            ed.col_axpy(q, a, u.partner, -r);
        } else {
            residual.set(l, r);
        }
    }
    if (residual.empty()) {
        return;
    }

    // Local reduction on {a} and the torsion columns of dimension q.
    std::map<Index, SparseVector> matrix;
    std::vector<Index> cols{a};
    std::set<Index> row_set;
    matrix[a] = residual;
    for (const auto& [r, x] : residual) {
        row_set.insert(r);
    }
    for (Index k = 0; k < m.size(q); ++k) {
        const Link& dn = m.down(q, k);
        if (k != a && dn.present() && dn.lambda != 1) {
            cols.push_back(k);
            SparseVector v;
            v.set(dn.partner, dn.lambda);
            matrix[k] = v;
            row_set.insert(dn.partner);
        }
    }
    for (Index k : cols) {
        ed.clear_down(q, k);
    }
    std::vector<Index> rows(row_set.begin(), row_set.end());
    local_reduce(ed, q, rows, cols, matrix);
}

void delete_simplex(AmModel& m, const Simplex& s)
{
    ModelEditor ed(m);
    const int q = s.dim();
    const auto found = m.registry().find(s);
    if (!found) {
        std::ostringstream msg;
        msg << "delete_simplex: " << s << " is not in the complex";
        throw std::invalid_argument(msg.str());
    }
    const Index id = *found;
    auto& L = ed.level(q);
    std::vector<Index> W = L.basis.containing(id);
    std::map<Index, Integer> coef;
    for (Index j : W) {
        coef[j] = L.basis[j].get(id);
        if (m.up(q, j).present()) {
            std::ostringstream msg;
            msg << "delete_simplex: " << s << " still has cofaces";
            throw std::invalid_argument(msg.str());
        }
    }
    if (W.empty()) {
        throw std::logic_error("delete_simplex: no basis chain carries the simplex");
    }

    // Boundary coordinates of the chains we touch, tracked through the column operations.
    std::map<Index, SparseVector> bcol;
    auto boundary_of = [&](Index j) -> SparseVector& {
        auto it = bcol.find(j);
        if (it == bcol.end()) {
            SparseVector v;
            const Link& dn = m.down(q, j);
            if (dn.present()) {
                v.set(dn.partner, dn.lambda);
            }
            it = bcol.emplace(j, std::move(v)).first;
        }
        return it->second;
    };
    std::set<Index> modified;
    auto col_op = [&](Index dst, Index src, const Integer& t) {
        ed.col_axpy(q, dst, src, t);
        coef[dst] += t * coef[src];
        const SparseVector& bs = boundary_of(src);
        if (!bs.empty()) {
            boundary_of(dst).axpy(t, bs);
            modified.insert(dst);
        }
    };

    // Pick the chain that keeps the simplex: a free cycle with a unit
    // coefficient if there is one, else the smallest index with a unit.
    Index k = -1;
    for (Index j : W) {
        if (abs(coef[j]) == 1 && m.role(q, j) == Role::FreeCycle) {
            k = j;
            break;
        }
    }
    if (k < 0) {
        for (Index j : W) {
            if (abs(coef[j]) == 1) {
                k = j;
                break;
            }
        }
    }
    if (k < 0) {
        // No unit coefficient: run Euclid on the coefficients.
        while (true) {
            Index best = -1;
            std::size_t nonzero = 0;
            for (Index j : W) {
                if (coef[j] != 0) {
                    ++nonzero;
                    if (best < 0 || abs(coef[j]) < abs(coef[best])) {
                        best = j;
                    }
                }
            }
            if (nonzero <= 1) {
                k = best;
                break;
            }
            for (Index j : W) {
                if (j != best && coef[j] != 0) {
                    Integer t = trunc_div(coef[j], coef[best]);
                    if (t != 0) {
                        col_op(j, best, -t);
                    }
                }
            }
        }
        if (k < 0 || abs(coef[k]) != 1) {
            throw std::logic_error("delete_simplex: basis is not unimodular at the simplex");
        }
    }
    const Integer ck = coef[k];
    for (Index j : W) {
        if (j != k && coef[j] != 0) {
            col_op(j, k, -coef[j] * ck);
        }
    }

    // Drop a_k; whatever it bounded becomes a cycle that nothing hits.
    ed.clear_down(q, k);
    modified.erase(k);

    if (q > 0 && !modified.empty()) {
        std::vector<Index> cols(modified.begin(), modified.end());
        std::set<Index> row_set;
        std::map<Index, SparseVector> matrix;
        for (Index j : cols) {
            matrix[j] = boundary_of(j);
            for (const auto& [r, x] : matrix[j]) {
                row_set.insert(r);
            }
        }
        // Columns already pivoting on these rows join the block, and so does
        // all the torsion of this dimension so the result stays a divisibility chain.
        auto join = [&](Index col, Index r, const Integer& lambda) {
            if (!matrix.count(col)) {
                cols.push_back(col);
                SparseVector v;
                v.set(r, lambda);
                matrix[col] = v;
                row_set.insert(r);
            }
        };
        for (Index r : std::vector<Index>(row_set.begin(), row_set.end())) {
            const Link& u = m.up(q - 1, r);
            if (u.present()) {
                join(u.partner, r, u.lambda);
            }
        }
        for (Index j = 0; j < m.size(q); ++j) {
            const Link& dn = m.down(q, j);
            if (j != k && dn.present() && dn.lambda != 1) {
                join(j, dn.partner, dn.lambda);
            }
        }
        for (Index j : cols) {
            ed.clear_down(q, j);
        }
        std::vector<Index> rows(row_set.begin(), row_set.end());
        local_reduce(ed, q, rows, cols, matrix);
    }

    ed.level(q).dual.erase_entry(id);
    ed.remove_element(q, k);
    ed.registry().erase(s);
}

ImageModel build_image_model(const DigitalImage& img)
{
    SimplicialComplex K = simplicial_representation(img);
    return ImageModel{img, build_am_model(K, special_initial_base(K))};
}

UpdatePlan plan_add(const DigitalImage& img, const Point& v)
{
    if (img.contains(v)) {
        std::ostringstream msg;
        msg << "add_voxel: " << v << " is already in the image";
        throw std::invalid_argument(msg.str());
    }
    return UpdatePlan{v, true, simplices_containing(img, v)};
}

UpdatePlan plan_delete(const DigitalImage& img, const Point& v)
{
    if (!img.contains(v)) {
        std::ostringstream msg;
        msg << "delete_voxel: " << v << " is not in the image";
        throw std::invalid_argument(msg.str());
    }
    std::vector<Simplex> s = simplices_containing(img.without(v), v);
    std::reverse(s.begin(), s.end());
    return UpdatePlan{v, false, std::move(s)};
}

void add_voxel(ImageModel& m, const Point& v, const StepHook& hook)
{
    if (m.image.grid() != Grid::Z3) {
        throw std::invalid_argument("add_voxel: dynamic updates work on Z3 images");
    }
    UpdatePlan plan = plan_add(m.image, v);
    for (const auto& s : plan.simplices) {
        add_simplex(m.model, s);
        if (hook) {
            hook(m.model, s);
        }
    }
    m.image = m.image.with(v);
}

void delete_voxel(ImageModel& m, const Point& v, const StepHook& hook)
{
    if (m.image.grid() != Grid::Z3) {
        throw std::invalid_argument("delete_voxel: dynamic updates work on Z3 images");
    }
    UpdatePlan plan = plan_delete(m.image, v);
    for (const auto& s : plan.simplices) {
        delete_simplex(m.model, s);
        if (hook) {
            hook(m.model, s);
        }
    }
    m.image = m.image.without(v);
}

void common_processing(ImageModel& m, const DigitalImage& F, const StepHook& hook)
{
    if (F.empty()) {
        return;
    }
    if (is_subset(F, m.image)) {
        for (const auto& p : F.points()) {
            delete_voxel(m, p, hook);
        }
    } else if (set_intersection(F, m.image).empty()) {
        for (const auto& p : F.points()) {
            add_voxel(m, p, hook);
        }
    } else {
        throw std::invalid_argument("common_processing: F is neither inside nor outside the image");
    }
}

namespace {

void check_pair(const DigitalImage& I, const DigitalImage& J)
{
    if (I.empty()) {
        throw TrivialCaseError(TrivialCase::EmptyFirst, "first image is empty");
    }
    if (J.empty()) {
        throw TrivialCaseError(TrivialCase::EmptySecond, "second image is empty");
    }
    if (set_intersection(I, J).empty()) {
        throw TrivialCaseError(TrivialCase::DisjointInputs, "images are disjoint");
    }
    if (is_subset(I, J)) {
        throw TrivialCaseError(TrivialCase::FirstContainedInSecond, "first image is contained in the second");
    }
}

// Appends the model `b` (over a vertex-disjoint complex) to `a`.
void merge_disjoint(AmModel& a, const AmModel& b)
{
    ModelEditor ed(a);
    const SimplexRegistry& rb = b.registry();
    const int top = std::max(rb.dim(), b.dim());
    std::vector<std::vector<Index>> idmap(static_cast<std::size_t>(top + 1));
    for (int q = 0; q <= top; ++q) {
        auto& map = idmap[static_cast<std::size_t>(q)];
        map.assign(static_cast<std::size_t>(rb.capacity(q)), -1);
        for (Index id = 0; id < rb.capacity(q); ++id) {
            if (rb.alive(q, id)) {
                map[static_cast<std::size_t>(id)] = ed.registry().insert(rb.simplex(q, id));
            }
        }
    }
    std::vector<Index> offset(static_cast<std::size_t>(top + 1), 0);
    for (int q = 0; q <= top; ++q) {
        offset[static_cast<std::size_t>(q)] = ed.level(q).basis.size();
        for (Index k = 0; k < b.size(q); ++k) {
            SparseVector basis = b.basis_vector(q, k);
            SparseVector dual = b.dual_vector(q, k);
            basis.remap(idmap[static_cast<std::size_t>(q)]);
            dual.remap(idmap[static_cast<std::size_t>(q)]);
            ed.add_element(q, std::move(basis), std::move(dual), b.name(q, k));
        }
    }
    for (int q = 1; q <= top; ++q) {
        for (Index k = 0; k < b.size(q); ++k) {
            const Link& dn = b.down(q, k);
            if (dn.present()) {
                ed.set_link(q, offset[static_cast<std::size_t>(q)] + k,
                            offset[static_cast<std::size_t>(q - 1)] + dn.partner, dn.lambda);
            }
        }
    }
}

}  // namespace

ImageModel union_model(const ImageModel& mI, const ImageModel& mJ, const StepHook& hook)
{
    check_pair(mI.image, mJ.image);
    const DigitalImage F = set_intersection(mI.image, mJ.image);
    ImageModel a = mI;
    ImageModel b = mJ;
    common_processing(a, F, hook);
    common_processing(b, F, hook);
    merge_disjoint(a.model, b.model);

    // Simplices spanning both parts are in K(I u J) but in neither model.
    const DigitalImage joined = set_union(a.image, b.image);
    std::vector<Simplex> cross;
    SimplicialComplex K = simplicial_representation(joined);
    for (int q = 1; q <= K.dim(); ++q) {
        for (const auto& s : K.simplices(q)) {
            bool in_a = false;
            bool in_b = false;
            for (Vertex v : s.vertices()) {
                (a.image.contains(vertex_point(v)) ? in_a : in_b) = true;
            }
            if (in_a && in_b) {
                cross.push_back(s);
            }
        }
    }
    for (const auto& s : cross) {
        add_simplex(a.model, s);
        if (hook) {
            hook(a.model, s);
        }
    }
    a.image = joined;
    common_processing(a, F, hook);
    return a;
}

ImageModel intersection_model(const ImageModel& mI, const DigitalImage& J, const StepHook& hook)
{
    check_pair(mI.image, J);
    ImageModel out = mI;
    common_processing(out, set_difference(mI.image, J), hook);
    return out;
}

ImageModel difference_model(const ImageModel& mI, const DigitalImage& J, const StepHook& hook)
{
    check_pair(mI.image, J);
    ImageModel out = mI;
    common_processing(out, set_intersection(mI.image, J), hook);
    return out;
}

ImageModel inverse_model(const ImageModel& mG, const DigitalImage& I, const StepHook& hook)
{
    if (mG.image != inverse_frame(I)) {
        throw std::invalid_argument("inverse_model: model is not over the frame of the image");
    }
    ImageModel out = mG;
    common_processing(out, I, hook);
    return out;
}

ImageModel inverse_model(const DigitalImage& I, const StepHook& hook)
{
    return inverse_model(build_image_model(inverse_frame(I)), I, hook);
}

}  // namespace amtopo
