#include "amtopo/am_model.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "amtopo/snf_engine.hpp"
#include "model_editor.hpp"

namespace amtopo {

// ---------------------------------------------------------------------------
// SimplexRegistry

SimplexRegistry::SimplexRegistry(const SimplicialComplex& K)
{
    levels_.resize(static_cast<std::size_t>(K.dim() + 1));
    for (int q = 0; q <= K.dim(); ++q) {
        auto& L = levels_[static_cast<std::size_t>(q)];
        L.simplices = K.simplices(q);
        L.alive.assign(L.simplices.size(), 1);
        L.lookup.reserve(L.simplices.size());
        for (std::size_t i = 0; i < L.simplices.size(); ++i) {
            L.lookup.emplace(L.simplices[i], static_cast<Index>(i));
        }
        L.live = static_cast<Index>(L.simplices.size());
    }
}

Index SimplexRegistry::insert(const Simplex& s)
{
    const int q = s.dim();
    if (q > 0) {
        for (int i = 0; i <= q; ++i) {
            if (!find(s.face(i))) {
                std::ostringstream msg;
                msg << "SimplexRegistry: face " << s.face(i) << " of " << s << " is missing";
                throw std::invalid_argument(msg.str());
            }
        }
    }
    if (static_cast<int>(levels_.size()) <= q) {
        levels_.resize(static_cast<std::size_t>(q + 1));
    }
    auto& L = levels_[static_cast<std::size_t>(q)];
    auto id = static_cast<Index>(L.simplices.size());
    if (!L.lookup.emplace(s, id).second) {
        std::ostringstream msg;
        msg << "SimplexRegistry: " << s << " already present";
        throw std::invalid_argument(msg.str());
    }
    L.simplices.push_back(s);
    L.alive.push_back(1);
    ++L.live;
    return id;
}

void SimplexRegistry::erase(const Simplex& s)
{
    auto id = find(s);
    if (!id) {
        throw std::invalid_argument("SimplexRegistry: erasing an absent simplex");
    }
    auto& L = levels_[static_cast<std::size_t>(s.dim())];
    L.lookup.erase(s);
    L.alive[static_cast<std::size_t>(*id)] = 0;
    --L.live;
}

std::optional<Index> SimplexRegistry::find(const Simplex& s) const
{
    if (s.dim() >= static_cast<int>(levels_.size())) {
        return std::nullopt;
    }
    const auto& m = levels_[static_cast<std::size_t>(s.dim())].lookup;
    auto it = m.find(s);
    if (it == m.end()) {
        return std::nullopt;
    }
    return it->second;
}

const Simplex& SimplexRegistry::simplex(int q, Index id) const
{
    return levels_.at(static_cast<std::size_t>(q)).simplices.at(static_cast<std::size_t>(id));
}

bool SimplexRegistry::alive(int q, Index id) const
{
    if (q < 0 || q >= static_cast<int>(levels_.size())) {
        return false;
    }
    const auto& L = levels_[static_cast<std::size_t>(q)];
    return id >= 0 && id < static_cast<Index>(L.alive.size()) && L.alive[static_cast<std::size_t>(id)];
}

Index SimplexRegistry::count(int q) const
{
    if (q < 0 || q >= static_cast<int>(levels_.size())) {
        return 0;
    }
    return levels_[static_cast<std::size_t>(q)].live;
}

Index SimplexRegistry::capacity(int q) const
{
    if (q < 0 || q >= static_cast<int>(levels_.size())) {
        return 0;
    }
    return static_cast<Index>(levels_[static_cast<std::size_t>(q)].simplices.size());
}

int SimplexRegistry::dim() const
{
    for (int q = static_cast<int>(levels_.size()) - 1; q >= 0; --q) {
        if (levels_[static_cast<std::size_t>(q)].live > 0) {
            return q;
        }
    }
    return -1;
}

SimplicialComplex SimplexRegistry::to_complex() const
{
    std::vector<Simplex> all;
    for (const auto& L : levels_) {
        for (std::size_t i = 0; i < L.simplices.size(); ++i) {
            if (L.alive[i]) {
                all.push_back(L.simplices[i]);
            }
        }
    }
    return SimplicialComplex::from_simplices(all);
}

SparseVector SimplexRegistry::to_ids(const Chain& c) const
{
    std::vector<SparseVector::Entry> e;
    e.reserve(c.size());
    for (const auto& [s, x] : c.terms()) {
        auto id = find(s);
        if (!id) {
            std::ostringstream msg;
            msg << "chain term " << s << " is not a simplex of the complex";
            throw std::invalid_argument(msg.str());
        }
        e.emplace_back(*id, x);
    }
    return SparseVector::from_entries(std::move(e));
}

Chain SimplexRegistry::to_chain(int q, const SparseVector& ids) const
{
    Chain c(q);
    for (const auto& [id, x] : ids) {
        c.add(simplex(q, id), x);
    }
    return c;
}

std::vector<std::pair<Index, int>> SimplexRegistry::faces(int q, Index id) const
{
    std::vector<std::pair<Index, int>> out;
    if (q == 0) {
        return out;
    }
    const Simplex& s = simplex(q, id);
    const auto& lookup = levels_[static_cast<std::size_t>(q - 1)].lookup;
    out.reserve(static_cast<std::size_t>(q + 1));
    for (int i = 0; i <= q; ++i) {
        auto it = lookup.find(s.face(i));
        if (it == lookup.end()) {
            throw std::logic_error("SimplexRegistry: missing face");
        }
        out.emplace_back(it->second, i % 2 == 0 ? 1 : -1);
    }
    return out;
}

SparseVector SimplexRegistry::boundary(int q, const SparseVector& ids) const
{
    std::vector<SparseVector::Entry> e;
    if (q == 0) {
        return {};
    }
    e.reserve(ids.size() * static_cast<std::size_t>(q + 1));
    for (const auto& [id, x] : ids) {
        for (const auto& [f, sign] : faces(q, id)) {
            e.emplace_back(f, sign > 0 ? x : Integer(-x));
        }
    }
    return SparseVector::from_entries(std::move(e));
}

// ---------------------------------------------------------------------------
// VectorFamily

void VectorFamily::note(Index k, const SparseVector& v)
{
    for (const auto& [tau, x] : v) {
        auto t = static_cast<std::size_t>(tau);
        if (support_.size() <= t) {
            support_.resize(t + 1);
        }
        support_[t].push_back(k);
    }
}

Index VectorFamily::append(SparseVector v)
{
    auto k = static_cast<Index>(vecs_.size());
    note(k, v);
    vecs_.push_back(std::move(v));
    return k;
}

void VectorFamily::set(Index k, SparseVector v)
{
    note(k, v);
    vecs_.at(static_cast<std::size_t>(k)) = std::move(v);
}

void VectorFamily::axpy(Index dst, const Integer& k, Index src)
{
    if (dst == src) {
        throw std::invalid_argument("VectorFamily::axpy: dst == src");
    }
    axpy(dst, k, vecs_.at(static_cast<std::size_t>(src)));
}

void VectorFamily::axpy(Index dst, const Integer& k, const SparseVector& v)
{
    auto& d = vecs_.at(static_cast<std::size_t>(dst));
    std::vector<Index> fresh;
    for (const auto& [tau, x] : v) {
        if (!d.contains(tau)) {
            fresh.push_back(tau);
        }
    }
    d.axpy(k, v);
    for (Index tau : fresh) {
        auto t = static_cast<std::size_t>(tau);
        if (support_.size() <= t) {
            support_.resize(t + 1);
        }
        support_[t].push_back(dst);
    }
}

void VectorFamily::negate(Index k)
{
    vecs_.at(static_cast<std::size_t>(k)).negate();
}

void VectorFamily::swap_remove(Index k)
{
    auto last = static_cast<Index>(vecs_.size()) - 1;
    if (k < 0 || k > last) {
        throw std::out_of_range("VectorFamily::swap_remove");
    }
    if (k != last) {
        vecs_[static_cast<std::size_t>(k)] = std::move(vecs_[static_cast<std::size_t>(last)]);
        note(k, vecs_[static_cast<std::size_t>(k)]);
    }
    vecs_.pop_back();
}

std::vector<Index> VectorFamily::containing(Index tau) const
{
    std::vector<Index> out;
    auto t = static_cast<std::size_t>(tau);
    if (tau < 0 || t >= support_.size()) {
        return out;
    }
    for (Index k : support_[t]) {
        if (k < size() && vecs_[static_cast<std::size_t>(k)].contains(tau)) {
            out.push_back(k);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void VectorFamily::compact(Index tau)
{
    auto t = static_cast<std::size_t>(tau);
    if (tau >= 0 && t < support_.size()) {
        support_[t] = containing(tau);
    }
}

void VectorFamily::erase_entry(Index tau)
{
    for (Index k : containing(tau)) {
        vecs_[static_cast<std::size_t>(k)].set(tau, 0);
    }
    auto t = static_cast<std::size_t>(tau);
    if (tau >= 0 && t < support_.size()) {
        support_[t].clear();
        support_[t].shrink_to_fit();
    }
}

// ---------------------------------------------------------------------------
// ModelEditor

AmModel::Level& ModelEditor::level(int q)
{
    if (q < 0) {
        throw std::out_of_range("ModelEditor: negative dimension");
    }
    if (static_cast<int>(m_.levels_.size()) <= q) {
        m_.levels_.resize(static_cast<std::size_t>(q + 1));
    }
    return m_.levels_[static_cast<std::size_t>(q)];
}

Index ModelEditor::add_element(int q, SparseVector basis, SparseVector dual, std::string name)
{
    auto& L = level(q);
    Index k = L.basis.append(std::move(basis));
    L.dual.append(std::move(dual));
    L.down.emplace_back();
    L.up.emplace_back();
    L.names.push_back(std::move(name));
    return k;
}

void ModelEditor::remove_element(int q, Index k)
{
    clear_down(q, k);
    clear_up(q, k);
    auto& L = level(q);
    auto last = L.basis.size() - 1;
    if (k != last) {
        auto uk = static_cast<std::size_t>(k);
        auto ul = static_cast<std::size_t>(last);
        L.down[uk] = std::move(L.down[ul]);
        L.up[uk] = std::move(L.up[ul]);
        L.names[uk] = std::move(L.names[ul]);
        if (L.down[uk].present()) {
            level(q - 1).up[static_cast<std::size_t>(L.down[uk].partner)].partner = k;
        }
        if (L.up[uk].present()) {
            level(q + 1).down[static_cast<std::size_t>(L.up[uk].partner)].partner = k;
        }
    }
    auto& L2 = level(q);
    L2.basis.swap_remove(k);
    L2.dual.swap_remove(k);
    L2.down.pop_back();
    L2.up.pop_back();
    L2.names.pop_back();
}

void ModelEditor::set_link(int q, Index source, Index target, const Integer& lambda)
{
    clear_down(q, source);
    clear_up(q - 1, target);
    level(q).down.at(static_cast<std::size_t>(source)) = Link{target, lambda};
    level(q - 1).up.at(static_cast<std::size_t>(target)) = Link{source, lambda};
}

void ModelEditor::clear_down(int q, Index k)
{
    auto& l = level(q).down.at(static_cast<std::size_t>(k));
    if (l.present()) {
        level(q - 1).up.at(static_cast<std::size_t>(l.partner)) = Link{};
        level(q).down[static_cast<std::size_t>(k)] = Link{};
    }
}

void ModelEditor::clear_up(int q, Index k)
{
    auto& l = level(q).up.at(static_cast<std::size_t>(k));
    if (l.present()) {
        level(q + 1).down.at(static_cast<std::size_t>(l.partner)) = Link{};
        level(q).up[static_cast<std::size_t>(k)] = Link{};
    }
}

void ModelEditor::col_axpy(int q, Index dst, Index src, const Integer& k)
{
    auto& L = level(q);
    L.basis.axpy(dst, k, src);
    L.dual.axpy(src, -k, dst);
}

void ModelEditor::row_axpy(int q, Index dst, Index src, const Integer& k)
{
    auto& L = level(q);
    L.basis.axpy(src, -k, dst);
    L.dual.axpy(dst, k, src);
}

void ModelEditor::col_negate(int q, Index c)
{
    auto& L = level(q);
    L.basis.negate(c);
    L.dual.negate(c);
}

void ModelEditor::col_transform(int q, Index c1, Index c2, const Integer& m11, const Integer& m12,
                                const Integer& m21, const Integer& m22)
{
    auto& L = level(q);
    SparseVector b1 = L.basis[c1];
    SparseVector b2 = L.basis[c2];
    L.basis.set(c1, m11 * b1 + m21 * b2);
    L.basis.set(c2, m12 * b1 + m22 * b2);
    // The coordinate functionals transform by the inverse matrix.
    SparseVector d1 = L.dual[c1];
    SparseVector d2 = L.dual[c2];
    L.dual.set(c1, m22 * d1 - m12 * d2);
    L.dual.set(c2, m11 * d2 - m21 * d1);
}

// ---------------------------------------------------------------------------
// AmModel queries

const char* to_string(Role r)
{
    switch (r) {
    case Role::PairedSource:
        return "paired-source";
    case Role::PairedTarget:
        return "paired-target";
    case Role::TorsionSource:
        return "torsion-source";
    case Role::TorsionTarget:
        return "torsion-target";
    case Role::FreeCycle:
        return "free-cycle";
    }
    return "?";
}

const AmModel::Level& AmModel::level(int q) const
{
    static const Level empty;
    if (q < 0 || q >= static_cast<int>(levels_.size())) {
        return empty;
    }
    return levels_[static_cast<std::size_t>(q)];
}

int AmModel::dim() const
{
    for (int q = static_cast<int>(levels_.size()) - 1; q >= 0; --q) {
        if (size(q) > 0) {
            return q;
        }
    }
    return -1;
}

Index AmModel::size(int q) const
{
    return level(q).basis.size();
}

namespace {

void check_element(const AmModel& m, int q, Index k)
{
    if (k < 0 || k >= m.size(q)) {
        throw std::out_of_range("AmModel: basis index out of range");
    }
}

}  // namespace

const SparseVector& AmModel::basis_vector(int q, Index k) const
{
    check_element(*this, q, k);
    return level(q).basis[k];
}

Chain AmModel::basis_chain(int q, Index k) const
{
    return reg_.to_chain(q, basis_vector(q, k));
}

const SparseVector& AmModel::dual_vector(int q, Index k) const
{
    check_element(*this, q, k);
    return level(q).dual[k];
}

const std::string& AmModel::name(int q, Index k) const
{
    check_element(*this, q, k);
    return level(q).names[static_cast<std::size_t>(k)];
}

const Link& AmModel::down(int q, Index k) const
{
    check_element(*this, q, k);
    return level(q).down[static_cast<std::size_t>(k)];
}

const Link& AmModel::up(int q, Index k) const
{
    check_element(*this, q, k);
    return level(q).up[static_cast<std::size_t>(k)];
}

Role AmModel::role(int q, Index k) const
{
    const Link& dn = down(q, k);
    if (dn.present()) {
        return dn.lambda == 1 ? Role::PairedSource : Role::TorsionSource;
    }
    const Link& u = up(q, k);
    if (u.present()) {
        return u.lambda == 1 ? Role::PairedTarget : Role::TorsionTarget;
    }
    return Role::FreeCycle;
}

bool AmModel::in_M(int q, Index k) const
{
    Role r = role(q, k);
    return r != Role::PairedSource && r != Role::PairedTarget;
}

std::vector<Index> AmModel::M(int q) const
{
    std::vector<Index> out;
    for (Index k = 0; k < size(q); ++k) {
        if (in_M(q, k)) {
            out.push_back(k);
        }
    }
    return out;
}

SparseVector AmModel::coordinates(int q, const SparseVector& ids) const
{
    const auto& dual = level(q).dual;
    std::vector<SparseVector::Entry> acc;
    for (const auto& [tau, x] : ids) {
        if (!reg_.alive(q, tau)) {
            throw std::invalid_argument("AmModel::coordinates: chain uses a simplex outside the complex");
        }
        for (Index k : dual.containing(tau)) {
            acc.emplace_back(k, x * dual[k].get(tau));
        }
    }
    return SparseVector::from_entries(std::move(acc));
}

SparseVector AmModel::coordinates(const Chain& c) const
{
    if (c.is_zero()) {
        return {};
    }
    return coordinates(c.dim(), reg_.to_ids(c));
}

SparseVector AmModel::realize(int q, const SparseVector& coords) const
{
    SparseVector out;
    for (const auto& [k, x] : coords) {
        out.axpy(x, basis_vector(q, k));
    }
    return out;
}

SparseVector AmModel::d(int q, const SparseVector& coords) const
{
    std::vector<SparseVector::Entry> acc;
    for (const auto& [k, x] : coords) {
        const Link& l = down(q, k);
        if (l.present()) {
            acc.emplace_back(l.partner, x * l.lambda);
        }
    }
    return SparseVector::from_entries(std::move(acc));
}

SparseVector AmModel::phi(int q, const SparseVector& coords) const
{
    std::vector<SparseVector::Entry> acc;
    for (const auto& [k, x] : coords) {
        const Link& l = up(q, k);
        if (l.present() && l.lambda == 1) {
            acc.emplace_back(l.partner, x);
        }
    }
    return SparseVector::from_entries(std::move(acc));
}

SparseVector AmModel::projection(int q, const SparseVector& coords) const
{
    SparseVector out = coords;
    if (q > 0) {
        out.axpy(-1, phi(q - 1, d(q, coords)));
    }
    out.axpy(-1, d(q + 1, phi(q, coords)));
    return out;
}

Chain AmModel::projection(const Chain& c) const
{
    if (c.is_zero()) {
        return c;
    }
    const int q = c.dim();
    return reg_.to_chain(q, realize(q, projection(q, coordinates(c))));
}

// ---------------------------------------------------------------------------
// Construction

namespace {

std::string simplex_name(const Simplex& s)
{
    std::ostringstream os;
    os << s;
    return os.str();
}

// Inverse of a basis in which every chain is either +-(a simplex) or has a
// lead simplex with coefficient +-1 whose other simplices are all carried by
// the first kind. Returns false when the basis is not of that shape.
bool lead_form_inverse(const std::vector<SparseVector>& chains, Index n, std::vector<SparseVector>& dual)
{
    if (static_cast<Index>(chains.size()) != n) {
        return false;
    }
    std::vector<Index> unit_owner(static_cast<std::size_t>(n), -1);
    std::vector<Integer> unit_sign(static_cast<std::size_t>(n));
    for (Index k = 0; k < n; ++k) {
        const auto& c = chains[static_cast<std::size_t>(k)];
        if (c.size() == 1 && abs(c.begin()->second) == 1) {
            auto t = static_cast<std::size_t>(c.begin()->first);
            if (t >= unit_owner.size() || unit_owner[t] >= 0) {
                return false;
            }
            unit_owner[t] = k;
            unit_sign[t] = c.begin()->second;
        }
    }
    std::vector<Index> lead_owner(static_cast<std::size_t>(n), -1);
    std::vector<Index> lead_of(static_cast<std::size_t>(n), -1);
    for (Index k = 0; k < n; ++k) {
        const auto& c = chains[static_cast<std::size_t>(k)];
        if (c.size() == 1 && abs(c.begin()->second) == 1) {
            continue;
        }
        Index lead = -1;
        for (const auto& [tau, x] : c) {
            if (tau >= n) {
                return false;
            }
            if (unit_owner[static_cast<std::size_t>(tau)] < 0) {
                if (lead >= 0 || abs(x) != 1) {
                    return false;
                }
                lead = tau;
            }
        }
        if (lead < 0 || lead_owner[static_cast<std::size_t>(lead)] >= 0) {
            return false;
        }
        lead_owner[static_cast<std::size_t>(lead)] = k;
        lead_of[static_cast<std::size_t>(k)] = lead;
    }
    for (Index t = 0; t < n; ++t) {
        if (unit_owner[static_cast<std::size_t>(t)] < 0 && lead_owner[static_cast<std::size_t>(t)] < 0) {
            return false;
        }
    }
    std::vector<std::vector<SparseVector::Entry>> rows(static_cast<std::size_t>(n));
    for (Index t = 0; t < n; ++t) {
        Index u = unit_owner[static_cast<std::size_t>(t)];
        if (u >= 0) {
            rows[static_cast<std::size_t>(u)].emplace_back(t, unit_sign[static_cast<std::size_t>(t)]);
        }
    }
    for (Index k = 0; k < n; ++k) {
        Index lead = lead_of[static_cast<std::size_t>(k)];
        if (lead < 0) {
            continue;
        }
        const auto& c = chains[static_cast<std::size_t>(k)];
        Integer lam = c.get(lead);
        rows[static_cast<std::size_t>(k)].emplace_back(lead, lam);
        for (const auto& [tau, x] : c) {
            if (tau == lead) {
                continue;
            }
            auto ut = static_cast<std::size_t>(tau);
            rows[static_cast<std::size_t>(unit_owner[ut])].emplace_back(lead, -unit_sign[ut] * x * lam);
        }
    }
    dual.clear();
    for (auto& r : rows) {
        dual.push_back(SparseVector::from_entries(std::move(r)));
    }
    return true;
}

std::vector<SparseVector> general_inverse(const std::vector<SparseVector>& chains, Index n)
{
    if (static_cast<Index>(chains.size()) != n) {
        throw std::invalid_argument("initial basis has the wrong cardinality");
    }
    IntMatrix B = IntMatrix::from_columns(n, chains);
    SnfResult r = snf(B);
    if (r.rank_ones != n) {
        throw std::invalid_argument("initial basis is not a basis over the integers");
    }
    return (r.V * r.U).row_vectors();
}

}  // namespace

AmModel build_am_model(const SimplicialComplex& K)
{
    return build_am_model(K, InitialBasis{});
}

AmModel build_am_model(const SimplicialComplex& K, const InitialBasis& base, BuildStats* stats)
{
    if (!K.is_face_closed()) {
        throw std::invalid_argument("build_am_model: complex is not face-closed");
    }
    AmModel m;
    ModelEditor ed(m);
    ed.registry() = SimplexRegistry(K);
    const SimplexRegistry& reg = ed.registry();
    const int n = K.dim();

    std::vector<std::vector<SparseVector>> initial(static_cast<std::size_t>(n + 1));
    for (int q = 0; q <= n; ++q) {
        const Index count = K.count(q);
        auto uq = static_cast<std::size_t>(q);
        bool custom = uq < base.chains.size() && !base.chains[uq].empty();
        std::vector<SparseVector> chains;
        std::vector<SparseVector> dual;
        if (custom) {
            for (const auto& c : base.chains[uq]) {
                if (!c.is_zero() && c.dim() != q) {
                    throw std::invalid_argument("initial basis chain of wrong dimension");
                }
                chains.push_back(reg.to_ids(c));
            }
            if (!lead_form_inverse(chains, count, dual)) {
                dual = general_inverse(chains, count);
            }
            initial[uq] = chains;
        } else {
            for (Index i = 0; i < count; ++i) {
                chains.push_back(SparseVector::unit(i));
                dual.push_back(SparseVector::unit(i));
            }
        }
        ed.level(q);
        for (Index i = 0; i < count; ++i) {
            std::string name;
            if (custom && uq < base.names.size() && static_cast<std::size_t>(i) < base.names[uq].size()) {
                name = base.names[uq][static_cast<std::size_t>(i)];
            } else if (custom && !(chains[static_cast<std::size_t>(i)].size() == 1)) {
                std::ostringstream os;
                os << "c" << q << "_" << i;
                name = os.str();
            } else {
                const auto& c = chains[static_cast<std::size_t>(i)];
                name = simplex_name(reg.simplex(q, c.begin()->first));
            }
            ed.add_element(q, std::move(chains[static_cast<std::size_t>(i)]),
                           std::move(dual[static_cast<std::size_t>(i)]), std::move(name));
        }
    }

    for (int q = 1; q <= n; ++q) {
        auto& lower = ed.level(q - 1);
        std::vector<Index> rows;
        for (Index k = 0; k < lower.basis.size(); ++k) {
            if (!lower.down[static_cast<std::size_t>(k)].present()) {
                rows.push_back(k);
            }
        }
        // Coordinates of (q-1)-simplices restricted to the cycle rows.
        std::vector<std::vector<std::pair<Index, Integer>>> coord(static_cast<std::size_t>(reg.capacity(q - 1)));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (const auto& [tau, x] : lower.dual[rows[r]]) {
                coord[static_cast<std::size_t>(tau)].emplace_back(static_cast<Index>(r), x);
            }
        }
        auto& upper = ed.level(q);
        const Index cols_n = upper.basis.size();
        SnfEngine engine(static_cast<Index>(rows.size()), cols_n);
        std::vector<Index> cols(static_cast<std::size_t>(cols_n));
        for (Index j = 0; j < cols_n; ++j) {
            cols[static_cast<std::size_t>(j)] = j;
            std::vector<SparseVector::Entry> e;
            for (const auto& [tau, x] : reg.boundary(q, upper.basis[j])) {
                for (const auto& [r, y] : coord[static_cast<std::size_t>(tau)]) {
                    e.emplace_back(r, x * y);
                }
            }
            engine.set_column(j, SparseVector::from_entries(std::move(e)));
        }
        coord.clear();
        LevelListener listener(ed, q, rows, cols);
        for (const auto& p : engine.reduce(&listener)) {
            ed.set_link(q, cols[static_cast<std::size_t>(p.col)], rows[static_cast<std::size_t>(p.row)], p.value);
        }
    }
    ed.set_snf_form(true);

    if (stats) {
        stats->initial_kept.assign(static_cast<std::size_t>(n + 1), 0);
        stats->initial_special.assign(static_cast<std::size_t>(n + 1), 0);
        for (int q = 0; q <= n; ++q) {
            auto uq = static_cast<std::size_t>(q);
            for (std::size_t i = 0; i < initial[uq].size(); ++i) {
                if (initial[uq][i].size() == 1) {
                    continue;
                }
                ++stats->initial_special[uq];
                if (m.basis_vector(q, static_cast<Index>(i)) == initial[uq][i]) {
                    ++stats->initial_kept[uq];
                }
            }
        }
    }
    return m;
}

// ---------------------------------------------------------------------------
// Homology

GroupSummary HomologySummary::groups() const
{
    GroupSummary g;
    for (const auto& d : dims) {
        g.betti.push_back(d.betti);
        g.torsion.push_back(d.torsion);
    }
    g.trim();
    return g;
}

HomologySummary homology(const AmModel& m)
{
    HomologySummary h;
    for (int q = 0; q <= m.dim(); ++q) {
        DimensionHomology dh;
        for (Index k = 0; k < m.size(q); ++k) {
            Role r = m.role(q, k);
            if (r == Role::FreeCycle) {
                dh.free_generators.push_back(Generator{k, m.basis_chain(q, k), 0});
            } else if (r == Role::TorsionTarget) {
                dh.torsion_generators.push_back(Generator{k, m.basis_chain(q, k), m.up(q, k).lambda});
            }
        }
        std::stable_sort(dh.torsion_generators.begin(), dh.torsion_generators.end(),
                         [](const Generator& a, const Generator& b) { return a.order < b.order; });
        dh.betti = static_cast<Index>(dh.free_generators.size());
        for (std::size_t i = 0; i < dh.torsion_generators.size(); ++i) {
            const Integer& t = dh.torsion_generators[i].order;
            if (i > 0 && t % dh.torsion_generators[i - 1].order != 0) {
                throw std::logic_error("homology: torsion coefficients do not form a divisibility chain");
            }
            dh.torsion.push_back(t);
        }
        h.dims.push_back(std::move(dh));
    }
    return h;
}

// ---------------------------------------------------------------------------
// Contraction

ChainContraction derive_contraction(const AmModel& m)
{
    ChainContraction c;
    const int n = m.dim();
    std::vector<std::vector<Index>> pos(static_cast<std::size_t>(n + 1));
    for (int q = 0; q <= n; ++q) {
        c.M.push_back(m.M(q));
        pos[static_cast<std::size_t>(q)].assign(static_cast<std::size_t>(m.size(q)), -1);
        for (std::size_t i = 0; i < c.M.back().size(); ++i) {
            pos[static_cast<std::size_t>(q)][static_cast<std::size_t>(c.M.back()[i])] = static_cast<Index>(i);
        }
    }
    auto msize = [&](int q) -> Index {
        return q < 0 || q > n ? 0 : static_cast<Index>(c.M[static_cast<std::size_t>(q)].size());
    };
    for (int q = 0; q <= n; ++q) {
        const auto uq = static_cast<std::size_t>(q);
        IntMatrix d(m.size(q - 1), m.size(q));
        IntMatrix dM(msize(q - 1), msize(q));
        IntMatrix f(msize(q), m.size(q));
        IntMatrix g(m.size(q), msize(q));
        IntMatrix phi(m.size(q + 1), m.size(q));
        for (Index k = 0; k < m.size(q); ++k) {
            const Link& dn = m.down(q, k);
            if (dn.present()) {
                d.set(dn.partner, k, dn.lambda);
                Index pi = pos[uq][static_cast<std::size_t>(k)];
                if (pi >= 0) {
                    Index pt = pos[uq - 1][static_cast<std::size_t>(dn.partner)];
                    if (pt >= 0) {
                        dM.set(pt, pi, dn.lambda);
                    }
                }
            }
            Index p = pos[uq][static_cast<std::size_t>(k)];
            if (p >= 0) {
                f.set(p, k, 1);
                g.set(k, p, 1);
            }
            const Link& u = m.up(q, k);
            if (u.present() && u.lambda == 1) {
                phi.set(u.partner, k, 1);
            }
        }
        c.d.push_back(std::move(d));
        c.dM.push_back(std::move(dM));
        c.f.push_back(std::move(f));
        c.g.push_back(std::move(g));
        c.phi.push_back(std::move(phi));
    }
    return c;
}

namespace {

IntMatrix plus(const IntMatrix& a, const IntMatrix& b)
{
    IntMatrix r = a;
    for (Index j = 0; j < b.cols(); ++j) {
        r.column_mut(j).axpy(1, b.column(j));
    }
    return r;
}

IntMatrix minus(const IntMatrix& a, const IntMatrix& b)
{
    IntMatrix r = a;
    for (Index j = 0; j < b.cols(); ++j) {
        r.column_mut(j).axpy(-1, b.column(j));
    }
    return r;
}

}  // namespace

std::vector<std::string> check_contraction(const ChainContraction& c)
{
    std::vector<std::string> bad;
    const int n = static_cast<int>(c.d.size()) - 1;
    auto at = [](const std::vector<IntMatrix>& v, int q) -> const IntMatrix* {
        return q < 0 || q >= static_cast<int>(v.size()) ? nullptr : &v[static_cast<std::size_t>(q)];
    };
    auto report = [&](const char* what, int q) { bad.push_back(std::string(what) + " fails in dimension " + std::to_string(q)); };
    for (int q = 0; q <= n; ++q) {
        const IntMatrix& dq = *at(c.d, q);
        const IntMatrix& fq = *at(c.f, q);
        const IntMatrix& gq = *at(c.g, q);
        const IntMatrix& phiq = *at(c.phi, q);
        const Index nq = dq.cols();
        if (q > 0) {
            if (*at(c.f, q - 1) * dq != *at(c.dM, q) * fq) {
                report("f d = d' f", q);
            }
            if (dq * gq != *at(c.g, q - 1) * *at(c.dM, q)) {
                report("d g = g d'", q);
            }
        }
        if (fq * gq != IntMatrix::identity(fq.rows())) {
            report("f g = id", q);
        }
        IntMatrix lhs(nq, nq);
        if (q > 0) {
            lhs = plus(lhs, *at(c.phi, q - 1) * dq);
        }
        if (const IntMatrix* dn = at(c.d, q + 1)) {
            lhs = plus(lhs, *dn * phiq);
        }
        if (lhs != minus(IntMatrix::identity(nq), gq * fq)) {
            report("phi d + d phi = id - g f", q);
        }
        if (const IntMatrix* pn = at(c.phi, q + 1)) {
            if (!(*pn * phiq).is_zero()) {
                report("phi phi = 0", q);
            }
            if (*at(c.phi, q) * (*at(c.d, q + 1) * phiq) != phiq) {
                report("phi d phi = phi", q);
            }
        } else if (!phiq.is_zero()) {
            report("phi vanishes above the top dimension", q);
        }
    }
    return bad;
}

// ---------------------------------------------------------------------------
// Validation

std::vector<std::string> validate(const AmModel& m)
{
    std::vector<std::string> bad;
    const std::size_t limit = 32;
    auto fail = [&](int q, Index k, const std::string& what) {
        if (bad.size() < limit) {
            std::ostringstream os;
            os << "dimension " << q;
            if (k >= 0) {
                os << ", element " << k << " (" << m.name(q, k) << ")";
            }
            os << ": " << what;
            bad.push_back(os.str());
        }
    };
    const SimplexRegistry& reg = m.registry();
    if (!m.snf_form()) {
        bad.emplace_back("model is not flagged as being in Smith form");
    }
    const int top = std::max(m.dim(), reg.dim());
    for (int q = 0; q <= top; ++q) {
        const Index n = m.size(q);
        if (n != reg.count(q)) {
            fail(q, -1, "basis has " + std::to_string(n) + " elements for " + std::to_string(reg.count(q)) + " simplices");
            continue;
        }
        std::vector<std::vector<std::pair<Index, Integer>>> coord(static_cast<std::size_t>(reg.capacity(q)));
        for (Index k = 0; k < n; ++k) {
            for (const auto& [tau, x] : m.dual_vector(q, k)) {
                if (!reg.alive(q, tau)) {
                    fail(q, k, "coordinate functional uses a removed simplex");
                    continue;
                }
                coord[static_cast<std::size_t>(tau)].emplace_back(k, x);
            }
        }
        for (Index j = 0; j < n; ++j) {
            std::vector<SparseVector::Entry> e;
            bool dead = false;
            for (const auto& [tau, x] : m.basis_vector(q, j)) {
                if (!reg.alive(q, tau)) {
                    dead = true;
                    continue;
                }
                for (const auto& [k, y] : coord[static_cast<std::size_t>(tau)]) {
                    e.emplace_back(k, x * y);
                }
            }
            if (dead) {
                fail(q, j, "basis chain uses a removed simplex");
            }
            if (SparseVector::from_entries(std::move(e)) != SparseVector::unit(j)) {
                fail(q, j, "coordinate functionals are not inverse to the basis");
            }
        }
        std::vector<Integer> torsion;
        for (Index k = 0; k < n; ++k) {
            const Link& dn = m.down(q, k);
            const Link& u = m.up(q, k);
            if (dn.present() && u.present()) {
                fail(q, k, "element is both a source and a target");
            }
            SparseVector expected;
            if (dn.present()) {
                if (dn.partner >= m.size(q - 1) || m.up(q - 1, dn.partner) != Link{k, dn.lambda}) {
                    fail(q, k, "boundary link is not mirrored");
                    continue;
                }
                if (dn.lambda <= 0) {
                    fail(q, k, "nonpositive Smith coefficient");
                }
                expected = dn.lambda * m.basis_vector(q - 1, dn.partner);
            }
            if (u.present()) {
                if (u.partner >= m.size(q + 1) || m.down(q + 1, u.partner) != Link{k, u.lambda}) {
                    fail(q, k, "coboundary link is not mirrored");
                }
                if (u.lambda >= 2) {
                    torsion.push_back(u.lambda);
                }
            }
            if (reg.boundary(q, m.basis_vector(q, k)) != expected) {
                fail(q, k, "boundary does not match the Smith form");
            }
            SparseVector e = SparseVector::unit(k);
            SparseVector ph = m.phi(q, e);
            if (!m.phi(q + 1, ph).empty()) {
                fail(q, k, "phi phi != 0");
            }
            if (m.phi(q, m.d(q + 1, ph)) != ph) {
                fail(q, k, "phi d phi != phi");
            }
        }
        std::sort(torsion.begin(), torsion.end());
        for (std::size_t i = 1; i < torsion.size(); ++i) {
            if (torsion[i] % torsion[i - 1] != 0) {
                fail(q, -1, "torsion coefficients do not form a divisibility chain");
                break;
            }
        }
    }
    return bad;
}

// ---------------------------------------------------------------------------
// Replacing a generator

void swap_generator_in_place(AmModel& m, const Chain& x, Index h)
{
    if (x.is_zero()) {
        throw std::invalid_argument("swap_generator: x is zero");
    }
    const int q = x.dim();
    if (h < 0 || h >= m.size(q)) {
        throw std::invalid_argument("swap_generator: h out of range");
    }
    if (!m.in_M(q, h)) {
        throw std::invalid_argument("swap_generator: h is not an element of M");
    }
    SparseVector ids = m.registry().to_ids(x);
    if (!m.registry().boundary(q, ids).empty()) {
        throw std::invalid_argument("swap_generator: x is not a cycle");
    }
    SparseVector c = m.coordinates(q, ids);
    if (m.projection(q, c) != SparseVector::unit(h)) {
        throw std::invalid_argument("swap_generator: pi(x) != h");
    }
    if (c == SparseVector::unit(h)) {
        return;
    }
    ModelEditor ed(m);
    const Link u = m.up(q, h);
    if (u.present()) {
        // d z = lambda h; keep the Smith form by z <- z + lambda phi(x).
        for (const auto& [k, ck] : c) {
            const Link& uk = m.up(q, k);
            if (k != h && uk.present() && uk.lambda == 1) {
                ed.col_axpy(q + 1, u.partner, uk.partner, u.lambda * ck);
            }
        }
    }
    auto& L = ed.level(q);
    L.basis.set(h, std::move(ids));
    for (const auto& [k, ck] : c) {
        if (k != h) {
            L.dual.axpy(k, -ck, h);
        }
    }
}

AmModel swap_generator(const AmModel& m, const Chain& x, Index h)
{
    AmModel out = m;
    swap_generator_in_place(out, x, h);
    return out;
}

}  // namespace amtopo
