#include "amtopo/cohomology.hpp"

#include <algorithm>
#include <stdexcept>

#include "amtopo/integer_matrix.hpp"

namespace amtopo {

Integer Cochain::operator()(const Simplex& s) const
{
    if (on_model) {
        throw std::invalid_argument("Cochain: model cochains have no simplex values; pull back first");
    }
    auto it = simplex_values.find(s);
    return it == simplex_values.end() ? Integer(0) : it->second;
}

Cochain dual_cochain(int q, Index k, const Integer& value)
{
    SparseVector v;
    v.set(k, value);
    return element_cochain(q, std::move(v));
}

Cochain element_cochain(int q, SparseVector values)
{
    Cochain c;
    c.dim = q;
    c.on_model = true;
    c.element_values = std::move(values);
    return c;
}

Cochain simplex_cochain(int q, std::map<Simplex, Integer> values)
{
    Cochain c;
    c.dim = q;
    for (auto it = values.begin(); it != values.end();) {
        if (it->first.dim() != q) {
            throw std::invalid_argument("simplex_cochain: simplex of the wrong dimension");
        }
        it = it->second == 0 ? values.erase(it) : std::next(it);
    }
    c.simplex_values = std::move(values);
    return c;
}

Cochain simplex_dual(const Simplex& s, const Integer& value)
{
    return simplex_cochain(s.dim(), {{s, value}});
}

namespace {

// Simplex cochain as a vector over registry ids.
SparseVector simplex_ids(const AmModel& m, const Cochain& c)
{
    std::vector<SparseVector::Entry> e;
    for (const auto& [s, v] : c.simplex_values) {
        auto id = m.registry().find(s);
        if (id) {
            e.emplace_back(*id, v);
        }
    }
    return SparseVector::from_entries(std::move(e));
}

SparseVector pulled_ids(const AmModel& m, const Cochain& c)
{
    if (!c.on_model) {
        return simplex_ids(m, c);
    }
    SparseVector out;
    for (const auto& [k, v] : c.element_values) {
        if (k < 0 || k >= m.size(c.dim)) {
            throw std::out_of_range("pullback: basis element out of range");
        }
        if (m.in_M(c.dim, k)) {
            out.axpy(v, m.dual_vector(c.dim, k));
        }
    }
    return out;
}

Cochain from_ids(const AmModel& m, int q, const SparseVector& ids)
{
    Cochain c;
    c.dim = q;
    for (const auto& [id, v] : ids) {
        c.simplex_values.emplace(m.registry().simplex(q, id), v);
    }
    return c;
}

void check_dim(const Cochain& c, int p, const char* who)
{
    if (c.dim != p) {
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
    }
}

}  // namespace

Cochain pullback(const AmModel& m, const Cochain& c)
{
    if (!c.on_model) {
        return c;
    }
    return from_ids(m, c.dim, pulled_ids(m, c));
}

Cochain codifferential(const AmModel& m, const Cochain& c)
{
    const int q = c.dim;
    if (c.on_model) {
        SparseVector out;
        for (const auto& [k, v] : c.element_values) {
            if (k < 0 || k >= m.size(q) || !m.in_M(q, k)) {
                throw std::invalid_argument("codifferential: cochain is not supported on M");
            }
            // The only M-element of dimension q+1 whose boundary meets a_k.
            const Link& u = m.up(q, k);
            if (u.present()) {
                out.axpy(v * u.lambda, SparseVector::unit(u.partner));
            }
        }
        return element_cochain(q + 1, std::move(out));
    }
    Cochain out;
    out.dim = q + 1;
    if (q + 1 > m.registry().dim()) {
        return out;
    }
    const SparseVector ids = simplex_ids(m, c);
    for (Index id = 0; id < m.registry().capacity(q + 1); ++id) {
        if (!m.registry().alive(q + 1, id)) {
            continue;
        }
        Integer v = 0;
        for (const auto& [f, sign] : m.registry().faces(q + 1, id)) {
            v += sign * ids.get(f);
        }
        if (v != 0) {
            out.simplex_values.emplace(m.registry().simplex(q + 1, id), v);
        }
    }
    return out;
}

Integer evaluate(const AmModel& m, const Cochain& c, const Chain& z)
{
    if (z.is_zero()) {
        return 0;
    }
    check_dim(c, z.dim(), "evaluate");
    const Cochain s = pullback(m, c);
    Integer total = 0;
    for (const auto& [t, k] : z.terms()) {
        total += k * s(t);
    }
    return total;
}

Integer cup_product_eval(const AmModel& m, const Cochain& c, const Cochain& c2, const Chain& z)
{
    if (z.is_zero()) {
        return 0;
    }
    if (c.dim + c2.dim != z.dim()) {
        throw std::invalid_argument("cup_product_eval: p + q differs from the chain dimension");
    }
    const Cochain a = pullback(m, c);
    const Cochain b = pullback(m, c2);
    Integer total = 0;
    for (const auto& [t, k] : z.terms()) {
        Integer fa = a(t.front(c.dim));
        if (fa != 0) {
            total += k * fa * b(t.back(c2.dim));
        }
    }
    return total;
}

Cochain cup_product(const AmModel& m, const Cochain& c, const Cochain& c2)
{
    const int n = c.dim + c2.dim;
    const Cochain a = pullback(m, c);
    const Cochain b = pullback(m, c2);
    Cochain out;
    out.dim = n;
    if (n > m.registry().dim()) {
        return out;
    }
    for (Index id = 0; id < m.registry().capacity(n); ++id) {
        if (!m.registry().alive(n, id)) {
            continue;
        }
        const Simplex& t = m.registry().simplex(n, id);
        Integer v = a(t.front(c.dim));
        if (v != 0) {
            v *= b(t.back(c2.dim));
        }
        if (v != 0) {
            out.simplex_values.emplace(t, v);
        }
    }
    return out;
}

GroupSummary CohomologySummary::groups() const
{
    GroupSummary g;
    for (const auto& d : dims) {
        g.betti.push_back(d.betti);
        g.torsion.push_back(d.torsion);
    }
    g.trim();
    return g;
}

CohomologySummary cohomology(const AmModel& m)
{
    CohomologySummary h;
    for (int q = 0; q <= m.dim(); ++q) {
        DimensionCohomology dc;
        for (Index k = 0; k < m.size(q); ++k) {
            Role r = m.role(q, k);
            if (r == Role::FreeCycle) {
                dc.free_cocycles.push_back(dual_cochain(q, k));
            } else if (r == Role::TorsionSource) {
                dc.torsion_cocycles.emplace_back(dual_cochain(q, k), m.down(q, k).lambda);
            }
        }
        std::stable_sort(dc.torsion_cocycles.begin(), dc.torsion_cocycles.end(),
                         [](const auto& a, const auto& b) { return a.second < b.second; });
        dc.betti = static_cast<Index>(dc.free_cocycles.size());
        for (const auto& [c, order] : dc.torsion_cocycles) {
            dc.torsion.push_back(order);
        }
        h.dims.push_back(std::move(dc));
    }
    return h;
}

Hb1Details hb1_details(const AmModel& m)
{
    Hb1Details out;
    if (m.dim() < 2) {
        out.matrix = IntMatrix(0, 0);
        return out;
    }
    for (Index k = 0; k < m.size(1); ++k) {
        Role r = m.role(1, k);
        if (r == Role::FreeCycle || r == Role::TorsionSource) {
            out.alpha.push_back(k);
        }
    }
    out.gamma = m.M(2);

    // Each triangle of a gamma chain, with the ids of its front and back edges.
    struct Term
    {
        Integer coef;
        Index front;
        Index back;
    };
    const SimplexRegistry& reg = m.registry();
    std::vector<std::vector<Term>> terms(out.gamma.size());
    for (std::size_t k = 0; k < out.gamma.size(); ++k) {
        for (const auto& [id, c] : m.basis_vector(2, out.gamma[k])) {
            const Simplex& t = reg.simplex(2, id);
            terms[k].push_back(Term{c, *reg.find(t.front(1)), *reg.find(t.back(1))});
        }
    }
    std::vector<SparseVector> cocycles;
    for (Index a : out.alpha) {
        cocycles.push_back(m.dual_vector(1, a));
    }

    const auto na = out.alpha.size();
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = i; j < na; ++j) {
            out.pairs.emplace_back(static_cast<Index>(i), static_cast<Index>(j));
        }
    }
    out.matrix = IntMatrix(static_cast<Index>(out.pairs.size()), static_cast<Index>(out.gamma.size()));
    for (std::size_t k = 0; k < out.gamma.size(); ++k) {
        for (std::size_t r = 0; r < out.pairs.size(); ++r) {
            const SparseVector& ci = cocycles[static_cast<std::size_t>(out.pairs[r].first)];
            const SparseVector& cj = cocycles[static_cast<std::size_t>(out.pairs[r].second)];
            Integer v = 0;
            for (const Term& t : terms[k]) {
                const Integer* f = ci.find(t.front);
                if (f) {
                    v += t.coef * *f * cj.get(t.back);
                }
            }
            if (v != 0) {
                out.matrix.set(static_cast<Index>(r), static_cast<Index>(k), v);
            }
        }
    }
    if (!out.matrix.is_zero()) {
        SnfResult s = snf(out.matrix);
        out.diagonal = s.diag;
    }
    out.rank = rank_over_rationals(out.matrix);
    return out;
}

Index hb1(const AmModel& m)
{
    return hb1_details(m).rank;
}

}  // namespace amtopo
