// Integer cohomology read off an AM-model, and the simplicial cup product.
//
// Cochains come in two flavours: functionals on the basis elements of the
// model (usually the small complex M) and functionals on simplices. The
// first kind is turned into the second by composing with the projection
// f = pi onto M.

#ifndef AMTOPO_COHOMOLOGY_HPP
#define AMTOPO_COHOMOLOGY_HPP

#include <map>
#include <utility>
#include <vector>

#include "amtopo/am_model.hpp"

namespace amtopo {

struct Cochain
{
    int dim = 0;
    /// True: values live in element_values, indexed by basis elements of the model.
    /// False: values live in simplex_values.
    bool on_model = false;
    SparseVector element_values;
    std::map<Simplex, Integer> simplex_values;

    /// Value on a simplex (simplex cochains only).
    [[nodiscard]] Integer operator()(const Simplex& s) const;
    [[nodiscard]] bool is_zero() const { return element_values.empty() && simplex_values.empty(); }
};

/// a_k^* on the model basis.
Cochain dual_cochain(int q, Index k, const Integer& value = 1);
Cochain element_cochain(int q, SparseVector values);
Cochain simplex_cochain(int q, std::map<Simplex, Integer> values);
/// The dual of a single simplex.
Cochain simplex_dual(const Simplex& s, const Integer& value = 1);

/// Simplex cochain c o f. Simplex cochains are returned unchanged.
Cochain pullback(const AmModel& m, const Cochain& c);

/// delta(c) = c o d. On the model basis c must be supported on M and the
/// result is again a cochain on M; on simplices the result covers every
/// simplex of the complex one dimension up.
Cochain codifferential(const AmModel& m, const Cochain& c);

/// c(z) for a chain of simplices.
Integer evaluate(const AmModel& m, const Cochain& c, const Chain& z);

/// (c u c2)(z) = sum over the terms of z of front-face value times back-face value.
Integer cup_product_eval(const AmModel& m, const Cochain& c, const Cochain& c2, const Chain& z);

/// c u c2 as a simplex cochain on the complex of m.
Cochain cup_product(const AmModel& m, const Cochain& c, const Cochain& c2);

struct DimensionCohomology
{
    Index betti = 0;
    std::vector<Integer> torsion;
    std::vector<Cochain> free_cocycles;                          // on the model basis
    std::vector<std::pair<Cochain, Integer>> torsion_cocycles;   // (cocycle, order)
};

struct CohomologySummary
{
    std::vector<DimensionCohomology> dims;

    [[nodiscard]] GroupSummary groups() const;
};

CohomologySummary cohomology(const AmModel& m);

struct Hb1Details
{
    /// Rows: pairs (i, j), i <= j, of positions in `alpha`; columns: positions in `gamma`.
    std::vector<std::pair<Index, Index>> pairs;
    std::vector<Index> alpha;  // dimension-1 elements whose duals are cocycles
    std::vector<Index> gamma;  // dimension-2 elements of M
    IntMatrix matrix;
    Index rank = 0;
    /// Nonzero Smith diagonal of the matrix.
    std::vector<Integer> diagonal;
};

Hb1Details hb1_details(const AmModel& m);
Index hb1(const AmModel& m);

}  // namespace amtopo

#endif
