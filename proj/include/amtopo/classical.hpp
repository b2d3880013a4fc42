// Homology groups by direct Smith reduction of the boundary matrices.

#ifndef AMTOPO_CLASSICAL_HPP
#define AMTOPO_CLASSICAL_HPP

#include <iosfwd>
#include <vector>

#include "amtopo/simplicial.hpp"

namespace amtopo {

/// Isomorphism type of a graded group: H_q = Z^betti[q] + sum Z/torsion[q][i].
struct GroupSummary
{
    std::vector<Index> betti;
    std::vector<std::vector<Integer>> torsion;

    /// Drops trailing zero dimensions so summaries of different lengths compare.
    void trim();

    friend bool operator==(const GroupSummary&, const GroupSummary&) = default;
};

std::ostream& operator<<(std::ostream& os, const GroupSummary& g);

GroupSummary classical_homology(const SimplicialComplex& K);

}  // namespace amtopo

#endif
