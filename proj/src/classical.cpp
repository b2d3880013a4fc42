#include "amtopo/classical.hpp"

#include <ostream>

namespace amtopo {

void GroupSummary::trim()
{
    torsion.resize(betti.size());
    while (!betti.empty() && betti.back() == 0 && torsion.back().empty()) {
        betti.pop_back();
        torsion.pop_back();
    }
}

std::ostream& operator<<(std::ostream& os, const GroupSummary& g)
{
    for (std::size_t q = 0; q < g.betti.size(); ++q) {
        os << (q ? ", " : "") << 'H' << q << '=';
        bool any = false;
        if (g.betti[q] > 0) {
            os << "Z^" << g.betti[q];
            any = true;
        }
        if (q < g.torsion.size()) {
            for (const auto& t : g.torsion[q]) {
                os << (any ? "+" : "") << "Z/" << t;
                any = true;
            }
        }
        if (!any) {
            os << '0';
        }
    }
    return os;
}

GroupSummary classical_homology(const SimplicialComplex& K)
{
    const int n = K.dim();
    std::vector<Index> rank(static_cast<std::size_t>(n + 2), 0);
    std::vector<std::vector<Integer>> big(static_cast<std::size_t>(n + 2));
    for (int q = 1; q <= n; ++q) {
        SnfResult r = snf(boundary_matrix(K, q));
        rank[static_cast<std::size_t>(q)] = r.rank_total;
        for (const auto& d : r.diag) {
            if (d > 1) {
                big[static_cast<std::size_t>(q)].push_back(d);
            }
        }
    }
    GroupSummary g;
    for (int q = 0; q <= n; ++q) {
        auto uq = static_cast<std::size_t>(q);
        g.betti.push_back(K.count(q) - rank[uq] - rank[uq + 1]);
        g.torsion.push_back(big[uq + 1]);
    }
    g.trim();
    return g;
}

}  // namespace amtopo
