// Conversions between library types and the oracle's plain containers.

#ifndef AMTOPO_TESTS_HELPERS_HPP
#define AMTOPO_TESTS_HELPERS_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "amtopo/classical.hpp"
#include "amtopo/digital_image.hpp"
#include "amtopo/simplicial.hpp"
#include "oracles.hpp"

namespace testing_support {

inline amtopo::SimplicialComplex to_complex(const std::map<int, std::set<oracle::Cell>>& K)
{
    std::vector<amtopo::Simplex> s;
    for (const auto& [q, cells] : K) {
        for (const auto& c : cells) {
            s.emplace_back(std::vector<amtopo::Vertex>(c.begin(), c.end()));
        }
    }
    return amtopo::SimplicialComplex::from_simplices(s);
}

inline amtopo::GroupSummary to_summary(const oracle::Groups& g)
{
    amtopo::GroupSummary s;
    for (long b : g.betti) {
        s.betti.push_back(static_cast<amtopo::Index>(b));
    }
    s.torsion = g.torsion;
    s.trim();
    return s;
}

inline std::vector<oracle::P3> to_points(const amtopo::DigitalImage& img)
{
    std::vector<oracle::P3> out;
    for (const auto& p : img.points()) {
        out.push_back({static_cast<long>(p.x1), static_cast<long>(p.x2), static_cast<long>(p.x3)});
    }
    return out;
}

/// Oracle homology of K(I), built from brute-force cliques.
inline amtopo::GroupSummary image_homology(const amtopo::DigitalImage& img)
{
    std::map<oracle::P3, long> id;
    for (const auto& p : to_points(img)) {
        id.emplace(p, static_cast<long>(id.size()));
    }
    std::map<int, std::set<oracle::Cell>> K;
    for (const auto& [q, cl] : oracle::cliques(to_points(img))) {
        for (const auto& c : cl) {
            oracle::Cell cell;
            for (const auto& p : c) {
                cell.push_back(id.at(p));
            }
            std::sort(cell.begin(), cell.end());
            K[q].insert(cell);
        }
    }
    return to_summary(oracle::homology(K));
}

inline amtopo::SimplicialComplex load_fixture(const std::string& name)
{
    std::ifstream in(std::string(AMTOPO_DATA_DIR) + "/" + name);
    return amtopo::parse_complex(in);
}

inline amtopo::DigitalImage random_image(std::mt19937_64& rng, int side, int count, int origin = 0)
{
    std::uniform_int_distribution<int> c(origin, origin + side - 1);
    std::vector<amtopo::Point> p;
    for (int i = 0; i < count; ++i) {
        p.push_back({c(rng), c(rng), c(rng)});
    }
    return amtopo::DigitalImage(p);
}

}  // namespace testing_support

#endif
