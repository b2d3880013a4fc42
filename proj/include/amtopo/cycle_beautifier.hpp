// Good representative cycles for images: generators of H(I) carried by the
// boundary image dI, split into elementary pieces and swapped into the model
// of I.

#ifndef AMTOPO_CYCLE_BEAUTIFIER_HPP
#define AMTOPO_CYCLE_BEAUTIFIER_HPP

#include <string>
#include <vector>

#include "amtopo/am_model.hpp"
#include "amtopo/digital_image.hpp"
#include "amtopo/dynamic_updates.hpp"

namespace amtopo {

/// Connected, every vertex on exactly two edges, and no two consecutive edges
/// in a common triangle of K. Throws std::invalid_argument unless every
/// coefficient is +-1.
bool elementary_cycle_check(const Chain& c, const SimplicialComplex& K);

/// Connected (through shared edges), exactly one white 14-component of the
/// image enclosed, and no three triangles in one tetrahedron of K(img).
/// Throws std::invalid_argument when c is not a 2-cycle.
bool elementary_cavity_check(const Chain& c, const DigitalImage& img);

/// Number of white 14-components of img enclosed by the 2-cycle c.
std::size_t enclosed_white_components(const Chain& c, const DigitalImage& img);

struct Decomposition
{
    /// Pieces summing to the input.
    std::vector<Chain> pieces;
    /// False when the input was returned unsplit because it could not be split.
    bool split = true;
    std::string diagnostic;
};

/// 0-cycles split into vertices, 1-cycles into simple cycles (shortest first),
/// 2-cycles into edge-connected components.
Decomposition decompose(const Chain& c);

/// Shortens a simple 1-cycle across triangles of K whose third edge lies in
/// `support`; the result is homologous to c in K.
Chain tighten_cycle(const Chain& c, const SimplicialComplex& K, const SimplicialComplex& support);

/// Replaces three or four triangles of c lying in one tetrahedron of K(img)
/// by the remaining faces, until no tetrahedron holds three. The result is
/// homologous to c in K(img) and uses only vertices of c.
Chain tighten_cavity(const Chain& c, const DigitalImage& img);

/// White 14-components of the complement of img that stay inside its bounding box.
std::vector<DigitalImage> bounded_white_components(const DigitalImage& img);

/// The 2-cycle of K(img) wrapped around a white component: the boundary of
/// the coherently oriented tetrahedra of K(img + white) that meet it.
Chain cavity_surface(const DigitalImage& white, const DigitalImage& img);

struct GoodCycle
{
    Chain chain;
    Index element = -1;  // basis element of the returned model
    bool is_cycle = false;
    bool on_boundary_image = false;
    bool elementary = false;
};

struct GoodCycleReport
{
    std::vector<std::vector<GoodCycle>> dims;
    /// False when the boundary candidates did not span some H_q(I).
    bool complete = true;
    std::vector<std::string> diagnostics;
};

struct GoodGenerators
{
    AmModel model;
    GoodCycleReport report;
};

/// `boundary` must be a model of boundary_image(mI.image).
GoodGenerators good_generators(const ImageModel& mI, const ImageModel& boundary);
/// Builds both models first.
GoodGenerators good_generators(const DigitalImage& img);

}  // namespace amtopo

#endif
