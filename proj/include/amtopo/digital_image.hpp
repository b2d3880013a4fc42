// 3D binary digital images with 14-adjacency and their simplicial
// representation K(I).
//
// Points live on Z^3 with the 14-neighbourhood below; the equivalent bcc grid
// V is reachable through to_bcc/from_bcc. All topology is computed on Z^3.

#ifndef AMTOPO_DIGITAL_IMAGE_HPP
#define AMTOPO_DIGITAL_IMAGE_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "amtopo/am_model.hpp"
#include "amtopo/simplicial.hpp"

namespace amtopo {

struct Point
{
    std::int64_t x1 = 0;
    std::int64_t x2 = 0;
    std::int64_t x3 = 0;

    friend auto operator<=>(const Point&, const Point&) = default;
    friend Point operator+(const Point& a, const Point& b) { return {a.x1 + b.x1, a.x2 + b.x2, a.x3 + b.x3}; }
    friend Point operator-(const Point& a, const Point& b) { return {a.x1 - b.x1, a.x2 - b.x2, a.x3 - b.x3}; }
};

std::ostream& operator<<(std::ostream& os, const Point& p);

enum class Grid { Z3, V };

/// Largest accepted |coordinate|; keeps vertex ids and arithmetic in range.
constexpr std::int64_t kMaxCoordinate = (std::int64_t{1} << 20) - 2;

class DigitalImage
{
public:
    DigitalImage() = default;
    /// Duplicates are merged. Throws on out-of-range coordinates, and on grid
    /// V for points violating x1 = x2 = x3 (mod 2).
    explicit DigitalImage(std::vector<Point> points, Grid grid = Grid::Z3);

    [[nodiscard]] const std::vector<Point>& points() const { return points_; }
    [[nodiscard]] std::size_t size() const { return points_.size(); }
    [[nodiscard]] bool empty() const { return points_.empty(); }
    [[nodiscard]] Grid grid() const { return grid_; }
    [[nodiscard]] bool contains(const Point& p) const;

    /// max |x_i| over all points (0 for the empty image).
    [[nodiscard]] std::int64_t chebyshev_radius() const;

    [[nodiscard]] DigitalImage with(const Point& p) const;
    [[nodiscard]] DigitalImage without(const Point& p) const;

    friend bool operator==(const DigitalImage&, const DigitalImage&) = default;

private:
    std::vector<Point> points_;
    Grid grid_ = Grid::Z3;
};

DigitalImage set_union(const DigitalImage& a, const DigitalImage& b);
DigitalImage set_intersection(const DigitalImage& a, const DigitalImage& b);
DigitalImage set_difference(const DigitalImage& a, const DigitalImage& b);
bool is_subset(const DigitalImage& a, const DigitalImage& b);

/// The 14 neighbour offsets on Z^3.
const std::array<Point, 14>& adjacency_offsets();
std::array<Point, 14> neighbors14(const Point& p);
bool adjacent14(const Point& a, const Point& b);

/// Z^3 -> V and back.
Point to_bcc(const Point& p);
Point from_bcc(const Point& p);
/// 14-adjacency on V (Voronoi neighbours of the bcc lattice).
bool adjacent_bcc(const Point& a, const Point& b);

/// Vertex ids ordered lexicographically by coordinates.
Vertex vertex_id(const Point& p);
Point vertex_point(Vertex v);

/// K(I): cliques of mutually 14-adjacent points, dimension <= 3.
SimplicialComplex simplicial_representation(const DigitalImage& img);

/// Simplices of K(I + {v}) having v as a vertex, ordered by dimension then
/// lexicographically. v itself comes first.
std::vector<Simplex> simplices_containing(const DigitalImage& img, const Point& v);

/// Basis replacements in dimensions 0-2 that make most of the reduction trivial.
InitialBasis special_initial_base(const SimplicialComplex& K);
InitialBasis special_initial_base(const DigitalImage& img);

/// Points of I with at least one 14-neighbour outside I.
DigitalImage boundary_image(const DigitalImage& img);

/// {p : max|p_i| <= r} on the given grid.
DigitalImage chebyshev_cube(std::int64_t r, Grid grid = Grid::Z3);

enum class TrivialCase {
    EmptyImage,
    EmptyFirst,
    EmptySecond,
    DisjointInputs,
    FirstContainedInSecond,
    FullCube
};

const char* to_string(TrivialCase c);

/// Raised for the degenerate inputs excluded by the set-operation algorithms.
class TrivialCaseError : public std::invalid_argument
{
public:
    TrivialCaseError(TrivialCase kind, const std::string& what) : std::invalid_argument(what), kind_(kind) {}
    [[nodiscard]] TrivialCase kind() const { return kind_; }

private:
    TrivialCase kind_;
};

/// G_I \ I where G_I is the cube of radius X_I + 1. Rejects the empty image
/// and full cubes of radius >= 1.
DigitalImage inverse_image(const DigitalImage& img);
/// G_I itself.
DigitalImage inverse_frame(const DigitalImage& img);

/// Text voxel files: "x1 x2 x3" per line, '#' comments.
DigitalImage parse_voxels(std::istream& in);
void write_voxels(std::ostream& out, const DigitalImage& img);
/// Binary voxel files: "AMV1", uint32 count, count int32 triples (little endian).
DigitalImage parse_voxels_binary(std::istream& in);
void write_voxels_binary(std::ostream& out, const DigitalImage& img);
/// Reads either format, deciding by the magic bytes.
DigitalImage read_voxel_file(const std::string& path);

}  // namespace amtopo

#endif
