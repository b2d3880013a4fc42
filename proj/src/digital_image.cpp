#include "amtopo/digital_image.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace amtopo {

std::ostream& operator<<(std::ostream& os, const Point& p)
{
    return os << '(' << p.x1 << ',' << p.x2 << ',' << p.x3 << ')';
}

namespace {

bool in_range(const Point& p)
{
    auto ok = [](std::int64_t v) { return v >= -kMaxCoordinate && v <= kMaxCoordinate; };
    return ok(p.x1) && ok(p.x2) && ok(p.x3);
}

bool congruent(const Point& p)
{
    auto par = [](std::int64_t v) { return ((v % 2) + 2) % 2; };
    return par(p.x1) == par(p.x2) && par(p.x2) == par(p.x3);
}

}  // namespace

DigitalImage::DigitalImage(std::vector<Point> points, Grid grid) : points_(std::move(points)), grid_(grid)
{
    std::sort(points_.begin(), points_.end());
    points_.erase(std::unique(points_.begin(), points_.end()), points_.end());
    for (const auto& p : points_) {
        if (!in_range(p)) {
            std::ostringstream msg;
            msg << "DigitalImage: coordinate out of range at " << p;
            throw std::out_of_range(msg.str());
        }
        if (grid_ == Grid::V && !congruent(p)) {
            std::ostringstream msg;
            msg << "DigitalImage: point " << p << " is not on the grid V";
            throw std::invalid_argument(msg.str());
        }
    }
}

bool DigitalImage::contains(const Point& p) const
{
    return std::binary_search(points_.begin(), points_.end(), p);
}

std::int64_t DigitalImage::chebyshev_radius() const
{
    std::int64_t r = 0;
    for (const auto& p : points_) {
        r = std::max({r, std::abs(p.x1), std::abs(p.x2), std::abs(p.x3)});
    }
    return r;
}

DigitalImage DigitalImage::with(const Point& p) const
{
    std::vector<Point> v = points_;
    v.push_back(p);
    return DigitalImage(std::move(v), grid_);
}

DigitalImage DigitalImage::without(const Point& p) const
{
    std::vector<Point> v;
    v.reserve(points_.size());
    for (const auto& x : points_) {
        if (x != p) {
            v.push_back(x);
        }
    }
    return DigitalImage(std::move(v), grid_);
}

DigitalImage set_union(const DigitalImage& a, const DigitalImage& b)
{
    std::vector<Point> v;
    std::set_union(a.points().begin(), a.points().end(), b.points().begin(), b.points().end(), std::back_inserter(v));
    return DigitalImage(std::move(v), a.grid());
}

DigitalImage set_intersection(const DigitalImage& a, const DigitalImage& b)
{
    std::vector<Point> v;
    std::set_intersection(a.points().begin(), a.points().end(), b.points().begin(), b.points().end(),
                          std::back_inserter(v));
    return DigitalImage(std::move(v), a.grid());
}

DigitalImage set_difference(const DigitalImage& a, const DigitalImage& b)
{
    std::vector<Point> v;
    std::set_difference(a.points().begin(), a.points().end(), b.points().begin(), b.points().end(),
                        std::back_inserter(v));
    return DigitalImage(std::move(v), a.grid());
}

bool is_subset(const DigitalImage& a, const DigitalImage& b)
{
    return std::includes(b.points().begin(), b.points().end(), a.points().begin(), a.points().end());
}

const std::array<Point, 14>& adjacency_offsets()
{
    static const std::array<Point, 14> offsets{{
        {1, 0, 0},  {-1, 0, 0}, {0, 1, 0},  {0, -1, 0}, {0, 0, 1},  {0, 0, -1}, {1, -1, 0},
        {-1, 1, 0}, {1, 0, -1}, {-1, 0, 1}, {0, 1, -1}, {0, -1, 1}, {1, 1, -1}, {-1, -1, 1},
    }};
    return offsets;
}

std::array<Point, 14> neighbors14(const Point& p)
{
    std::array<Point, 14> out;
    const auto& off = adjacency_offsets();
    for (std::size_t i = 0; i < off.size(); ++i) {
        out[i] = p + off[i];
    }
    return out;
}

bool adjacent14(const Point& a, const Point& b)
{
    const Point d = b - a;
    for (const auto& o : adjacency_offsets()) {
        if (o == d) {
            return true;
        }
    }
    return false;
}

Point to_bcc(const Point& p)
{
    return {p.x1 + p.x2 + 2 * p.x3, -p.x1 + p.x2, -p.x1 - p.x2};
}

Point from_bcc(const Point& p)
{
    if (!congruent(p)) {
        std::ostringstream msg;
        msg << "from_bcc: " << p << " is not on the grid V";
        throw std::invalid_argument(msg.str());
    }
    return {(-p.x2 - p.x3) / 2, (p.x2 - p.x3) / 2, (p.x1 + p.x3) / 2};
}

bool adjacent_bcc(const Point& a, const Point& b)
{
    const Point d = b - a;
    const std::int64_t ax = std::abs(d.x1), ay = std::abs(d.x2), az = std::abs(d.x3);
    if (ax == 1 && ay == 1 && az == 1) {
        return true;
    }
    return ax + ay + az == 2 && std::max({ax, ay, az}) == 2;
}

namespace {

constexpr int kBits = 21;
constexpr std::int64_t kOffset = std::int64_t{1} << (kBits - 1);
constexpr std::int64_t kMask = (std::int64_t{1} << kBits) - 1;

}  // namespace

Vertex vertex_id(const Point& p)
{
    if (!in_range(p)) {
        throw std::out_of_range("vertex_id: coordinate out of range");
    }
    return ((p.x1 + kOffset) << (2 * kBits)) | ((p.x2 + kOffset) << kBits) | (p.x3 + kOffset);
}

Point vertex_point(Vertex v)
{
    return {((v >> (2 * kBits)) & kMask) - kOffset, ((v >> kBits) & kMask) - kOffset, (v & kMask) - kOffset};
}

namespace {

// Lexicographically larger 14-neighbours of p that satisfy `present`.
template <class Present>
std::vector<Point> forward_neighbors(const Point& p, Present present)
{
    std::vector<Point> out;
    for (const auto& n : neighbors14(p)) {
        if (p < n && present(n)) {
            out.push_back(n);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

Simplex make_simplex(std::initializer_list<Point> pts)
{
    std::vector<Vertex> v;
    for (const auto& p : pts) {
        v.push_back(vertex_id(p));
    }
    return Simplex(std::move(v));
}

const std::vector<Point>& z3_points(const DigitalImage& img, std::vector<Point>& storage)
{
    if (img.grid() == Grid::Z3) {
        return img.points();
    }
    storage.clear();
    for (const auto& p : img.points()) {
        storage.push_back(from_bcc(p));
    }
    std::sort(storage.begin(), storage.end());
    return storage;
}

}  // namespace

SimplicialComplex simplicial_representation(const DigitalImage& img)
{
    std::vector<Point> storage;
    const std::vector<Point>& pts = z3_points(img, storage);
    auto present = [&](const Point& p) { return std::binary_search(pts.begin(), pts.end(), p); };
    std::vector<Simplex> maximal;
    for (const auto& p : pts) {
        maximal.push_back(make_simplex({p}));
        auto fwd = forward_neighbors(p, present);
        for (std::size_t i = 0; i < fwd.size(); ++i) {
            maximal.push_back(make_simplex({p, fwd[i]}));
            for (std::size_t j = i + 1; j < fwd.size(); ++j) {
                if (!adjacent14(fwd[i], fwd[j])) {
                    continue;
                }
                maximal.push_back(make_simplex({p, fwd[i], fwd[j]}));
                for (std::size_t k = j + 1; k < fwd.size(); ++k) {
                    if (adjacent14(fwd[i], fwd[k]) && adjacent14(fwd[j], fwd[k])) {
                        maximal.push_back(make_simplex({p, fwd[i], fwd[j], fwd[k]}));
                    }
                }
            }
        }
    }
    return SimplicialComplex::from_simplices(maximal);
}

std::vector<Simplex> simplices_containing(const DigitalImage& img, const Point& v)
{
    std::vector<Point> nb;
    for (const auto& n : neighbors14(v)) {
        if (img.contains(n)) {
            nb.push_back(n);
        }
    }
    std::sort(nb.begin(), nb.end());
    std::vector<std::vector<Simplex>> by_dim(4);
    by_dim[0].push_back(make_simplex({v}));
    for (std::size_t i = 0; i < nb.size(); ++i) {
        by_dim[1].push_back(make_simplex({v, nb[i]}));
        for (std::size_t j = i + 1; j < nb.size(); ++j) {
            if (!adjacent14(nb[i], nb[j])) {
                continue;
            }
            by_dim[2].push_back(make_simplex({v, nb[i], nb[j]}));
            for (std::size_t k = j + 1; k < nb.size(); ++k) {
                if (adjacent14(nb[i], nb[k]) && adjacent14(nb[j], nb[k])) {
                    by_dim[3].push_back(make_simplex({v, nb[i], nb[j], nb[k]}));
                }
            }
        }
    }
    std::vector<Simplex> out;
    for (auto& d : by_dim) {
        std::sort(d.begin(), d.end());
        out.insert(out.end(), d.begin(), d.end());
    }
    return out;
}

InitialBasis special_initial_base(const SimplicialComplex& K)
{
    InitialBasis base;
    base.chains.resize(3);
    base.names.resize(3);
    const Point z{0, 0, 1};
    const Point y{0, 1, 0};
    auto name_of = [](const char* tag, const Simplex& s) {
        std::ostringstream os;
        os << tag << '(';
        for (std::size_t i = 0; i < s.vertices().size(); ++i) {
            os << (i ? "," : "") << vertex_point(s[i]);
        }
        os << ')';
        return os.str();
    };
    auto fill = [&](int q, auto replacement) {
        auto uq = static_cast<std::size_t>(q);
        for (const auto& s : K.simplices(q)) {
            std::optional<Simplex> c = replacement(s);
            if (c && K.contains(*c)) {
                base.chains[uq].push_back(boundary(*c));
                base.names[uq].push_back(name_of("d", *c));
            } else {
                Chain e(q);
                e.add(s, 1);
                base.chains[uq].push_back(std::move(e));
                base.names[uq].push_back(name_of("", s));
            }
        }
    };
    // Odd-height vertices become the boundary of the edge below them.
    fill(0, [&](const Simplex& s) -> std::optional<Simplex> {
        Point p = vertex_point(s[0]);
        if (((p.x3 % 2) + 2) % 2 == 1) {
            return make_simplex({p - z, p});
        }
        return std::nullopt;
    });
    // Edges <p, p+y> become the boundary of <p, p+z, p+y>.
    fill(1, [&](const Simplex& s) -> std::optional<Simplex> {
        Point a = vertex_point(s[0]);
        Point b = vertex_point(s[1]);
        if (b - a == y) {
            return make_simplex({a, a + z, b});
        }
        return std::nullopt;
    });
    // Triangles <p-x+y, p, p+y> become the boundary of <p-x+z, p-x+y, p, p+y>.
    fill(2, [&](const Simplex& s) -> std::optional<Simplex> {
        Point a = vertex_point(s[0]);
        Point b = vertex_point(s[1]);
        Point c = vertex_point(s[2]);
        if (a - b == Point{-1, 1, 0} && c - b == y) {
            return make_simplex({b + Point{-1, 0, 1}, a, b, c});
        }
        return std::nullopt;
    });
    return base;
}

InitialBasis special_initial_base(const DigitalImage& img)
{
    return special_initial_base(simplicial_representation(img));
}

DigitalImage boundary_image(const DigitalImage& img)
{
    std::vector<Point> out;
    for (const auto& p : img.points()) {
        bool edge = false;
        if (img.grid() == Grid::Z3) {
            for (const auto& n : neighbors14(p)) {
                if (!img.contains(n)) {
                    edge = true;
                    break;
                }
            }
        } else {
            Point zp = from_bcc(p);
            for (const auto& n : neighbors14(zp)) {
                if (!img.contains(to_bcc(n))) {
                    edge = true;
                    break;
                }
            }
        }
        if (edge) {
            out.push_back(p);
        }
    }
    return DigitalImage(std::move(out), img.grid());
}

DigitalImage chebyshev_cube(std::int64_t r, Grid grid)
{
    if (r < 0 || r > kMaxCoordinate) {
        throw std::out_of_range("chebyshev_cube: radius out of range");
    }
    std::vector<Point> pts;
    for (std::int64_t a = -r; a <= r; ++a) {
        for (std::int64_t b = -r; b <= r; ++b) {
            for (std::int64_t c = -r; c <= r; ++c) {
                Point p{a, b, c};
                if (grid == Grid::Z3 || congruent(p)) {
                    pts.push_back(p);
                }
            }
        }
    }
    return DigitalImage(std::move(pts), grid);
}

const char* to_string(TrivialCase c)
{
    switch (c) {
    case TrivialCase::EmptyImage:
        return "empty image";
    case TrivialCase::EmptyFirst:
        return "first image is empty";
    case TrivialCase::EmptySecond:
        return "second image is empty";
    case TrivialCase::DisjointInputs:
        return "images are disjoint";
    case TrivialCase::FirstContainedInSecond:
        return "first image is contained in the second";
    case TrivialCase::FullCube:
        return "image is a full cube";
    }
    return "?";
}

DigitalImage inverse_frame(const DigitalImage& img)
{
    if (img.empty()) {
        throw TrivialCaseError(TrivialCase::EmptyImage, "inverse_image: empty image");
    }
    const std::int64_t r = img.chebyshev_radius();
    DigitalImage cube = chebyshev_cube(r, img.grid());
    // The single point at the origin (r = 0) is kept: its frame is a proper
    // 3x3x3 cube and the complement is a non-trivial shell.
    if (r >= 1 && cube.size() == img.size()) {
        throw TrivialCaseError(TrivialCase::FullCube, "inverse_image: image is a full cube");
    }
    return chebyshev_cube(r + 1, img.grid());
}

DigitalImage inverse_image(const DigitalImage& img)
{
    return set_difference(inverse_frame(img), img);
}

DigitalImage parse_voxels(std::istream& in)
{
    std::vector<Point> pts;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::vector<std::int64_t> v;
        std::string tok;
        while (ls >> tok) {
            std::size_t used = 0;
            long long x = 0;
            try {
                x = std::stoll(tok, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != tok.size()) {
                throw ParseError("invalid coordinate '" + tok + "'", lineno);
            }
            v.push_back(x);
        }
        if (v.empty()) {
            continue;
        }
        if (v.size() != 3) {
            throw ParseError("expected three coordinates", lineno);
        }
        Point p{v[0], v[1], v[2]};
        if (!in_range(p)) {
            throw ParseError("coordinate out of range", lineno);
        }
        pts.push_back(p);
    }
    if (pts.empty()) {
        throw ParseError("no voxels in input", lineno == 0 ? 1 : lineno);
    }
    return DigitalImage(std::move(pts));
}

void write_voxels(std::ostream& out, const DigitalImage& img)
{
    for (const auto& p : img.points()) {
        out << p.x1 << ' ' << p.x2 << ' ' << p.x3 << '\n';
    }
}

namespace {

void put_u32(std::ostream& out, std::uint32_t v)
{
    char b[4];
    for (int i = 0; i < 4; ++i) {
        b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
    }
    out.write(b, 4);
}

bool get_u32(std::istream& in, std::uint32_t& v)
{
    unsigned char b[4];
    if (!in.read(reinterpret_cast<char*>(b), 4)) {
        return false;
    }
    v = static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
        (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
    return true;
}

}  // namespace

void write_voxels_binary(std::ostream& out, const DigitalImage& img)
{
    out.write("AMV1", 4);
    put_u32(out, static_cast<std::uint32_t>(img.size()));
    for (const auto& p : img.points()) {
        for (std::int64_t c : {p.x1, p.x2, p.x3}) {
            put_u32(out, static_cast<std::uint32_t>(static_cast<std::int32_t>(c)));
        }
    }
}

DigitalImage parse_voxels_binary(std::istream& in)
{
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "AMV1", 4) != 0) {
        throw ParseError("missing AMV1 header", 1);
    }
    std::uint32_t n = 0;
    if (!get_u32(in, n)) {
        throw ParseError("truncated voxel count", 1);
    }
    if (n == 0) {
        throw ParseError("no voxels in input", 1);
    }
    std::vector<Point> pts;
    for (std::uint32_t i = 0; i < n; ++i) {
        std::uint32_t c[3];
        for (auto& x : c) {
            if (!get_u32(in, x)) {
                throw ParseError("truncated voxel record", i + 1);
            }
        }
        Point p{static_cast<std::int32_t>(c[0]), static_cast<std::int32_t>(c[1]), static_cast<std::int32_t>(c[2])};
        if (!in_range(p)) {
            throw ParseError("coordinate out of range", i + 1);
        }
        pts.push_back(p);
    }
    return DigitalImage(std::move(pts));
}

DigitalImage read_voxel_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("cannot open " + path);
    }
    char magic[4] = {};
    in.read(magic, 4);
    const bool binary = in.gcount() == 4 && std::memcmp(magic, "AMV1", 4) == 0;
    in.clear();
    in.seekg(0);
    return binary ? parse_voxels_binary(in) : parse_voxels(in);
}

}  // namespace amtopo
