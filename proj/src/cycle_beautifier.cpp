#include "amtopo/cycle_beautifier.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

#include "amtopo/integer_matrix.hpp"
#include "model_editor.hpp"

namespace amtopo {

namespace {

void require_unit_coefficients(const Chain& c, const char* who)
{
    for (const auto& [s, k] : c.terms()) {
        if (k != 1 && k != -1) {
            throw std::invalid_argument(std::string(who) + ": coefficients must be +-1");
        }
    }
}

// Union-find over small index sets.
struct Components
{
    std::vector<std::size_t> parent;

    explicit Components(std::size_t n) : parent(n)
    {
        for (std::size_t i = 0; i < n; ++i) {
            parent[i] = i;
        }
    }
    std::size_t find(std::size_t x)
    {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void join(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
};

// Groups the simplices of a chain by shared faces of codimension one.
std::vector<std::size_t> face_components(const std::vector<Simplex>& simplices)
{
    Components uf(simplices.size());
    std::map<Simplex, std::size_t> first;
    for (std::size_t i = 0; i < simplices.size(); ++i) {
        for (int f = 0; f <= simplices[i].dim(); ++f) {
            auto [it, fresh] = first.emplace(simplices[i].face(f), i);
            if (!fresh) {
                uf.join(i, it->second);
            }
        }
    }
    std::vector<std::size_t> label(simplices.size());
    for (std::size_t i = 0; i < simplices.size(); ++i) {
        label[i] = uf.find(i);
    }
    return label;
}

// Directed arcs of a 1-chain: k > 0 on <a,b> gives k arcs a -> b.
using ArcMap = std::map<Vertex, std::map<Vertex, Integer>>;

ArcMap arcs_of(const Chain& c)
{
    ArcMap arcs;
    for (const auto& [s, k] : c.terms()) {
        if (k > 0) {
            arcs[s[0]][s[1]] += k;
        } else {
            arcs[s[1]][s[0]] -= k;
        }
    }
    return arcs;
}

void remove_arc(ArcMap& arcs, Vertex a, Vertex b)
{
    auto it = arcs.find(a);
    auto jt = it->second.find(b);
    if (--jt->second == 0) {
        it->second.erase(jt);
        if (it->second.empty()) {
            arcs.erase(it);
        }
    }
}

void add_edge(Chain& c, Vertex a, Vertex b)
{
    if (a < b) {
        c.add(Simplex({a, b}), 1);
    } else {
        c.add(Simplex({b, a}), -1);
    }
}

// Vertex sequence of a simple directed cycle, or empty if c is not one.
std::vector<Vertex> cycle_sequence(const Chain& c)
{
    if (c.dim() != 1 || c.is_zero()) {
        return {};
    }
    std::map<Vertex, Vertex> next;
    for (const auto& [s, k] : c.terms()) {
        if (k != 1 && k != -1) {
            return {};
        }
        Vertex a = k > 0 ? s[0] : s[1];
        Vertex b = k > 0 ? s[1] : s[0];
        if (!next.emplace(a, b).second) {
            return {};
        }
    }
    std::vector<Vertex> seq;
    Vertex v = next.begin()->first;
    do {
        seq.push_back(v);
        auto it = next.find(v);
        if (it == next.end() || seq.size() > next.size()) {
            return {};
        }
        v = it->second;
    } while (v != seq.front());
    return seq.size() == next.size() ? seq : std::vector<Vertex>{};
}

Chain chain_of_sequence(const std::vector<Vertex>& seq)
{
    Chain c(1);
    for (std::size_t i = 0; i < seq.size(); ++i) {
        add_edge(c, seq[i], seq[(i + 1) % seq.size()]);
    }
    return c;
}

Decomposition decompose_1(const Chain& c)
{
    Decomposition out;
    ArcMap arcs = arcs_of(c);
    while (!arcs.empty()) {
        const Vertex u = arcs.begin()->first;
        const Vertex v = arcs.begin()->second.begin()->first;
        remove_arc(arcs, u, v);
        // Shortest path v -> u over the remaining arcs.
        std::map<Vertex, Vertex> prev;
        std::deque<Vertex> queue{v};
        prev.emplace(v, v);
        bool found = (v == u);
        while (!queue.empty() && !found) {
            Vertex x = queue.front();
            queue.pop_front();
            auto it = arcs.find(x);
            if (it == arcs.end()) {
                continue;
            }
            for (const auto& [y, n] : it->second) {
                if (prev.emplace(y, x).second) {
                    if (y == u) {
                        found = true;
                        break;
                    }
                    queue.push_back(y);
                }
            }
        }
        if (!found) {
            return Decomposition{{c}, false, "1-chain is not a cycle"};
        }
        std::vector<Vertex> path{u};
        for (Vertex x = u; x != v; x = prev.at(x)) {
            path.push_back(prev.at(x));
        }
        std::reverse(path.begin(), path.end());  // v ... u
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            remove_arc(arcs, path[i], path[i + 1]);
        }
        path.pop_back();
        path.insert(path.begin(), u);  // u v ... (back to u)
        out.pieces.push_back(chain_of_sequence(path));
    }
    return out;
}

Decomposition decompose_2(const Chain& c)
{
    std::vector<Simplex> tris;
    for (const auto& [s, k] : c.terms()) {
        tris.push_back(s);
    }
    const auto label = face_components(tris);
    std::map<std::size_t, Chain> parts;
    for (std::size_t i = 0; i < tris.size(); ++i) {
        auto it = parts.try_emplace(label[i], Chain(2)).first;
        it->second.add(tris[i], c.coefficient(tris[i]));
    }
    Decomposition out;
    for (auto& [l, part] : parts) {
        out.pieces.push_back(std::move(part));
    }
    // Deterministic order: by smallest simplex.
    std::sort(out.pieces.begin(), out.pieces.end(), [](const Chain& a, const Chain& b) {
        return a.terms().begin()->first < b.terms().begin()->first;
    });
    return out;
}

// Solid angle of triangle (a, b, c) seen from the origin.
double solid_angle(const std::array<double, 3>& a, const std::array<double, 3>& b, const std::array<double, 3>& c)
{
    auto dot = [](const auto& x, const auto& y) { return x[0] * y[0] + x[1] * y[1] + x[2] * y[2]; };
    auto norm = [&](const auto& x) { return std::sqrt(dot(x, x)); };
    const std::array<double, 3> bxc{b[1] * c[2] - b[2] * c[1], b[2] * c[0] - b[0] * c[2], b[0] * c[1] - b[1] * c[0]};
    const double la = norm(a);
    const double lb = norm(b);
    const double lc = norm(c);
    const double num = dot(a, bxc);
    const double den = la * lb * lc + dot(a, b) * lc + dot(a, c) * lb + dot(b, c) * la;
    return 2.0 * std::atan2(num, den);
}

long winding_number(const Chain& c, const Point& p)
{
    double total = 0;
    for (const auto& [s, k] : c.terms()) {
        std::array<std::array<double, 3>, 3> v{};
        for (int i = 0; i < 3; ++i) {
            Point q = vertex_point(s[static_cast<std::size_t>(i)]) - p;
            v[static_cast<std::size_t>(i)] = {static_cast<double>(q.x1), static_cast<double>(q.x2),
                                              static_cast<double>(q.x3)};
        }
        total += static_cast<double>(k) * solid_angle(v[0], v[1], v[2]);
    }
    return std::lround(total / (4.0 * std::numbers::pi));
}

bool on_image(const Chain& c, const DigitalImage& img)
{
    for (const auto& [s, k] : c.terms()) {
        for (Vertex v : s.vertices()) {
            if (!img.contains(vertex_point(v))) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

bool elementary_cycle_check(const Chain& c, const SimplicialComplex& K)
{
    if (c.dim() != 1) {
        throw std::invalid_argument("elementary_cycle_check: expected a 1-chain");
    }
    require_unit_coefficients(c, "elementary_cycle_check");
    if (c.is_zero()) {
        return false;
    }
    std::map<Vertex, std::vector<Vertex>> nbr;
    std::vector<Simplex> edges;
    for (const auto& [s, k] : c.terms()) {
        nbr[s[0]].push_back(s[1]);
        nbr[s[1]].push_back(s[0]);
        edges.push_back(s);
    }
    for (const auto& [v, ns] : nbr) {
        if (ns.size() != 2) {
            return false;
        }
        if (K.contains(Simplex({v, ns[0], ns[1]}))) {
            return false;
        }
    }
    const auto label = face_components(edges);
    return std::all_of(label.begin(), label.end(), [&](std::size_t l) { return l == label[0]; });
}

std::size_t enclosed_white_components(const Chain& c, const DigitalImage& img)
{
    if (c.is_zero()) {
        return 0;
    }
    Point lo{kMaxCoordinate, kMaxCoordinate, kMaxCoordinate};
    Point hi{-kMaxCoordinate, -kMaxCoordinate, -kMaxCoordinate};
    for (const auto& [s, k] : c.terms()) {
        for (Vertex v : s.vertices()) {
            Point p = vertex_point(v);
            lo = {std::min(lo.x1, p.x1), std::min(lo.x2, p.x2), std::min(lo.x3, p.x3)};
            hi = {std::max(hi.x1, p.x1), std::max(hi.x2, p.x2), std::max(hi.x3, p.x3)};
        }
    }
    lo = lo - Point{1, 1, 1};
    hi = hi + Point{1, 1, 1};
    auto inside_box = [&](const Point& p) {
        return p.x1 >= lo.x1 && p.x1 <= hi.x1 && p.x2 >= lo.x2 && p.x2 <= hi.x2 && p.x3 >= lo.x3 && p.x3 <= hi.x3;
    };
    std::set<Point> seen;
    std::size_t count = 0;
    for (std::int64_t x = lo.x1; x <= hi.x1; ++x) {
        for (std::int64_t y = lo.x2; y <= hi.x2; ++y) {
            for (std::int64_t z = lo.x3; z <= hi.x3; ++z) {
                const Point start{x, y, z};
                if (img.contains(start) || seen.count(start)) {
                    continue;
                }
                // The winding number is constant on a white component.
                std::deque<Point> queue{start};
                seen.insert(start);
                while (!queue.empty()) {
                    Point p = queue.front();
                    queue.pop_front();
                    for (const Point& n : neighbors14(p)) {
                        if (inside_box(n) && !img.contains(n) && seen.insert(n).second) {
                            queue.push_back(n);
                        }
                    }
                }
                if (winding_number(c, start) != 0) {
                    ++count;
                }
            }
        }
    }
    return count;
}

bool elementary_cavity_check(const Chain& c, const DigitalImage& img)
{
    if (c.dim() != 2 || !boundary_chain(c).is_zero()) {
        throw std::invalid_argument("elementary_cavity_check: expected a 2-cycle");
    }
    if (c.is_zero()) {
        return false;
    }
    std::vector<Simplex> tris;
    for (const auto& [s, k] : c.terms()) {
        tris.push_back(s);
    }
    const auto label = face_components(tris);
    if (!std::all_of(label.begin(), label.end(), [&](std::size_t l) { return l == label[0]; })) {
        return false;
    }
    // Tetrahedra of K(img) holding three or more triangles of c.
    std::map<Simplex, int> per_tet;
    for (const Simplex& t : tris) {
        for (const Point& n : neighbors14(vertex_point(t[0]))) {
            if (!img.contains(n) || !adjacent14(n, vertex_point(t[1])) || !adjacent14(n, vertex_point(t[2]))) {
                continue;
            }
            std::vector<Vertex> v = t.vertices();
            v.push_back(vertex_id(n));
            if (++per_tet[Simplex(v)] >= 3) {
                return false;
            }
        }
    }
    return enclosed_white_components(c, img) == 1;
}

Decomposition decompose(const Chain& c)
{
    if (c.is_zero()) {
        return Decomposition{};
    }
    switch (c.dim()) {
    case 0: {
        Decomposition out;
        for (const auto& [s, k] : c.terms()) {
            Chain piece(0);
            piece.add(s, k);
            out.pieces.push_back(std::move(piece));
        }
        return out;
    }
    case 1:
        return decompose_1(c);
    case 2:
        if (!boundary_chain(c).is_zero()) {
            return Decomposition{{c}, false, "2-chain is not a cycle"};
        }
        return decompose_2(c);
    default:
        return Decomposition{{c}, false, "no decomposition above dimension 2"};
    }
}

Chain tighten_cycle(const Chain& c, const SimplicialComplex& K, const SimplicialComplex& support)
{
    std::vector<Vertex> seq = cycle_sequence(c);
    if (seq.size() <= 3) {
        return c;
    }
    bool changed = true;
    while (changed && seq.size() > 3) {
        changed = false;
        for (std::size_t i = 0; i < seq.size() && seq.size() > 3; ++i) {
            const Vertex a = seq[(i + seq.size() - 1) % seq.size()];
            const Vertex b = seq[i];
            const Vertex d = seq[(i + 1) % seq.size()];
            if (K.contains(Simplex({a, b, d})) && support.contains(Simplex({a, d}))) {
                seq.erase(seq.begin() + static_cast<std::ptrdiff_t>(i));
                changed = true;
            }
        }
    }
    return chain_of_sequence(seq);
}

Chain tighten_cavity(const Chain& c, const DigitalImage& img)
{
    if (c.dim() != 2) {
        throw std::invalid_argument("tighten_cavity: expected a 2-chain");
    }
    Chain out = c;
    for (;;) {
        // Triangles of out grouped by the tetrahedra of K(img) holding them.
        std::map<Simplex, std::vector<std::pair<Simplex, Integer>>> per_tet;
        for (const auto& [t, k] : out.terms()) {
            for (const Point& n : neighbors14(vertex_point(t[0]))) {
                if (!img.contains(n) || !adjacent14(n, vertex_point(t[1])) || !adjacent14(n, vertex_point(t[2]))) {
                    continue;
                }
                std::vector<Vertex> v = t.vertices();
                v.push_back(vertex_id(n));
                per_tet[Simplex(v)].emplace_back(t, k);
            }
        }
        bool changed = false;
        for (const auto& [tet, faces] : per_tet) {
            if (faces.size() < 3) {
                continue;
            }
            // out - s * d(tet) must cancel every listed face.
            const Chain d = boundary(tet);
            Integer s = 0;
            bool consistent = true;
            for (const auto& [t, k] : faces) {
                const Integer want = k * d.coefficient(t);
                if (want != 1 && want != -1) {
                    consistent = false;
                } else if (s == 0) {
                    s = want;
                } else if (s != want) {
                    consistent = false;
                }
            }
            if (consistent) {
                out = out - s * d;
                changed = true;
                break;
            }
        }
        if (!changed) {
            return out;
        }
    }
}

std::vector<DigitalImage> bounded_white_components(const DigitalImage& img)
{
    std::vector<DigitalImage> out;
    if (img.empty()) {
        return out;
    }
    Point lo = img.points().front();
    Point hi = lo;
    for (const auto& p : img.points()) {
        lo = {std::min(lo.x1, p.x1), std::min(lo.x2, p.x2), std::min(lo.x3, p.x3)};
        hi = {std::max(hi.x1, p.x1), std::max(hi.x2, p.x2), std::max(hi.x3, p.x3)};
    }
    std::set<Point> seen;
    for (std::int64_t x = lo.x1; x <= hi.x1; ++x) {
        for (std::int64_t y = lo.x2; y <= hi.x2; ++y) {
            for (std::int64_t z = lo.x3; z <= hi.x3; ++z) {
                const Point start{x, y, z};
                if (img.contains(start) || seen.count(start)) {
                    continue;
                }
                std::vector<Point> comp{start};
                seen.insert(start);
                bool bounded = true;
                for (std::size_t i = 0; i < comp.size(); ++i) {
                    for (const Point& n : neighbors14(comp[i])) {
                        if (img.contains(n)) {
                            continue;
                        }
                        if (n.x1 < lo.x1 || n.x1 > hi.x1 || n.x2 < lo.x2 || n.x2 > hi.x2 || n.x3 < lo.x3 ||
                            n.x3 > hi.x3) {
                            bounded = false;
                        } else if (seen.insert(n).second) {
                            comp.push_back(n);
                        }
                    }
                }
                if (bounded) {
                    out.emplace_back(std::move(comp));
                }
            }
        }
    }
    return out;
}

Chain cavity_surface(const DigitalImage& white, const DigitalImage& img)
{
    // Coherently oriented tetrahedra of K(img + white) meeting `white`; their
    // boundary keeps only the triangles with three black vertices.
    std::set<Simplex> tets;
    for (const Point& w : white.points()) {
        const auto nb = neighbors14(w);
        for (std::size_t a = 0; a < nb.size(); ++a) {
            for (std::size_t b = a + 1; b < nb.size(); ++b) {
                if (!adjacent14(nb[a], nb[b])) {
                    continue;
                }
                for (std::size_t c = b + 1; c < nb.size(); ++c) {
                    if (adjacent14(nb[a], nb[c]) && adjacent14(nb[b], nb[c])) {
                        tets.insert(Simplex{vertex_id(w), vertex_id(nb[a]), vertex_id(nb[b]), vertex_id(nb[c])});
                    }
                }
            }
        }
    }
    Chain body(3);
    for (const Simplex& t : tets) {
        std::array<Point, 4> p;
        bool inside = true;
        for (std::size_t i = 0; i < 4; ++i) {
            p[i] = vertex_point(t[i]);
            inside = inside && (img.contains(p[i]) || white.contains(p[i]));
        }
        if (!inside) {
            continue;
        }
        const Point u = p[1] - p[0];
        const Point v = p[2] - p[0];
        const Point w = p[3] - p[0];
        const std::int64_t det = u.x1 * (v.x2 * w.x3 - v.x3 * w.x2) - u.x2 * (v.x1 * w.x3 - v.x3 * w.x1) +
                                 u.x3 * (v.x1 * w.x2 - v.x2 * w.x1);
        body.add(t, det > 0 ? 1 : -1);
    }
    return boundary_chain(body);
}

namespace {

struct Candidate
{
    Chain chain;
    bool elementary = false;
};

bool check_piece(const Chain& c, const SimplicialComplex& K, const DigitalImage& img)
{
    switch (c.dim()) {
    case 0:
        return c.size() == 1;
    case 1:
        for (const auto& [s, k] : c.terms()) {
            if (k != 1 && k != -1) {
                return false;
            }
        }
        return elementary_cycle_check(c, K);
    case 2:
        return elementary_cavity_check(c, img);
    default:
        return false;
    }
}

// True when the columns of A extend to a basis of Z^rows.
bool primitive_columns(const IntMatrix& A)
{
    SnfResult s = snf(A);
    if (s.rank_total != A.cols()) {
        return false;
    }
    return std::all_of(s.diag.begin(), s.diag.end(), [](const Integer& d) { return d == 1; });
}

// Makes pi(x) equal to a fresh free generator of dimension q and swaps x in.
Index install(AmModel& m, int q, const Chain& x, const std::set<Index>& taken)
{
    ModelEditor ed(m);
    while (true) {
        SparseVector c = m.coordinates(x);
        std::vector<Index> open;
        for (const auto& [k, v] : c) {
            if (m.role(q, k) == Role::FreeCycle && !taken.count(k)) {
                open.push_back(k);
            } else if (m.role(q, k) == Role::TorsionTarget) {
                throw std::logic_error("good_generators: candidate has a torsion component");
            }
        }
        if (open.empty()) {
            throw std::logic_error("good_generators: candidate adds nothing new");
        }
        Index p = open.front();
        for (Index k : open) {
            if (abs(c.get(k)) < abs(c.get(p))) {
                p = k;
            }
        }
        if (open.size() > 1) {
            for (Index k : open) {
                if (k != p) {
                    ed.col_axpy(q, p, k, trunc_div(c.get(k), c.get(p)));
                }
            }
            continue;
        }
        if (abs(c.get(p)) != 1) {
            throw std::logic_error("good_generators: candidate class is not primitive");
        }
        if (c.get(p) < 0) {
            ed.col_negate(q, p);
            c = m.coordinates(x);
        }
        for (Index s : taken) {
            const Integer cs = c.get(s);
            if (cs != 0) {
                ed.col_axpy(q, p, s, cs);
            }
        }
        swap_generator_in_place(m, x, p);
        return p;
    }
}

}  // namespace

GoodGenerators good_generators(const ImageModel& mI, const ImageModel& boundary)
{
    if (boundary.image != boundary_image(mI.image)) {
        throw std::invalid_argument("good_generators: second model is not over the boundary image");
    }
    GoodGenerators out{mI.model, {}};
    const SimplicialComplex K = mI.model.complex();
    const SimplicialComplex KB = boundary.model.complex();
    const int top = std::min(2, mI.model.dim());
    out.report.dims.resize(static_cast<std::size_t>(std::max(top, -1) + 1));

    for (int q = 0; q <= top; ++q) {
        std::vector<Index> free;
        for (Index k = 0; k < out.model.size(q); ++k) {
            if (out.model.role(q, k) == Role::FreeCycle) {
                free.push_back(k);
            }
        }
        std::vector<Index> pos(static_cast<std::size_t>(out.model.size(q)), -1);
        for (std::size_t i = 0; i < free.size(); ++i) {
            pos[static_cast<std::size_t>(free[i])] = static_cast<Index>(i);
        }

        // Elementary pieces of the boundary generators.
        std::vector<Candidate> cands;
        for (Index h = 0; h < boundary.model.size(q); ++h) {
            if (boundary.model.role(q, h) != Role::FreeCycle) {
                continue;
            }
            Decomposition dec = decompose(boundary.model.basis_chain(q, h));
            for (Chain& piece : dec.pieces) {
                if (q == 1) {
                    for (Chain& sub : decompose(tighten_cycle(piece, K, KB)).pieces) {
                        cands.push_back(Candidate{sub, false});
                    }
                } else if (q == 2) {
                    for (Chain& sub : decompose(tighten_cavity(piece, mI.image)).pieces) {
                        cands.push_back(Candidate{sub, false});
                    }
                } else {
                    cands.push_back(Candidate{piece, false});
                }
            }
        }
        if (q == 2) {
            // Fallback: the surface around each cavity, for classes the
            // boundary generators only reach through merged surfaces.
            for (const auto& white : bounded_white_components(mI.image)) {
                Chain c = tighten_cavity(cavity_surface(white, mI.image), mI.image);
                if (!c.is_zero()) {
                    cands.push_back(Candidate{std::move(c), false});
                }
            }
        }
        for (auto& cand : cands) {
            cand.elementary = check_piece(cand.chain, K, mI.image);
        }
        std::stable_partition(cands.begin(), cands.end(), [](const Candidate& c) { return c.elementary; });

        // Greedy choice of candidates whose classes extend to a basis of H_q(I).
        IntMatrix chosen(static_cast<Index>(free.size()), 0);
        std::vector<Candidate> picked;
        for (const auto& cand : cands) {
            if (picked.size() == free.size()) {
                break;
            }
            SparseVector cls;
            bool torsion = false;
            for (const auto& [k, v] : out.model.coordinates(cand.chain)) {
                if (pos[static_cast<std::size_t>(k)] >= 0) {
                    cls.set(pos[static_cast<std::size_t>(k)], v);
                } else if (out.model.role(q, k) == Role::TorsionTarget) {
                    torsion = true;
                }
            }
            if (cls.empty() || torsion) {
                continue;
            }
            IntMatrix trial = chosen;
            trial.append_column(cls);
            if (primitive_columns(trial)) {
                chosen = std::move(trial);
                picked.push_back(cand);
            }
        }
        if (picked.size() < free.size()) {
            out.report.complete = false;
            std::ostringstream msg;
            msg << "dimension " << q << ": boundary candidates give " << picked.size() << " of " << free.size()
                << " generators";
            out.report.diagnostics.push_back(msg.str());
        }

        std::set<Index> taken;
        for (const auto& cand : picked) {
            Index h = install(out.model, q, cand.chain, taken);
            taken.insert(h);
            GoodCycle g;
            g.chain = cand.chain;
            g.element = h;
            g.is_cycle = boundary_chain(cand.chain).is_zero();
            g.on_boundary_image = on_image(cand.chain, boundary.image);
            g.elementary = cand.elementary;
            out.report.dims[static_cast<std::size_t>(q)].push_back(std::move(g));
        }
    }
    return out;
}

GoodGenerators good_generators(const DigitalImage& img)
{
    return good_generators(build_image_model(img), build_image_model(boundary_image(img)));
}

}  // namespace amtopo
