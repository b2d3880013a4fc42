// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// line fails.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "amtopo/am_model.hpp"
#include "amtopo/cohomology.hpp"
#include "amtopo/cycle_beautifier.hpp"
#include "amtopo/dynamic_updates.hpp"
#include "amtopo/integer_matrix.hpp"
#include "cli.hpp"
#include "contraction_check.hpp"
#include "helpers.hpp"

using namespace amtopo;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome
{
    bool ok = true;
    std::string detail;

    void fail(const std::string& why)
    {
        if (ok) {
            detail = why;
        }
        ok = false;
    }
};

int failures = 0;

void criterion(const std::string& name, const std::function<Outcome()>& body)
{
    const auto t0 = Clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o.fail(std::string("exception: ") + e.what());
    }
    const double s = seconds_since(t0);
    std::ostringstream line;
    line << (o.ok ? "PASS " : "FAIL ") << name << " (" << std::fixed;
    line.precision(2);
    line << s << " s)";
    if (!o.detail.empty()) {
        line << ": " << o.detail;
    }
    std::cout << line.str() << std::endl;
    failures += o.ok ? 0 : 1;
}

std::string str(const GroupSummary& g)
{
    std::ostringstream os;
    os << g;
    return os.str();
}

GroupSummary scratch(const DigitalImage& img)
{
    return homology(build_am_model(simplicial_representation(img))).groups();
}

Outcome klein()
{
    Outcome o;
    const auto t0 = Clock::now();
    const SimplicialComplex K = testing_support::load_fixture("klein_bottle.txt");
    if (K.count(0) != 9) {
        o.fail("fixture does not have 9 vertices");
    }
    const AmModel m = build_am_model(K);
    const GroupSummary h = homology(m).groups();
    const GroupSummary c = cohomology(m).groups();
    GroupSummary want_h;
    want_h.betti = {1, 1};
    want_h.torsion = {{}, {2}};
    want_h.trim();
    GroupSummary want_c;
    want_c.betti = {1, 1, 0};
    want_c.torsion = {{}, {}, {2}};
    want_c.trim();
    if (!(h == want_h)) {
        o.fail("homology " + str(h));
    }
    if (!(c == want_c)) {
        o.fail("cohomology " + str(c));
    }
    // d_2 restricted to M, and on all of C_2.
    const auto M2 = m.M(2);
    std::vector<Integer> restricted;
    for (Index k : M2) {
        for (const auto& [i, v] : m.d(2, SparseVector::unit(k))) {
            restricted.push_back(v < 0 ? Integer(-v) : v);
        }
    }
    if (restricted != std::vector<Integer>{2}) {
        o.fail("d_2 on M is not [2]");
    }
    std::vector<Integer> full(17, 1);
    full.push_back(2);
    if (snf(boundary_matrix(K, 2)).diag != full) {
        o.fail("Smith form of d_2 is not [1 x17, 2]");
    }
    if (!validate(m).empty()) {
        o.fail("model invalid");
    }
    const double s = seconds_since(t0);
    if (s >= 1.0) {
        o.fail("took " + std::to_string(s) + " s");
    }
    return o;
}

Outcome contraction()
{
    Outcome o;
    std::mt19937_64 rng(20261015);
    int done = 0;
    for (int i = 0; done < 220 && i < 1000; ++i) {
        const auto raw = oracle::random_complex(rng, 8, 3, 30);
        std::size_t cells = 0;
        for (const auto& [q, c] : raw) {
            cells += c.size();
        }
        if (cells > 30 || raw.empty()) {
            continue;
        }
        const AmModel m = build_am_model(testing_support::to_complex(raw));
        const auto bad = testing_support::contraction_failures(derive_contraction(m));
        if (!bad.empty()) {
            o.fail("complex " + std::to_string(i) + ": " + bad.front());
        }
        ++done;
    }
    if (done < 200) {
        o.fail("only " + std::to_string(done) + " complexes");
    }
    o.detail = o.ok ? std::to_string(done) + " complexes" : o.detail;
    return o;
}

Outcome snf_oracle()
{
    Outcome o;
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> side(1, 8);
    std::uniform_int_distribution<int> val(-5, 5);
    const int n = 250;
    for (int i = 0; i < n; ++i) {
        const int r = side(rng);
        const int c = side(rng);
        std::vector<std::vector<long long>> rows(static_cast<std::size_t>(r), std::vector<long long>(static_cast<std::size_t>(c)));
        for (auto& row : rows) {
            for (auto& x : row) {
                x = val(rng);
            }
        }
        const IntMatrix A = IntMatrix::from_dense(rows);
        const SnfResult s = snf(A);
        if (s.diag != oracle::smith_diagonal(A.to_dense())) {
            o.fail("diagonal differs on matrix " + std::to_string(i));
        }
        if (!(s.U * A * s.V == s.S)) {
            o.fail("U A V != S on matrix " + std::to_string(i));
        }
        for (const IntMatrix* T : {&s.U, &s.V}) {
            const oracle::Int d = oracle::determinant(T->to_dense());
            if (d != 1 && d != -1) {
                o.fail("transform not unimodular on matrix " + std::to_string(i));
            }
        }
    }
    o.detail = o.ok ? std::to_string(n) + " matrices" : o.detail;
    return o;
}

Outcome dynamic()
{
    Outcome o;
    const auto t0 = Clock::now();
    std::mt19937_64 rng(6);
    std::uniform_int_distribution<int> c(0, 5);
    int instances = 0;
    auto compare = [&](const ImageModel& m, const DigitalImage& expect, const std::string& what) {
        ++instances;
        if (!(m.image == expect)) {
            o.fail(what + ": wrong image");
        } else if (!validate(m.model).empty()) {
            o.fail(what + ": invalid model");
        } else if (!(homology(m.model).groups() == scratch(expect))) {
            o.fail(what + ": " + str(homology(m.model).groups()) + " vs " + str(scratch(expect)));
        }
    };
    for (int i = 0; i < 40; ++i) {
        ImageModel m = build_image_model(testing_support::random_image(rng, 6, 30 + i * 2));
        const Point fresh = [&] {
            for (;;) {
                const Point p{c(rng), c(rng), c(rng)};
                if (!m.image.contains(p)) {
                    return p;
                }
            }
        }();
        add_voxel(m, fresh);
        compare(m, m.image, "add_voxel " + std::to_string(i));
        const Point gone = m.image.points()[static_cast<std::size_t>(i) % m.image.size()];
        const DigitalImage expect = m.image.without(gone);
        delete_voxel(m, gone);
        compare(m, expect, "delete_voxel " + std::to_string(i));
    }
    int pairs = 0;
    while (pairs < 12) {
        const DigitalImage I = testing_support::random_image(rng, 6, 60);
        const DigitalImage J = testing_support::random_image(rng, 6, 60);
        if (set_intersection(I, J).empty() || is_subset(I, J) || is_subset(J, I)) {
            continue;
        }
        ++pairs;
        const ImageModel mI = build_image_model(I);
        const std::string tag = " " + std::to_string(pairs);
        compare(union_model(mI, build_image_model(J)), set_union(I, J), "union" + tag);
        compare(intersection_model(mI, J), set_intersection(I, J), "intersection" + tag);
        compare(difference_model(mI, J), set_difference(I, J), "difference" + tag);
        compare(inverse_model(I), inverse_image(I), "inverse" + tag);
    }
    if (instances < 100) {
        o.fail("only " + std::to_string(instances) + " instances");
    }
    const double s = seconds_since(t0);
    if (s >= 60.0) {
        o.fail("took " + std::to_string(s) + " s");
    }
    o.detail = o.ok ? std::to_string(instances) + " instances" : o.detail;
    return o;
}

Outcome hb1_fixtures()
{
    Outcome o;
    const std::vector<std::pair<std::string, Index>> cases = {
        {"sphere.txt", 0}, {"torus7.txt", 1}, {"two_tori.txt", 2}};
    for (const auto& [file, want] : cases) {
        const SimplicialComplex K = testing_support::load_fixture(file);
        const Index got = hb1(build_am_model(K));
        std::map<int, std::set<oracle::Cell>> raw;
        for (int q = 0; q <= K.dim(); ++q) {
            for (const auto& s : K.simplices(q)) {
                raw[q].insert(oracle::Cell(s.vertices().begin(), s.vertices().end()));
            }
        }
        const long direct = oracle::hb1(raw);
        if (got != want || direct != static_cast<long>(want)) {
            o.fail(file + ": hb1 " + std::to_string(got) + ", direct " + std::to_string(direct) + ", expected " +
                   std::to_string(want));
        }
    }

    // Runtime sanity: 5000 voxels inside 32^3 through the command line path.
    const auto dir = std::filesystem::temp_directory_path() / "amtopo_acceptance";
    std::filesystem::create_directories(dir);
    std::mt19937_64 rng(32);
    std::uniform_int_distribution<int> c(0, 31);
    std::set<Point> pts;
    // A solid 16^3 block plus scattered voxels.
    for (int x = 0; x < 16; ++x) {
        for (int y = 0; y < 16; ++y) {
            for (int z = 0; z < 16; ++z) {
                pts.insert({x, y, z});
            }
        }
    }
    while (pts.size() < 5000) {
        pts.insert({c(rng), c(rng), c(rng)});
    }
    const auto file = (dir / "runtime.vox").string();
    {
        std::ofstream out(file);
        write_voxels(out, DigitalImage(std::vector<Point>(pts.begin(), pts.end())));
    }
    const auto t0 = Clock::now();
    std::ostringstream out, err;
    const char* argv[] = {"amtopo", "homology", file.c_str(), "--no-timing"};
    const int code = cli::run(4, argv, out, err);
    const double s = seconds_since(t0);
    if (code != 0) {
        o.fail("homology command failed: " + err.str());
    } else if (s >= 60.0) {
        o.fail("5000-voxel homology took " + std::to_string(s) + " s");
    }
    std::ostringstream d;
    d.precision(2);
    d << std::fixed << "5000-voxel homology in " << s << " s";
    if (o.ok) {
        o.detail = d.str();
    }
    return o;
}

bool on_support(const Chain& c, const SimplicialComplex& K)
{
    for (const auto& [s, k] : c.terms()) {
        if (!K.contains(s)) {
            return false;
        }
    }
    return true;
}

Outcome good_cycles()
{
    Outcome o;
    for (const std::string name : {"ring.vox", "hollow_cube.vox"}) {
        const DigitalImage img = read_voxel_file(std::string(AMTOPO_DATA_DIR) + "/" + name);
        const SimplicialComplex K = simplicial_representation(img);
        const SimplicialComplex dK = simplicial_representation(boundary_image(img));
        const GoodGenerators g = good_generators(img);
        if (!g.report.complete) {
            o.fail(name + ": incomplete");
        }
        if (!(homology(g.model).groups() == scratch(img))) {
            o.fail(name + ": homology changed");
        }
        if (!validate(g.model).empty()) {
            o.fail(name + ": invalid model");
        }
        std::size_t count = 0;
        for (std::size_t q = 0; q < g.report.dims.size(); ++q) {
            for (const auto& c : g.report.dims[q]) {
                ++count;
                const std::string at = name + " H" + std::to_string(q);
                if (!boundary_chain(c.chain).is_zero()) {
                    o.fail(at + ": not a cycle");
                }
                if (!on_support(c.chain, dK)) {
                    o.fail(at + ": not on the boundary image");
                }
                bool elementary = false;
                if (q == 0) {
                    elementary = c.chain.size() == 1;
                } else if (q == 1) {
                    elementary = elementary_cycle_check(c.chain, K);
                } else if (q == 2) {
                    elementary = elementary_cavity_check(c.chain, img);
                }
                if (!elementary) {
                    o.fail(at + ": not elementary");
                }
            }
        }
        Index total = 0;
        for (Index b : scratch(img).betti) {
            total += b;
        }
        if (static_cast<Index>(count) != total) {
            o.fail(name + ": " + std::to_string(count) + " generators for total betti " + std::to_string(total));
        }
    }
    return o;
}

Outcome torsion_free()
{
    Outcome o;
    std::mt19937_64 rng(100);
    std::uniform_int_distribution<int> count(20, 150);
    const int n = 110;
    for (int i = 0; i < n; ++i) {
        const DigitalImage img = testing_support::random_image(rng, 6, count(rng));
        const GroupSummary g = homology(build_am_model(simplicial_representation(img))).groups();
        for (std::size_t q = 0; q < g.torsion.size(); ++q) {
            if (!g.torsion[q].empty()) {
                o.fail("image " + std::to_string(i) + " has torsion in dimension " + std::to_string(q));
            }
        }
        for (std::size_t q = 4; q < g.betti.size(); ++q) {
            if (g.betti[q] != 0) {
                o.fail("image " + std::to_string(i) + " has homology in dimension " + std::to_string(q));
            }
        }
    }
    o.detail = o.ok ? std::to_string(n) + " images" : o.detail;
    return o;
}

}  // namespace

int main()
{
    criterion("klein-bottle: groups, cohomology and Smith forms exact in < 1 s", klein);
    criterion("chain-contraction identities on >= 200 random complexes", contraction);
    criterion("snf against an independent reduction on >= 200 matrices up to 8x8", snf_oracle);
    criterion("dynamic updates and set operations equal recomputation (>= 100 instances, < 60 s)", dynamic);
    criterion("hb1 fixtures sphere/torus/two tori and 5000-voxel runtime < 60 s", hb1_fixtures);
    criterion("good cycles on solid torus and hollow shell", good_cycles);
    criterion("image homology is torsion free on >= 100 random images", torsion_free);
    return failures == 0 ? 0 : 1;
}
