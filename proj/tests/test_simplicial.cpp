#include <catch_amalgamated.hpp>

#include <random>
#include <sstream>

#include "amtopo/classical.hpp"
#include "amtopo/simplicial.hpp"
#include "helpers.hpp"

using namespace amtopo;
using testing_support::load_fixture;

TEST_CASE("simplices are stored sorted and reject repeated vertices")
{
    const Simplex s{3, 1, 2};
    CHECK(s.vertices() == std::vector<Vertex>{1, 2, 3});
    CHECK(s.dim() == 2);
    CHECK_THROWS_AS(Simplex({1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(Simplex(std::vector<Vertex>{}), std::invalid_argument);
}

TEST_CASE("faces, front and back faces")
{
    const Simplex s{0, 1, 2, 3};
    CHECK(s.face(0) == Simplex{1, 2, 3});
    CHECK(s.face(2) == Simplex{0, 1, 3});
    CHECK(s.front(1) == Simplex{0, 1});
    CHECK(s.back(2) == Simplex{1, 2, 3});
    CHECK(s.front(3) == s);
}

TEST_CASE("boundary of a triangle")
{
    const Chain b = boundary(Simplex{0, 1, 2});
    CHECK(b.coefficient(Simplex{1, 2}) == 1);
    CHECK(b.coefficient(Simplex{0, 2}) == -1);
    CHECK(b.coefficient(Simplex{0, 1}) == 1);
    CHECK(boundary(Simplex{4}).is_zero());
}

TEST_CASE("boundary of a boundary vanishes on random chains")
{
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> v(0, 6);
    std::uniform_int_distribution<int> k(-3, 3);
    for (int i = 0; i < 200; ++i) {
        Chain c(3);
        for (int t = 0; t < 4; ++t) {
            std::set<Vertex> s;
            while (s.size() < 4) {
                s.insert(v(rng));
            }
            c.add(Simplex(std::vector<Vertex>(s.begin(), s.end())), k(rng));
        }
        CHECK(boundary_chain(boundary_chain(c)).is_zero());
    }
}

TEST_CASE("face closure and counts")
{
    const auto K = SimplicialComplex::from_simplices({Simplex{0, 1, 2, 3}});
    CHECK(K.dim() == 3);
    CHECK(K.count(0) == 4);
    CHECK(K.count(1) == 6);
    CHECK(K.count(2) == 4);
    CHECK(K.count(3) == 1);
    CHECK(K.is_face_closed());
    CHECK(K.contains(Simplex{1, 3}));
}

TEST_CASE("boundary matrices compose to zero")
{
    const auto K = load_fixture("klein_bottle.txt");
    const IntMatrix d1 = boundary_matrix(K, 1);
    const IntMatrix d2 = boundary_matrix(K, 2);
    CHECK((d1 * d2).is_zero());
    CHECK(d2.rows() == K.count(1));
    CHECK(d2.cols() == K.count(2));
}

TEST_CASE("Klein bottle fixture homology")
{
    const auto K = load_fixture("klein_bottle.txt");
    CHECK(K.count(0) == 9);
    CHECK(K.count(1) == 27);
    CHECK(K.count(2) == 18);
    const GroupSummary g = classical_homology(K);
    CHECK(g.betti == std::vector<Index>{1, 1});
    CHECK(g.torsion[1] == std::vector<Integer>{2});
}

TEST_CASE("classical homology agrees with the dense oracle on random complexes")
{
    std::mt19937_64 rng(42);
    for (int i = 0; i < 150; ++i) {
        const auto raw = oracle::random_complex(rng, 7, 3, 30);
        const auto K = testing_support::to_complex(raw);
        CHECK(classical_homology(K) == testing_support::to_summary(oracle::homology(raw)));
    }
}

TEST_CASE("standard small complexes")
{
    CHECK(classical_homology(load_fixture("point.txt")).betti == std::vector<Index>{1});
    CHECK(classical_homology(load_fixture("circle.txt")).betti == std::vector<Index>{1, 1});
    CHECK(classical_homology(load_fixture("sphere.txt")).betti == std::vector<Index>{1, 0, 1});
    CHECK(classical_homology(load_fixture("torus7.txt")).betti == std::vector<Index>{1, 2, 1});
    const GroupSummary rp2 = classical_homology(load_fixture("rp2.txt"));
    CHECK(rp2.betti == std::vector<Index>{1, 0});
    CHECK(rp2.torsion[1] == std::vector<Integer>{2});
}

TEST_CASE("boundary matrix in replacement bases")
{
    const auto K = SimplicialComplex::from_simplices({Simplex{0, 1, 2}});
    std::vector<Chain> rows;
    for (const auto& e : K.simplices(1)) {
        Chain c(1);
        c.add(e, 1);
        rows.push_back(c);
    }
    // Replace <0,2> by the cycle <0,1> + <1,2> - <0,2>.
    rows[1] = boundary(Simplex{0, 1, 2});
    std::vector<Chain> cols{Chain(2)};
    cols[0].add(Simplex{0, 1, 2}, 1);
    const IntMatrix d = boundary_matrix(K, 2, rows, cols);
    CHECK(d.get(1, 0) == 1);
    CHECK(d.column(0).size() == 1);

    std::vector<Chain> bad = rows;
    bad[0] = 2 * bad[0];
    CHECK_THROWS_AS(boundary_matrix(K, 2, bad, cols), std::invalid_argument);
}

TEST_CASE("parsing complexes")
{
    std::istringstream ok("# comment\n0 1 2\n\n2 3 # trailing\n");
    const auto K = parse_complex(ok);
    CHECK(K.count(0) == 4);
    CHECK(K.count(2) == 1);

    std::istringstream empty("# nothing here\n");
    CHECK_THROWS_AS(parse_complex(empty), ParseError);

    std::istringstream bad("0 1\n1 x\n");
    try {
        parse_complex(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }

    std::istringstream dup("0 1\n2 2\n");
    CHECK_THROWS_AS(parse_complex(dup), ParseError);
}

TEST_CASE("writing and re-reading a complex gives the same complex")
{
    const auto K = load_fixture("torus7.txt");
    std::stringstream s;
    write_complex(s, K);
    CHECK(parse_complex(s) == K);
}
