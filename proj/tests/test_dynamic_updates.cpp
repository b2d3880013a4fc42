#include <catch_amalgamated.hpp>

#include <random>

#include "amtopo/dynamic_updates.hpp"
#include "helpers.hpp"

using namespace amtopo;
using testing_support::image_homology;
using testing_support::load_fixture;
using testing_support::random_image;

namespace {

GroupSummary scratch(const DigitalImage& img)
{
    return homology(build_am_model(simplicial_representation(img))).groups();
}

bool same_complex(const AmModel& m, const DigitalImage& img)
{
    return m.complex() == simplicial_representation(img);
}

// Two images in a 6x6x6 box that overlap without either containing the other.
std::pair<DigitalImage, DigitalImage> overlapping_pair(std::mt19937_64& rng)
{
    for (;;) {
        const DigitalImage a = random_image(rng, 6, 55);
        const DigitalImage b = random_image(rng, 6, 55);
        if (!set_intersection(a, b).empty() && !is_subset(a, b) && !is_subset(b, a)) {
            return {a, b};
        }
    }
}

}  // namespace

TEST_CASE("voxel edits keep the model equal to a fresh computation")
{
    std::mt19937_64 rng(2718);
    std::uniform_int_distribution<int> c(0, 5);
    for (int trial = 0; trial < 12; ++trial) {
        ImageModel m = build_image_model(random_image(rng, 6, 50));
        for (int step = 0; step < 20; ++step) {
            const Point p{c(rng), c(rng), c(rng)};
            if (m.image.contains(p)) {
                if (m.image.size() == 1) {
                    continue;
                }
                delete_voxel(m, p);
            } else {
                add_voxel(m, p);
            }
            INFO("trial " << trial << " step " << step << " voxel " << p);
            REQUIRE(validate(m.model).empty());
            CHECK(same_complex(m.model, m.image));
            CHECK(homology(m.model).groups() == scratch(m.image));
        }
        CHECK(homology(m.model).groups() == image_homology(m.image));
    }
}

TEST_CASE("the model stays valid after every single simplex")
{
    std::mt19937_64 rng(31);
    ImageModel m = build_image_model(random_image(rng, 5, 30));
    int steps = 0;
    const StepHook hook = [&](const AmModel& model, const Simplex&) {
        ++steps;
        CHECK(validate(model).empty());
    };
    add_voxel(m, {2, 2, 2}, hook);
    const int added = steps;
    delete_voxel(m, {2, 2, 2}, hook);
    CHECK(steps == 2 * added);
    CHECK(added >= 1);
}

TEST_CASE("update plans list at most 74 simplices besides the voxel")
{
    std::mt19937_64 rng(44);
    for (int i = 0; i < 50; ++i) {
        const DigitalImage img = random_image(rng, 4, 40);
        const Point v = img.points().front();
        const UpdatePlan del = plan_delete(img, v);
        const UpdatePlan add = plan_add(img.without(v), v);
        CHECK(!del.insertion);
        CHECK(add.insertion);
        CHECK(add.simplices.size() <= 75);
        CHECK(add.simplices.front() == Simplex{vertex_id(v)});
        CHECK(del.simplices.back() == Simplex{vertex_id(v)});
        std::vector<Simplex> reversed(del.simplices.rbegin(), del.simplices.rend());
        CHECK(reversed == add.simplices);
    }
}

TEST_CASE("adding then deleting a voxel restores the homology")
{
    ImageModel m = build_image_model(DigitalImage({{0, 0, 0}, {1, 0, 0}}));
    const GroupSummary before = homology(m.model).groups();
    add_voxel(m, {5, 5, 5});
    CHECK(homology(m.model).groups().betti == std::vector<Index>{2});
    delete_voxel(m, {5, 5, 5});
    CHECK(homology(m.model).groups() == before);
    CHECK(validate(m.model).empty());
}

TEST_CASE("digging out a cavity and filling it again")
{
    ImageModel m = build_image_model(chebyshev_cube(2));
    delete_voxel(m, {0, 0, 0});
    CHECK(homology(m.model).groups().betti == std::vector<Index>{1, 0, 1});
    add_voxel(m, {0, 0, 0});
    CHECK(homology(m.model).groups().betti == std::vector<Index>{1});
}

TEST_CASE("set operations agree with fresh computations")
{
    std::mt19937_64 rng(555);
    for (int i = 0; i < 10; ++i) {
        const auto [I, J] = overlapping_pair(rng);
        const ImageModel mI = build_image_model(I);
        const ImageModel mJ = build_image_model(J);
        INFO("pair " << i);

        const ImageModel u = union_model(mI, mJ);
        CHECK(u.image == set_union(I, J));
        CHECK(validate(u.model).empty());
        CHECK(same_complex(u.model, u.image));
        CHECK(homology(u.model).groups() == scratch(u.image));

        const ImageModel n = intersection_model(mI, J);
        CHECK(n.image == set_intersection(I, J));
        CHECK(homology(n.model).groups() == scratch(n.image));

        const ImageModel d = difference_model(mI, J);
        CHECK(d.image == set_difference(I, J));
        CHECK(homology(d.model).groups() == scratch(d.image));

        const ImageModel inv = inverse_model(I);
        CHECK(inv.image == inverse_image(I));
        CHECK(validate(inv.model).empty());
        CHECK(homology(inv.model).groups() == scratch(inv.image));
    }
}

TEST_CASE("inverse of a hollow cube has two components")
{
    const DigitalImage shell = set_difference(chebyshev_cube(2), DigitalImage({{0, 0, 0}}));
    const ImageModel inv = inverse_model(shell);
    // The enclosed voxel and the outer frame.
    CHECK(homology(inv.model).groups().betti == std::vector<Index>{2, 0, 1});
    CHECK(homology(inv.model).groups() == scratch(inv.image));
}

TEST_CASE("degenerate set operations raise their kind")
{
    const ImageModel a = build_image_model(DigitalImage({{0, 0, 0}, {1, 0, 0}}));
    const ImageModel far = build_image_model(DigitalImage({{9, 9, 9}}));
    const ImageModel empty{};
    auto kind_of = [](auto&& f) {
        try {
            f();
        } catch (const TrivialCaseError& e) {
            return static_cast<int>(e.kind());
        }
        return -1;
    };
    CHECK(kind_of([&] { (void)union_model(empty, a); }) == static_cast<int>(TrivialCase::EmptyFirst));
    CHECK(kind_of([&] { (void)union_model(a, empty); }) == static_cast<int>(TrivialCase::EmptySecond));
    CHECK(kind_of([&] { (void)union_model(a, far); }) == static_cast<int>(TrivialCase::DisjointInputs));
    CHECK(kind_of([&] { (void)intersection_model(far, set_union(a.image, far.image)); }) ==
          static_cast<int>(TrivialCase::FirstContainedInSecond));
    CHECK(kind_of([&] { (void)inverse_model(chebyshev_cube(1)); }) == static_cast<int>(TrivialCase::FullCube));
    CHECK_THROWS_AS(inverse_model(a, a.image), std::invalid_argument);
}

TEST_CASE("simplex-level teardown and rebuild of the projective plane")
{
    const SimplicialComplex K = load_fixture("rp2.txt");
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        AmModel m = build_am_model(K);
        std::vector<Simplex> order;
        for (int q = K.dim(); q >= 0; --q) {
            auto s = K.simplices(q);
            std::shuffle(s.begin(), s.end(), rng);
            order.insert(order.end(), s.begin(), s.end());
        }
        for (const auto& s : order) {
            delete_simplex(m, s);
            REQUIRE(validate(m).empty());
        }
        CHECK(m.complex() == SimplicialComplex{});
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            add_simplex(m, *it);
            REQUIRE(validate(m).empty());
        }
        const GroupSummary g = homology(m).groups();
        CHECK(g.betti == std::vector<Index>{1, 0});
        CHECK(g.torsion[1] == std::vector<Integer>{2});
    }
}

TEST_CASE("simplex preconditions")
{
    AmModel m = build_am_model(SimplicialComplex::from_simplices({Simplex{0, 1, 2}}));
    CHECK_THROWS_AS(delete_simplex(m, Simplex{0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(delete_simplex(m, Simplex{5, 6}), std::invalid_argument);
    CHECK_THROWS_AS(add_simplex(m, Simplex{0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(add_simplex(m, Simplex{0, 7}), std::invalid_argument);
    delete_simplex(m, Simplex{0, 1, 2});
    CHECK(homology(m).groups().betti == std::vector<Index>{1, 1});
}
