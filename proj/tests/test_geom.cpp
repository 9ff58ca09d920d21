#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "rangebench/geom.hpp"
#include "rangebench/rng.hpp"

using namespace rangebench;

namespace {
const Aabb kUnit{{0, 0, 0}, {1, 1, 1}};
}

TEST_CASE("box_contains_point uses closed boundaries") {
    CHECK(box_contains_point(kUnit, {0.5, 0.5, 0.5}));
    CHECK(box_contains_point(kUnit, {1, 1, 1}));
    CHECK(box_contains_point(kUnit, {0, 0, 0}));
    CHECK_FALSE(box_contains_point(kUnit, {1.0000001, 0.5, 0.5}));
}

TEST_CASE("box_intersects_box counts shared faces and corners") {
    CHECK(box_intersects_box(kUnit, Aabb{{1, 1, 1}, {2, 2, 2}}));
    CHECK_FALSE(box_intersects_box(kUnit, Aabb{{2, 2, 2}, {3, 3, 3}}));
    CHECK(box_intersects_box(Aabb{{0, 0, 0}, {4, 4, 4}}, Aabb{{1, 1, 1}, {2, 2, 2}}));
}

TEST_CASE("enclosing_sphere is the minimal sphere of the box") {
    const Sphere cube = enclosing_sphere(Aabb{{0, 0, 0}, {2, 2, 2}});
    CHECK(cube.center == Point3{1, 1, 1});
    CHECK(cube.radius == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));

    const Sphere degenerate = enclosing_sphere(Aabb{{0, 0, 0}, {0, 0, 0}});
    CHECK(degenerate.center == Point3{0, 0, 0});
    CHECK(degenerate.radius == 0.0);

    const Sphere rect = enclosing_sphere(Aabb{{0, 0, 0}, {1, 2, 3}});
    CHECK(rect.center == Point3{0.5, 1.0, 1.5});
    CHECK(rect.radius == doctest::Approx(std::sqrt(14.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("sphere_contains_point is a closed ball") {
    CHECK(sphere_contains_point({{0, 0, 0}, 1.0}, {1, 0, 0}));
    CHECK_FALSE(sphere_contains_point({{0, 0, 0}, 1.0}, {1, 1, 1}));
    // Corner of the enclosed box [0,2]^3: radius sqrt(3), corner inside.
    const Sphere s = enclosing_sphere(Aabb{{0, 0, 0}, {2, 2, 2}});
    CHECK(s.radius == doctest::Approx(std::sqrt(3.0)).epsilon(1e-12));
    CHECK(sphere_contains_point(s, {0, 0, 0}));
}

TEST_CASE("boundary points of a box are contained") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        Aabb b;
        b.min = uniform_point_in(rng, kUnit);
        b.max = uniform_point_in(rng, kUnit);
        for (int a = 0; a < 3; ++a) {
            if (b.min[a] > b.max[a]) std::swap(b.min[a], b.max[a]);
        }
        Point3 p = uniform_point_in(rng, b);
        const int face_axis = static_cast<int>(rng() % 3);
        p[face_axis] = (rng() & 1) ? b.min[face_axis] : b.max[face_axis];
        CHECK(box_contains_point(b, p));
    }
}

TEST_CASE("box intersection is symmetric") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 500; ++trial) {
        Aabb a;
        a.min = uniform_point_in(rng, kUnit);
        a.max = uniform_point_in(rng, kUnit);
        Aabb b;
        b.min = uniform_point_in(rng, kUnit);
        b.max = uniform_point_in(rng, kUnit);
        for (int axis = 0; axis < 3; ++axis) {
            if (a.min[axis] > a.max[axis]) std::swap(a.min[axis], a.max[axis]);
            if (b.min[axis] > b.max[axis]) std::swap(b.min[axis], b.max[axis]);
        }
        CHECK(box_intersects_box(a, b) == box_intersects_box(b, a));
    }
}

TEST_CASE("enclosing sphere contains every point of the box") {
    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        Aabb b;
        b.min = uniform_point_in(rng, kUnit);
        b.max = uniform_point_in(rng, kUnit);
        for (int a = 0; a < 3; ++a) {
            if (b.min[a] > b.max[a]) std::swap(b.min[a], b.max[a]);
        }
        const Sphere s = enclosing_sphere(b);
        for (int i = 0; i < 20; ++i) {
            const Point3 p = uniform_point_in(rng, b);
            REQUIRE(box_contains_point(b, p));
            CHECK(sphere_contains_point(s, p));
        }
        CHECK(sphere_contains_point(s, b.min));
        CHECK(sphere_contains_point(s, b.max));
    }
}

TEST_CASE("degenerate boxes behave as points") {
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 500; ++trial) {
        Aabb b;
        b.min = uniform_point_in(rng, kUnit);
        b.max = uniform_point_in(rng, kUnit);
        for (int a = 0; a < 3; ++a) {
            if (b.min[a] > b.max[a]) std::swap(b.min[a], b.max[a]);
        }
        const Point3 p = uniform_point_in(rng, kUnit);
        const Aabb point_box{p, p};
        CHECK(box_intersects_box(point_box, b) == box_contains_point(b, p));
    }
}

TEST_CASE("min and max squared distance to a box") {
    const Aabb b{{0, 0, 0}, {2, 2, 2}};
    CHECK(min_squared_distance(b, {1, 1, 1}) == 0.0);
    CHECK(min_squared_distance(b, {3, 1, 1}) == doctest::Approx(1.0));
    CHECK(max_squared_distance(b, {1, 1, 1}) == doctest::Approx(3.0));
    CHECK(sphere_intersects_box({{3, 1, 1}, 1.0}, b));
    CHECK_FALSE(sphere_intersects_box({{3.1, 1, 1}, 1.0}, b));
    CHECK(sphere_contains_box({{1, 1, 1}, std::sqrt(3.0) + 1e-9}, b));
    CHECK_FALSE(sphere_contains_box({{1, 1, 1}, std::sqrt(3.0) - 1e-9}, b));
}

TEST_CASE("validity predicates") {
    CHECK(is_valid(kUnit));
    CHECK(is_valid(Aabb{{1, 1, 1}, {1, 1, 1}}));
    CHECK_FALSE(is_valid(Aabb{{1, 0, 0}, {0, 1, 1}}));
    CHECK_FALSE(is_finite(Point3{std::nan(""), 0, 0}));
    CHECK(is_valid(Sphere{{0, 0, 0}, 0.0}));
    CHECK_FALSE(is_valid(Sphere{{0, 0, 0}, -1.0}));
}
