#include <doctest.h>

#include <cmath>
#include <random>

#include "helpers.hpp"
#include "polyknot/geometry.hpp"

using namespace polyknot;

TEST_CASE("build_knot validates its input") {
    CHECK_THROWS_AS(build_knot({Vec3(0, 0, 0), Vec3(1, 0, 0)}), TooFewVertices);
    CHECK_THROWS_AS(build_knot({Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(1, 0, 0)}),
                    DegenerateEdge);
    // figure-eight in the plane crosses itself
    CHECK_THROWS_AS(build_knot({Vec3(0, 0, 0), Vec3(2, 2, 0), Vec3(2, 0, 0), Vec3(0, 2, 0)}),
                    SelfIntersecting);

    const PolylineKnot sq = testhelpers::unit_square();
    CHECK(sq.total_length() == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(sq.size() == 4);
}

TEST_CASE("point_at interpolates and wraps") {
    const PolylineKnot sq = testhelpers::unit_square();
    const ArcPoint mid = point_at(sq, 0.5);
    CHECK(mid.position.isApprox(Vec3(0.5, 0, 0), 1e-15));
    CHECK(mid.edge_index == 0);

    // wraps at L and for negative parameters
    CHECK(point_at(sq, 4.0).position.isApprox(point_at(sq, 0.0).position, 1e-15));
    CHECK(point_at(sq, -0.5).position.isApprox(point_at(sq, 3.5).position, 1e-15));

    // vertices are reproduced exactly
    for (int i = 0; i < sq.size(); ++i) {
        const ArcPoint p = point_at(sq, sq.arc_prefix()[static_cast<std::size_t>(i)]);
        CHECK(p.position == sq.vertex(i));
        CHECK(p.edge_index == i);
    }
}

TEST_CASE("arc_distance takes the shorter way and is a metric") {
    const PolylineKnot c = make_circle(1.0, 256);
    const double L = c.total_length();
    CHECK(arc_distance(c, 0.0, L / 2.0) == doctest::Approx(L / 2.0));
    CHECK(arc_distance(c, 0.0, 0.75 * L) == doctest::Approx(0.25 * L));
    CHECK(arc_distance(c, 1.2345, 1.2345) == 0.0);

    const auto xs = testhelpers::random_doubles(11, 30, -2.0 * L, 2.0 * L);
    for (std::size_t i = 0; i + 2 < xs.size(); i += 3) {
        const double a = xs[i], b = xs[i + 1], c3 = xs[i + 2];
        CHECK(arc_distance(c, a, b) == doctest::Approx(arc_distance(c, b, a)).epsilon(1e-12));
        CHECK(arc_distance(c, a, c3) <=
              arc_distance(c, a, b) + arc_distance(c, b, c3) + 1e-9);
        CHECK(arc_distance(c, a, b) >= 0.0);
        CHECK(arc_distance(c, a, b) <= L / 2.0 + 1e-12);
    }
}

TEST_CASE("make_circle produces regular inscribed polygons") {
    CHECK_THROWS_AS(make_circle(1.0, 2), BadParameter);
    CHECK_THROWS_AS(make_circle(0.0, 16), BadParameter);

    const PolylineKnot sq = make_circle(1.0, 4);
    CHECK(sq.total_length() == doctest::Approx(4.0 * std::sqrt(2.0)).epsilon(1e-14));

    const PolylineKnot c = make_circle(2.5, 512);
    for (int i = 0; i < c.size(); ++i) {
        CHECK(std::fabs(c.vertex(i).norm() - 2.5) < 1e-12);
        CHECK(std::fabs(c.edge_length(i) - c.edge_length(0)) < 1e-12);
    }
    // circumference limit
    CHECK(make_circle(1.0, 4096).total_length() ==
          doctest::Approx(2.0 * kPi).epsilon(1e-6));
}

TEST_CASE("make_torus_knot validates and samples embedded curves") {
    CHECK_THROWS_AS(make_torus_knot(2, 4, 2.0, 1.0, 128), BadParameter);
    CHECK_THROWS_AS(make_torus_knot(1, 3, 2.0, 1.0, 128), BadParameter);
    CHECK_THROWS_AS(make_torus_knot(2, 3, 1.0, 2.0, 128), BadParameter);

    const PolylineKnot t = make_torus_knot(2, 3, 2.0, 1.0, 512);
    CHECK(t.size() == 512);
    CHECK(t.min_nonadjacent_distance() > 0.01);

    // the n = 8 sample of the trefoil is still embedded (frozen outcome of
    // the simplicity check)
    CHECK_NOTHROW(make_torus_knot(2, 3, 2.0, 1.0, 8));
}

TEST_CASE("generators are deterministic") {
    const PolylineKnot a = make_torus_knot(2, 5, 2.0, 1.0, 256);
    const PolylineKnot b = make_torus_knot(2, 5, 2.0, 1.0, 256);
    for (int i = 0; i < a.size(); ++i) CHECK(a.vertex(i) == b.vertex(i));
}

TEST_CASE("perturb is deterministic, bounded and gentle") {
    const PolylineKnot c = make_circle(1.0, 256);
    CHECK_THROWS_AS(perturb(c, -1.0, 3), BadParameter);

    const PolylineKnot same = perturb(c, 0.0, 3);
    for (int i = 0; i < c.size(); ++i) CHECK(same.vertex(i) == c.vertex(i));

    const PolylineKnot p1 = perturb(c, 0.05, 7);
    const PolylineKnot p2 = perturb(c, 0.05, 7);
    for (int i = 0; i < c.size(); ++i) CHECK(p1.vertex(i) == p2.vertex(i));

    double max_disp = 0.0;
    for (int i = 0; i < c.size(); ++i) {
        max_disp = std::max(max_disp, (p1.vertex(i) - c.vertex(i)).norm());
    }
    CHECK(max_disp <= 0.05 + 1e-15);
    CHECK(std::fabs(p1.total_length() - 2.0 * kPi) < 0.05 * 2.0 * kPi);

    const PolylineKnot p3 = perturb(c, 0.05, 8);
    bool differs = false;
    for (int i = 0; i < c.size(); ++i) differs = differs || p1.vertex(i) != p3.vertex(i);
    CHECK(differs);
}

TEST_CASE("scaled multiplies lengths") {
    const PolylineKnot sq = testhelpers::unit_square();
    const PolylineKnot big = scaled(sq, 3.0);
    CHECK(big.total_length() == doctest::Approx(12.0).epsilon(1e-14));
    CHECK_THROWS_AS(scaled(sq, 0.0), BadParameter);
}
