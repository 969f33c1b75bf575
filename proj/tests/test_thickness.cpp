#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "polyknot/thickness.hpp"

using namespace polyknot;

TEST_CASE("min_rad closed forms") {
    for (const int n : {6, 64, 512}) {
        const auto [r, v] = min_rad(make_circle(1.0, n));
        CHECK(std::fabs(r - std::cos(kPi / n)) < 1e-12);
        CHECK(v >= 0);
    }
    const auto [r, v] = min_rad(testhelpers::unit_square());
    CHECK(r == doctest::Approx(0.5).epsilon(1e-14));

    // a collinear vertex contributes infinite radius; the corners win
    const PolylineKnot with_flat = build_knot({Vec3(0, 0, 0), Vec3(0.5, 0, 0), Vec3(1, 0, 0),
                                               Vec3(1, 1, 0), Vec3(0, 1, 0)});
    const auto [rf, vf] = min_rad(with_flat);
    CHECK(rf == doctest::Approx(0.25).epsilon(1e-12));  // min edge 0.5 at a right angle
    CHECK(std::isfinite(rf));
}

TEST_CASE("dcsd closed forms") {
    // opposite parallel edges of even polygons
    for (const int n : {6, 64, 512}) {
        const auto [d, wit] = dcsd(make_circle(1.0, n));
        CHECK(std::fabs(d - 2.0 * std::cos(kPi / n)) < 1e-12);
        CHECK(std::fabs((wit.first.position - wit.second.position).norm() - d) < 1e-12);
    }
    // circle mesh approaches the smooth antipodal value 2
    CHECK(std::fabs(dcsd(make_circle(1.0, 512)).first - 2.0) < 1e-4);

    const auto [dsq, wsq] = dcsd(testhelpers::unit_square());
    CHECK(dsq == doctest::Approx(1.0).epsilon(1e-14));

    // odd polygons: the shortest critical chord runs from a vertex to the
    // opposite edge, length 1 + cos(pi/n)
    for (const int n : {5, 7}) {
        CHECK(dcsd(make_circle(1.0, n)).first ==
              doctest::Approx(1.0 + std::cos(kPi / n)).epsilon(1e-12));
    }
}

TEST_CASE("thickness report") {
    const ThicknessReport sq = thickness(testhelpers::unit_square());
    CHECK(std::fabs(sq.radius - 0.5) < 1e-9);
    CHECK(std::fabs(sq.ropelength - 8.0) < 1e-9);
    CHECK(sq.radius == std::min(sq.min_rad, sq.dcsd / 2.0));

    const ThicknessReport c = thickness(make_circle(1.0, 512));
    CHECK(std::fabs(c.radius - std::cos(kPi / 512)) < 1e-12);
    CHECK(std::fabs(c.ropelength - 2.0 * kPi) < 0.001 * 2.0 * kPi);
}

TEST_CASE("ropelength is scale invariant") {
    const PolylineKnot t = make_torus_knot(2, 3, 2.0, 1.0, 128);
    const double base = thickness(t).ropelength;
    for (const double lambda : {0.01, 1.0, 100.0}) {
        const ThicknessReport s = thickness(scaled(t, lambda));
        CHECK(std::fabs(s.ropelength - base) <= 1e-12 * base);
        CHECK(s.radius == doctest::Approx(lambda * thickness(t).radius).epsilon(1e-12));
    }
}

TEST_CASE("circle-mesh ropelength decreases toward 2 pi under refinement") {
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 64; n <= 1024; n *= 2) {
        const double rl = thickness(make_circle(1.0, n)).ropelength;
        CHECK(rl >= 2.0 * kPi - 1e-9);
        CHECK(rl <= prev + 1e-6);
        prev = rl;
    }
}

TEST_CASE("normalize rescales to unit thickness") {
    const PolylineKnot sq = testhelpers::unit_square();
    const PolylineKnot nsq = normalize(sq);
    CHECK(nsq.total_length() == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(std::fabs(thickness(nsq).radius - 1.0) < 1e-12);

    // idempotence
    const PolylineKnot again = normalize(nsq);
    CHECK(again.total_length() == doctest::Approx(nsq.total_length()).epsilon(1e-9));

    const PolylineKnot c = normalize(make_circle(5.0, 256));
    CHECK(thickness(c).radius == doctest::Approx(1.0).epsilon(1e-12));

    // normalized length equals the input's ropelength
    const PolylineKnot t = make_torus_knot(2, 5, 2.0, 1.0, 256);
    CHECK(normalize(t).total_length() ==
          doctest::Approx(thickness(t).ropelength).epsilon(1e-12));
}

TEST_CASE("dcsd witness and determinism across thread limits") {
    const PolylineKnot t = make_torus_knot(2, 3, 2.0, 1.0, 512);
    parallel::set_thread_limit(1);
    const auto [d1, w1] = dcsd(t);
    parallel::set_thread_limit(8);
    const auto [d2, w2] = dcsd(t);
    parallel::set_thread_limit(0);
    CHECK(d1 == d2);
    CHECK(w1.first.s == w2.first.s);
    CHECK(w1.second.s == w2.second.s);
    CHECK(std::fabs((w1.first.position - w1.second.position).norm() - d1) < 1e-12);
}
