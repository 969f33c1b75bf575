#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "polyknot/energy.hpp"
#include "polyknot/thickness.hpp"

using namespace polyknot;

namespace {
const QuadratureConfig kQuad1{};
}

TEST_CASE("circle energy approaches 4") {
    const EnergyBreakdown e = mobius_energy(make_circle(1.0, 1024), kQuad1, kPi);
    CHECK(std::fabs(e.total - 4.0) < 0.04);
    CHECK(e.e_prox >= 0.0);
    CHECK(e.e_dist >= 0.0);
    CHECK(e.e_reg >= 0.0);
    CHECK(e.sample_count == 1024);
}

TEST_CASE("circle energy error shrinks under refinement") {
    double prev = std::numeric_limits<double>::infinity();
    for (int n = 128; n <= 2048; n *= 2) {
        const double err = std::fabs(mobius_energy(make_circle(1.0, n), kQuad1, kPi).total - 4.0);
        CHECK(err < prev * 1.05);  // monotone up to 5% jitter
        prev = err;
    }
}

TEST_CASE("decomposition identity holds as accumulated") {
    const PolylineKnot t = make_torus_knot(2, 3, 2.0, 1.0, 256);
    const EnergyBreakdown e = mobius_energy(t, kQuad1, 2.0);
    CHECK(std::fabs(e.total - (e.e_prox + e.e_dist - e.e_reg)) <=
          1e-9 * std::fabs(e.total));
}

TEST_CASE("energy is scale invariant with a scaled threshold") {
    const PolylineKnot t = make_torus_knot(2, 3, 2.0, 1.0, 128);
    const EnergyBreakdown base = mobius_energy(t, kQuad1, 2.5);
    for (const double lambda : {0.1, 3.0, 10.0}) {
        const EnergyBreakdown s = mobius_energy(scaled(t, lambda), kQuad1, 2.5 * lambda);
        CHECK(std::fabs(s.total - base.total) <= 1e-9 * std::fabs(base.total));
        CHECK(std::fabs(s.e_prox - base.e_prox) <= 1e-9 * std::max(1.0, base.e_prox));
    }
}

TEST_CASE("trefoil energy agrees with a 4x refinement oracle") {
    const double coarse = mobius_energy(make_torus_knot(2, 3, 2.0, 1.0, 512), kQuad1, kPi).total;
    const double fine = mobius_energy(make_torus_knot(2, 3, 2.0, 1.0, 2048), kQuad1, kPi).total;
    CHECK(std::fabs(coarse - fine) < 0.01 * fine);
}

TEST_CASE("threshold parameter is validated") {
    const PolylineKnot c = make_circle(1.0, 64);
    CHECK_THROWS_AS(mobius_energy(c, kQuad1, 0.0), BadParameter);
    CHECK_THROWS_AS(mobius_energy(c, kQuad1, -1.0), BadParameter);
    CHECK_THROWS_AS(mobius_energy(c, QuadratureConfig{0}, 1.0), BadParameter);
}

TEST_CASE("energy is deterministic across thread limits") {
    const PolylineKnot t = make_torus_knot(2, 5, 2.0, 1.0, 256);
    parallel::set_thread_limit(1);
    const EnergyBreakdown a = mobius_energy(t, kQuad1, kPi);
    parallel::set_thread_limit(8);
    const EnergyBreakdown b = mobius_energy(t, kQuad1, kPi);
    parallel::set_thread_limit(0);
    CHECK(a.total == b.total);
    CHECK(a.e_prox == b.e_prox);
    CHECK(a.e_dist == b.e_dist);
    CHECK(a.e_reg == b.e_reg);
}

TEST_CASE("circle inner integral closed form and quadrature oracle") {
    CHECK(circle_inner_integral(1.0) == 2.0 / kPi);
    CHECK(circle_inner_integral(2.0) == doctest::Approx(1.0 / kPi).epsilon(1e-15));
    CHECK_THROWS_AS(circle_inner_integral(0.0), BadParameter);

    // independent midpoint quadrature of 2 * int_0^pi 1/(4 sin^2(t/2)) - 1/t^2 dt
    const int N = 20000;
    double acc = 0.0;
    for (int i = 0; i < N; ++i) {
        const double t = (i + 0.5) * kPi / N;
        const double s = 2.0 * std::sin(t / 2.0);
        acc += 1.0 / (s * s) - 1.0 / (t * t);
    }
    const double oracle = 2.0 * acc * kPi / N;
    CHECK(std::fabs(oracle - circle_inner_integral(1.0)) < 1e-5);
}

TEST_CASE("e_reg closed form") {
    CHECK(e_reg_closed_form(2.0 * kPi) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(e_reg_closed_form(4.0 * kPi) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK_THROWS_AS(e_reg_closed_form(6.0), BadParameter);
}

TEST_CASE("e_reg quadrature matches the closed form on a long circle mesh") {
    // The distal set boundary cuts quadrature cells, so the error scales with
    // the sample spacing; this mesh keeps it a few parts in 1e4.
    const PolylineKnot c = make_circle(1.05, 4096);
    const EnergyBreakdown e = mobius_energy(c, QuadratureConfig{4}, kPi);
    CHECK(std::fabs(e.e_reg - e_reg_closed_form(c.total_length())) < 2.5e-4);
}

TEST_CASE("total curvature") {
    CHECK(std::fabs(total_curvature(testhelpers::unit_square()) - 2.0 * kPi) < 1e-12);
    CHECK(std::fabs(total_curvature(make_circle(1.0, 97)) - 2.0 * kPi) < 1e-12);
    // knotted curves exceed the closed-curve floor strictly
    CHECK(total_curvature(make_torus_knot(2, 3, 2.0, 1.0, 512)) > 2.0 * kPi + 1.0);
    // irregular planar convex polygon
    const PolylineKnot convex = build_knot(
        {Vec3(0, 0, 0), Vec3(2, 0, 0), Vec3(3, 1, 0), Vec3(2.5, 2.5, 0), Vec3(0.5, 2, 0)});
    CHECK(std::fabs(total_curvature(convex) - 2.0 * kPi) < 1e-12);
}

TEST_CASE("writhe of planar curves vanishes; mirrors negate") {
    CHECK(std::fabs(writhe(testhelpers::unit_square())) < 1e-10);
    CHECK(std::fabs(writhe(make_circle(1.0, 128))) < 1e-10);

    const PolylineKnot t = make_torus_knot(2, 3, 2.0, 1.0, 256);
    std::vector<Vec3> mirrored = t.vertices();
    for (Vec3& v : mirrored) v.z() = -v.z();
    const PolylineKnot tm = build_knot(std::move(mirrored));
    CHECK(writhe(tm) == doctest::Approx(-writhe(t)).epsilon(1e-12));
}

TEST_CASE("writhe matches dense Gauss quadrature") {
    const PolylineKnot t = make_torus_knot(2, 3, 2.0, 1.0, 256);
    const double exact = writhe(t);

    // midpoint quadrature of the Gauss integrand, 6 nodes per edge
    const int n = t.size(), m = 6;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue;
            const Vec3 cr = t.unit_tangent(i).cross(t.unit_tangent(j));
            const double ww = (t.edge_length(i) / m) * (t.edge_length(j) / m);
            for (int a = 0; a < m; ++a) {
                for (int b = 0; b < m; ++b) {
                    const Vec3 d = (t.vertex(i) + ((a + 0.5) / m) * t.edge_vector(i)) -
                                   (t.vertex(j) + ((b + 0.5) / m) * t.edge_vector(j));
                    const double dn = d.norm();
                    acc += cr.dot(d) / (dn * dn * dn) * ww;
                }
            }
        }
    }
    const double quadrature = 2.0 * acc / (4.0 * kPi);
    CHECK(std::fabs(exact - quadrature) < 1e-3);
}

TEST_CASE("average crossing number") {
    CHECK(std::fabs(average_crossing_number(testhelpers::unit_square(), kQuad1)) < 1e-10);

    const PolylineKnot t = make_torus_knot(2, 3, 2.0, 1.0, 512);
    const double acn = average_crossing_number(t, kQuad1);
    CHECK(acn >= 3.0);  // the trefoil needs at least its crossing number
    CHECK(acn >= std::fabs(writhe(t)));

    // signed vs absolute integrand on a non-symmetric perturbed knot
    const PolylineKnot p = perturb(make_torus_knot(2, 5, 2.0, 1.0, 256), 0.1, 21);
    CHECK(average_crossing_number(p, kQuad1) >= std::fabs(writhe(p)) - 1e-12);
}
