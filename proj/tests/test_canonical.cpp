#include <doctest.h>

#include <cmath>

#include "lambdasurf/canonical.hpp"
#include "lambdasurf/geometry.hpp"

using namespace lambdasurf;

TEST_CASE("canonical lambda values from the examples") {
    CHECK(canonical_lambda(CanonicalSurface::sphere(2, 1.0, Orientation::inward)) ==
          doctest::Approx(1.0).epsilon(1e-15));
    CHECK(canonical_lambda(CanonicalSurface::plane({0, 0, 1}, 0.0)) == 0.0);
    CHECK(canonical_lambda(CanonicalSurface::cylinder(2, 1, 2.0, Orientation::inward)) ==
          doctest::Approx(-1.5).epsilon(1e-15));
}

TEST_CASE("orientation flip negates lambda exactly") {
    const auto surfaces = {CanonicalSurface::sphere(3, 0.7, Orientation::inward),
                           CanonicalSurface::cylinder(3, 2, 1.3, Orientation::outward),
                           CanonicalSurface::plane({0.6, 0.8, 0.0, 0.0}, 1.25)};
    for (const auto& s : surfaces)
        CHECK(canonical_lambda(s.flipped()) == -canonical_lambda(s));
}

TEST_CASE("sample closed forms") {
    for (const auto& s : sample_surface(CanonicalSurface::sphere(2, 2.0, Orientation::inward), 64, 3)) {
        CHECK(s.mean_curvature == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(s.support == doctest::Approx(-2.0).epsilon(1e-13));
        CHECK(norm2(s.position) == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(norm2(s.normal) == doctest::Approx(1.0).epsilon(1e-13));
    }
    for (const auto& s : sample_surface(CanonicalSurface::plane({0, 0, 1}, 0.0), 32, 4)) {
        CHECK(s.mean_curvature == 0.0);
        CHECK(s.support == doctest::Approx(0.0).epsilon(1e-14));
    }
    for (const auto& s :
         sample_surface(CanonicalSurface::cylinder(2, 1, 1.0, Orientation::inward), 64, 5)) {
        CHECK(s.mean_curvature == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(s.support == doctest::Approx(-1.0).epsilon(1e-13));
        // spherical factor radius
        CHECK(std::hypot(s.position[0], s.position[1]) == doctest::Approx(1.0).epsilon(1e-13));
    }
}

TEST_CASE("verify_canonical stays at rounding level for all families and orientations") {
    const auto surfaces = {CanonicalSurface::sphere(1, 1.0, Orientation::inward),
                           CanonicalSurface::sphere(2, 1.0, Orientation::inward),
                           CanonicalSurface::sphere(4, 3.0, Orientation::outward),
                           CanonicalSurface::cylinder(2, 1, 2.0, Orientation::inward),
                           CanonicalSurface::cylinder(4, 3, 0.5, Orientation::outward),
                           CanonicalSurface::plane({0, 0, 1}, 3.0),
                           CanonicalSurface::plane({1, 0, 0, 0}, -0.75)};
    for (const auto& s : surfaces) {
        CHECK(verify_canonical(s, 300) <= 1e-12);
        CHECK(verify_canonical(s.flipped(), 300) <= 1e-12);
    }
}

TEST_CASE("sampling is deterministic in the seed") {
    const auto s = CanonicalSurface::sphere(2, 1.5, Orientation::outward);
    const auto a = sample_surface(s, 16, 99);
    const auto b = sample_surface(s, 16, 99);
    const auto c = sample_surface(s, 16, 100);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t d = 0; d < a[i].position.size(); ++d)
            CHECK(a[i].position[d] == b[i].position[d]);
    bool any_diff = false;
    for (std::size_t d = 0; d < a[0].position.size(); ++d)
        if (a[0].position[d] != c[0].position[d]) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("hemisphere graph ties the sphere example to the graph orientation") {
    // upper hemisphere as a graph has the outward normal: residual vanishes
    // at lambda = r - n/r, the sign opposite to the inward sphere example
    const double r = 2.0;
    const int n = 2;
    const double lam_graph = hemisphere_lambda(r, n);
    CHECK(lam_graph ==
          -canonical_lambda(CanonicalSurface::sphere(n, r, Orientation::inward)));
    const Vec x{0.3, -0.2};
    const GradHess gh = hemisphere_gradhess(r, x);
    CHECK(lambda_residual(x, hemisphere_value(r, x), gh, lam_graph) ==
          doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("descriptor validation") {
    CHECK_THROWS_AS(CanonicalSurface::sphere(2, -1.0, Orientation::inward), ValidationError);
    CHECK_THROWS_AS(CanonicalSurface::cylinder(2, 2, 1.0, Orientation::inward), ValidationError);
    CHECK_THROWS_AS(CanonicalSurface::cylinder(1, 1, 1.0, Orientation::inward), ValidationError);
    CHECK_THROWS_AS(CanonicalSurface::plane({0, 0, 0}, 0.0), ValidationError);
    CHECK_THROWS_AS(sample_surface(CanonicalSurface::sphere(2, 1.0, Orientation::inward), 0, 1),
                    ValidationError);
}
