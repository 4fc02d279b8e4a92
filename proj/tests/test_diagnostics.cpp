#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lambdasurf/canonical.hpp"
#include "lambdasurf/diagnostics.hpp"
#include "lambdasurf/geometry.hpp"
#include "lambdasurf/rng.hpp"

using namespace lambdasurf;

namespace {

constexpr double kPi = std::numbers::pi;

double min_dot_direct(const std::vector<Vec>& normals, const Vec& a) {
    double m = 2.0;
    for (const Vec& n : normals) {
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * n[i];
        m = std::min(m, d);
    }
    return m;
}

/// Independent maximin oracle on S^2: golden-spiral sweep followed by
/// shrinking-cap refinement. Shares no code with the library optimizer.
double cap_refine_oracle(const std::vector<Vec>& normals) {
    Vec best{0, 0, 1};
    double best_val = -2.0;
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < 20000; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / 20000.0;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const Vec a{r * std::cos(golden * k), r * std::sin(golden * k), z};
        const double v = min_dot_direct(normals, a);
        if (v > best_val) {
            best_val = v;
            best = a;
        }
    }
    double cap = 0.05;
    for (int stage = 0; stage < 6; ++stage) {
        Vec u{-best[1], best[0], 0.0};
        if (norm2(u) < 1e-8) u = {1, 0, 0};
        const double nu = norm2(u);
        for (auto& x : u) x /= nu;
        const Vec w{best[1] * u[2] - best[2] * u[1], best[2] * u[0] - best[0] * u[2],
                    best[0] * u[1] - best[1] * u[0]};
        Vec improved = best;
        double improved_val = best_val;
        for (int i = -10; i <= 10; ++i)
            for (int j = -10; j <= 10; ++j) {
                const double du = cap * i / 10.0, dw = cap * j / 10.0;
                Vec a(3);
                for (std::size_t d = 0; d < 3; ++d) a[d] = best[d] + du * u[d] + dw * w[d];
                const double na = norm2(a);
                for (auto& x : a) x /= na;
                const double v = min_dot_direct(normals, a);
                if (v > improved_val) {
                    improved_val = v;
                    improved = a;
                }
            }
        best = improved;
        best_val = improved_val;
        cap /= 4.0;
    }
    return best_val;
}

std::vector<Vec> random_instance(Rng& rng) {
    std::vector<Vec> normals;
    const int clusters = 1 + static_cast<int>(rng.next_u64() % 4);
    for (int c = 0; c < clusters; ++c) {
        const Vec centre = rng.unit_vector(3);
        const double spread = rng.uniform(0.05, 0.9);
        const int count = 5 + static_cast<int>(rng.next_u64() % 30);
        for (int i = 0; i < count; ++i) {
            Vec v(3);
            for (std::size_t d = 0; d < 3; ++d) v[d] = centre[d] + spread * rng.gaussian();
            const double nv = norm2(v);
            for (auto& x : v) x /= nv;
            normals.push_back(std::move(v));
        }
    }
    return normals;
}

std::vector<Vec> great_circle_normals(int count) {
    std::vector<Vec> normals;
    for (int i = 0; i < count; ++i) {
        const double th = 2.0 * kPi * i / count;
        normals.push_back({std::cos(th), std::sin(th), 0.0});
    }
    return normals;
}

}  // namespace

TEST_CASE("entire-graph normals certify an open hemisphere at the vertical") {
    Rng rng(31);
    std::vector<Vec> normals;
    for (int i = 0; i < 200; ++i) {
        Vec grad = rng.unit_vector(2);
        const double s = 2.0 * std::sqrt(rng.uniform());
        for (auto& g : grad) g *= s;
        normals.push_back(unit_normal(grad));
    }
    const HemisphereCertificate cert = open_hemisphere_certificate(normals, 1e-6);
    CHECK(cert.verdict == HemisphereVerdict::open);
    CHECK(cert.margin > 1e-6);
    CHECK(cert.direction.back() >= 0.9);
    // e3 itself certifies, and the optimizer should do at least as well
    const Vec e3{0, 0, 1};
    CHECK(cert.margin >= min_dot_direct(normals, e3) - 1e-9);
    // soundness: every normal clears the reported margin under the reported a
    for (const Vec& n : normals) {
        double d = 0.0;
        for (std::size_t i = 0; i < 3; ++i) d += cert.direction[i] * n[i];
        CHECK(d >= cert.margin - 1e-12);
    }
}

TEST_CASE("great-circle normals: closed containment only, axis certificate") {
    const auto normals = great_circle_normals(64);
    const HemisphereCertificate cert = closed_hemisphere_certificate(normals, 1e-6);
    CHECK(cert.verdict == HemisphereVerdict::closed_only);
    CHECK(std::abs(cert.margin) <= 1e-6);
    CHECK(std::abs(cert.direction[2]) >= 0.999);  // +/- the circle's axis
    CHECK(cert.normal_rank == 2);
}

TEST_CASE("antipodal pair: degenerate containment reported as neither") {
    const std::vector<Vec> normals{{1, 0, 0}, {-1, 0, 0}};
    const HemisphereCertificate open_cert = open_hemisphere_certificate(normals, 1e-6);
    CHECK(open_cert.verdict == HemisphereVerdict::neither);
    CHECK(open_cert.normal_rank == 1);
    const HemisphereCertificate closed_cert = closed_hemisphere_certificate(normals, 1e-6);
    CHECK(closed_cert.verdict == HemisphereVerdict::neither);
}

TEST_CASE("polar cap within 80 degrees is open as well as closed") {
    Rng rng(32);
    std::vector<Vec> normals;
    const double zmin = std::cos(80.0 * kPi / 180.0);
    for (int i = 0; i < 200; ++i) {
        const double z = rng.uniform(zmin, 1.0);
        const double r = std::sqrt(1.0 - z * z);
        const double th = rng.uniform(0.0, 2.0 * kPi);
        normals.push_back({r * std::cos(th), r * std::sin(th), z});
    }
    const HemisphereCertificate cert = open_hemisphere_certificate(normals, 1e-6);
    CHECK(cert.verdict == HemisphereVerdict::open);
    CHECK(cert.margin > zmin - 1e-6);
}

TEST_CASE("full-sphere sample is contained in no hemisphere") {
    Rng rng(33);
    std::vector<Vec> normals;
    for (int i = 0; i < 400; ++i) normals.push_back(rng.unit_vector(3));
    const HemisphereCertificate cert = closed_hemisphere_certificate(normals, 1e-6);
    CHECK(cert.verdict == HemisphereVerdict::neither);
    CHECK(cert.margin < -0.5);
}

TEST_CASE("optimizer tracks the independent cap-refinement oracle") {
    Rng rng(34);
    for (int inst = 0; inst < 20; ++inst) {
        const auto normals = random_instance(rng);
        const HemisphereCertificate cert = open_hemisphere_certificate(normals, 1e-6);
        const double oracle = cap_refine_oracle(normals);
        CHECK(std::abs(cert.margin - oracle) <= 1e-2);
    }
}

TEST_CASE("half-equator region membership") {
    const Vec e3{0, 0, 1}, e2{0, 1, 0}, me2{0, -1, 0};
    CHECK(half_equator_test({e3}, 1e-9).violations == 0);
    CHECK(half_equator_test({e2}, 1e-9).violations == 1);
    CHECK(half_equator_test({me2}, 1e-9).violations == 0);

    // monotone in eps
    Rng rng(35);
    std::vector<Vec> normals;
    for (int i = 0; i < 300; ++i) normals.push_back(rng.unit_vector(3));
    const auto few = half_equator_test(normals, 1e-3);
    const auto more = half_equator_test(normals, 1e-1);
    CHECK(few.violations <= more.violations);
    for (std::size_t idx : few.witness_indices) {
        bool present = false;
        for (std::size_t j : more.witness_indices) present |= (j == idx);
        CHECK(present);
    }
}

TEST_CASE("growth bound exponents from the closed forms") {
    // cylinder: lambda = k/r - r, H = k/r -> n - k
    for (double r : {0.5, 1.0, 2.0}) {
        const double lam = 1.0 / r - r;
        CHECK(growth_bound_exponent(lam, sq(1.0 / r), sq(r), 2) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
    // sphere: exponent 0
    CHECK(growth_bound_exponent(2.0 / 1.5 - 1.5, sq(2.0 / 1.5), sq(1.5), 2) ==
          doctest::Approx(0.0).epsilon(1e-12));
    // plane through the origin: exponent n
    CHECK(growth_bound_exponent(0.0, 0.0, 0.0, 3) == 3.0);
}

TEST_CASE("measured growth matches the analytic bound exponents") {
    const auto plane = measured_growth(CanonicalSurface::plane({0, 0, 1}, 0.0), {1, 2, 4, 8});
    CHECK(plane.fitted_exponent == doctest::Approx(2.0).epsilon(0.02));
    CHECK(plane.fitted_exponent <= plane.bound_exponent + 0.05);

    std::vector<double> radii;
    for (double r = 1.0; r <= 32.0; r *= 2.0) radii.push_back(r);
    const auto cyl =
        measured_growth(CanonicalSurface::cylinder(2, 1, 1.0, Orientation::inward), radii);
    CHECK(std::abs(cyl.fitted_exponent - 1.0) <= 0.05);
    CHECK(cyl.fitted_exponent <= cyl.bound_exponent + 0.05);

    const auto sph =
        measured_growth(CanonicalSurface::sphere(2, 1.0, Orientation::inward), {2, 4, 8});
    CHECK(std::abs(sph.fitted_exponent) <= 1e-12);
    CHECK(sph.bound_exponent == doctest::Approx(0.0).epsilon(1e-12));

    CHECK_THROWS_AS(
        measured_growth(CanonicalSurface::sphere(2, 1.0, Orientation::inward), {0.5, 2.0}),
        ValidationError);
}

TEST_CASE("cylinder slab areas: closed form at n - k = 1") {
    const auto s = CanonicalSurface::cylinder(2, 1, 1.0, Orientation::inward);
    // area inside B_r: |S^1| * 2 sqrt(r^2 - 1)
    CHECK(surface_area_in_ball(s, 2.0) ==
          doctest::Approx(2.0 * kPi * 2.0 * std::sqrt(3.0)).epsilon(1e-12));
    CHECK(surface_area_in_ball(s, 1.0) == 0.0);
}

TEST_CASE("certificate input validation") {
    CHECK_THROWS_AS(open_hemisphere_certificate({}, 1e-6), ValidationError);
    CHECK_THROWS_AS(open_hemisphere_certificate({{2.0, 0.0, 0.0}}, 1e-6), ValidationError);
    CHECK_THROWS_AS(half_equator_test({}, 1e-9), ValidationError);
}
