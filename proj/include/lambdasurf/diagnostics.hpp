#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lambdasurf/canonical.hpp"
#include "lambdasurf/common.hpp"

namespace lambdasurf {

enum class HemisphereVerdict { open, closed_only, neither };

/// Containment certificate for a Gauss image. margin is the rechecked
/// min over samples of <a, N>; the optimizer is never trusted directly.
///
/// closed_only additionally requires the normals to span the boundary
/// hyperplane (rank >= n): a zero-margin certificate over a lower-dimensional
/// normal set (an antipodal pair, say) admits a whole family of bounding
/// hemispheres and carries none of the cylinder rigidity, so it is reported
/// as neither.
struct HemisphereCertificate {
    Vec direction;  // unit vector a
    double margin = 0.0;
    HemisphereVerdict verdict = HemisphereVerdict::neither;
    int normal_rank = 0;
};

const char* verdict_name(HemisphereVerdict v);

/// max over |a| <= 1 of min_i <a, N_i> by projected supergradient ascent
/// with deterministic restarts and pattern-search polish; for ambient
/// dimension <= 3 a Fibonacci direction grid backs the optimizer up.
/// verdict open iff the optimum exceeds tol.
HemisphereCertificate open_hemisphere_certificate(const std::vector<Vec>& normals, double tol);

/// Same optimization; certifies closed containment (margin >= -tol) with the
/// rank rule above deciding closed_only vs neither.
HemisphereCertificate closed_hemisphere_certificate(const std::vector<Vec>& normals, double tol);

struct RegionTestReport {
    std::size_t violations = 0;
    std::vector<std::size_t> witness_indices;
    std::vector<Vec> witnesses;
};

/// Flags normals inside the closed half-equator
///   {x in S^n : x_{n+1} = 0, x_n >= 0}
/// up to tolerance eps: |N_{n+1}| <= eps and N_n >= -eps.
RegionTestReport half_equator_test(const std::vector<Vec>& normals, double eps);

/// n + lambda^2/2 - inf(lambda-H)^2/2 - inf H^2/2, the growth exponent of
/// the weighted-area estimate (beta = inf(lambda-H)^2/4 enters as 2 beta).
double growth_bound_exponent(double lambda, double inf_h_sq, double inf_lambda_minus_h_sq, int n);

struct GrowthReport {
    std::vector<double> radii;
    std::vector<double> areas;
    double fitted_exponent = 0.0;  // log-log slope over the top half of the radii
    double bound_exponent = 0.0;
    std::string infimum_source;    // "closed-form" for canonical surfaces
};

/// Exact areas of the surface inside balls B_r(0) for r in radii (all >= 1,
/// increasing), the fitted log-log slope, and the analytic bound exponent with
/// closed-form infima.
GrowthReport measured_growth(const CanonicalSurface& surface, const std::vector<double>& radii);

/// Area of the surface inside the ball of radius r, closed form.
double surface_area_in_ball(const CanonicalSurface& surface, double r);

/// Best direction over a Fibonacci grid of `count` directions (S^2 only);
/// exposed for the certificate fallback and its tests.
std::pair<Vec, double> grid_search_direction(const std::vector<Vec>& normals, int count);

}  // namespace lambdasurf
