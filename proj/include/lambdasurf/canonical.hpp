#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "lambdasurf/common.hpp"
#include "lambdasurf/geometry.hpp"

namespace lambdasurf {

/// Orientation of the unit normal for spheres and cylinders. Flipping the
/// normal negates both H and <X,N>, hence negates lambda.
enum class Orientation { inward, outward };

struct PlaneSpec {
    Vec normal;     // unit vector in R^{n+1}
    double offset;  // signed distance of the plane from the origin along normal
};

struct SphereSpec {
    double radius;
    Orientation orient;
};

struct CylinderSpec {
    int k;  // spherical factor dimension, 1 <= k <= n-1
    double radius;
    Orientation orient;
};

/// Exact descriptor of the model lambda-hypersurfaces: hyperplanes, round
/// spheres S^n(r), cylinders S^k(r) x R^{n-k}.
struct CanonicalSurface {
    std::variant<PlaneSpec, SphereSpec, CylinderSpec> kind;
    int ambient_dim;  // n + 1

    int n() const { return ambient_dim - 1; }

    static CanonicalSurface plane(Vec normal, double offset);
    static CanonicalSurface sphere(int n, double radius, Orientation o);
    static CanonicalSurface cylinder(int n, int k, double radius, Orientation o);

    /// Same surface with the opposite normal.
    CanonicalSurface flipped() const;
};

struct SurfaceSample {
    Vec position;
    Vec normal;
    double mean_curvature;
    double support;  // <X, N>
};

/// The constant lambda = <X,N> + H of the surface:
/// plane -> offset; sphere inward -> n/r - r; cylinder inward -> k/r - r;
/// outward orientations negate.
double canonical_lambda(const CanonicalSurface& s);

/// Deterministic quasi-uniform samples; H from the closed forms, the support
/// from the actual inner product of the constructed position and normal.
std::vector<SurfaceSample> sample_surface(const CanonicalSurface& s, int count,
                                          std::uint64_t seed);

/// max over samples of |<X,N> + H - canonical_lambda|.
double verify_canonical(const CanonicalSurface& s, int count, std::uint64_t seed = 12345);

// Closed forms for the upper-hemisphere graph f = sqrt(r^2 - |x|^2), the
// analytic solution used throughout the solver and operator tests. Its
// upward normal is the sphere's outward one, so it solves the graphic
// equation at lambda = r - n/r.
double hemisphere_value(double r, const Vec& x);
GradHess hemisphere_gradhess(double r, const Vec& x);
inline double hemisphere_lambda(double r, int n) { return r - static_cast<double>(n) / r; }

}  // namespace lambdasurf
