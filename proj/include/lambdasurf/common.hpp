#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace lambdasurf {

using Vec = std::vector<double>;

/// Config or argument outside its contract. CLI maps this to exit code 2.
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A finite-difference stencil would reach outside the defined node set.
struct StencilError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Time step exceeds the explicit-Euler stability bound.
struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Evolving curve stopped being a simple polygon.
struct SelfIntersectionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Degenerate discrete geometry (collapsed edge, zero denominator).
struct DegenerateGeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An operation was invoked on inputs that violate its stated precondition
/// (e.g. an inequality check on a field that does not solve the equation).
struct PreconditionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline double sq(double x) { return x * x; }

inline double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

inline double norm2_sq(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

inline bool all_finite(const Vec& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

}  // namespace lambdasurf
