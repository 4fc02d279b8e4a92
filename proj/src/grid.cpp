#include "lambdasurf/grid.hpp"

#include <cmath>

namespace lambdasurf {

namespace {

int snapped_steps(double span, double h) {
    const int steps = static_cast<int>(std::lround(span / h));
    if (steps < 1) throw ValidationError("grid extent shorter than one spacing");
    return steps;
}

}  // namespace

GridDomain GridDomain::box1d(double lo, double hi, double h) {
    if (!(h > 0.0) || !(hi > lo)) throw ValidationError("box1d: need h > 0 and hi > lo");
    GridDomain d;
    d.n = 1;
    d.shape = DomainShape::box;
    d.h = h;
    d.lo = {lo, 0.0};
    const int steps = snapped_steps(hi - lo, h);
    d.hi = {lo + steps * h, 0.0};
    d.dims = {steps + 1, 1};
    if (d.dims[0] < 10) throw ValidationError("box1d: fewer than 8 interior nodes");
    return d;
}

GridDomain GridDomain::box2d(std::array<double, 2> lo, std::array<double, 2> hi, double h) {
    if (!(h > 0.0) || !(hi[0] > lo[0]) || !(hi[1] > lo[1]))
        throw ValidationError("box2d: need h > 0 and hi > lo per axis");
    GridDomain d;
    d.n = 2;
    d.shape = DomainShape::box;
    d.h = h;
    d.lo = lo;
    const int sx = snapped_steps(hi[0] - lo[0], h);
    const int sy = snapped_steps(hi[1] - lo[1], h);
    d.hi = {lo[0] + sx * h, lo[1] + sy * h};
    d.dims = {sx + 1, sy + 1};
    if (d.dims[0] < 10 || d.dims[1] < 10) throw ValidationError("box2d: fewer than 8 interior nodes per axis");
    return d;
}

GridDomain GridDomain::ball(int n, double radius, double h) {
    if (n != 1 && n != 2) throw ValidationError("ball domains support n = 1 or 2");
    if (!(h > 0.0) || !(radius > 0.0)) throw ValidationError("ball: need h > 0 and radius > 0");
    GridDomain d;
    d.n = n;
    d.shape = DomainShape::ball;
    d.h = h;
    const int m = static_cast<int>(std::lround(radius / h));
    if (m < 5) throw ValidationError("ball: fewer than 8 interior nodes per axis");
    d.radius = m * h;
    d.lo = {-d.radius, n == 2 ? -d.radius : 0.0};
    d.hi = {d.radius, n == 2 ? d.radius : 0.0};
    d.dims = {2 * m + 1, n == 2 ? 2 * m + 1 : 1};
    return d;
}

Vec GridDomain::coords(std::size_t flat_index) const {
    const int ix = static_cast<int>(flat_index % dims[0]);
    const int iy = static_cast<int>(flat_index / dims[0]);
    Vec x(static_cast<std::size_t>(n));
    x[0] = coord_x(ix);
    if (n == 2) x[1] = coord_y(iy);
    return x;
}

bool GridDomain::in_domain(int ix, int iy) const {
    if (ix < 0 || ix >= dims[0] || iy < 0 || iy >= dims[1]) return false;
    if (shape == DomainShape::box) return true;
    const double x = coord_x(ix);
    const double y = n == 2 ? coord_y(iy) : 0.0;
    return x * x + y * y <= radius * radius * (1.0 + 1e-12) + 1e-300;
}

NodeClass GridDomain::classify(int ix, int iy) const {
    if (!in_domain(ix, iy)) return NodeClass::exterior;
    // Full 3x3 neighbourhood (mixed-partial stencil) must stay in-domain.
    for (int dy = (n == 2 ? -1 : 0); dy <= (n == 2 ? 1 : 0); ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            if (!in_domain(ix + dx, iy + dy)) return NodeClass::boundary;
    return NodeClass::interior;
}

NodeClass GridDomain::classify_flat(std::size_t flat_index) const {
    return classify(static_cast<int>(flat_index % dims[0]),
                    static_cast<int>(flat_index / dims[0]));
}

bool GridDomain::is_deep_interior(int ix, int iy, int margin) const {
    for (int dy = (n == 2 ? -margin : 0); dy <= (n == 2 ? margin : 0); ++dy)
        for (int dx = -margin; dx <= margin; ++dx)
            if (classify(ix + dx, iy + dy) != NodeClass::interior) return false;
    return true;
}

std::vector<std::size_t> GridDomain::interior_nodes() const {
    std::vector<std::size_t> out;
    for (int iy = 0; iy < dims[1]; ++iy)
        for (int ix = 0; ix < dims[0]; ++ix)
            if (classify(ix, iy) == NodeClass::interior) out.push_back(flat(ix, iy));
    return out;
}

std::vector<std::size_t> GridDomain::boundary_nodes() const {
    std::vector<std::size_t> out;
    for (int iy = 0; iy < dims[1]; ++iy)
        for (int ix = 0; ix < dims[0]; ++ix)
            if (classify(ix, iy) == NodeClass::boundary) out.push_back(flat(ix, iy));
    return out;
}

std::vector<std::size_t> GridDomain::deep_interior_nodes(int margin) const {
    std::vector<std::size_t> out;
    for (int iy = 0; iy < dims[1]; ++iy)
        for (int ix = 0; ix < dims[0]; ++ix)
            if (is_deep_interior(ix, iy, margin)) out.push_back(flat(ix, iy));
    return out;
}

ScalarField ScalarField::sample(const GridDomain& d, const std::function<double(const Vec&)>& fn) {
    ScalarField f(d);
    for (std::size_t i = 0; i < f.values.size(); ++i) f.values[i] = fn(d.coords(i));
    return f;
}

std::vector<Mat> finite_difference_third(const ScalarField& field, std::size_t flat_index) {
    const GridDomain& d = field.domain;
    const int ix = static_cast<int>(flat_index % d.dims[0]);
    const int iy = static_cast<int>(flat_index / d.dims[0]);
    if (!d.is_deep_interior(ix, iy, 2))
        throw StencilError("third derivatives need a 2-cell interior margin");
    std::vector<Mat> t;
    t.reserve(static_cast<std::size_t>(d.n));
    for (int p = 0; p < d.n; ++p) {
        const int dx = p == 0 ? 1 : 0;
        const int dy = p == 1 ? 1 : 0;
        const GradHess plus = finite_difference_gradhess(field, d.flat(ix + dx, iy + dy));
        const GradHess minus = finite_difference_gradhess(field, d.flat(ix - dx, iy - dy));
        Mat m(d.n, d.n);
        for (int a = 0; a < d.n; ++a)
            for (int b = 0; b < d.n; ++b)
                m(a, b) = (plus.hess(a, b) - minus.hess(a, b)) / (2.0 * d.h);
        t.push_back(std::move(m));
    }
    return t;
}

}  // namespace lambdasurf
