#include "lambdasurf/geometry.hpp"

#include <cmath>

#include "lambdasurf/grid.hpp"

namespace lambdasurf {

Mat induced_metric(const Vec& grad) {
    const int n = static_cast<int>(grad.size());
    Mat g = Mat::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) += grad[i] * grad[j];
    return g;
}

Mat inverse_metric(const Vec& grad) {
    const int n = static_cast<int>(grad.size());
    const double w2 = 1.0 + norm2_sq(grad);
    Mat g = Mat::identity(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) -= grad[i] * grad[j] / w2;
    return g;
}

double min_metric_eigenvalue(const Vec& grad) {
    // Spectrum of I + v v^T is {1 (n-1 times), 1 + |v|^2}.
    if (grad.size() >= 2) return 1.0;
    return 1.0 + norm2_sq(grad);
}

Vec unit_normal(const Vec& grad) {
    const double w = std::sqrt(1.0 + norm2_sq(grad));
    Vec n(grad.size() + 1);
    for (std::size_t i = 0; i < grad.size(); ++i) n[i] = -grad[i] / w;
    n.back() = 1.0 / w;
    return n;
}

double mean_curvature(const GradHess& gh) {
    const Mat ginv = inverse_metric(gh.grad);
    const double w = std::sqrt(1.0 + norm2_sq(gh.grad));
    double s = 0.0;
    for (int i = 0; i < ginv.rows; ++i)
        for (int j = 0; j < ginv.cols; ++j) s += ginv(i, j) * gh.hess(i, j);
    return s / w;
}

double support_function(const Vec& x, double f, const Vec& grad) {
    double xdotg = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) xdotg += x[i] * grad[i];
    return (f - xdotg) / std::sqrt(1.0 + norm2_sq(grad));
}

double lambda_residual(const Vec& x, double f, const GradHess& gh, double lambda) {
    return support_function(x, f, gh.grad) + mean_curvature(gh) - lambda;
}

PointGeometry point_geometry(const Vec& x, double f, const GradHess& gh) {
    PointGeometry p;
    p.x = x;
    p.f = f;
    p.grad_hess = gh;
    p.metric = induced_metric(gh.grad);
    p.inv_metric = inverse_metric(gh.grad);
    p.normal = unit_normal(gh.grad);
    p.mean_curvature = mean_curvature(gh);
    p.support = support_function(x, f, gh.grad);
    p.psi = std::log1p(norm2_sq(gh.grad));
    return p;
}

GradHess finite_difference_gradhess(const ScalarField& field, std::size_t flat_index) {
    const GridDomain& d = field.domain;
    const int ix = static_cast<int>(flat_index % d.dims[0]);
    const int iy = static_cast<int>(flat_index / d.dims[0]);
    if (d.classify(ix, iy) != NodeClass::interior)
        throw StencilError("finite_difference_gradhess: node has no full interior stencil");

    const double h = d.h;
    const Vec& f = field.values;
    GradHess gh;
    gh.grad.resize(static_cast<std::size_t>(d.n));
    gh.hess = Mat(d.n, d.n);

    const auto at = [&](int dx, int dy) { return f[d.flat(ix + dx, iy + dy)]; };
    const double fc = at(0, 0);

    gh.grad[0] = (at(1, 0) - at(-1, 0)) / (2.0 * h);
    gh.hess(0, 0) = (at(1, 0) - 2.0 * fc + at(-1, 0)) / (h * h);
    if (d.n == 2) {
        gh.grad[1] = (at(0, 1) - at(0, -1)) / (2.0 * h);
        gh.hess(1, 1) = (at(0, 1) - 2.0 * fc + at(0, -1)) / (h * h);
        // The central cross stencil is already symmetric in (i, j); writing
        // it to both slots is the symmetrized average.
        const double fxy = (at(1, 1) - at(1, -1) - at(-1, 1) + at(-1, -1)) / (4.0 * h * h);
        gh.hess(0, 1) = fxy;
        gh.hess(1, 0) = fxy;
    }
    return gh;
}

}  // namespace lambdasurf
