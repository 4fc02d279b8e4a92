#include <cmath>
#include <limits>

#include "lambdasurf/kernels/kernels.hpp"

namespace lambdasurf::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i] * c[i];
    return s;
}

double max_abs(const double* x, std::size_t n) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

void axpy(double s, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += s * x[i];
}

double min_dot_soa(const double* const* coords, std::size_t dim, const double* dir,
                   std::size_t count) {
    double m = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < count; ++i) {
        double d = 0.0;
        for (std::size_t k = 0; k < dim; ++k) d += dir[k] * coords[k][i];
        m = std::min(m, d);
    }
    return m;
}

void graph_residual_1d(const double* f, const double* x, std::size_t n, double h, double lambda,
                       double* out) {
    const double inv2h = 1.0 / (2.0 * h);
    const double invh2 = 1.0 / (h * h);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double fp = (f[i + 1] - f[i - 1]) * inv2h;
        const double fpp = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * invh2;
        const double w2 = 1.0 + fp * fp;
        out[i] = fpp / w2 + f[i] - x[i] * fp - lambda * std::sqrt(w2);
    }
}

void graph_residual_2d_row(const double* f, std::size_t nx, const double* xs, double y,
                           std::size_t iy, std::size_t i0, std::size_t i1, double h,
                           double lambda, double* out) {
    const double inv2h = 1.0 / (2.0 * h);
    const double invh2 = 1.0 / (h * h);
    const double inv4h2 = 1.0 / (4.0 * h * h);
    const double* row = f + iy * nx;
    const double* up = row + nx;
    const double* dn = row - nx;
    for (std::size_t i = i0; i < i1; ++i) {
        const double fx = (row[i + 1] - row[i - 1]) * inv2h;
        const double fy = (up[i] - dn[i]) * inv2h;
        const double fxx = (row[i + 1] - 2.0 * row[i] + row[i - 1]) * invh2;
        const double fyy = (up[i] - 2.0 * row[i] + dn[i]) * invh2;
        const double fxy = (up[i + 1] - up[i - 1] - dn[i + 1] + dn[i - 1]) * inv4h2;
        const double w2 = 1.0 + fx * fx + fy * fy;
        const double lap = fxx + fyy - (fx * fx * fxx + 2.0 * fx * fy * fxy + fy * fy * fyy) / w2;
        out[i - i0] = lap + row[i] - xs[i] * fx - y * fy - lambda * std::sqrt(w2);
    }
}

}  // namespace lambdasurf::kernels::scalar
