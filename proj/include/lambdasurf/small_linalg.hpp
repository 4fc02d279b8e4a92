#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>

#include "lambdasurf/common.hpp"

namespace lambdasurf {

/// Dense row-major matrix for the small (n <= 6) per-point objects:
/// metrics, Hessians, coefficient matrices. Not intended for large systems.
struct Mat {
    int rows = 0;
    int cols = 0;
    Vec a;

    Mat() = default;
    Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}

    static Mat identity(int n) {
        Mat m(n, n);
        for (int i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }

    bool square() const { return rows == cols; }
};

inline Mat operator*(const Mat& x, const Mat& y) {
    Mat r(x.rows, y.cols);
    for (int i = 0; i < x.rows; ++i)
        for (int k = 0; k < x.cols; ++k) {
            const double xik = x(i, k);
            for (int j = 0; j < y.cols; ++j) r(i, j) += xik * y(k, j);
        }
    return r;
}

inline Vec operator*(const Mat& m, const Vec& v) {
    Vec r(static_cast<std::size_t>(m.rows), 0.0);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) r[i] += m(i, j) * v[j];
    return r;
}

inline double quad_form(const Mat& m, const Vec& u, const Vec& v) {
    double s = 0.0;
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) s += u[i] * m(i, j) * v[j];
    return s;
}

inline double trace(const Mat& m) {
    double s = 0.0;
    for (int i = 0; i < m.rows; ++i) s += m(i, i);
    return s;
}

inline double max_abs_diff(const Mat& x, const Mat& y) {
    double d = 0.0;
    for (std::size_t i = 0; i < x.a.size(); ++i) d = std::max(d, std::abs(x.a[i] - y.a[i]));
    return d;
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations,
/// ascending order. Used for the metric rank/eigenvalue reports; test
/// oracles use an external eigensolver instead.
inline Vec symmetric_eigenvalues(Mat m, int sweeps = 64) {
    const int n = m.rows;
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += sq(m(p, q));
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                const double apq = m(p, q);
                if (std::abs(apq) < 1e-300) continue;
                const double theta = (m(q, q) - m(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double mkp = m(k, p), mkq = m(k, q);
                    m(k, p) = c * mkp - s * mkq;
                    m(k, q) = s * mkp + c * mkq;
                }
                for (int k = 0; k < n; ++k) {
                    const double mpk = m(p, k), mqk = m(q, k);
                    m(p, k) = c * mpk - s * mqk;
                    m(q, k) = s * mpk + c * mqk;
                }
            }
    }
    Vec ev(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) ev[i] = m(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

/// Rank of a set of row vectors via the Gram matrix spectrum.
inline int numerical_rank(const std::vector<Vec>& rows, double rel_tol = 1e-8) {
    if (rows.empty()) return 0;
    const int d = static_cast<int>(rows.front().size());
    Mat gram(d, d);
    for (const Vec& r : rows)
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) gram(i, j) += r[i] * r[j];
    Vec ev = symmetric_eigenvalues(gram);
    const double top = std::max(ev.back(), 0.0);
    if (top <= 0.0) return 0;
    int rank = 0;
    for (double e : ev)
        if (e > rel_tol * top) ++rank;
    return rank;
}

/// Least-squares slope and intercept of y against x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
};

inline LineFit fit_line(const Vec& x, const Vec& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    LineFit f;
    f.slope = (n * sxy - sx * sy) / denom;
    f.intercept = (sy - f.slope * sx) / n;
    return f;
}

}  // namespace lambdasurf
