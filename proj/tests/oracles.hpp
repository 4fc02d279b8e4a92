#pragma once

// Independent oracles for the test suite: external eigensolver/inverse,
// high-resolution quadrature, and a lagged-coefficient Picard solver for
// the graphic equation. Nothing here shares code with the library paths
// it checks.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <vector>

#include "lambdasurf/common.hpp"
#include "lambdasurf/small_linalg.hpp"

namespace oracles {

inline Eigen::MatrixXd to_eigen(const lambdasurf::Mat& m) {
    Eigen::MatrixXd e(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) e(i, j) = m(i, j);
    return e;
}

inline lambdasurf::Vec eigenvalues_sym(const lambdasurf::Mat& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(m));
    lambdasurf::Vec out(static_cast<std::size_t>(m.rows));
    for (int i = 0; i < m.rows; ++i) out[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    return out;
}

inline lambdasurf::Mat inverse(const lambdasurf::Mat& m) {
    Eigen::MatrixXd inv = to_eigen(m).inverse();
    lambdasurf::Mat out(m.rows, m.cols);
    for (int i = 0; i < m.rows; ++i)
        for (int j = 0; j < m.cols; ++j) out(i, j) = inv(i, j);
    return out;
}

inline double determinant(const lambdasurf::Mat& m) { return to_eigen(m).determinant(); }

/// Composite Simpson rule on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, int intervals) {
    if (intervals % 2) ++intervals;
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

/// Lagged-coefficient damped Picard iteration for the 1-D graphic equation
///   f''/(1+f'^2) = -f + x f' + lambda sqrt(1+f'^2),  f(+-R) = boundary.
/// Fully independent of the library's Newton path: dense tridiagonal solve
/// with frozen coefficients, under-relaxed.
struct Picard1dResult {
    lambdasurf::Vec xs;
    lambdasurf::Vec f;
    bool converged = false;
    double residual = 0.0;
};

inline Picard1dResult picard_1d(double radius, double h, double lambda,
                                const std::function<double(double)>& boundary,
                                double omega = 0.5, int max_iter = 20000, double tol = 1e-11) {
    const int m = static_cast<int>(std::lround(radius / h));
    const int nn = 2 * m + 1;
    lambdasurf::Vec xs(static_cast<std::size_t>(nn));
    for (int i = 0; i < nn; ++i) xs[static_cast<std::size_t>(i)] = (i - m) * h;
    lambdasurf::Vec f(static_cast<std::size_t>(nn), 0.0);
    f.front() = boundary(xs.front());
    f.back() = boundary(xs.back());

    const int ni = nn - 2;
    Eigen::MatrixXd a(ni, ni);
    Eigen::VectorXd rhs(ni);
    Picard1dResult res;
    res.xs = xs;
    for (int it = 0; it < max_iter; ++it) {
        a.setZero();
        // solve  g11(fp_k) v'' - x fp_k ... with all lower-order terms lagged:
        //   g11 v'' + v - x v' = lambda sqrt(1+fp_k^2) frozen at f_k
        for (int i = 1; i < nn - 1; ++i) {
            const double fp = (f[i + 1] - f[i - 1]) / (2.0 * h);
            const double g11 = 1.0 / (1.0 + fp * fp);
            const int r = i - 1;
            const double x = xs[static_cast<std::size_t>(i)];
            const double cl = g11 / (h * h) + x / (2.0 * h);
            const double cc = -2.0 * g11 / (h * h) + 1.0;
            const double cr = g11 / (h * h) - x / (2.0 * h);
            if (r > 0) a(r, r - 1) = cl;
            a(r, r) = cc;
            if (r < ni - 1) a(r, r + 1) = cr;
            rhs(r) = lambda * std::sqrt(1.0 + fp * fp);
            if (r == 0) rhs(r) -= cl * f.front();
            if (r == ni - 1) rhs(r) -= cr * f.back();
        }
        const Eigen::VectorXd v = a.partialPivLu().solve(rhs);
        double change = 0.0;
        for (int i = 0; i < ni; ++i) {
            const double next = (1.0 - omega) * f[i + 1] + omega * v(i);
            change = std::max(change, std::abs(next - f[i + 1]));
            f[i + 1] = next;
        }
        if (change < tol) {
            res.converged = true;
            break;
        }
    }
    double worst = 0.0;
    for (int i = 1; i < nn - 1; ++i) {
        const double fp = (f[i + 1] - f[i - 1]) / (2.0 * h);
        const double fpp = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
        const double r = fpp / (1.0 + fp * fp) + f[i] - xs[static_cast<std::size_t>(i)] * fp -
                         lambda * std::sqrt(1.0 + fp * fp);
        worst = std::max(worst, std::abs(r));
    }
    res.residual = worst;
    res.f = f;
    return res;
}

}  // namespace oracles
