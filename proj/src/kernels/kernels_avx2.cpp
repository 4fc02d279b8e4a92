// AVX2+FMA variants of the inner-loop kernels. Compiled with -mavx2 -mfma;
// only reachable through the dispatch table after a CPUID check.

#include "lambdasurf/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <limits>

namespace lambdasurf::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmin(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_min_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_min_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

inline double hmax(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_max_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

}  // namespace

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i];
    return s;
}

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(ab, _mm256_loadu_pd(c + i), acc);
    }
    double s = hsum(acc);
    for (; i < n; ++i) s += a[i] * b[i] * c[i];
    return s;
}

double max_abs(const double* x, std::size_t n) {
    const __m256d sign_mask = _mm256_set1_pd(-0.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_max_pd(acc, _mm256_andnot_pd(sign_mask, _mm256_loadu_pd(x + i)));
    double m = hmax(acc);
    for (; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

void axpy(double s, const double* x, double* y, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d vy = _mm256_loadu_pd(y + i);
        vy = _mm256_fmadd_pd(vs, _mm256_loadu_pd(x + i), vy);
        _mm256_storeu_pd(y + i, vy);
    }
    for (; i < n; ++i) y[i] += s * x[i];
}

double min_dot_soa(const double* const* coords, std::size_t dim, const double* dir,
                   std::size_t count) {
    __m256d acc = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    std::size_t i = 0;
    for (; i + 4 <= count; i += 4) {
        __m256d d = _mm256_setzero_pd();
        for (std::size_t k = 0; k < dim; ++k)
            d = _mm256_fmadd_pd(_mm256_set1_pd(dir[k]), _mm256_loadu_pd(coords[k] + i), d);
        acc = _mm256_min_pd(acc, d);
    }
    double m = hmin(acc);
    for (; i < count; ++i) {
        double d = 0.0;
        for (std::size_t k = 0; k < dim; ++k) d += dir[k] * coords[k][i];
        m = std::min(m, d);
    }
    return m;
}

void graph_residual_1d(const double* f, const double* x, std::size_t n, double h, double lambda,
                       double* out) {
    const __m256d inv2h = _mm256_set1_pd(1.0 / (2.0 * h));
    const __m256d invh2 = _mm256_set1_pd(1.0 / (h * h));
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d vlam = _mm256_set1_pd(lambda);
    std::size_t i = 1;
    for (; i + 4 <= n - 1; i += 4) {
        const __m256d fm = _mm256_loadu_pd(f + i - 1);
        const __m256d fc = _mm256_loadu_pd(f + i);
        const __m256d fp = _mm256_loadu_pd(f + i + 1);
        const __m256d grad = _mm256_mul_pd(_mm256_sub_pd(fp, fm), inv2h);
        const __m256d hess =
            _mm256_mul_pd(_mm256_sub_pd(_mm256_add_pd(fp, fm), _mm256_mul_pd(two, fc)), invh2);
        const __m256d w2 = _mm256_fmadd_pd(grad, grad, one);
        const __m256d res = _mm256_sub_pd(
            _mm256_add_pd(_mm256_div_pd(hess, w2), fc),
            _mm256_fmadd_pd(_mm256_loadu_pd(x + i), grad,
                            _mm256_mul_pd(vlam, _mm256_sqrt_pd(w2))));
        _mm256_storeu_pd(out + i, res);
    }
    for (; i + 1 < n; ++i) {
        const double grad = (f[i + 1] - f[i - 1]) / (2.0 * h);
        const double hess = (f[i + 1] - 2.0 * f[i] + f[i - 1]) / (h * h);
        const double w2 = 1.0 + grad * grad;
        out[i] = hess / w2 + f[i] - x[i] * grad - lambda * std::sqrt(w2);
    }
}

void graph_residual_2d_row(const double* f, std::size_t nx, const double* xs, double y,
                           std::size_t iy, std::size_t i0, std::size_t i1, double h,
                           double lambda, double* out) {
    const __m256d inv2h = _mm256_set1_pd(1.0 / (2.0 * h));
    const __m256d invh2 = _mm256_set1_pd(1.0 / (h * h));
    const __m256d inv4h2 = _mm256_set1_pd(1.0 / (4.0 * h * h));
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d vy = _mm256_set1_pd(y);
    const __m256d vlam = _mm256_set1_pd(lambda);
    const double* row = f + iy * nx;
    const double* up = row + nx;
    const double* dn = row - nx;
    std::size_t i = i0;
    for (; i + 4 <= i1; i += 4) {
        const __m256d fc = _mm256_loadu_pd(row + i);
        const __m256d fl = _mm256_loadu_pd(row + i - 1);
        const __m256d fr = _mm256_loadu_pd(row + i + 1);
        const __m256d fu = _mm256_loadu_pd(up + i);
        const __m256d fd = _mm256_loadu_pd(dn + i);
        const __m256d ful = _mm256_loadu_pd(up + i - 1);
        const __m256d fur = _mm256_loadu_pd(up + i + 1);
        const __m256d fdl = _mm256_loadu_pd(dn + i - 1);
        const __m256d fdr = _mm256_loadu_pd(dn + i + 1);

        const __m256d fx = _mm256_mul_pd(_mm256_sub_pd(fr, fl), inv2h);
        const __m256d fy = _mm256_mul_pd(_mm256_sub_pd(fu, fd), inv2h);
        const __m256d fxx =
            _mm256_mul_pd(_mm256_sub_pd(_mm256_add_pd(fr, fl), _mm256_mul_pd(two, fc)), invh2);
        const __m256d fyy =
            _mm256_mul_pd(_mm256_sub_pd(_mm256_add_pd(fu, fd), _mm256_mul_pd(two, fc)), invh2);
        const __m256d fxy = _mm256_mul_pd(
            _mm256_sub_pd(_mm256_add_pd(fur, fdl), _mm256_add_pd(ful, fdr)), inv4h2);

        const __m256d w2 = _mm256_fmadd_pd(fy, fy, _mm256_fmadd_pd(fx, fx, one));
        __m256d corr = _mm256_mul_pd(_mm256_mul_pd(fx, fx), fxx);
        corr = _mm256_fmadd_pd(_mm256_mul_pd(two, _mm256_mul_pd(fx, fy)), fxy, corr);
        corr = _mm256_fmadd_pd(_mm256_mul_pd(fy, fy), fyy, corr);
        const __m256d lap = _mm256_sub_pd(_mm256_add_pd(fxx, fyy), _mm256_div_pd(corr, w2));

        __m256d res = _mm256_add_pd(lap, fc);
        res = _mm256_fnmadd_pd(_mm256_loadu_pd(xs + i), fx, res);
        res = _mm256_fnmadd_pd(vy, fy, res);
        res = _mm256_fnmadd_pd(vlam, _mm256_sqrt_pd(w2), res);
        _mm256_storeu_pd(out + i - i0, res);
    }
    if (i < i1) scalar::graph_residual_2d_row(f, nx, xs, y, iy, i, i1, h, lambda, out + (i - i0));
}

}  // namespace lambdasurf::kernels::avx2

#endif  // x86-64
