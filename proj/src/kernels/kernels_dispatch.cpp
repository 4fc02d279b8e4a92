#include <cstdlib>
#include <cstring>

#include "lambdasurf/common.hpp"
#include "lambdasurf/kernels/kernels.hpp"

namespace lambdasurf::kernels {

namespace {

struct Table {
    Backend backend;
    double (*dot)(const double*, const double*, std::size_t);
    double (*dot3)(const double*, const double*, const double*, std::size_t);
    double (*max_abs)(const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    double (*min_dot_soa)(const double* const*, std::size_t, const double*, std::size_t);
    void (*graph_residual_1d)(const double*, const double*, std::size_t, double, double, double*);
    void (*graph_residual_2d_row)(const double*, std::size_t, const double*, double, std::size_t,
                                  std::size_t, std::size_t, double, double, double*);
};

constexpr Table kScalarTable = {Backend::scalar,
                                scalar::dot,
                                scalar::dot3,
                                scalar::max_abs,
                                scalar::axpy,
                                scalar::min_dot_soa,
                                scalar::graph_residual_1d,
                                scalar::graph_residual_2d_row};

#if defined(LAMBDASURF_WITH_AVX2)
constexpr Table kAvx2Table = {Backend::avx2,
                              avx2::dot,
                              avx2::dot3,
                              avx2::max_abs,
                              avx2::axpy,
                              avx2::min_dot_soa,
                              avx2::graph_residual_1d,
                              avx2::graph_residual_2d_row};
#endif

bool cpu_has_avx2() {
#if defined(LAMBDASURF_WITH_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Table* initial_table() {
    Backend want = cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
    if (const char* env = std::getenv("LAMBDA_SURF_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) want = Backend::scalar;
        else if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2()) want = Backend::avx2;
        // "auto" or anything else keeps the CPUID choice
    }
#if defined(LAMBDASURF_WITH_AVX2)
    if (want == Backend::avx2) return &kAvx2Table;
#endif
    return &kScalarTable;
}

const Table* g_table = initial_table();

}  // namespace

Backend active_backend() { return g_table->backend; }

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(LAMBDASURF_WITH_AVX2)
    return cpu_has_avx2();
#else
    return false;
#endif
}

void force_backend(Backend b) {
    if (b == Backend::scalar) {
        g_table = &kScalarTable;
        return;
    }
#if defined(LAMBDASURF_WITH_AVX2)
    if (cpu_has_avx2()) {
        g_table = &kAvx2Table;
        return;
    }
#endif
    throw ValidationError("avx2 kernel backend not available on this machine");
}

double dot(const double* a, const double* b, std::size_t n) { return g_table->dot(a, b, n); }

double dot3(const double* a, const double* b, const double* c, std::size_t n) {
    return g_table->dot3(a, b, c, n);
}

double max_abs(const double* x, std::size_t n) { return g_table->max_abs(x, n); }

void axpy(double s, const double* x, double* y, std::size_t n) { g_table->axpy(s, x, y, n); }

double min_dot_soa(const double* const* coords, std::size_t dim, const double* dir,
                   std::size_t count) {
    return g_table->min_dot_soa(coords, dim, dir, count);
}

void graph_residual_1d(const double* f, const double* x, std::size_t n, double h, double lambda,
                       double* out) {
    g_table->graph_residual_1d(f, x, n, h, lambda, out);
}

void graph_residual_2d_row(const double* f, std::size_t nx, const double* xs, double y,
                           std::size_t iy, std::size_t i0, std::size_t i1, double h,
                           double lambda, double* out) {
    g_table->graph_residual_2d_row(f, nx, xs, y, iy, i0, i1, h, lambda, out);
}

}  // namespace lambdasurf::kernels
