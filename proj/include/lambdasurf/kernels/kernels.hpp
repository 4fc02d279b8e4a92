#pragma once

#include <cstddef>

namespace lambdasurf::kernels {

// Inner-loop kernels behind the geometry, solver, flow and certificate
// modules. Every kernel has a scalar reference implementation and, on
// x86-64 with AVX2+FMA, a vectorized variant. The active variant is picked
// once at startup from CPUID; LAMBDA_SURF_SIMD=scalar|avx2|auto or
// force_backend() override it. The two variants are equivalence-tested
// against each other; they may differ by reassociation roundoff only.

enum class Backend { scalar, avx2 };

/// Backend the dispatch table currently points at.
Backend active_backend();
const char* backend_name(Backend b);

/// Selects a backend explicitly. Throws ValidationError if the requested
/// backend is not available on this machine.
void force_backend(Backend b);

/// True if the AVX2 variants are compiled in and the CPU supports them.
bool avx2_available();

// -- reductions ------------------------------------------------------------

/// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);

/// sum_i a[i]*b[i]*c[i]
double dot3(const double* a, const double* b, const double* c, std::size_t n);

/// max_i |x[i]|  (0 for n == 0)
double max_abs(const double* x, std::size_t n);

/// y[i] += s*x[i]
void axpy(double s, const double* x, double* y, std::size_t n);

/// min_i sum_d dir[d]*coords[d][i] over a structure-of-arrays point set.
/// dim <= 8. Returns +inf for count == 0.
double min_dot_soa(const double* const* coords, std::size_t dim, const double* dir,
                   std::size_t count);

// -- graphic lambda-equation residual stencils ------------------------------

/// Residual of the graphic equation at 1-D interior nodes i in [1, n-2]:
///   out[i] = f''/(1+f'^2) + f - x f' - lambda*sqrt(1+f'^2)
/// with second-order central differences at spacing h. out[0] and out[n-1]
/// are left untouched.
void graph_residual_1d(const double* f, const double* x, std::size_t n, double h, double lambda,
                       double* out);

/// Residual of the 2-D graphic equation along one grid row iy for
/// ix in [i0, i1). f is the nx-stride flattened field; xs the per-column
/// coordinates; y the row coordinate. All referenced stencil nodes
/// (ix +/- 1, iy +/- 1) must be inside the array. Writes out[ix - i0].
void graph_residual_2d_row(const double* f, std::size_t nx, const double* xs, double y,
                           std::size_t iy, std::size_t i0, std::size_t i1, double h,
                           double lambda, double* out);

// Direct entry points for the equivalence tests.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
double max_abs(const double* x, std::size_t n);
void axpy(double s, const double* x, double* y, std::size_t n);
double min_dot_soa(const double* const* coords, std::size_t dim, const double* dir,
                   std::size_t count);
void graph_residual_1d(const double* f, const double* x, std::size_t n, double h, double lambda,
                       double* out);
void graph_residual_2d_row(const double* f, std::size_t nx, const double* xs, double y,
                           std::size_t iy, std::size_t i0, std::size_t i1, double h,
                           double lambda, double* out);
}  // namespace scalar

namespace avx2 {
// Present only when built on x86-64 with AVX2 support; calling them on a
// machine without AVX2 is undefined. Use avx2_available() first.
double dot(const double* a, const double* b, std::size_t n);
double dot3(const double* a, const double* b, const double* c, std::size_t n);
double max_abs(const double* x, std::size_t n);
void axpy(double s, const double* x, double* y, std::size_t n);
double min_dot_soa(const double* const* coords, std::size_t dim, const double* dir,
                   std::size_t count);
void graph_residual_1d(const double* f, const double* x, std::size_t n, double h, double lambda,
                       double* out);
void graph_residual_2d_row(const double* f, std::size_t nx, const double* xs, double y,
                           std::size_t iy, std::size_t i0, std::size_t i1, double h,
                           double lambda, double* out);
}  // namespace avx2

}  // namespace lambdasurf::kernels
