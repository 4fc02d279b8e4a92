#include "lambdasurf/canonical.hpp"

#include <cmath>

#include "lambdasurf/rng.hpp"

namespace lambdasurf {

CanonicalSurface CanonicalSurface::plane(Vec normal, double offset) {
    const double len = norm2(normal);
    if (!(len > 0.0) || !all_finite(normal))
        throw ValidationError("plane: normal must be finite and nonzero");
    for (auto& c : normal) c /= len;
    CanonicalSurface s;
    s.ambient_dim = static_cast<int>(normal.size());
    if (s.ambient_dim < 2) throw ValidationError("plane: ambient dimension must be >= 2");
    s.kind = PlaneSpec{std::move(normal), offset};
    return s;
}

CanonicalSurface CanonicalSurface::sphere(int n, double radius, Orientation o) {
    if (n < 1) throw ValidationError("sphere: n must be >= 1");
    if (!(radius > 0.0)) throw ValidationError("sphere: radius must be positive");
    CanonicalSurface s;
    s.ambient_dim = n + 1;
    s.kind = SphereSpec{radius, o};
    return s;
}

CanonicalSurface CanonicalSurface::cylinder(int n, int k, double radius, Orientation o) {
    if (n < 2) throw ValidationError("cylinder: n must be >= 2");
    if (k < 1 || k > n - 1) throw ValidationError("cylinder: need 1 <= k <= n-1");
    if (!(radius > 0.0)) throw ValidationError("cylinder: radius must be positive");
    CanonicalSurface s;
    s.ambient_dim = n + 1;
    s.kind = CylinderSpec{k, radius, o};
    return s;
}

CanonicalSurface CanonicalSurface::flipped() const {
    CanonicalSurface s = *this;
    if (auto* p = std::get_if<PlaneSpec>(&s.kind)) {
        for (auto& c : p->normal) c = -c;
        p->offset = -p->offset;
    } else if (auto* sp = std::get_if<SphereSpec>(&s.kind)) {
        sp->orient = sp->orient == Orientation::inward ? Orientation::outward : Orientation::inward;
    } else {
        auto& cy = std::get<CylinderSpec>(s.kind);
        cy.orient = cy.orient == Orientation::inward ? Orientation::outward : Orientation::inward;
    }
    return s;
}

double canonical_lambda(const CanonicalSurface& s) {
    const int n = s.n();
    if (const auto* p = std::get_if<PlaneSpec>(&s.kind)) return p->offset;
    if (const auto* sp = std::get_if<SphereSpec>(&s.kind)) {
        const double lam = n / sp->radius - sp->radius;
        return sp->orient == Orientation::inward ? lam : -lam;
    }
    const auto& cy = std::get<CylinderSpec>(s.kind);
    const double lam = cy.k / cy.radius - cy.radius;
    return cy.orient == Orientation::inward ? lam : -lam;
}

namespace {

double vec_dot(const Vec& a, const Vec& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Gram-Schmidt completion of a unit vector to a basis of its orthogonal
// complement; used to spread plane samples.
std::vector<Vec> orthogonal_complement(const Vec& a) {
    const int d = static_cast<int>(a.size());
    std::vector<Vec> basis;
    basis.push_back(a);
    for (int e = 0; e < d && static_cast<int>(basis.size()) < d; ++e) {
        Vec v(static_cast<std::size_t>(d), 0.0);
        v[static_cast<std::size_t>(e)] = 1.0;
        for (const Vec& b : basis) {
            double proj = 0.0;
            for (int i = 0; i < d; ++i) proj += v[i] * b[i];
            for (int i = 0; i < d; ++i) v[i] -= proj * b[i];
        }
        const double len = norm2(v);
        if (len > 1e-8) {
            for (auto& c : v) c /= len;
            basis.push_back(std::move(v));
        }
    }
    basis.erase(basis.begin());
    return basis;
}

}  // namespace

std::vector<SurfaceSample> sample_surface(const CanonicalSurface& s, int count,
                                          std::uint64_t seed) {
    if (count < 1) throw ValidationError("sample_surface: count must be >= 1");
    const int n = s.n();
    Rng rng(seed);
    std::vector<SurfaceSample> out;
    out.reserve(static_cast<std::size_t>(count));

    if (const auto* p = std::get_if<PlaneSpec>(&s.kind)) {
        const auto basis = orthogonal_complement(p->normal);
        for (int c = 0; c < count; ++c) {
            SurfaceSample smp;
            smp.position.assign(p->normal.begin(), p->normal.end());
            for (auto& v : smp.position) v *= p->offset;
            for (const Vec& b : basis) {
                const double t = rng.uniform(-2.0, 2.0);
                for (std::size_t i = 0; i < smp.position.size(); ++i) smp.position[i] += t * b[i];
            }
            smp.normal = p->normal;
            smp.mean_curvature = 0.0;
            smp.support = vec_dot(smp.position, smp.normal);
            out.push_back(std::move(smp));
        }
        return out;
    }

    if (const auto* sp = std::get_if<SphereSpec>(&s.kind)) {
        const double sign = sp->orient == Orientation::inward ? -1.0 : 1.0;
        for (int c = 0; c < count; ++c) {
            const Vec u = rng.unit_vector(n + 1);
            SurfaceSample smp;
            smp.position = u;
            for (auto& v : smp.position) v *= sp->radius;
            smp.normal = u;
            for (auto& v : smp.normal) v *= sign;
            smp.mean_curvature = -sign * n / sp->radius;
            smp.support = vec_dot(smp.position, smp.normal);
            out.push_back(std::move(smp));
        }
        return out;
    }

    const auto& cy = std::get<CylinderSpec>(s.kind);
    const double sign = cy.orient == Orientation::inward ? -1.0 : 1.0;
    for (int c = 0; c < count; ++c) {
        const Vec u = rng.unit_vector(cy.k + 1);
        SurfaceSample smp;
        smp.position.assign(static_cast<std::size_t>(n + 1), 0.0);
        smp.normal.assign(static_cast<std::size_t>(n + 1), 0.0);
        for (int i = 0; i <= cy.k; ++i) {
            smp.position[static_cast<std::size_t>(i)] = cy.radius * u[static_cast<std::size_t>(i)];
            smp.normal[static_cast<std::size_t>(i)] = sign * u[static_cast<std::size_t>(i)];
        }
        for (int i = cy.k + 1; i <= n; ++i)
            smp.position[static_cast<std::size_t>(i)] = rng.uniform(-2.0, 2.0);
        smp.mean_curvature = -sign * cy.k / cy.radius;
        smp.support = vec_dot(smp.position, smp.normal);
        out.push_back(std::move(smp));
    }
    return out;
}

double verify_canonical(const CanonicalSurface& s, int count, std::uint64_t seed) {
    const double lam = canonical_lambda(s);
    double worst = 0.0;
    for (const SurfaceSample& smp : sample_surface(s, count, seed))
        worst = std::max(worst, std::abs(smp.support + smp.mean_curvature - lam));
    return worst;
}

double hemisphere_value(double r, const Vec& x) {
    const double s = r * r - norm2_sq(x);
    if (!(s > 0.0)) throw ValidationError("hemisphere_value: point outside open ball of radius r");
    return std::sqrt(s);
}

GradHess hemisphere_gradhess(double r, const Vec& x) {
    const double f = hemisphere_value(r, x);
    const int n = static_cast<int>(x.size());
    GradHess gh;
    gh.grad.resize(static_cast<std::size_t>(n));
    gh.hess = Mat(n, n);
    for (int i = 0; i < n; ++i) gh.grad[static_cast<std::size_t>(i)] = -x[static_cast<std::size_t>(i)] / f;
    // f_ij = -delta_ij/f - x_i x_j / f^3
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            gh.hess(i, j) = -(i == j ? 1.0 / f : 0.0) -
                            x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)] / (f * f * f);
    return gh;
}

}  // namespace lambdasurf
