#include "lambdasurf/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "lambdasurf/kernels/kernels.hpp"
#include "lambdasurf/small_linalg.hpp"

namespace lambdasurf {

namespace {

/// Structure-of-arrays view of the normals for the min-dot kernel.
struct NormalSoa {
    std::vector<Vec> coords;
    std::vector<const double*> ptrs;
    std::size_t dim = 0;
    std::size_t count = 0;

    explicit NormalSoa(const std::vector<Vec>& normals) {
        count = normals.size();
        dim = normals.empty() ? 0 : normals.front().size();
        coords.assign(dim, Vec(count));
        for (std::size_t i = 0; i < count; ++i)
            for (std::size_t d = 0; d < dim; ++d) coords[d][i] = normals[i][d];
        ptrs.reserve(dim);
        for (auto& c : coords) ptrs.push_back(c.data());
    }

    double min_dot(const Vec& dir) const {
        return kernels::min_dot_soa(ptrs.data(), dim, dir.data(), count);
    }
};

Vec normalized(Vec v) {
    const double n = norm2(v);
    if (n > 0.0)
        for (auto& x : v) x /= n;
    return v;
}

/// Deterministic pattern-search polish on the sphere: rotate the candidate
/// toward each tangent direction with a shrinking angular step.
void polish_direction(const NormalSoa& soa, Vec& a, double& best) {
    const std::size_t d = a.size();
    double theta = 0.1;
    while (theta > 1e-7) {
        bool improved = false;
        for (std::size_t e = 0; e < d; ++e) {
            for (double sign : {1.0, -1.0}) {
                Vec cand = a;
                cand[e] += sign * theta;
                cand = normalized(cand);
                const double f = soa.min_dot(cand);
                if (f > best) {
                    best = f;
                    a = cand;
                    improved = true;
                }
            }
        }
        if (!improved) theta *= 0.5;
    }
}

HemisphereCertificate solve_maximin(const std::vector<Vec>& normals, double tol) {
    if (normals.empty()) throw ValidationError("hemisphere certificate: empty normal list");
    const std::size_t dim = normals.front().size();
    for (const Vec& n : normals) {
        if (n.size() != dim) throw ValidationError("hemisphere certificate: mixed dimensions");
        if (std::abs(norm2(n) - 1.0) > 1e-9)
            throw ValidationError("hemisphere certificate: normals must be unit vectors");
    }
    const NormalSoa soa(normals);

    // restart points: mean normal, +/- coordinate axes, fixed pseudo-random mix
    std::vector<Vec> starts;
    Vec mean(dim, 0.0);
    for (const Vec& n : normals)
        for (std::size_t d = 0; d < dim; ++d) mean[d] += n[d];
    if (norm2(mean) > 1e-12) starts.push_back(normalized(mean));
    for (std::size_t e = 0; e < dim; ++e) {
        Vec v(dim, 0.0);
        v[e] = 1.0;
        starts.push_back(v);
        v[e] = -1.0;
        starts.push_back(v);
    }
    for (std::size_t k = 0; k < 4; ++k) {
        Vec v(dim, 0.0);
        for (std::size_t d = 0; d < dim; ++d)
            v[d] = std::cos(2.399963 * static_cast<double>(k * dim + d + 1));
        starts.push_back(normalized(v));
    }

    // The ball relaxation |a| <= 1 degenerates when no hemisphere exists
    // (shrinking a drives min<a, N> to 0 from below), so candidates are
    // always scored on their unit-sphere representative.
    Vec best_dir = starts.front();
    double best = -2.0;
    for (const Vec& start : starts) {
        Vec a = start;
        double local_best = soa.min_dot(a);
        Vec local_dir = a;
        for (int it = 1; it <= 400; ++it) {
            // supergradient: the worst normal
            double worst = std::numeric_limits<double>::infinity();
            std::size_t worst_i = 0;
            for (std::size_t i = 0; i < normals.size(); ++i) {
                double dd = 0.0;
                for (std::size_t d = 0; d < dim; ++d) dd += a[d] * normals[i][d];
                if (dd < worst) {
                    worst = dd;
                    worst_i = i;
                }
            }
            const double eta = 0.5 / std::sqrt(static_cast<double>(it));
            for (std::size_t d = 0; d < dim; ++d) a[d] += eta * normals[worst_i][d];
            if (norm2(a) > 1.0) a = normalized(a);
            if (norm2(a) < 1e-9) continue;
            const Vec unit = normalized(a);
            const double f = soa.min_dot(unit);
            if (f > local_best) {
                local_best = f;
                local_dir = unit;
            }
        }
        if (local_best > best) {
            best = local_best;
            best_dir = local_dir;
        }
    }

    if (dim <= 3) {
        auto [grid_dir, grid_val] = grid_search_direction(normals, 10000);
        if (grid_val > best) {
            best = grid_val;
            best_dir = grid_dir;
        }
    }

    best_dir = normalized(best_dir);
    best = soa.min_dot(best_dir);
    polish_direction(soa, best_dir, best);

    // soundness recheck, no optimizer trust
    double margin = std::numeric_limits<double>::infinity();
    for (const Vec& n : normals) {
        double dd = 0.0;
        for (std::size_t d = 0; d < dim; ++d) dd += best_dir[d] * n[d];
        margin = std::min(margin, dd);
    }

    HemisphereCertificate cert;
    cert.direction = best_dir;
    cert.margin = margin;
    cert.normal_rank = numerical_rank(normals);
    if (margin > tol)
        cert.verdict = HemisphereVerdict::open;
    else if (margin >= -tol && cert.normal_rank >= static_cast<int>(dim) - 1)
        cert.verdict = HemisphereVerdict::closed_only;
    else
        cert.verdict = HemisphereVerdict::neither;
    return cert;
}

}  // namespace

const char* verdict_name(HemisphereVerdict v) {
    switch (v) {
        case HemisphereVerdict::open: return "open";
        case HemisphereVerdict::closed_only: return "closed_only";
        default: return "neither";
    }
}

std::pair<Vec, double> grid_search_direction(const std::vector<Vec>& normals, int count) {
    const std::size_t dim = normals.front().size();
    const NormalSoa soa(normals);
    Vec best_dir;
    double best = -std::numeric_limits<double>::infinity();
    if (dim == 2) {
        for (int k = 0; k < count; ++k) {
            const double th = 2.0 * std::numbers::pi * k / count;
            Vec a{std::cos(th), std::sin(th)};
            const double f = soa.min_dot(a);
            if (f > best) {
                best = f;
                best_dir = a;
            }
        }
        return {best_dir, best};
    }
    // Fibonacci sphere
    const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / count;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double th = golden * k;
        Vec a{r * std::cos(th), r * std::sin(th), z};
        const double f = soa.min_dot(a);
        if (f > best) {
            best = f;
            best_dir = a;
        }
    }
    return {best_dir, best};
}

HemisphereCertificate open_hemisphere_certificate(const std::vector<Vec>& normals, double tol) {
    return solve_maximin(normals, tol);
}

HemisphereCertificate closed_hemisphere_certificate(const std::vector<Vec>& normals, double tol) {
    return solve_maximin(normals, tol);
}

RegionTestReport half_equator_test(const std::vector<Vec>& normals, double eps) {
    if (normals.empty()) throw ValidationError("half_equator_test: empty normal list");
    const std::size_t dim = normals.front().size();
    if (dim < 2) throw ValidationError("half_equator_test: ambient dimension must be >= 2");
    RegionTestReport rep;
    for (std::size_t i = 0; i < normals.size(); ++i) {
        const Vec& n = normals[i];
        const double last = n[dim - 1];
        const double second = n[dim - 2];
        if (std::abs(last) <= eps && second >= -eps) {
            ++rep.violations;
            rep.witness_indices.push_back(i);
            rep.witnesses.push_back(n);
        }
    }
    return rep;
}

double growth_bound_exponent(double lambda, double inf_h_sq, double inf_lambda_minus_h_sq, int n) {
    return static_cast<double>(n) + 0.5 * lambda * lambda - 0.5 * inf_lambda_minus_h_sq -
           0.5 * inf_h_sq;
}

namespace {

double unit_ball_volume(int m) {
    if (m == 0) return 1.0;
    return std::pow(std::numbers::pi, m / 2.0) / std::tgamma(m / 2.0 + 1.0);
}

double unit_sphere_area(int m) {
    // |S^m|, the m-sphere in R^{m+1}
    return 2.0 * std::pow(std::numbers::pi, (m + 1) / 2.0) / std::tgamma((m + 1) / 2.0);
}

}  // namespace

double surface_area_in_ball(const CanonicalSurface& surface, double r) {
    const int n = surface.n();
    if (const auto* p = std::get_if<PlaneSpec>(&surface.kind)) {
        const double d2 = p->offset * p->offset;
        if (r * r <= d2) return 0.0;
        return unit_ball_volume(n) * std::pow(r * r - d2, n / 2.0);
    }
    if (const auto* sp = std::get_if<SphereSpec>(&surface.kind)) {
        if (r >= sp->radius) return unit_sphere_area(n) * std::pow(sp->radius, n);
        return 0.0;
    }
    const auto& cy = std::get<CylinderSpec>(surface.kind);
    if (r * r <= cy.radius * cy.radius) return 0.0;
    const int flat = n - cy.k;
    const double cross = unit_sphere_area(cy.k) * std::pow(cy.radius, cy.k);
    return cross * unit_ball_volume(flat) *
           std::pow(r * r - cy.radius * cy.radius, flat / 2.0);
}

GrowthReport measured_growth(const CanonicalSurface& surface, const std::vector<double>& radii) {
    if (radii.size() < 2) throw ValidationError("measured_growth: need at least two radii");
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (radii[i] < 1.0) throw ValidationError("measured_growth: radii must be >= 1");
        if (i > 0 && !(radii[i] > radii[i - 1]))
            throw ValidationError("measured_growth: radii must increase");
    }

    GrowthReport rep;
    rep.radii = radii;
    rep.areas.reserve(radii.size());
    for (double r : radii) rep.areas.push_back(surface_area_in_ball(surface, r));

    // log-log slope over the top half of the radii
    const std::size_t start = radii.size() / 2;
    Vec lx, ly;
    for (std::size_t i = start; i < radii.size(); ++i) {
        if (!(rep.areas[i] > 0.0))
            throw ValidationError("measured_growth: zero area in the fit window");
        lx.push_back(std::log(radii[i]));
        ly.push_back(std::log(rep.areas[i]));
    }
    if (lx.size() < 2) {
        lx.insert(lx.begin(), std::log(radii[start - 1]));
        ly.insert(ly.begin(), std::log(rep.areas[start - 1]));
    }
    rep.fitted_exponent = fit_line(lx, ly).slope;

    const int n = surface.n();
    const double lam = canonical_lambda(surface);
    double inf_h_sq = 0.0, inf_lmh_sq = 0.0;
    if (std::holds_alternative<PlaneSpec>(surface.kind)) {
        inf_h_sq = 0.0;
        inf_lmh_sq = lam * lam;  // H = 0 everywhere
    } else if (const auto* sp = std::get_if<SphereSpec>(&surface.kind)) {
        const double h = static_cast<double>(n) / sp->radius;
        inf_h_sq = h * h;
        inf_lmh_sq = sq(sp->radius);  // |lambda - H| = r for either orientation
    } else {
        const auto& cy = std::get<CylinderSpec>(surface.kind);
        const double h = static_cast<double>(cy.k) / cy.radius;
        inf_h_sq = h * h;
        inf_lmh_sq = sq(cy.radius);
    }
    rep.bound_exponent = growth_bound_exponent(lam, inf_h_sq, inf_lmh_sq, n);
    rep.infimum_source = "closed-form";
    return rep;
}

}  // namespace lambdasurf
