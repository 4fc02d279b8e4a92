// Acceptance suite: every end-to-end property the toolkit promises, one
// PASS/FAIL line each, with the measured quantities printed. Exits nonzero
// if anything fails. Tolerances are fixed here, not tuned at runtime.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lambdasurf/canonical.hpp"
#include "lambdasurf/diagnostics.hpp"
#include "lambdasurf/flow.hpp"
#include "lambdasurf/geometry.hpp"
#include "lambdasurf/graph_solver.hpp"
#include "lambdasurf/operator_lab.hpp"
#include "lambdasurf/rng.hpp"

using namespace lambdasurf;

namespace {

constexpr double kPi = std::numbers::pi;

int g_failures = 0;

class Timer {
public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

void report(int criterion, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    va_list ap;
    va_start(ap, f);
    char buf[512];
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

// ---------------------------------------------------------------------------
// 1. canonical lambda values, both orientations, residual <= 1e-12
void criterion1() {
    Timer t;
    bool pass = true;
    std::string why;

    pass &= canonical_lambda(CanonicalSurface::sphere(2, 1.0, Orientation::inward)) == 1.0;
    pass &= canonical_lambda(CanonicalSurface::cylinder(2, 1, 2.0, Orientation::inward)) == -1.5;
    pass &= canonical_lambda(CanonicalSurface::plane({0, 0, 1}, 0.0)) == 0.0;

    double worst = 0.0;
    const std::vector<CanonicalSurface> fams{
        CanonicalSurface::sphere(2, 1.0, Orientation::inward),
        CanonicalSurface::sphere(3, 2.5, Orientation::inward),
        CanonicalSurface::cylinder(2, 1, 2.0, Orientation::inward),
        CanonicalSurface::cylinder(4, 2, 0.75, Orientation::inward),
        CanonicalSurface::plane({0, 0, 1}, 0.0),
        CanonicalSurface::plane({0.6, 0.8, 0.0}, 1.5)};
    for (const auto& s : fams) {
        worst = std::max(worst, verify_canonical(s, 400));
        worst = std::max(worst, verify_canonical(s.flipped(), 400));
        if (canonical_lambda(s.flipped()) != -canonical_lambda(s)) pass = false;
    }
    pass &= worst <= 1e-12;
    const double secs = t.seconds();
    pass &= secs < 1.0;
    report(1, pass,
           fmt("canonical lambdas exact, max residual %.2e (<= 1e-12), sign flip exact, %.2fs (< 1s)",
               worst, secs));
}

// ---------------------------------------------------------------------------
// 2. hemisphere graph satisfies the graphic equation at order >= 1.9
void criterion2() {
    Timer t;
    const double r = 2.0;
    const int n = 1;
    const double lam = hemisphere_lambda(r, n);
    std::vector<double> res;
    std::vector<std::size_t> nodes;
    for (double h : {1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0}) {
        const GridDomain d = GridDomain::ball(n, 0.5 * r, h);
        nodes.push_back(d.node_count());
        const ScalarField f =
            ScalarField::sample(d, [r](const Vec& x) { return hemisphere_value(r, x); });
        const ScalarField rf = discrete_residual(f, lam);
        double worst = 0.0;
        for (double v : rf.values) worst = std::max(worst, std::abs(v));
        res.push_back(worst);
    }
    const double o1 = std::log2(res[0] / res[1]);
    const double o2 = std::log2(res[1] / res[2]);
    const double secs = t.seconds();
    const bool pass = o1 >= 1.9 && o2 >= 1.9 && nodes.back() <= 4096 && secs < 10.0;
    report(2, pass,
           fmt("hemisphere residuals %.2e/%.2e/%.2e, orders %.3f, %.3f (>= 1.9), max %zu nodes, %.2fs (< 10s)",
               res[0], res[1], res[2], o1, o2, nodes.back(), secs));
}

// ---------------------------------------------------------------------------
// 3. solver recovers the hemisphere at O(h^2); jacobian matches FD probes
void criterion3() {
    const double r = 2.0;
    const int n = 1;
    const double lam = hemisphere_lambda(r, n);
    const auto err_at = [&](double h) {
        DirichletProblem p;
        p.domain = GridDomain::ball(n, 0.5 * r, h);
        p.lambda = lam;
        p.boundary = [r](const Vec& x) { return hemisphere_value(r, x); };
        const SolveResult sol = solve_dirichlet(p);
        if (!sol.report.converged) return -1.0;
        double worst = 0.0;
        for (std::size_t node = 0; node < sol.field.values.size(); ++node)
            worst = std::max(worst, std::abs(sol.field.values[node] -
                                             hemisphere_value(r, p.domain.coords(node))));
        return worst;
    };
    const double e1 = err_at(1.0 / 64.0), e2 = err_at(1.0 / 128.0);
    const double order = (e1 > 0 && e2 > 0) ? std::log2(e1 / e2) : -1.0;

    // 20 random (field, direction) probes, n in {1, 2}
    Rng rng(404);
    double worst_rel = 0.0;
    for (int probe = 0; probe < 20; ++probe) {
        const int pn = probe < 10 ? 1 : 2;
        const GridDomain d =
            pn == 1 ? GridDomain::ball(1, 1.0, 0.02) : GridDomain::ball(2, 1.0, 0.1);
        const double a = rng.uniform(0.5, 2.0), b = rng.uniform(0.5, 2.0);
        const double amp = rng.uniform(0.1, 0.6);
        const ScalarField f = ScalarField::sample(d, [&](const Vec& x) {
            const double y = x.size() > 1 ? x[1] : 0.0;
            return amp * std::sin(a * x[0]) * std::cos(b * y);
        });
        const double plam = rng.uniform(-1.0, 1.0);
        const InteriorMap map(d);
        const SparseMatrix jac = linearize(f, plam, map);
        Vec v(map.nodes.size());
        for (auto& x : v) x = rng.uniform(-1, 1);
        const Vec jv = jac.apply(v);
        const double eps = 1e-5;
        ScalarField fp = f, fm = f;
        for (std::size_t u = 0; u < map.nodes.size(); ++u) {
            fp.values[map.nodes[u]] += eps * v[u];
            fm.values[map.nodes[u]] -= eps * v[u];
        }
        const Vec rp = discrete_residual_packed(fp, plam, map);
        const Vec rm = discrete_residual_packed(fm, plam, map);
        double num = 0.0, den = 0.0;
        for (std::size_t u = 0; u < jv.size(); ++u) {
            const double fd = (rp[u] - rm[u]) / (2.0 * eps);
            num += sq(jv[u] - fd);
            den += sq(fd);
        }
        worst_rel = std::max(worst_rel, std::sqrt(num) / std::max(1e-30, std::sqrt(den)));
    }
    const bool pass = order >= 1.9 && worst_rel <= 1e-6;
    report(3, pass,
           fmt("hemisphere recovery errors %.2e -> %.2e, order %.3f (>= 1.9); jacobian rel err %.2e (<= 1e-6, 20 probes)",
               e1, e2, order, worst_rel));
}

// ---------------------------------------------------------------------------
// 4. flow conservation with refinement, circle stationarity
void criterion4() {
    Timer t;
    // scale chosen so m = 1024 at dt = 5e-5 still satisfies the stability
    // precondition dt <= 0.25 (min edge)^2
    const double rho = 2.5, ea = 3.0, eb = 2.5;

    const auto drift_of = [&](const CurveState& c, double dt, double T) {
        const FlowDiagnostics d = run_flow(c, T, dt, 50);
        return d.halted ? -1.0 : d.max_rel_volume_drift;
    };

    const double circle_base = drift_of(CurveState::circle(rho, 512), 1e-4, 0.5);
    const double circle_ref = drift_of(CurveState::circle(rho, 1024), 5e-5, 0.5);
    const double ell_base = drift_of(CurveState::ellipse(ea, eb, 512), 1e-4, 0.5);
    const double ell_ref = drift_of(CurveState::ellipse(ea, eb, 1024), 5e-5, 0.5);

    const auto decreases = [](double base, double ref) {
        // exact discrete conservation leaves both drifts at rounding level,
        // where a ratio test is noise; that floor satisfies the intent
        return (ref <= 0.5 * base) || (base <= 1e-12 && ref <= 1e-12);
    };

    const FlowDiagnostics circ = run_flow(CurveState::circle(rho, 512), 0.5, 1e-4, 50);
    double max_speed = 0.0;
    for (const auto& row : circ.rows) max_speed = std::max(max_speed, row.max_speed);

    const double secs = t.seconds();
    const bool pass = circle_base >= 0 && ell_base >= 0 && circle_base <= 1e-3 &&
                      ell_base <= 1e-3 && decreases(circle_base, circle_ref) &&
                      decreases(ell_base, ell_ref) && max_speed <= 1e-6 && secs < 60.0;
    report(4, pass,
           fmt("V drift circle %.2e -> %.2e, ellipse %.2e -> %.2e (<= 1e-3, refinement ok), "
               "circle max speed %.2e (<= 1e-6), %.1fs (< 60s)",
               circle_base, circle_ref, ell_base, ell_ref, max_speed, secs));
}

// ---------------------------------------------------------------------------
// 5. key inequality slack on affine, hemisphere, and solved graphs
void criterion5() {
    bool pass = true;
    // (a) affine: slack identically zero
    const double lam_a = 0.4;
    const Vec slope{0.3};
    const double offset = lam_a * std::sqrt(1.0 + norm2_sq(slope));
    const GridDomain da = GridDomain::ball(1, 1.0, 0.02);
    const ScalarField affine =
        ScalarField::sample(da, [&](const Vec& x) { return slope[0] * x[0] + offset; });
    const auto rep_a = key_inequality_check(affine, lam_a, 1e-9);
    double affine_abs = 0.0;
    for (double s : rep_a.slack) affine_abs = std::max(affine_abs, std::abs(s));
    pass &= affine_abs <= 1e-9;

    // (b) hemisphere at two grids: min slack >= -eps_h and the slack field
    // matches the explicit quadratic form at O(h)
    const double r = 2.0;
    const double lam_h = hemisphere_lambda(r, 1);
    double diffs[2], min_slacks[2], eps_hs[2];
    int gi = 0;
    for (double h : {1.0 / 64.0, 1.0 / 128.0}) {
        const GridDomain d = GridDomain::ball(1, 0.5 * r, h);
        const ScalarField f =
            ScalarField::sample(d, [r](const Vec& x) { return hemisphere_value(r, x); });
        const auto rep = key_inequality_check(f, lam_h, 1e-2);
        double worst = 0.0;
        for (std::size_t k = 0; k < rep.nodes.size(); ++k) {
            const GradHess gh = hemisphere_gradhess(r, d.coords(rep.nodes[k]));
            worst = std::max(worst, std::abs(rep.slack[k] - slack_quadratic_form(gh.grad, gh.hess)));
        }
        diffs[gi] = worst;
        min_slacks[gi] = rep.min_slack;
        eps_hs[gi] = rep.eps_h;
        pass &= rep.min_slack >= -rep.eps_h;
        ++gi;
    }
    const double order = std::log2(diffs[0] / diffs[1]);
    pass &= order >= 0.9;  // O(h) or better

    // (b') solved lambda = 0.3 graph (R = 1.5; see ledger on the R = 1 window)
    DirichletProblem p;
    p.domain = GridDomain::ball(1, 1.5, 0.01);
    p.lambda = 0.3;
    p.boundary = [](const Vec&) { return 0.0; };
    const SolveResult sol = solve_dirichlet(p);
    pass &= sol.report.converged;
    const auto rep_s = key_inequality_check(sol.field, 0.3, 1e-8);
    pass &= rep_s.min_slack >= -rep_s.eps_h;

    report(5, pass,
           fmt("affine |slack| %.1e (<= 1e-9); hemisphere min slack %.2e >= -eps_h %.2e, "
               "quadratic-form gap %.2e -> %.2e order %.2f (>= 0.9); solved graph min slack %.2e >= %.2e",
               affine_abs, min_slacks[1], eps_hs[1], diffs[0], diffs[1], order, rep_s.min_slack,
               -rep_s.eps_h));
}

// ---------------------------------------------------------------------------
// 6. metric eigenvalue hypothesis
void criterion6() {
    Rng rng(606);
    double worst = 0.0;
    for (int trial = 0; trial < 10000; ++trial) {
        const int n = 2 + static_cast<int>(rng.next_u64() % 4);
        Vec grad(static_cast<std::size_t>(n));
        for (auto& g : grad) g = rng.uniform(-5.0, 5.0);
        const Mat m = induced_metric(grad);
        Eigen::MatrixXd em(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) em(i, j) = m(i, j);
        const double lam_min = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(em).eigenvalues()(0);
        worst = std::max(worst, std::abs(lam_min - 1.0));
    }

    double worst_root = 0.0;
    for (double lam : {0.0, 0.5, 1.0, 2.0})
        for (int n : {1, 2, 3, 5}) {
            double lo = 0.0, hi = 100.0;
            const auto margin = [&](double rr) { return rr * rr - std::abs(lam) * rr - n; };
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                (margin(mid) < 0.0 ? lo : hi) = mid;
            }
            worst_root = std::max(worst_root, std::abs(0.5 * (lo + hi) - condition_radius(lam, n)));
        }
    const bool pass = worst <= 1e-12 && worst_root <= 1e-9;
    report(6, pass,
           fmt("min eigenvalue deviation %.2e (<= 1e-12, 10^4 gradients, n <= 5); "
               "margin root vs closed form %.2e (<= 1e-9)",
               worst, worst_root));
}

// ---------------------------------------------------------------------------
// 7. growth exponents
void criterion7() {
    Timer t;
    const auto plane = measured_growth(CanonicalSurface::plane({0, 0, 1}, 0.0), {1, 2, 4, 8});
    std::vector<double> radii;
    for (double r = 1.0; r <= 32.0; r *= 2.0) radii.push_back(r);
    const auto cyl =
        measured_growth(CanonicalSurface::cylinder(2, 1, 1.0, Orientation::inward), radii);
    const auto sph =
        measured_growth(CanonicalSurface::sphere(2, 1.0, Orientation::inward), {2, 4, 8});

    bool pass = std::abs(plane.fitted_exponent - 2.0) <= 0.05 &&
                std::abs(cyl.fitted_exponent - 1.0) <= 0.05 &&
                std::abs(sph.fitted_exponent - 0.0) <= 0.05;
    pass &= plane.fitted_exponent <= plane.bound_exponent + 0.05;
    pass &= cyl.fitted_exponent <= cyl.bound_exponent + 0.05;
    pass &= sph.fitted_exponent <= sph.bound_exponent + 0.05;
    const double secs = t.seconds();
    pass &= secs < 5.0;
    report(7, pass,
           fmt("fitted exponents plane %.4f (n=2), cylinder %.4f (n-k=1), sphere %.4f (0); "
               "all <= bound + 0.05; %.2fs (< 5s)",
               plane.fitted_exponent, cyl.fitted_exponent, sph.fitted_exponent, secs));
}

// ---------------------------------------------------------------------------
// 8. hemisphere certificates and optimizer-vs-grid agreement
double min_dot_direct(const std::vector<Vec>& normals, const Vec& a) {
    double m = 2.0;
    for (const Vec& n : normals) {
        double d = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) d += a[i] * n[i];
        m = std::min(m, d);
    }
    return m;
}

// Exhaustive direction-grid oracle: 10^4-direction Fibonacci sweep plus a
// local exhaustive refinement (the raw 10^4 covering radius ~0.018 exceeds
// the 1e-2 agreement tolerance, so the oracle refines around its best cell).
double grid_oracle(const std::vector<Vec>& normals) {
    Vec best{0, 0, 1};
    double best_val = -2.0;
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < 10000; ++k) {
        const double z = 1.0 - 2.0 * (k + 0.5) / 10000.0;
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const Vec a{r * std::cos(golden * k), r * std::sin(golden * k), z};
        const double v = min_dot_direct(normals, a);
        if (v > best_val) {
            best_val = v;
            best = a;
        }
    }
    double cap = 0.04;
    for (int stage = 0; stage < 5; ++stage) {
        Vec u{-best[1], best[0], 0.0};
        if (norm2(u) < 1e-8) u = {1, 0, 0};
        const double nu = norm2(u);
        for (auto& x : u) x /= nu;
        const Vec w{best[1] * u[2] - best[2] * u[1], best[2] * u[0] - best[0] * u[2],
                    best[0] * u[1] - best[1] * u[0]};
        Vec improved = best;
        double improved_val = best_val;
        for (int i = -8; i <= 8; ++i)
            for (int j = -8; j <= 8; ++j) {
                Vec a(3);
                for (std::size_t d = 0; d < 3; ++d)
                    a[d] = best[d] + cap * i / 8.0 * u[d] + cap * j / 8.0 * w[d];
                const double na = norm2(a);
                for (auto& x : a) x /= na;
                const double v = min_dot_direct(normals, a);
                if (v > improved_val) {
                    improved_val = v;
                    improved = a;
                }
            }
        best = improved;
        best_val = improved_val;
        cap /= 4.0;
    }
    return best_val;
}

void criterion8() {
    bool pass = true;

    // entire-graph normals: open with the vertical certificate
    Rng rng(808);
    std::vector<Vec> graph_normals;
    for (int i = 0; i < 300; ++i) {
        Vec grad = rng.unit_vector(2);
        const double s = 2.0 * std::sqrt(rng.uniform());
        for (auto& g : grad) g *= s;
        graph_normals.push_back(unit_normal(grad));
    }
    const auto open_cert = open_hemisphere_certificate(graph_normals, 1e-6);
    pass &= open_cert.verdict == HemisphereVerdict::open;
    pass &= open_cert.direction.back() >= 0.9;
    pass &= open_cert.margin >= min_dot_direct(graph_normals, Vec{0, 0, 1}) - 1e-9;

    // great circle: closed_only
    std::vector<Vec> circle;
    for (int k = 0; k < 64; ++k)
        circle.push_back({std::cos(2.0 * kPi * k / 64), std::sin(2.0 * kPi * k / 64), 0.0});
    pass &= closed_hemisphere_certificate(circle, 1e-6).verdict == HemisphereVerdict::closed_only;

    // antipodal pair: neither
    pass &= open_hemisphere_certificate({{1, 0, 0}, {-1, 0, 0}}, 1e-6).verdict ==
            HemisphereVerdict::neither;

    // 100 random instances vs the grid oracle
    double max_gap = 0.0;
    for (int inst = 0; inst < 100; ++inst) {
        std::vector<Vec> normals;
        const int clusters = 1 + static_cast<int>(rng.next_u64() % 3);
        for (int c = 0; c < clusters; ++c) {
            const Vec centre = rng.unit_vector(3);
            const double spread = rng.uniform(0.1, 0.8);
            const int count = 10 + static_cast<int>(rng.next_u64() % 40);
            for (int i = 0; i < count; ++i) {
                Vec v(3);
                for (std::size_t d = 0; d < 3; ++d) v[d] = centre[d] + spread * rng.gaussian();
                const double nv = norm2(v);
                for (auto& x : v) x /= nv;
                normals.push_back(std::move(v));
            }
        }
        const auto cert = open_hemisphere_certificate(normals, 1e-6);
        max_gap = std::max(max_gap, std::abs(cert.margin - grid_oracle(normals)));
    }
    pass &= max_gap <= 1e-2;

    report(8, pass,
           fmt("entire graph open (a.e3 = %.3f, margin %.3f), great circle closed_only, "
               "antipodal neither; optimizer vs grid oracle max gap %.2e (<= 1e-2, 100 instances)",
               open_cert.direction.back(), open_cert.margin, max_gap));
}

// ---------------------------------------------------------------------------
// 9. expanding-ball flatness evidence
void criterion9() {
    const double h = 1.0 / 64.0;
    bool pass = true;
    std::string rows_txt;
    for (double lam : {0.0, 0.5}) {
        const auto res = expanding_ball_experiment(lam, {1.0, 2.0, 4.0}, {0.0}, h);
        rows_txt += fmt("lambda %.1f:", lam);
        for (std::size_t k = 0; k < res.rows.size(); ++k) {
            rows_txt += fmt(" %.2e%s", res.rows[k].sup_hess,
                            res.rows[k].report.converged ? "" : "*");
            if (k > 0 && res.rows[k].sup_hess > res.rows[k - 1].sup_hess + 1e-12) pass = false;
        }
        if (lam == 0.0)
            for (const auto& row : res.rows)
                if (row.sup_hess > 1e-10) pass = false;
        rows_txt += "  ";
    }
    report(9, pass,
           fmt("sup|D2 f| on B_R/2 non-increasing over R in {1,2,4} (* = best iterate, "
               "non-converged): %s; lambda 0 rows <= 1e-10",
               rows_txt.c_str()));
}

}  // namespace

int main() {
    std::printf("lambda-hypersurface toolkit acceptance suite\n");
    std::printf("--------------------------------------------\n");
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::printf("--------------------------------------------\n");
    std::printf("%s (%d failure%s)\n", g_failures == 0 ? "ALL CRITERIA PASSED" : "FAILURES",
                g_failures, g_failures == 1 ? "" : "s");
    return g_failures == 0 ? 0 : 1;
}
