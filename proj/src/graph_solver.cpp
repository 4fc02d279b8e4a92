#include "lambdasurf/graph_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lambdasurf/geometry.hpp"
#include "lambdasurf/kernels/kernels.hpp"
#include "lambdasurf/parallel.hpp"

namespace lambdasurf {

Vec SparseMatrix::apply(const Vec& v) const {
    Vec out(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k) s += val[k] * v[col[k]];
        out[i] = s;
    }
    return out;
}

Vec SparseMatrix::diagonal() const {
    Vec d(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
            if (col[k] == i) d[i] = val[k];
    return d;
}

InteriorMap::InteriorMap(const GridDomain& d) : domain(&d) {
    unknown_of_node.assign(d.node_count(), -1);
    for (int iy = 0; iy < d.dims[1]; ++iy) {
        int run_start = -1;
        for (int ix = 0; ix < d.dims[0]; ++ix) {
            const bool interior = d.classify(ix, iy) == NodeClass::interior;
            if (interior) {
                if (run_start < 0) {
                    run_start = ix;
                    runs.push_back({iy, ix, ix, static_cast<int>(nodes.size())});
                }
                unknown_of_node[d.flat(ix, iy)] = static_cast<int>(nodes.size());
                nodes.push_back(d.flat(ix, iy));
                runs.back().ix_end = ix + 1;
            } else {
                run_start = -1;
            }
        }
    }
}

namespace {

// Per-axis coordinate array for the kernel calls.
Vec axis_coords(const GridDomain& d) {
    Vec xs(static_cast<std::size_t>(d.dims[0]));
    for (int ix = 0; ix < d.dims[0]; ++ix) xs[static_cast<std::size_t>(ix)] = d.coord_x(ix);
    return xs;
}

}  // namespace

Vec discrete_residual_packed(const ScalarField& field, double lambda, const InteriorMap& map) {
    const GridDomain& d = field.domain;
    Vec out(map.nodes.size(), 0.0);
    if (d.n == 1) {
        // One contiguous run; kernel fills interior slots of a node-sized buffer.
        Vec buf(d.node_count(), 0.0);
        const Vec xs = axis_coords(d);
        kernels::graph_residual_1d(field.values.data(), xs.data(), d.node_count(), d.h, lambda,
                                   buf.data());
        for (std::size_t u = 0; u < map.nodes.size(); ++u) out[u] = buf[map.nodes[u]];
        return out;
    }
    const Vec xs = axis_coords(d);
    // rows write disjoint slices, so the block decomposition is free to run
    // on however many workers LAMBDA_SURF_THREADS allows
    parallel_blocks(
        map.runs.size(),
        [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k) {
                const auto& run = map.runs[k];
                kernels::graph_residual_2d_row(
                    field.values.data(), static_cast<std::size_t>(d.dims[0]), xs.data(),
                    d.coord_y(run.iy), static_cast<std::size_t>(run.iy),
                    static_cast<std::size_t>(run.ix_begin), static_cast<std::size_t>(run.ix_end),
                    d.h, lambda, out.data() + run.unknown_begin);
            }
        },
        16);
    return out;
}

ScalarField discrete_residual(const ScalarField& field, double lambda) {
    const InteriorMap map(field.domain);
    const Vec packed = discrete_residual_packed(field, lambda, map);
    ScalarField out(field.domain);
    for (std::size_t u = 0; u < map.nodes.size(); ++u) out.values[map.nodes[u]] = packed[u];
    return out;
}

namespace {

struct StencilOffset {
    int dx, dy;
    double dgrad[2];   // d grad_c / d f_here
    double dhess[3];   // d (f_xx, f_yy, f_xy) / d f_here
};

// Derivative of the residual with respect to one stencil value, given the
// current gradient/Hessian at the node.
double stencil_coefficient(const StencilOffset& o, int n, const Vec& grad, const Mat& hess,
                           const Vec& x, double lambda) {
    const double w2 = 1.0 + norm2_sq(grad);
    double c = (o.dx == 0 && o.dy == 0) ? 1.0 : 0.0;  // the +f term

    // d/d f_ab of sum g^ab f_ab
    const Mat ginv = inverse_metric(grad);
    if (n == 1) {
        c += ginv(0, 0) * o.dhess[0];
    } else {
        c += ginv(0, 0) * o.dhess[0] + ginv(1, 1) * o.dhess[1] + 2.0 * ginv(0, 1) * o.dhess[2];
    }

    // chain rule through the gradient
    for (int cc = 0; cc < n; ++cc) {
        const double dg = o.dgrad[cc];
        if (dg == 0.0) continue;
        // d ginv_ab / d grad_cc contracted with hess
        double t1 = 0.0;
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                double dginv = 2.0 * grad[a] * grad[b] * grad[cc] / (w2 * w2);
                if (a == cc) dginv -= grad[b] / w2;
                if (b == cc) dginv -= grad[a] / w2;
                t1 += dginv * hess(a, b);
            }
        const double t2 = -x[static_cast<std::size_t>(cc)];
        const double t3 = -lambda * grad[static_cast<std::size_t>(cc)] / std::sqrt(w2);
        c += (t1 + t2 + t3) * dg;
    }
    return c;
}

std::vector<StencilOffset> make_stencil(int n, double h) {
    const double i2h = 1.0 / (2.0 * h);
    const double ih2 = 1.0 / (h * h);
    const double i4h2 = 1.0 / (4.0 * h * h);
    std::vector<StencilOffset> st;
    if (n == 1) {
        st.push_back({-1, 0, {-i2h, 0}, {ih2, 0, 0}});
        st.push_back({0, 0, {0, 0}, {-2.0 * ih2, 0, 0}});
        st.push_back({1, 0, {i2h, 0}, {ih2, 0, 0}});
        return st;
    }
    st.push_back({-1, -1, {0, 0}, {0, 0, i4h2}});
    st.push_back({0, -1, {0, -i2h}, {0, ih2, 0}});
    st.push_back({1, -1, {0, 0}, {0, 0, -i4h2}});
    st.push_back({-1, 0, {-i2h, 0}, {ih2, 0, 0}});
    st.push_back({0, 0, {0, 0}, {-2.0 * ih2, -2.0 * ih2, 0}});
    st.push_back({1, 0, {i2h, 0}, {ih2, 0, 0}});
    st.push_back({-1, 1, {0, 0}, {0, 0, -i4h2}});
    st.push_back({0, 1, {0, i2h}, {0, ih2, 0}});
    st.push_back({1, 1, {0, 0}, {0, 0, i4h2}});
    return st;
}

}  // namespace

SparseMatrix linearize(const ScalarField& field, double lambda, const InteriorMap& map) {
    const GridDomain& d = field.domain;
    const auto stencil = make_stencil(d.n, d.h);
    SparseMatrix m;
    m.n = static_cast<int>(map.nodes.size());
    m.row_ptr.reserve(map.nodes.size() + 1);
    m.row_ptr.push_back(0);
    m.col.reserve(map.nodes.size() * stencil.size());
    m.val.reserve(map.nodes.size() * stencil.size());

    for (std::size_t u = 0; u < map.nodes.size(); ++u) {
        const std::size_t node = map.nodes[u];
        const int ix = static_cast<int>(node % d.dims[0]);
        const int iy = static_cast<int>(node / d.dims[0]);
        const GradHess gh = finite_difference_gradhess(field, node);
        const Vec x = d.coords(node);
        for (const auto& o : stencil) {
            const int jx = ix + o.dx, jy = iy + o.dy;
            const int ju = map.unknown_of_node[d.flat(jx, jy)];
            if (ju < 0) continue;  // Dirichlet neighbour: no unknown
            const double c = stencil_coefficient(o, d.n, gh.grad, gh.hess, x, lambda);
            if (c != 0.0) {
                m.col.push_back(ju);
                m.val.push_back(c);
            }
        }
        m.row_ptr.push_back(static_cast<int>(m.col.size()));
    }
    return m;
}

SparseMatrix linearize(const ScalarField& field, double lambda) {
    return linearize(field, lambda, InteriorMap(field.domain));
}

double residual_geometry_discrepancy(const ScalarField& field, double lambda) {
    const InteriorMap map(field.domain);
    const Vec packed = discrete_residual_packed(field, lambda, map);
    double worst = 0.0;
    for (std::size_t u = 0; u < map.nodes.size(); ++u) {
        const std::size_t node = map.nodes[u];
        const GradHess gh = finite_difference_gradhess(field, node);
        const double w = std::sqrt(1.0 + norm2_sq(gh.grad));
        const double geo = lambda_residual(field.domain.coords(node), field.values[node], gh, lambda);
        worst = std::max(worst, std::abs(packed[u] - w * geo));
    }
    return worst;
}

bool thomas_solve(const SparseMatrix& tri, const Vec& rhs, Vec& out) {
    const int n = tri.n;
    Vec a(static_cast<std::size_t>(n), 0.0), b(static_cast<std::size_t>(n), 0.0),
        c(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int k = tri.row_ptr[i]; k < tri.row_ptr[i + 1]; ++k) {
            if (tri.col[k] == i - 1) a[i] = tri.val[k];
            else if (tri.col[k] == i) b[i] = tri.val[k];
            else if (tri.col[k] == i + 1) c[i] = tri.val[k];
            else return false;  // not tridiagonal
        }
    Vec cp(static_cast<std::size_t>(n), 0.0), dp(static_cast<std::size_t>(n), 0.0);
    double beta = b[0];
    if (std::abs(beta) < 1e-300) return false;
    cp[0] = c[0] / beta;
    dp[0] = rhs[0] / beta;
    for (int i = 1; i < n; ++i) {
        beta = b[i] - a[i] * cp[i - 1];
        if (std::abs(beta) < 1e-300) return false;
        cp[i] = c[i] / beta;
        dp[i] = (rhs[i] - a[i] * dp[i - 1]) / beta;
    }
    out.assign(static_cast<std::size_t>(n), 0.0);
    out[n - 1] = dp[n - 1];
    for (int i = n - 2; i >= 0; --i) out[i] = dp[i] - cp[i] * out[i + 1];
    return all_finite(out);
}

GmresStats gmres_solve(const SparseMatrix& a, const Vec& rhs, Vec& out, double rel_tol,
                       int restart, int max_iter) {
    const int n = a.n;
    GmresStats stats;
    Vec precond = a.diagonal();
    for (auto& p : precond) p = std::abs(p) > 1e-300 ? 1.0 / p : 1.0;

    out.assign(static_cast<std::size_t>(n), 0.0);
    const double rhs_norm = std::sqrt(kernels::dot(rhs.data(), rhs.data(), rhs.size()));
    if (rhs_norm == 0.0) {
        stats.converged = true;
        stats.rel_residual = 0.0;
        return stats;
    }

    std::vector<Vec> basis;
    Vec r = rhs;  // x0 = 0
    int total_it = 0;
    while (total_it < max_iter) {
        const double beta = std::sqrt(kernels::dot(r.data(), r.data(), r.size()));
        stats.rel_residual = beta / rhs_norm;
        if (stats.rel_residual <= rel_tol) {
            stats.converged = true;
            return stats;
        }
        basis.clear();
        Vec v0 = r;
        for (auto& x : v0) x /= beta;
        basis.push_back(std::move(v0));

        std::vector<Vec> hessenberg;  // columns of H, length j+2
        Vec cs, sn, g;
        g.push_back(beta);
        int j = 0;
        for (; j < restart && total_it < max_iter; ++j, ++total_it) {
            // w = A M^{-1} v_j
            Vec mv = basis[static_cast<std::size_t>(j)];
            for (int i = 0; i < n; ++i) mv[i] *= precond[i];
            Vec w = a.apply(mv);
            Vec hcol(static_cast<std::size_t>(j) + 2, 0.0);
            for (int i = 0; i <= j; ++i) {
                const Vec& vi = basis[static_cast<std::size_t>(i)];
                const double hij = kernels::dot(w.data(), vi.data(), w.size());
                hcol[static_cast<std::size_t>(i)] = hij;
                kernels::axpy(-hij, vi.data(), w.data(), w.size());
            }
            const double hlast = std::sqrt(kernels::dot(w.data(), w.data(), w.size()));
            hcol[static_cast<std::size_t>(j) + 1] = hlast;

            // apply previous Givens rotations to the new column
            for (int i = 0; i < j; ++i) {
                const double t = cs[i] * hcol[i] + sn[i] * hcol[i + 1];
                hcol[static_cast<std::size_t>(i) + 1] =
                    -sn[i] * hcol[i] + cs[i] * hcol[i + 1];
                hcol[static_cast<std::size_t>(i)] = t;
            }
            const double denom = std::hypot(hcol[static_cast<std::size_t>(j)], hlast);
            if (denom < 1e-300) {
                ++j;
                break;  // happy breakdown
            }
            cs.push_back(hcol[static_cast<std::size_t>(j)] / denom);
            sn.push_back(hcol[static_cast<std::size_t>(j) + 1] / denom);
            hcol[static_cast<std::size_t>(j)] = denom;
            hcol[static_cast<std::size_t>(j) + 1] = 0.0;
            g.push_back(-sn.back() * g[static_cast<std::size_t>(j)]);
            g[static_cast<std::size_t>(j)] *= cs.back();
            hessenberg.push_back(std::move(hcol));

            if (hlast > 1e-300) {
                for (auto& x : w) x /= hlast;
                basis.push_back(std::move(w));
            }

            const double res = std::abs(g.back()) / rhs_norm;
            if (res <= rel_tol) {
                ++j;
                break;
            }
        }

        // back-substitute y from the triangularized least-squares system
        const int k = static_cast<int>(hessenberg.size());
        const int used = std::min(j, k);
        Vec y(static_cast<std::size_t>(used), 0.0);
        for (int i = used - 1; i >= 0; --i) {
            double s = g[static_cast<std::size_t>(i)];
            for (int l = i + 1; l < used; ++l)
                s -= hessenberg[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)] * y[l];
            y[i] = s / hessenberg[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
        }
        Vec update(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < used; ++i)
            kernels::axpy(y[i], basis[static_cast<std::size_t>(i)].data(), update.data(),
                          update.size());
        for (int i = 0; i < n; ++i) out[i] += precond[i] * update[i];

        // true residual for the next cycle
        Vec ax = a.apply(out);
        r = rhs;
        for (int i = 0; i < n; ++i) r[i] -= ax[i];
        stats.iterations = total_it;
        const double rn = std::sqrt(kernels::dot(r.data(), r.data(), r.size()));
        stats.rel_residual = rn / rhs_norm;
        if (stats.rel_residual <= rel_tol) {
            stats.converged = true;
            return stats;
        }
    }
    stats.iterations = total_it;
    stats.converged = stats.rel_residual <= rel_tol;
    return stats;
}

namespace {

// Assembles and solves a linear extension operator for the interior values
// given the field's Dirichlet data: the lambda = 0, Df = 0 linearization
// v -> sum v_aa + v - <x, Dv> when with_drift is set, plain Laplace otherwise.
bool linear_extension(ScalarField& field, const InteriorMap& map, bool with_drift) {
    const GridDomain& d = field.domain;
    const auto stencil = make_stencil(d.n, d.h);
    SparseMatrix a;
    a.n = static_cast<int>(map.nodes.size());
    a.row_ptr.push_back(0);
    Vec rhs(map.nodes.size(), 0.0);

    const Vec zero_grad(static_cast<std::size_t>(d.n), 0.0);
    const Mat zero_hess(d.n, d.n);
    const Vec origin(static_cast<std::size_t>(d.n), 0.0);
    for (std::size_t u = 0; u < map.nodes.size(); ++u) {
        const std::size_t node = map.nodes[u];
        const int ix = static_cast<int>(node % d.dims[0]);
        const int iy = static_cast<int>(node / d.dims[0]);
        const Vec x = d.coords(node);
        for (const auto& o : stencil) {
            double c = stencil_coefficient(o, d.n, zero_grad, zero_hess, with_drift ? x : origin,
                                           0.0);
            if (!with_drift && o.dx == 0 && o.dy == 0) c -= 1.0;  // drop the +v term
            if (c == 0.0) continue;
            const std::size_t nb = d.flat(ix + o.dx, iy + o.dy);
            const int ju = map.unknown_of_node[nb];
            if (ju >= 0) {
                a.col.push_back(ju);
                a.val.push_back(c);
            } else {
                rhs[u] -= c * field.values[nb];  // Dirichlet contribution
            }
        }
        a.row_ptr.push_back(static_cast<int>(a.col.size()));
    }

    Vec sol;
    bool ok = false;
    if (d.n == 1) {
        ok = thomas_solve(a, rhs, sol);
    } else {
        // A few digits are plenty for a starting point.
        ok = gmres_solve(a, rhs, sol, 1e-8).rel_residual <= 1e-3;
    }
    if (!ok || !all_finite(sol)) return false;
    for (std::size_t u = 0; u < map.nodes.size(); ++u) field.values[map.nodes[u]] = sol[u];
    return true;
}

// The drift linearization is the designated initial guess, but on domains
// with radius near 1 it is close to resonant (its principal Dirichlet
// eigenvalue passes through zero) and can emit an arbitrarily bad extension.
// Compute the plain harmonic extension as well and keep whichever starts
// with the smaller residual.
void initial_guess(ScalarField& field, const InteriorMap& map, double lambda) {
    ScalarField drift = field;
    ScalarField laplace = field;
    const bool ok_drift = linear_extension(drift, map, true);
    const bool ok_laplace = linear_extension(laplace, map, false);
    if (!ok_drift && !ok_laplace) {
        for (std::size_t node : map.nodes) field.values[node] = 0.0;
        return;
    }
    double res_drift = std::numeric_limits<double>::infinity();
    double res_laplace = std::numeric_limits<double>::infinity();
    if (ok_drift) {
        const Vec r = discrete_residual_packed(drift, lambda, map);
        res_drift = kernels::max_abs(r.data(), r.size());
    }
    if (ok_laplace) {
        const Vec r = discrete_residual_packed(laplace, lambda, map);
        res_laplace = kernels::max_abs(r.data(), r.size());
    }
    field.values = (res_drift <= res_laplace ? drift : laplace).values;
}

double norm2_kernel(const Vec& v) { return std::sqrt(kernels::dot(v.data(), v.data(), v.size())); }

}  // namespace

SolveResult solve_dirichlet(const DirichletProblem& p) {
    if (!(p.tol > 0.0)) throw ValidationError("solve_dirichlet: tol must be positive");
    if (p.max_iter < 1) throw ValidationError("solve_dirichlet: max_iter must be >= 1");

    const GridDomain& d = p.domain;
    const InteriorMap map(d);
    if (map.nodes.empty()) throw ValidationError("solve_dirichlet: no interior nodes");

    ScalarField f(d);
    for (std::size_t node : d.boundary_nodes()) f.values[node] = p.boundary(d.coords(node));
    initial_guess(f, map, p.lambda);

    SolveResult result{std::move(f), {}};
    ScalarField& field = result.field;
    SolveReport& rep = result.report;

    Vec r = discrete_residual_packed(field, p.lambda, map);
    double res_max = kernels::max_abs(r.data(), r.size());
    ScalarField best = field;
    double best_res = res_max;

    double shift = 0.0;
    for (int it = 0; it < p.max_iter; ++it) {
        if (res_max <= p.tol) {
            rep.converged = true;
            break;
        }
        SparseMatrix jac = linearize(field, p.lambda, map);
        if (shift > 0.0)
            for (int i = 0; i < jac.n; ++i)
                for (int k = jac.row_ptr[i]; k < jac.row_ptr[i + 1]; ++k)
                    if (jac.col[k] == i) jac.val[k] += shift;

        Vec neg_r = r;
        for (auto& x : neg_r) x = -x;
        Vec delta;
        bool solved = false;
        if (d.n == 1) {
            solved = thomas_solve(jac, neg_r, delta);
        } else {
            const double eta = 1e-2;  // inexact Newton forcing term
            solved = gmres_solve(jac, neg_r, delta, eta).rel_residual < 0.5;
        }
        if (!solved || !all_finite(delta)) {
            shift = shift == 0.0 ? 1.0 : shift * 10.0;
            rep.iterations = it + 1;
            if (shift > 1e8) break;  // hopeless linearization
            continue;
        }

        const double phi0 = kernels::dot(r.data(), r.data(), r.size());
        double t = 1.0;
        bool accepted = false;
        ScalarField trial = field;
        Vec r_trial;
        for (int bt = 0; bt < 30; ++bt) {
            trial.values = field.values;
            for (std::size_t u = 0; u < map.nodes.size(); ++u)
                trial.values[map.nodes[u]] += t * delta[u];
            r_trial = discrete_residual_packed(trial, p.lambda, map);
            const double phi = kernels::dot(r_trial.data(), r_trial.data(), r_trial.size());
            if (std::isfinite(phi) && phi <= (1.0 - 2e-4 * t) * phi0) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        rep.iterations = it + 1;
        if (!accepted) {
            shift = shift == 0.0 ? 1.0 : shift * 10.0;
            if (shift > 1e8) break;
            continue;
        }

        field.values.swap(trial.values);
        r.swap(r_trial);
        res_max = kernels::max_abs(r.data(), r.size());
        rep.newton_decrements.push_back(norm2_kernel(r));
        rep.step_damped.push_back(t < 1.0 || shift > 0.0);
        if (res_max < best_res) {
            best_res = res_max;
            best.values = field.values;
        }
        shift *= 0.25;
        if (shift < 1e-12) shift = 0.0;
    }

    if (!rep.converged && res_max <= p.tol) rep.converged = true;
    if (!rep.converged && best_res < res_max) {
        field.values = best.values;
        res_max = best_res;
    }
    rep.final_residual_norm = res_max;
    return result;
}

ExpandingBallResult expanding_ball_experiment(double lambda, const std::vector<double>& radii,
                                              const Vec& slope, double h, double tol,
                                              int max_iter) {
    if (radii.empty()) throw ValidationError("expanding_ball_experiment: no radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1]))
            throw ValidationError("expanding_ball_experiment: radii must increase");
    const int n = static_cast<int>(slope.size());
    if (n != 1 && n != 2) throw ValidationError("expanding_ball_experiment: slope dim must be 1 or 2");

    ExpandingBallResult result;
    for (double radius : radii) {
        DirichletProblem p;
        p.domain = GridDomain::ball(n, radius, h);
        p.lambda = lambda;
        p.tol = tol;
        p.max_iter = max_iter;
        p.boundary = [&slope](const Vec& x) {
            double s = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i) s += slope[i] * x[i];
            return s;
        };
        SolveResult sol = solve_dirichlet(p);

        ExpandingBallRow row;
        row.radius = radius;
        row.report = sol.report;
        row.sup_hess = 0.0;
        row.sup_grad_dev = 0.0;
        const double half = radius / 2.0;
        for (std::size_t node : InteriorMap(p.domain).nodes) {
            const Vec x = p.domain.coords(node);
            if (norm2_sq(x) > half * half * (1.0 + 1e-12)) continue;
            const GradHess gh = finite_difference_gradhess(sol.field, node);
            for (double v : gh.hess.a) row.sup_hess = std::max(row.sup_hess, std::abs(v));
            double dev = 0.0;
            for (std::size_t i = 0; i < gh.grad.size(); ++i) dev += sq(gh.grad[i] - slope[i]);
            row.sup_grad_dev = std::max(row.sup_grad_dev, std::sqrt(dev));
        }
        result.rows.push_back(std::move(row));
    }
    return result;
}

}  // namespace lambdasurf
