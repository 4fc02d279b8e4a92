#include "lambdasurf/operator_lab.hpp"

#include <cmath>
#include <limits>

#include "lambdasurf/geometry.hpp"
#include "lambdasurf/graph_solver.hpp"

namespace lambdasurf {

OperatorContext OperatorContext::from_graph(const ScalarField& f, double lambda) {
    OperatorContext ctx;
    ctx.f_field = &f;
    ctx.lambda = lambda;
    ctx.graph_coefficients = true;
    return ctx;
}

OperatorContext OperatorContext::identity(const ScalarField& f, double lambda) {
    OperatorContext ctx;
    ctx.f_field = &f;
    ctx.lambda = lambda;
    ctx.graph_coefficients = false;
    return ctx;
}

Mat OperatorContext::inv_coeff(std::size_t flat_index) const {
    if (!graph_coefficients) return Mat::identity(f_field->domain.n);
    const GradHess gh = finite_difference_gradhess(*f_field, flat_index);
    return inverse_metric(gh.grad);
}

double apply_operator(const OperatorContext& ctx, const ScalarField& psi, std::size_t flat_index) {
    const GridDomain& d = psi.domain;
    if (d.classify_flat(flat_index) != NodeClass::interior)
        throw StencilError("apply_operator: node has no full interior stencil");

    const GradHess dpsi = finite_difference_gradhess(psi, flat_index);
    const Mat ainv = ctx.inv_coeff(flat_index);
    const Vec x = d.coords(flat_index);

    double s = 0.0;
    for (int i = 0; i < d.n; ++i)
        for (int j = 0; j < d.n; ++j) s += ainv(i, j) * dpsi.hess(i, j);
    for (int i = 0; i < d.n; ++i) s -= x[static_cast<std::size_t>(i)] * dpsi.grad[static_cast<std::size_t>(i)];

    const GradHess fgh = finite_difference_gradhess(*ctx.f_field, flat_index);
    const double w = std::sqrt(1.0 + norm2_sq(fgh.grad));
    double df_dpsi = 0.0;
    for (std::size_t i = 0; i < fgh.grad.size(); ++i) df_dpsi += fgh.grad[i] * dpsi.grad[i];
    s -= ctx.lambda * df_dpsi / w;
    return s;
}

double condition_radius(double lambda, int n) {
    const double al = std::abs(lambda);
    return 0.5 * (al + std::sqrt(al * al + 4.0 * n));
}

EigenvalueConditionReport min_metric_eigenvalue_condition(const ScalarField& field, double lambda,
                                                          const std::vector<double>& radii) {
    EigenvalueConditionReport rep;
    rep.mu_min = std::numeric_limits<double>::infinity();
    const GridDomain& d = field.domain;
    for (std::size_t node : d.interior_nodes()) {
        const GradHess gh = finite_difference_gradhess(field, node);
        rep.mu_min = std::min(rep.mu_min, min_metric_eigenvalue(gh.grad));
    }
    if (!std::isfinite(rep.mu_min)) rep.mu_min = 1.0;
    rep.radii = radii;
    rep.margins.reserve(radii.size());
    for (double r : radii)
        rep.margins.push_back(r * r - std::abs(lambda) * r - static_cast<double>(d.n));
    return rep;
}

namespace {

void require_solution(const ScalarField& field, double lambda, double precond_tol,
                      double* max_residual_out) {
    const ScalarField res = discrete_residual(field, lambda);
    double worst = 0.0;
    for (double v : res.values) worst = std::max(worst, std::abs(v));
    if (max_residual_out) *max_residual_out = worst;
    if (worst > precond_tol)
        throw PreconditionError("field does not solve the graphic equation: max residual " +
                                std::to_string(worst) + " > " + std::to_string(precond_tol));
}

/// psi = log(1+|Df|^2) on interior nodes.
ScalarField build_psi(const ScalarField& field) {
    ScalarField psi(field.domain);
    for (std::size_t node : field.domain.interior_nodes()) {
        const GradHess gh = finite_difference_gradhess(field, node);
        psi.values[node] = std::log1p(norm2_sq(gh.grad));
    }
    return psi;
}

double max_hess_entry(const ScalarField& field) {
    double m = 0.0;
    for (std::size_t node : field.domain.interior_nodes()) {
        const GradHess gh = finite_difference_gradhess(field, node);
        for (double v : gh.hess.a) m = std::max(m, std::abs(v));
    }
    return m;
}

}  // namespace

double slack_quadratic_form(const Vec& grad, const Mat& hess) {
    const int n = static_cast<int>(grad.size());
    const double w2 = 1.0 + norm2_sq(grad);
    const Mat ginv = inverse_metric(grad);

    // s = g^T Ginv g, tr = trace((Ginv H)^2), v = H Ginv g
    const double s = quad_form(ginv, grad, grad);
    const Mat m = ginv * hess;
    double tr = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) tr += m(i, j) * m(j, i);
    const Vec hg = hess * (ginv * grad);
    const double t2 = quad_form(ginv, hg, hg);

    const double final_form = 2.0 * tr * (1.0 - s) + 2.0 * t2;
    const Vec hgrad = hess * grad;  // psi vector = (2/W) H g
    const double grad_term = 2.0 / (w2 * w2) * quad_form(ginv, hgrad, hgrad);
    return final_form - grad_term;
}

InequalityReport key_inequality_check(const ScalarField& field, double lambda,
                                      double precond_tol) {
    InequalityReport rep;
    require_solution(field, lambda, precond_tol, &rep.max_residual);

    const GridDomain& d = field.domain;
    const ScalarField psi = build_psi(field);
    const OperatorContext ctx = OperatorContext::from_graph(field, lambda);

    rep.eps_h = 10.0 * d.h * sq(1.0 + max_hess_entry(field));
    rep.min_slack = std::numeric_limits<double>::infinity();
    for (std::size_t node : d.deep_interior_nodes(1)) {
        const double lpsi = apply_operator(ctx, psi, node);
        const GradHess fgh = finite_difference_gradhess(field, node);
        const GradHess pgh = finite_difference_gradhess(psi, node);
        const Mat ginv = inverse_metric(fgh.grad);
        const double rhs = 0.5 * quad_form(ginv, pgh.grad, pgh.grad);
        const double slack = lpsi - rhs;
        rep.nodes.push_back(node);
        rep.slack.push_back(slack);
        rep.min_slack = std::min(rep.min_slack, slack);
    }
    rep.nodes_checked = rep.nodes.size();
    if (rep.nodes.empty())
        throw StencilError("key_inequality_check: no nodes with a 1-cell interior margin");
    return rep;
}

IdentityCheckReport identity_cross_check(const ScalarField& field, double lambda,
                                         double precond_tol) {
    IdentityCheckReport rep;
    require_solution(field, lambda, precond_tol, nullptr);

    const GridDomain& d = field.domain;
    const ScalarField psi = build_psi(field);
    const OperatorContext ctx = OperatorContext::from_graph(field, lambda);

    const auto nodes = d.deep_interior_nodes(2);
    if (nodes.empty()) throw StencilError("identity_cross_check: grid too small for a 2-cell margin");

    for (std::size_t node : nodes) {
        const double direct = apply_operator(ctx, psi, node);

        const GradHess gh = finite_difference_gradhess(field, node);
        const auto third = finite_difference_third(field, node);
        const int n = d.n;
        const double w2 = 1.0 + norm2_sq(gh.grad);
        const Mat ginv = inverse_metric(gh.grad);
        const Vec x = d.coords(node);

        // chain-rule expansion: psi_i and psi_ij in terms of f derivatives
        Vec psi_i(static_cast<std::size_t>(n), 0.0);
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int p = 0; p < n; ++p) s += gh.grad[static_cast<std::size_t>(p)] * gh.hess(p, i);
            psi_i[static_cast<std::size_t>(i)] = 2.0 * s / w2;
        }
        // psi_ij = 2 sum_p (f_pj f_pi + f_p f_pij)/W - psi_i psi_j
        Mat psi_ij(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double s = 0.0;
                for (int p = 0; p < n; ++p)
                    s += gh.hess(p, j) * gh.hess(p, i) +
                         gh.grad[static_cast<std::size_t>(p)] * third[static_cast<std::size_t>(p)](i, j);
                psi_ij(i, j) = 2.0 * s / w2 -
                               psi_i[static_cast<std::size_t>(i)] * psi_i[static_cast<std::size_t>(j)];
            }

        double expanded = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) expanded += ginv(i, j) * psi_ij(i, j);
        for (int i = 0; i < n; ++i) expanded -= x[static_cast<std::size_t>(i)] * psi_i[static_cast<std::size_t>(i)];
        double df_dpsi = 0.0;
        for (int i = 0; i < n; ++i) df_dpsi += gh.grad[static_cast<std::size_t>(i)] * psi_i[static_cast<std::size_t>(i)];
        expanded -= lambda * df_dpsi / std::sqrt(w2);

        // final second-derivative form, valid because the field solves the equation
        const Vec hgrad = gh.hess * gh.grad;
        const double grad_term = 2.0 / (w2 * w2) * quad_form(ginv, hgrad, hgrad);
        const double final_form = slack_quadratic_form(gh.grad, gh.hess) + grad_term;

        rep.direct_vs_expanded = std::max(rep.direct_vs_expanded, std::abs(direct - expanded));
        rep.expanded_vs_final = std::max(rep.expanded_vs_final, std::abs(expanded - final_form));
    }
    rep.nodes_checked = nodes.size();
    rep.max_discrepancy = std::max(rep.direct_vs_expanded, rep.expanded_vs_final);
    return rep;
}

}  // namespace lambdasurf
