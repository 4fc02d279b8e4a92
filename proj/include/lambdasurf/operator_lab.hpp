#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "lambdasurf/common.hpp"
#include "lambdasurf/grid.hpp"
#include "lambdasurf/small_linalg.hpp"

namespace lambdasurf {

/// Coefficients of the drift operator
///   L psi = sum a^ij psi_ij - <x, D psi> - lambda <Df, D psi>/sqrt(1+|Df|^2).
/// Per-node inverse coefficient matrices a^ij plus the drift field f.
/// from_graph instantiates a_ij = g_ij(Df), the only case the inequality
/// results cover; identity coefficients are kept for the
/// Ornstein-Uhlenbeck reduction checks.
struct OperatorContext {
    const ScalarField* f_field = nullptr;
    double lambda = 0.0;
    bool graph_coefficients = true;  // a = induced metric of f_field

    static OperatorContext from_graph(const ScalarField& f, double lambda);
    static OperatorContext identity(const ScalarField& f, double lambda);

    /// a^ij at an interior node (inverse metric or identity).
    Mat inv_coeff(std::size_t flat_index) const;
};

/// L psi at one node via finite differences of the psi field.
/// Needs psi defined on the node's full stencil.
double apply_operator(const OperatorContext& ctx, const ScalarField& psi, std::size_t flat_index);

struct EigenvalueConditionReport {
    double mu_min = 1.0;                 // min over nodes of min-eigenvalue(a_ij)
    std::vector<double> radii;
    std::vector<double> margins;         // mu * (r^2 - |lambda| r) - n
};

/// The quadratic margin mu(x)(|x|^2 - |lambda||x|) - n of the eigenvalue
/// hypothesis, evaluated with mu = 1 (exact for graph metrics with n >= 2,
/// a lower bound for n = 1), plus the field minimum of the metric's
/// smallest eigenvalue.
EigenvalueConditionReport min_metric_eigenvalue_condition(const ScalarField& field, double lambda,
                                                          const std::vector<double>& radii);

/// Radius at which the mu = 1 margin changes sign: (|lambda|+sqrt(lambda^2+4n))/2.
double condition_radius(double lambda, int n);

struct InequalityReport {
    double min_slack = 0.0;
    double eps_h = 0.0;                  // recorded tolerance 10 h (1+max|D^2 f|)^2
    std::size_t nodes_checked = 0;
    std::vector<std::size_t> nodes;      // flat indices of checked nodes
    Vec slack;                           // per checked node
    double max_residual = 0.0;           // of the precondition check
};

/// Checks L psi >= (1/2) sum g^ij psi_i psi_j with psi = log(1+|Df|^2) on a
/// field that solves the graphic equation at lambda (precondition enforced:
/// throws PreconditionError when max|discrete residual| > precond_tol).
/// Slack is reported on nodes with a 2-cell interior margin.
InequalityReport key_inequality_check(const ScalarField& field, double lambda,
                                      double precond_tol);

/// The closed-form value of L psi - (1/2) sum g^ij psi_i psi_j for exact
/// solutions: the nonnegative quadratic form of the final display,
/// assembled rotation-free from grad and hess.
double slack_quadratic_form(const Vec& grad, const Mat& hess);

struct IdentityCheckReport {
    double max_discrepancy = 0.0;   // max over both junctions and nodes
    double direct_vs_expanded = 0.0;  // |L psi (FD of psi) - third-derivative expansion|
    double expanded_vs_final = 0.0;   // |expansion - second-derivative final form|
    std::size_t nodes_checked = 0;
};

/// Evaluates the identity chain for L psi: the operator applied to the
/// discrete psi field, the chain-rule expansion through third derivatives
/// of f, and the final second-derivative form (valid only on solutions).
/// Same precondition as key_inequality_check.
IdentityCheckReport identity_cross_check(const ScalarField& field, double lambda,
                                         double precond_tol);

}  // namespace lambdasurf
