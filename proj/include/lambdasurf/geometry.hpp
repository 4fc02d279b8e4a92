#pragma once

#include "lambdasurf/common.hpp"
#include "lambdasurf/small_linalg.hpp"

namespace lambdasurf {

struct ScalarField;  // grid.hpp

/// First and second derivatives of the graph function at one point.
/// hess is symmetric; finite-differenced Hessians are symmetrized on
/// construction by averaging the mixed partials.
struct GradHess {
    Vec grad;   // Df
    Mat hess;   // D^2 f

    int dim() const { return static_cast<int>(grad.size()); }
};

/// Full pointwise package for the graph X = (x, f(x)): induced metric and
/// inverse, upward unit normal, mean curvature, support function and
/// psi = log det(g_ij).
struct PointGeometry {
    Vec x;
    double f = 0.0;
    GradHess grad_hess;
    Mat metric;            // g_ij = delta_ij + f_i f_j
    Mat inv_metric;        // g^ij = delta_ij - f_i f_j / (1 + |Df|^2)
    Vec normal;            // (-Df, 1)/sqrt(1+|Df|^2), in R^{n+1}
    double mean_curvature = 0.0;
    double support = 0.0;  // <X, N>
    double psi = 0.0;      // log(1 + |Df|^2)
};

/// g_ij = delta_ij + f_i f_j.
Mat induced_metric(const Vec& grad);

/// Closed-form rank-one inverse g^ij = delta_ij - f_i f_j/(1+|Df|^2).
Mat inverse_metric(const Vec& grad);

/// Smallest eigenvalue of the induced metric. Exactly 1 for n >= 2
/// (the rank-one update leaves an (n-1)-dimensional fixed subspace);
/// 1 + f'^2 for n = 1.
double min_metric_eigenvalue(const Vec& grad);

/// Upward unit normal (-Df, 1)/sqrt(1+|Df|^2) of the graph.
Vec unit_normal(const Vec& grad);

/// H = sum_ij g^ij f_ij / sqrt(1+|Df|^2) with respect to the upward normal.
double mean_curvature(const GradHess& gh);

/// <X, N> = (f - sum_i x_i f_i)/sqrt(1+|Df|^2) for the graph point (x, f).
double support_function(const Vec& x, double f, const Vec& grad);

/// <X,N> + H - lambda; zero iff the point satisfies the defining equation.
double lambda_residual(const Vec& x, double f, const GradHess& gh, double lambda);

/// Bundles all pointwise quantities. psi uses the closed-form determinant
/// det(I + v v^T) = 1 + |v|^2.
PointGeometry point_geometry(const Vec& x, double f, const GradHess& gh);

/// Second-order central differences of a grid field at an interior node;
/// flat_index addresses the field's node array. Throws StencilError when the
/// full stencil (including diagonal neighbours) is not available.
GradHess finite_difference_gradhess(const ScalarField& field, std::size_t flat_index);

}  // namespace lambdasurf
