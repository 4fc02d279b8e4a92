#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "lambdasurf/common.hpp"
#include "lambdasurf/grid.hpp"

namespace lambdasurf {

/// Outcome of one damped-Newton solve.
struct SolveReport {
    int iterations = 0;
    double final_residual_norm = 0.0;      // max-norm of the discrete residual
    std::vector<double> newton_decrements; // residual 2-norms after each accepted step
    std::vector<bool> step_damped;         // step k needed backtracking or a shift
    bool converged = false;
};

/// Compressed sparse rows over the interior unknowns.
struct SparseMatrix {
    int n = 0;
    std::vector<int> row_ptr;
    std::vector<int> col;
    Vec val;

    Vec apply(const Vec& v) const;
    Vec diagonal() const;
};

/// Interior-node bookkeeping for one domain: packed unknown ordering and
/// the per-row contiguous runs the residual kernels operate on.
struct InteriorMap {
    explicit InteriorMap(const GridDomain& d);

    const GridDomain* domain;
    std::vector<std::size_t> nodes;      // flat node index per unknown
    std::vector<int> unknown_of_node;    // -1 for non-interior
    struct Run {
        int iy;
        int ix_begin;
        int ix_end;  // exclusive
        int unknown_begin;
    };
    std::vector<Run> runs;
};

/// Residual of the discrete graphic equation
///   sum_ij g^ij f_ij - (-f + sum_i x_i f_i + lambda sqrt(1+|Df|^2))
/// at interior nodes; zero elsewhere.
ScalarField discrete_residual(const ScalarField& field, double lambda);

/// Packed interior residual in the ordering of `map`.
Vec discrete_residual_packed(const ScalarField& field, double lambda, const InteriorMap& map);

/// Analytic Frechet derivative of the packed residual at `field`.
SparseMatrix linearize(const ScalarField& field, double lambda, const InteriorMap& map);

/// Convenience overload building its own interior map.
SparseMatrix linearize(const ScalarField& field, double lambda);

/// Max over interior nodes of |packed residual - w * lambda_residual| where
/// the right side goes through the pointwise geometry route with the same
/// finite-difference derivatives (w = sqrt(1+|Df|^2)). Independent code
/// paths; agreement is at rounding level.
double residual_geometry_discrepancy(const ScalarField& field, double lambda);

struct DirichletProblem {
    GridDomain domain;
    std::function<double(const Vec&)> boundary;
    double lambda = 0.0;
    double tol = 1e-10;       // on the residual max-norm
    int max_iter = 50;
};

struct SolveResult {
    ScalarField field;
    SolveReport report;
};

/// Damped Newton with backtracking line search (factor 1/2, Armijo 1e-4 on
/// the squared residual norm, max 30 backtracks) and a diagonal shift that
/// grows when a step is unusable. Initial guess solves the lambda = 0,
/// Df = 0 linearization of the equation once. Non-convergence returns the
/// best iterate with converged = false.
SolveResult solve_dirichlet(const DirichletProblem& p);

struct ExpandingBallRow {
    double radius;
    double sup_hess;       // sup of |D^2 f| entries over the half-radius ball
    double sup_grad_dev;   // sup of |Df - slope|
    SolveReport report;
};

struct ExpandingBallResult {
    std::vector<ExpandingBallRow> rows;
};

/// Solves the Dirichlet problem with affine data slope . x on balls of
/// increasing radius and reports interior Hessian magnitudes on the
/// half-radius ball: numerical evidence for the flatness of entire
/// graphic solutions, not a proof.
ExpandingBallResult expanding_ball_experiment(double lambda, const std::vector<double>& radii,
                                              const Vec& slope, double h, double tol = 1e-10,
                                              int max_iter = 50);

// Linear-solver entry points, exposed for tests.
bool thomas_solve(const SparseMatrix& tri, const Vec& rhs, Vec& out);
struct GmresStats {
    int iterations = 0;
    double rel_residual = 1.0;
    bool converged = false;
};
GmresStats gmres_solve(const SparseMatrix& a, const Vec& rhs, Vec& out, double rel_tol,
                       int restart = 120, int max_iter = 2000);

}  // namespace lambdasurf
