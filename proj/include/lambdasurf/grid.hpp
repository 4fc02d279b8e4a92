#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

#include "lambdasurf/common.hpp"
#include "lambdasurf/geometry.hpp"

namespace lambdasurf {

enum class DomainShape { box, ball };

/// How a grid node participates in the discrete problem.
///   exterior: outside the domain (ball mask), value ignored
///   boundary: in-domain, Dirichlet value, at least one 3x3-stencil
///             neighbour exterior or off-grid
///   interior: full stencil available
enum class NodeClass : unsigned char { exterior, boundary, interior };

/// Uniform grid over a box or a ball (masked box), n = 1 or 2.
/// Ball grids are node-centred and symmetric about the origin; the
/// effective radius is snapped to a multiple of h.
struct GridDomain {
    int n = 1;
    DomainShape shape = DomainShape::box;
    double h = 0.0;
    double radius = 0.0;                 // ball only (snapped)
    std::array<double, 2> lo{{0, 0}};
    std::array<double, 2> hi{{0, 0}};
    std::array<int, 2> dims{{1, 1}};     // nodes per axis (dims[1] == 1 for n == 1)

    static GridDomain box1d(double lo, double hi, double h);
    static GridDomain box2d(std::array<double, 2> lo, std::array<double, 2> hi, double h);
    static GridDomain ball(int n, double radius, double h);

    std::size_t node_count() const {
        return static_cast<std::size_t>(dims[0]) * static_cast<std::size_t>(dims[1]);
    }
    std::size_t flat(int ix, int iy = 0) const {
        return static_cast<std::size_t>(iy) * dims[0] + ix;
    }
    double coord_x(int ix) const { return lo[0] + ix * h; }
    double coord_y(int iy) const { return lo[1] + iy * h; }
    Vec coords(std::size_t flat_index) const;

    bool in_domain(int ix, int iy = 0) const;
    NodeClass classify(int ix, int iy = 0) const;
    NodeClass classify_flat(std::size_t flat_index) const;

    /// Interior node whose surrounding margin cells (in the 8-neighbour
    /// sense) are themselves interior; margin = 0 means plain interior.
    bool is_deep_interior(int ix, int iy, int margin) const;

    std::vector<std::size_t> interior_nodes() const;
    std::vector<std::size_t> boundary_nodes() const;
    std::vector<std::size_t> deep_interior_nodes(int margin) const;
};

/// Scalar samples on a grid. Boundary nodes hold Dirichlet data; exterior
/// nodes are present in storage but never read by interior stencils.
struct ScalarField {
    GridDomain domain;
    Vec values;

    ScalarField() = default;
    explicit ScalarField(GridDomain d) : domain(std::move(d)), values(domain.node_count(), 0.0) {}

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    /// Samples fn over every node (including exterior, for simplicity).
    static ScalarField sample(const GridDomain& d, const std::function<double(const Vec&)>& fn);
};

/// Third derivatives f_ijp at a node by central differences of the
/// finite-difference Hessian field; requires a 2-cell margin.
/// Returned as t[p] = d/dx_p of the Hessian.
std::vector<Mat> finite_difference_third(const ScalarField& field, std::size_t flat_index);

}  // namespace lambdasurf
