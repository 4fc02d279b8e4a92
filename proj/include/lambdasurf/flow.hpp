#pragma once

#include <array>
#include <string>
#include <vector>

#include "lambdasurf/common.hpp"

namespace lambdasurf {

using Point2 = std::array<double, 2>;

/// Measure used by the alpha and V(t) quadratures. The weighted volume
/// integrates against d mu without a time subscript; the conservation
/// derivation fixes the initial measure (frozen), which this toolkit takes
/// as the default. The current-arclength alternative is exposed so the
/// conservation experiment can discriminate between the two readings.
enum class WeightMode { frozen, current };

/// Per-vertex discrete geometry of the closed polyline.
struct CurveGeometry {
    std::vector<Point2> normal;  // unit, inward for convex CCW curves
    Vec curvature;               // H with H*N the curvature vector; circle: 1/rho
    Vec weight;                  // half-sum of adjacent edge lengths
};

/// Closed polyline evolving under the weighted volume-preserving flow.
/// The initial normals, positions (for the Gaussian factor) and arclength
/// weights are frozen at construction; snapshots are immutable (step
/// returns a new state).
class CurveState {
public:
    /// Vertices of a simple closed polyline, at least 16. Orientation is
    /// canonicalized to counter-clockwise.
    explicit CurveState(std::vector<Point2> vertices, double time = 0.0);

    const std::vector<Point2>& vertices() const { return vertices_; }
    const std::vector<Point2>& initial_normals() const { return initial_normals_; }
    const std::vector<Point2>& initial_positions() const { return initial_positions_; }
    const Vec& initial_weights() const { return initial_weights_; }
    const Vec& gauss_weights() const { return gauss_weights_; }  // exp(-|X(0)|^2/2)
    double time() const { return time_; }
    std::size_t size() const { return vertices_.size(); }

    static CurveState circle(double radius, int m);
    static CurveState ellipse(double a, double b, int m);

private:
    friend CurveState step(const CurveState&, double, WeightMode);
    CurveState() = default;

    std::vector<Point2> vertices_;
    std::vector<Point2> initial_normals_;
    std::vector<Point2> initial_positions_;
    Vec initial_weights_;
    Vec gauss_weights_;
    double time_ = 0.0;
};

/// Inward normal (rotated central-difference tangent), circumscribed-circle
/// curvature and arclength weights of the current polygon.
CurveGeometry curve_geometry(const CurveState& state);

/// alpha(t): the Gaussian-weighted mean of H(t) against <N(t), N(0)> that
/// makes the flow volume-preserving. Throws DegenerateGeometryError when the
/// denominator falls below 1e-10 x (total weighted length).
double alpha(const CurveState& state, WeightMode mode = WeightMode::frozen);

/// V(t): quadrature of <X(t), N(0)> exp(-|X(0)|^2/2) against the mode's
/// arclength weights.
double weighted_volume(const CurveState& state, WeightMode mode = WeightMode::frozen);

/// A(t): quadrature of exp(-|X(t)|^2/2) against the current arclength
/// weights (current positions and current measure, unlike V).
double weighted_area(const CurveState& state);

/// One explicit Euler step X += dt (H - alpha) N(t). Enforces the stability
/// bound dt <= 0.25 (min edge)^2 and re-checks simplicity.
CurveState step(const CurveState& state, double dt, WeightMode mode = WeightMode::frozen);

struct FlowRow {
    double t;
    double alpha;
    double volume;
    double area;
    double max_speed;
};

struct FlowDiagnostics {
    std::vector<FlowRow> rows;
    double max_rel_volume_drift = 0.0;
    bool halted = false;
    std::string halt_reason;
};

/// Steps to time T recording every record_every steps (plus first and last).
/// Step errors halt the run and return the partial diagnostics.
FlowDiagnostics run_flow(const CurveState& initial, double T, double dt, int record_every,
                         WeightMode mode = WeightMode::frozen);

/// True if any two non-adjacent edges of the closed polyline intersect.
bool self_intersects(const std::vector<Point2>& vertices);

}  // namespace lambdasurf
