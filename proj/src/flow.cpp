#include "lambdasurf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lambdasurf/kernels/kernels.hpp"

namespace lambdasurf {

namespace {

inline double cross2(const Point2& a, const Point2& b) { return a[0] * b[1] - a[1] * b[0]; }

inline Point2 sub(const Point2& a, const Point2& b) { return {a[0] - b[0], a[1] - b[1]}; }

inline double len(const Point2& a) { return std::hypot(a[0], a[1]); }

double signed_area(const std::vector<Point2>& v) {
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % v.size()];
        s += cross2(a, b);
    }
    return 0.5 * s;
}

double diameter_estimate(const std::vector<Point2>& v) {
    double lo_x = v[0][0], hi_x = v[0][0], lo_y = v[0][1], hi_y = v[0][1];
    for (const auto& p : v) {
        lo_x = std::min(lo_x, p[0]);
        hi_x = std::max(hi_x, p[0]);
        lo_y = std::min(lo_y, p[1]);
        hi_y = std::max(hi_y, p[1]);
    }
    return std::hypot(hi_x - lo_x, hi_y - lo_y);
}

bool segments_intersect(const Point2& p1, const Point2& p2, const Point2& q1, const Point2& q2) {
    const auto orient = [](const Point2& a, const Point2& b, const Point2& c) {
        return cross2(sub(b, a), sub(c, a));
    };
    const double o1 = orient(p1, p2, q1);
    const double o2 = orient(p1, p2, q2);
    const double o3 = orient(q1, q2, p1);
    const double o4 = orient(q1, q2, p2);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0))) return true;
    return false;  // touching endpoints of adjacent edges are excluded by the caller
}

}  // namespace

bool self_intersects(const std::vector<Point2>& v) {
    const std::size_t m = v.size();
    // Uniform-grid broad phase over edge bounding boxes.
    double max_edge = 0.0;
    for (std::size_t i = 0; i < m; ++i) max_edge = std::max(max_edge, len(sub(v[(i + 1) % m], v[i])));
    if (max_edge <= 0.0) return true;
    const double cell = max_edge * 1.5;
    const auto cell_of = [cell](double x) { return static_cast<long long>(std::floor(x / cell)); };

    struct Entry {
        long long cx, cy;
        std::size_t edge;
    };
    std::vector<Entry> entries;
    entries.reserve(m * 2);
    for (std::size_t i = 0; i < m; ++i) {
        const Point2& a = v[i];
        const Point2& b = v[(i + 1) % m];
        const long long x0 = cell_of(std::min(a[0], b[0])), x1 = cell_of(std::max(a[0], b[0]));
        const long long y0 = cell_of(std::min(a[1], b[1])), y1 = cell_of(std::max(a[1], b[1]));
        for (long long cx = x0; cx <= x1; ++cx)
            for (long long cy = y0; cy <= y1; ++cy) entries.push_back({cx, cy, i});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.cx != b.cx) return a.cx < b.cx;
        if (a.cy != b.cy) return a.cy < b.cy;
        return a.edge < b.edge;
    });
    for (std::size_t s = 0; s < entries.size();) {
        std::size_t e = s;
        while (e < entries.size() && entries[e].cx == entries[s].cx && entries[e].cy == entries[s].cy)
            ++e;
        for (std::size_t i = s; i < e; ++i)
            for (std::size_t j = i + 1; j < e; ++j) {
                const std::size_t ei = entries[i].edge, ej = entries[j].edge;
                if (ei == ej) continue;
                const bool adjacent = (ei + 1) % m == ej || (ej + 1) % m == ei;
                if (adjacent) continue;
                if (segments_intersect(v[ei], v[(ei + 1) % m], v[ej], v[(ej + 1) % m])) return true;
            }
        s = e;
    }
    return false;
}

CurveState::CurveState(std::vector<Point2> vertices, double time) {
    if (vertices.size() < 16) throw ValidationError("CurveState: need at least 16 vertices");
    if (signed_area(vertices) < 0.0) std::reverse(vertices.begin(), vertices.end());
    if (self_intersects(vertices)) throw SelfIntersectionError("CurveState: polyline not simple");

    vertices_ = std::move(vertices);
    time_ = time;
    initial_positions_ = vertices_;

    CurveState tmp;  // geometry of the constructed polygon
    tmp.vertices_ = vertices_;
    const CurveGeometry geo = curve_geometry(tmp);
    initial_normals_ = geo.normal;
    initial_weights_ = geo.weight;
    gauss_weights_.resize(vertices_.size());
    for (std::size_t i = 0; i < vertices_.size(); ++i)
        gauss_weights_[i] = std::exp(-0.5 * (sq(vertices_[i][0]) + sq(vertices_[i][1])));
}

CurveState CurveState::circle(double radius, int m) {
    if (!(radius > 0.0)) throw ValidationError("circle: radius must be positive");
    std::vector<Point2> v(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double th = 2.0 * std::numbers::pi * i / m;
        v[static_cast<std::size_t>(i)] = {radius * std::cos(th), radius * std::sin(th)};
    }
    return CurveState(std::move(v));
}

CurveState CurveState::ellipse(double a, double b, int m) {
    if (!(a > 0.0) || !(b > 0.0)) throw ValidationError("ellipse: semi-axes must be positive");
    std::vector<Point2> v(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        const double th = 2.0 * std::numbers::pi * i / m;
        v[static_cast<std::size_t>(i)] = {a * std::cos(th), b * std::sin(th)};
    }
    return CurveState(std::move(v));
}

CurveGeometry curve_geometry(const CurveState& state) {
    const auto& v = state.vertices();
    const std::size_t m = v.size();
    const double diam = diameter_estimate(v);

    CurveGeometry geo;
    geo.normal.resize(m);
    geo.curvature.resize(m);
    geo.weight.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Point2& prev = v[(i + m - 1) % m];
        const Point2& cur = v[i];
        const Point2& next = v[(i + 1) % m];
        const Point2 e_prev = sub(cur, prev);
        const Point2 e_next = sub(next, cur);
        const double lp = len(e_prev), ln = len(e_next);
        if (lp < 1e-12 * diam || ln < 1e-12 * diam)
            throw DegenerateGeometryError("curve_geometry: degenerate edge");

        const Point2 chord = sub(next, prev);
        const double lc = len(chord);
        // inward normal: CCW rotation of the central-difference tangent
        geo.normal[i] = {-chord[1] / lc, chord[0] / lc};
        // circumscribed circle through the three vertices; exact on circles
        geo.curvature[i] = 2.0 * cross2(e_prev, e_next) / (lp * ln * lc);
        geo.weight[i] = 0.5 * (lp + ln);
    }
    return geo;
}

namespace {

struct QuadratureTerms {
    Vec h;   // curvature
    Vec c;   // <N(t), N(0)>
    Vec w;   // mode weights x gaussian factor
    CurveGeometry geo;
};

QuadratureTerms quadrature_terms(const CurveState& state, WeightMode mode) {
    QuadratureTerms q;
    q.geo = curve_geometry(state);
    const std::size_t m = state.size();
    q.h.resize(m);
    q.c.resize(m);
    q.w.resize(m);
    const auto& n0 = state.initial_normals();
    const Vec& w0 = state.initial_weights();
    const Vec& gauss = state.gauss_weights();
    for (std::size_t i = 0; i < m; ++i) {
        q.h[i] = q.geo.curvature[i];
        q.c[i] = q.geo.normal[i][0] * n0[i][0] + q.geo.normal[i][1] * n0[i][1];
        q.w[i] = (mode == WeightMode::frozen ? w0[i] : q.geo.weight[i]) * gauss[i];
    }
    return q;
}

double alpha_from_terms(const QuadratureTerms& q) {
    const std::size_t m = q.h.size();
    const double num = kernels::dot3(q.h.data(), q.c.data(), q.w.data(), m);
    const double den = kernels::dot(q.c.data(), q.w.data(), m);
    double total = 0.0;
    for (double w : q.w) total += std::abs(w);
    if (std::abs(den) < 1e-10 * total)
        throw DegenerateGeometryError("alpha: quadrature denominator vanished");
    return num / den;
}

}  // namespace

double alpha(const CurveState& state, WeightMode mode) {
    return alpha_from_terms(quadrature_terms(state, mode));
}

double weighted_volume(const CurveState& state, WeightMode mode) {
    const std::size_t m = state.size();
    Vec support(m), w(m);
    const auto& v = state.vertices();
    const auto& n0 = state.initial_normals();
    const Vec& gauss = state.gauss_weights();
    if (mode == WeightMode::frozen) {
        for (std::size_t i = 0; i < m; ++i) w[i] = state.initial_weights()[i] * gauss[i];
    } else {
        const CurveGeometry geo = curve_geometry(state);
        for (std::size_t i = 0; i < m; ++i) w[i] = geo.weight[i] * gauss[i];
    }
    for (std::size_t i = 0; i < m; ++i) support[i] = v[i][0] * n0[i][0] + v[i][1] * n0[i][1];
    return kernels::dot(support.data(), w.data(), m);
}

double weighted_area(const CurveState& state) {
    const CurveGeometry geo = curve_geometry(state);
    const auto& v = state.vertices();
    Vec gauss(state.size());
    for (std::size_t i = 0; i < state.size(); ++i)
        gauss[i] = std::exp(-0.5 * (sq(v[i][0]) + sq(v[i][1])));
    return kernels::dot(gauss.data(), geo.weight.data(), state.size());
}

CurveState step(const CurveState& state, double dt, WeightMode mode) {
    if (!(dt > 0.0)) throw ValidationError("step: dt must be positive");
    const QuadratureTerms q = quadrature_terms(state, mode);

    double min_edge = std::numeric_limits<double>::infinity();
    const auto& v = state.vertices();
    const std::size_t m = v.size();
    for (std::size_t i = 0; i < m; ++i) min_edge = std::min(min_edge, len(sub(v[(i + 1) % m], v[i])));
    const double bound = 0.25 * min_edge * min_edge;
    if (dt > bound)
        throw StabilityError("step: dt " + std::to_string(dt) + " exceeds stability bound " +
                             std::to_string(bound));

    const double a = alpha_from_terms(q);
    CurveState next = state;  // copies the frozen arrays
    for (std::size_t i = 0; i < m; ++i) {
        const double u = q.h[i] - a;
        next.vertices_[i][0] += dt * u * q.geo.normal[i][0];
        next.vertices_[i][1] += dt * u * q.geo.normal[i][1];
    }
    next.time_ = state.time() + dt;
    if (self_intersects(next.vertices_))
        throw SelfIntersectionError("step: curve self-intersected at t = " +
                                    std::to_string(next.time_));
    return next;
}

FlowDiagnostics run_flow(const CurveState& initial, double T, double dt, int record_every,
                         WeightMode mode) {
    if (!(T >= 0.0) || !(dt > 0.0) || record_every < 1)
        throw ValidationError("run_flow: need T >= 0, dt > 0, record_every >= 1");

    FlowDiagnostics diag;
    const double v0 = weighted_volume(initial, mode);

    const auto record = [&](const CurveState& s) {
        FlowRow row;
        row.t = s.time();
        const QuadratureTerms q = quadrature_terms(s, mode);
        row.alpha = alpha_from_terms(q);
        row.volume = weighted_volume(s, mode);
        row.area = weighted_area(s);
        double ms = 0.0;
        for (double h : q.h) ms = std::max(ms, std::abs(h - row.alpha));
        row.max_speed = ms;
        diag.rows.push_back(row);
        if (v0 != 0.0)
            diag.max_rel_volume_drift =
                std::max(diag.max_rel_volume_drift, std::abs(row.volume - v0) / std::abs(v0));
    };

    CurveState state = initial;
    record(state);
    const long long nsteps = static_cast<long long>(std::llround(T / dt));
    try {
        for (long long k = 0; k < nsteps; ++k) {
            state = step(state, dt, mode);
            if ((k + 1) % record_every == 0 || k + 1 == nsteps) record(state);
        }
    } catch (const std::runtime_error& e) {
        diag.halted = true;
        diag.halt_reason = e.what();
    }
    return diag;
}

}  // namespace lambdasurf
