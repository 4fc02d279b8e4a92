#include "lambdasurf/runners.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>

#include "lambdasurf/canonical.hpp"
#include "lambdasurf/diagnostics.hpp"
#include "lambdasurf/flow.hpp"
#include "lambdasurf/geometry.hpp"
#include "lambdasurf/graph_solver.hpp"
#include "lambdasurf/io.hpp"
#include "lambdasurf/operator_lab.hpp"
#include "lambdasurf/rng.hpp"

namespace lambdasurf {

using nlohmann::json;

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw ValidationError(msg);
}

double num(const json& j, const char* key) {
    require(j.contains(key) && j.at(key).is_number(), std::string("expected number: ") + key);
    return j.at(key).get<double>();
}

int integer(const json& j, const char* key) {
    require(j.contains(key) && j.at(key).is_number_integer(),
            std::string("expected integer: ") + key);
    return j.at(key).get<int>();
}

std::string str(const json& j, const char* key) {
    require(j.contains(key) && j.at(key).is_string(), std::string("expected string: ") + key);
    return j.at(key).get<std::string>();
}

// ---- shared config fragments ----------------------------------------------

json resolve_surface(const json& raw) {
    require(raw.is_object(), "surface must be an object");
    json s;
    const std::string kind = str(raw, "kind");
    s["kind"] = kind;
    if (kind == "sphere") {
        s["n"] = integer(raw, "n");
        s["r"] = num(raw, "r");
        s["orientation"] = raw.value("orientation", "inward");
    } else if (kind == "cylinder") {
        s["n"] = integer(raw, "n");
        s["k"] = integer(raw, "k");
        s["r"] = num(raw, "r");
        s["orientation"] = raw.value("orientation", "inward");
    } else if (kind == "plane") {
        s["normal"] = raw.at("normal");
        s["offset"] = raw.value("offset", 0.0);
    } else {
        throw ValidationError("surface.kind must be sphere, cylinder or plane");
    }
    if (s.contains("orientation"))
        require(s["orientation"] == "inward" || s["orientation"] == "outward",
                "orientation must be inward or outward");
    return s;
}

CanonicalSurface build_surface(const json& s) {
    const std::string kind = s.at("kind").get<std::string>();
    if (kind == "sphere") {
        return CanonicalSurface::sphere(s.at("n").get<int>(), s.at("r").get<double>(),
                                        s.at("orientation") == "inward" ? Orientation::inward
                                                                        : Orientation::outward);
    }
    if (kind == "cylinder") {
        return CanonicalSurface::cylinder(s.at("n").get<int>(), s.at("k").get<int>(),
                                          s.at("r").get<double>(),
                                          s.at("orientation") == "inward" ? Orientation::inward
                                                                          : Orientation::outward);
    }
    Vec normal;
    for (const auto& e : s.at("normal")) normal.push_back(e.get<double>());
    return CanonicalSurface::plane(std::move(normal), s.at("offset").get<double>());
}

json resolve_domain(const json& raw, int n) {
    require(raw.is_object(), "domain must be an object");
    json d;
    const std::string shape = str(raw, "shape");
    d["shape"] = shape;
    d["h"] = num(raw, "h");
    require(d["h"].get<double>() > 0.0, "domain.h must be positive");
    if (shape == "ball") {
        d["radius"] = num(raw, "radius");
        require(d["radius"].get<double>() > 0.0, "domain.radius must be positive");
    } else if (shape == "box") {
        d["lo"] = raw.at("lo");
        d["hi"] = raw.at("hi");
        require(d["lo"].size() == static_cast<std::size_t>(n) &&
                    d["hi"].size() == static_cast<std::size_t>(n),
                "domain.lo/hi must have length n");
    } else {
        throw ValidationError("domain.shape must be ball or box");
    }
    return d;
}

GridDomain build_domain(const json& d, int n) {
    if (d.at("shape") == "ball")
        return GridDomain::ball(n, d.at("radius").get<double>(), d.at("h").get<double>());
    if (n == 1)
        return GridDomain::box1d(d.at("lo")[0].get<double>(), d.at("hi")[0].get<double>(),
                                 d.at("h").get<double>());
    return GridDomain::box2d({d.at("lo")[0].get<double>(), d.at("lo")[1].get<double>()},
                             {d.at("hi")[0].get<double>(), d.at("hi")[1].get<double>()},
                             d.at("h").get<double>());
}

json resolve_boundary(const json& raw, int n) {
    require(raw.is_object(), "boundary must be an object");
    json b;
    const std::string kind = str(raw, "kind");
    b["kind"] = kind;
    if (kind == "zero") {
        // nothing else
    } else if (kind == "affine") {
        b["slope"] = raw.at("slope");
        require(b["slope"].size() == static_cast<std::size_t>(n), "boundary.slope must have length n");
        b["offset"] = raw.value("offset", 0.0);
    } else if (kind == "hemisphere") {
        b["r"] = num(raw, "r");
        require(b["r"].get<double>() > 0.0, "boundary.r must be positive");
    } else {
        throw ValidationError("boundary.kind must be zero, affine or hemisphere");
    }
    return b;
}

std::function<double(const Vec&)> build_boundary(const json& b) {
    const std::string kind = b.at("kind").get<std::string>();
    if (kind == "zero") return [](const Vec&) { return 0.0; };
    if (kind == "affine") {
        Vec slope;
        for (const auto& e : b.at("slope")) slope.push_back(e.get<double>());
        const double offset = b.at("offset").get<double>();
        return [slope, offset](const Vec& x) {
            double s = offset;
            for (std::size_t i = 0; i < x.size(); ++i) s += slope[i] * x[i];
            return s;
        };
    }
    const double r = b.at("r").get<double>();
    return [r](const Vec& x) { return hemisphere_value(r, x); };
}

void write_report(const RunContext& ctx, const std::string& command, const json& config,
                  const json& results) {
    json report;
    report["schema_version"] = kSchemaVersion;
    report["command"] = command;
    report["seed"] = ctx.seed;
    report["config"] = config;
    report["results"] = results;
    write_text(ctx.out_dir / "report.json", report.dump(2) + "\n");
    if (!ctx.quiet) std::cout << "report: " << (ctx.out_dir / "report.json").string() << "\n";
}

json report_of(const SolveReport& rep) {
    json r;
    r["iterations"] = rep.iterations;
    r["converged"] = rep.converged;
    r["final_residual_norm"] = rep.final_residual_norm;
    r["newton_decrements"] = rep.newton_decrements;
    return r;
}

// ---- verify-canonical ------------------------------------------------------

json resolve_verify_canonical(const json& raw) {
    json c;
    c["surface"] = resolve_surface(raw.at("surface"));
    c["count"] = raw.value("count", 500);
    require(c["count"].get<int>() >= 1, "count must be >= 1");
    return c;
}

int run_verify_canonical(const json& cfg, const RunContext& ctx) {
    const CanonicalSurface surface = build_surface(cfg.at("surface"));
    const int count = cfg.at("count").get<int>();
    const double lam = canonical_lambda(surface);
    const auto samples = sample_surface(surface, count, ctx.seed);

    double worst = 0.0;
    std::vector<Vec> rows;
    for (const auto& s : samples) {
        const double res = s.support + s.mean_curvature - lam;
        worst = std::max(worst, std::abs(res));
        Vec row;
        row.insert(row.end(), s.position.begin(), s.position.end());
        row.insert(row.end(), s.normal.begin(), s.normal.end());
        row.push_back(s.mean_curvature);
        row.push_back(s.support);
        row.push_back(res);
        rows.push_back(std::move(row));
    }
    std::vector<std::string> header;
    const int d = surface.ambient_dim;
    for (int i = 0; i < d; ++i) header.push_back("x" + std::to_string(i + 1));
    for (int i = 0; i < d; ++i) header.push_back("n" + std::to_string(i + 1));
    header.insert(header.end(), {"H", "support", "residual"});
    write_csv(ctx.out_dir / "samples.csv", header, rows);

    json results;
    results["lambda"] = lam;
    results["max_residual"] = worst;
    results["count"] = count;
    results["pass"] = worst <= 1e-12;
    write_report(ctx, "verify-canonical", cfg, results);
    return worst <= 1e-12 ? kExitOk : kExitInvariant;
}

// ---- solve-graph -----------------------------------------------------------

json resolve_solve_graph(const json& raw) {
    json c;
    c["n"] = integer(raw, "n");
    require(c["n"] == 1 || c["n"] == 2, "n must be 1 or 2");
    c["domain"] = resolve_domain(raw.at("domain"), c["n"].get<int>());
    c["lambda"] = num(raw, "lambda");
    c["boundary"] = resolve_boundary(raw.at("boundary"), c["n"].get<int>());
    c["tol"] = raw.value("tol", 1e-10);
    require(c["tol"].get<double>() > 0.0, "tol must be positive");
    c["max_iter"] = raw.value("max_iter", 50);
    require(c["max_iter"].get<int>() >= 1, "max_iter must be >= 1");
    return c;
}

int run_solve_graph(const json& cfg, const RunContext& ctx) {
    DirichletProblem p;
    p.domain = build_domain(cfg.at("domain"), cfg.at("n").get<int>());
    p.lambda = cfg.at("lambda").get<double>();
    p.boundary = build_boundary(cfg.at("boundary"));
    p.tol = cfg.at("tol").get<double>();
    p.max_iter = cfg.at("max_iter").get<int>();

    const SolveResult sol = solve_dirichlet(p);

    std::vector<Vec> rows;
    std::vector<std::string> header;
    for (int i = 0; i < p.domain.n; ++i) header.push_back("x" + std::to_string(i + 1));
    header.push_back("f");
    for (std::size_t node = 0; node < sol.field.values.size(); ++node) {
        if (p.domain.classify_flat(node) == NodeClass::exterior) continue;
        Vec row = p.domain.coords(node);
        row.push_back(sol.field.values[node]);
        rows.push_back(std::move(row));
    }
    write_csv(ctx.out_dir / "solution.csv", header, rows);

    json results;
    results["report"] = report_of(sol.report);
    results["geometry_cross_check"] = residual_geometry_discrepancy(sol.field, p.lambda);
    write_report(ctx, "solve-graph", cfg, results);
    return sol.report.converged ? kExitOk : kExitNonConvergence;
}

// ---- bernstein --------------------------------------------------------------

json resolve_bernstein(const json& raw) {
    json c;
    c["lambda"] = num(raw, "lambda");
    c["radii"] = raw.at("radii");
    require(c["radii"].is_array() && !c["radii"].empty(), "radii must be a nonempty array");
    c["slope"] = raw.at("slope");
    require(c["slope"].is_array() && (c["slope"].size() == 1 || c["slope"].size() == 2),
            "slope must have length 1 or 2");
    c["h"] = num(raw, "h");
    c["tol"] = raw.value("tol", 1e-10);
    c["max_iter"] = raw.value("max_iter", 50);
    return c;
}

int run_bernstein(const json& cfg, const RunContext& ctx) {
    std::vector<double> radii;
    for (const auto& r : cfg.at("radii")) radii.push_back(r.get<double>());
    Vec slope;
    for (const auto& s : cfg.at("slope")) slope.push_back(s.get<double>());

    const ExpandingBallResult res =
        expanding_ball_experiment(cfg.at("lambda").get<double>(), radii, slope,
                                  cfg.at("h").get<double>(), cfg.at("tol").get<double>(),
                                  cfg.at("max_iter").get<int>());

    std::vector<Vec> rows;
    json jrows = json::array();
    int converged_count = 0;
    for (const auto& row : res.rows) {
        rows.push_back({row.radius, row.sup_hess, row.sup_grad_dev,
                        static_cast<double>(row.report.iterations),
                        row.report.converged ? 1.0 : 0.0, row.report.final_residual_norm});
        json jr;
        jr["radius"] = row.radius;
        jr["sup_hess"] = row.sup_hess;
        jr["sup_grad_dev"] = row.sup_grad_dev;
        jr["report"] = report_of(row.report);
        jrows.push_back(jr);
        if (row.report.converged) ++converged_count;
    }
    write_csv(ctx.out_dir / "rows.csv",
              {"radius", "sup_hess", "sup_grad_dev", "iterations", "converged", "final_residual"},
              rows);

    json results;
    results["rows"] = jrows;
    results["converged_radii"] = converged_count;
    write_report(ctx, "bernstein", cfg, results);
    return converged_count > 0 ? kExitOk : kExitNonConvergence;
}

// ---- flow --------------------------------------------------------------------

json resolve_flow(const json& raw) {
    json c;
    const json& curve = raw.at("curve");
    const std::string kind = str(curve, "kind");
    json jc;
    jc["kind"] = kind;
    if (kind == "circle") {
        jc["radius"] = num(curve, "radius");
        jc["m"] = integer(curve, "m");
    } else if (kind == "ellipse") {
        jc["a"] = num(curve, "a");
        jc["b"] = num(curve, "b");
        jc["m"] = integer(curve, "m");
    } else if (kind == "polyline") {
        jc["points"] = curve.at("points");
        require(jc["points"].is_array() && jc["points"].size() >= 16,
                "polyline needs >= 16 points");
    } else {
        throw ValidationError("curve.kind must be circle, ellipse or polyline");
    }
    c["curve"] = jc;
    c["dt"] = num(raw, "dt");
    require(c["dt"].get<double>() > 0.0, "dt must be positive");
    c["T"] = num(raw, "T");
    require(c["T"].get<double>() >= 0.0, "T must be >= 0");
    c["record_every"] = raw.value("record_every", 50);
    require(c["record_every"].get<int>() >= 1, "record_every must be >= 1");
    c["weight_mode"] = raw.value("weight_mode", "frozen");
    require(c["weight_mode"] == "frozen" || c["weight_mode"] == "current",
            "weight_mode must be frozen or current");
    return c;
}

CurveState build_curve(const json& jc) {
    const std::string kind = jc.at("kind").get<std::string>();
    if (kind == "circle")
        return CurveState::circle(jc.at("radius").get<double>(), jc.at("m").get<int>());
    if (kind == "ellipse")
        return CurveState::ellipse(jc.at("a").get<double>(), jc.at("b").get<double>(),
                                   jc.at("m").get<int>());
    std::vector<Point2> pts;
    for (const auto& p : jc.at("points")) pts.push_back({p[0].get<double>(), p[1].get<double>()});
    return CurveState(std::move(pts));
}

int run_flow_cmd(const json& cfg, const RunContext& ctx) {
    const CurveState initial = build_curve(cfg.at("curve"));
    const WeightMode mode =
        cfg.at("weight_mode") == "frozen" ? WeightMode::frozen : WeightMode::current;
    const FlowDiagnostics diag = run_flow(initial, cfg.at("T").get<double>(),
                                          cfg.at("dt").get<double>(),
                                          cfg.at("record_every").get<int>(), mode);

    std::vector<Vec> rows;
    for (const auto& r : diag.rows) rows.push_back({r.t, r.alpha, r.volume, r.area, r.max_speed});
    write_csv(ctx.out_dir / "diagnostics.csv", {"t", "alpha", "V", "A", "max_speed"}, rows);

    json results;
    results["max_rel_volume_drift"] = diag.max_rel_volume_drift;
    results["halted"] = diag.halted;
    results["halt_reason"] = diag.halt_reason;
    results["rows_recorded"] = diag.rows.size();
    if (!diag.rows.empty()) {
        results["final_t"] = diag.rows.back().t;
        results["final_volume"] = diag.rows.back().volume;
    }
    write_report(ctx, "flow", cfg, results);
    return diag.halted ? kExitInvariant : kExitOk;
}

// ---- operator-check ------------------------------------------------------------

json resolve_operator_check(const json& raw) {
    json c;
    const json& field = raw.at("field");
    const std::string kind = str(field, "kind");
    json jf;
    jf["kind"] = kind;
    if (kind == "hemisphere") {
        jf["n"] = integer(field, "n");
        require(jf["n"] == 1 || jf["n"] == 2, "field.n must be 1 or 2");
        jf["r"] = num(field, "r");
        jf["ball_radius"] = field.value("ball_radius", jf["r"].get<double>() / 2.0);
        jf["h"] = num(field, "h");
    } else if (kind == "affine") {
        jf["slope"] = field.at("slope");
        require(jf["slope"].size() == 1 || jf["slope"].size() == 2,
                "field.slope must have length 1 or 2");
        jf["ball_radius"] = num(field, "ball_radius");
        jf["h"] = num(field, "h");
    } else if (kind == "solve") {
        jf["problem"] = resolve_solve_graph(field.at("problem"));
    } else {
        throw ValidationError("field.kind must be hemisphere, affine or solve");
    }
    c["field"] = jf;
    if (kind == "hemisphere") {
        const double r = jf["r"].get<double>();
        const int n = jf["n"].get<int>();
        c["lambda"] = raw.value("lambda", hemisphere_lambda(r, n));
    } else if (kind == "solve") {
        c["lambda"] = jf["problem"]["lambda"];
    } else {
        c["lambda"] = num(raw, "lambda");
    }
    c["precond_tol"] = raw.value("precond_tol", 1e-5);
    c["radii"] = raw.value("radii", json::array({1.0, 2.0, 4.0}));
    c["checks"] = raw.value("checks", json::array({"eigenvalue", "key-inequality", "identity"}));
    for (const auto& ch : c["checks"])
        require(ch == "eigenvalue" || ch == "key-inequality" || ch == "identity",
                "checks entries must be eigenvalue, key-inequality or identity");
    return c;
}

int run_operator_check(const json& cfg, const RunContext& ctx) {
    const json& jf = cfg.at("field");
    const double lambda = cfg.at("lambda").get<double>();
    ScalarField field;
    const std::string kind = jf.at("kind").get<std::string>();
    if (kind == "hemisphere") {
        const double r = jf.at("r").get<double>();
        const GridDomain dom = GridDomain::ball(jf.at("n").get<int>(),
                                                jf.at("ball_radius").get<double>(),
                                                jf.at("h").get<double>());
        field = ScalarField::sample(dom, [r](const Vec& x) { return hemisphere_value(r, x); });
    } else if (kind == "affine") {
        Vec slope;
        for (const auto& s : jf.at("slope")) slope.push_back(s.get<double>());
        const double offset = lambda * std::sqrt(1.0 + norm2_sq(slope));
        const GridDomain dom = GridDomain::ball(static_cast<int>(slope.size()),
                                                jf.at("ball_radius").get<double>(),
                                                jf.at("h").get<double>());
        field = ScalarField::sample(dom, [&slope, offset](const Vec& x) {
            double s = offset;
            for (std::size_t i = 0; i < x.size(); ++i) s += slope[i] * x[i];
            return s;
        });
    } else {
        const json& jp = jf.at("problem");
        DirichletProblem p;
        p.domain = build_domain(jp.at("domain"), jp.at("n").get<int>());
        p.lambda = jp.at("lambda").get<double>();
        p.boundary = build_boundary(jp.at("boundary"));
        p.tol = jp.at("tol").get<double>();
        p.max_iter = jp.at("max_iter").get<int>();
        SolveResult sol = solve_dirichlet(p);
        if (!sol.report.converged) {
            json results;
            results["solver"] = report_of(sol.report);
            write_report(ctx, "operator-check", cfg, results);
            return kExitNonConvergence;
        }
        field = std::move(sol.field);
    }

    json results;
    int exit = kExitOk;
    for (const auto& jch : cfg.at("checks")) {
        const std::string ch = jch.get<std::string>();
        if (ch == "eigenvalue") {
            std::vector<double> radii;
            for (const auto& r : cfg.at("radii")) radii.push_back(r.get<double>());
            const auto rep = min_metric_eigenvalue_condition(field, lambda, radii);
            json je;
            je["mu_min"] = rep.mu_min;
            je["radii"] = rep.radii;
            je["margins"] = rep.margins;
            je["condition_radius"] = condition_radius(lambda, field.domain.n);
            results["eigenvalue"] = je;
        } else if (ch == "key-inequality") {
            const auto rep = key_inequality_check(field, lambda, cfg.at("precond_tol").get<double>());
            json jk;
            jk["min_slack"] = rep.min_slack;
            jk["eps_h"] = rep.eps_h;
            jk["nodes_checked"] = rep.nodes_checked;
            jk["max_residual"] = rep.max_residual;
            jk["pass"] = rep.min_slack >= -rep.eps_h;
            results["key_inequality"] = jk;
            if (rep.min_slack < -rep.eps_h) exit = kExitInvariant;

            std::vector<Vec> rows;
            std::vector<std::string> header;
            for (int i = 0; i < field.domain.n; ++i) header.push_back("x" + std::to_string(i + 1));
            header.push_back("slack");
            for (std::size_t k = 0; k < rep.nodes.size(); ++k) {
                Vec row = field.domain.coords(rep.nodes[k]);
                row.push_back(rep.slack[k]);
                rows.push_back(std::move(row));
            }
            write_csv(ctx.out_dir / "slack.csv", header, rows);
        } else {
            const auto rep = identity_cross_check(field, lambda, cfg.at("precond_tol").get<double>());
            json ji;
            ji["max_discrepancy"] = rep.max_discrepancy;
            ji["direct_vs_expanded"] = rep.direct_vs_expanded;
            ji["expanded_vs_final"] = rep.expanded_vs_final;
            ji["nodes_checked"] = rep.nodes_checked;
            results["identity"] = ji;
        }
    }
    write_report(ctx, "operator-check", cfg, results);
    return exit;
}

// ---- gauss-map -------------------------------------------------------------------

json resolve_gauss_map(const json& raw) {
    json c;
    const json& nm = raw.at("normals");
    const std::string kind = str(nm, "kind");
    json jn;
    jn["kind"] = kind;
    c["ambient_dim"] = raw.value("ambient_dim", 3);
    require(c["ambient_dim"].get<int>() >= 2, "ambient_dim must be >= 2");
    if (kind == "entire-graph") {
        jn["count"] = nm.value("count", 200);
        jn["max_slope"] = nm.value("max_slope", 2.0);
    } else if (kind == "great-circle") {
        jn["count"] = nm.value("count", 64);
    } else if (kind == "antipodal") {
        // two fixed normals
    } else if (kind == "sphere") {
        jn["count"] = nm.value("count", 500);
    } else if (kind == "cap") {
        jn["polar_angle_deg"] = nm.value("polar_angle_deg", 80.0);
        jn["count"] = nm.value("count", 200);
        require(c["ambient_dim"] == 3, "cap normals are defined for ambient_dim 3");
    } else if (kind == "explicit") {
        jn["vectors"] = nm.at("vectors");
        require(jn["vectors"].is_array() && !jn["vectors"].empty(),
                "normals.vectors must be a nonempty array");
    } else {
        throw ValidationError(
            "normals.kind must be entire-graph, great-circle, antipodal, sphere, cap or explicit");
    }
    c["normals"] = jn;
    c["tol"] = raw.value("tol", 1e-6);
    c["half_equator_eps"] = raw.value("half_equator_eps", 1e-9);
    return c;
}

std::vector<Vec> build_normals(const json& cfg, std::uint64_t seed) {
    const json& jn = cfg.at("normals");
    const int dim = cfg.at("ambient_dim").get<int>();
    const std::string kind = jn.at("kind").get<std::string>();
    Rng rng(seed);
    std::vector<Vec> out;
    if (kind == "entire-graph") {
        const int count = jn.at("count").get<int>();
        const double max_slope = jn.at("max_slope").get<double>();
        for (int i = 0; i < count; ++i) {
            Vec grad = rng.unit_vector(dim - 1);
            const double scale = max_slope * std::pow(rng.uniform(), 1.0 / (dim - 1));
            for (auto& g : grad) g *= scale;
            out.push_back(unit_normal(grad));
        }
    } else if (kind == "great-circle") {
        const int count = jn.at("count").get<int>();
        for (int i = 0; i < count; ++i) {
            const double th = 2.0 * std::numbers::pi * i / count;
            Vec n(static_cast<std::size_t>(dim), 0.0);
            n[0] = std::cos(th);
            n[1] = std::sin(th);
            out.push_back(std::move(n));
        }
    } else if (kind == "antipodal") {
        Vec p(static_cast<std::size_t>(dim), 0.0), q(static_cast<std::size_t>(dim), 0.0);
        p[0] = 1.0;
        q[0] = -1.0;
        out.push_back(std::move(p));
        out.push_back(std::move(q));
    } else if (kind == "sphere") {
        const int count = jn.at("count").get<int>();
        for (int i = 0; i < count; ++i) out.push_back(rng.unit_vector(dim));
    } else if (kind == "cap") {
        const int count = jn.at("count").get<int>();
        const double zmin = std::cos(jn.at("polar_angle_deg").get<double>() * std::numbers::pi / 180.0);
        for (int i = 0; i < count; ++i) {
            const double z = rng.uniform(zmin, 1.0);
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double th = rng.uniform(0.0, 2.0 * std::numbers::pi);
            out.push_back(Vec{r * std::cos(th), r * std::sin(th), z});
        }
    } else {
        for (const auto& v : jn.at("vectors")) {
            Vec n;
            for (const auto& e : v) n.push_back(e.get<double>());
            const double len = norm2(n);
            require(len > 0.0, "explicit normal must be nonzero");
            for (auto& e : n) e /= len;
            out.push_back(std::move(n));
        }
    }
    return out;
}

json cert_json(const HemisphereCertificate& c) {
    json j;
    j["direction"] = c.direction;
    j["margin"] = c.margin;
    j["verdict"] = verdict_name(c.verdict);
    j["normal_rank"] = c.normal_rank;
    return j;
}

int run_gauss_map(const json& cfg, const RunContext& ctx) {
    const std::vector<Vec> normals = build_normals(cfg, ctx.seed);
    const double tol = cfg.at("tol").get<double>();

    const HemisphereCertificate open_cert = open_hemisphere_certificate(normals, tol);
    const HemisphereCertificate closed_cert = closed_hemisphere_certificate(normals, tol);
    const RegionTestReport region = half_equator_test(normals, cfg.at("half_equator_eps").get<double>());

    json results;
    results["open"] = cert_json(open_cert);
    results["closed"] = cert_json(closed_cert);
    results["closed"]["contained"] = closed_cert.verdict != HemisphereVerdict::neither;
    json jr;
    jr["violations"] = region.violations;
    results["half_equator"] = jr;
    results["normal_count"] = normals.size();

    std::vector<Vec> rows;
    for (std::size_t k = 0; k < region.witnesses.size(); ++k) {
        Vec row{static_cast<double>(region.witness_indices[k])};
        row.insert(row.end(), region.witnesses[k].begin(), region.witnesses[k].end());
        rows.push_back(std::move(row));
    }
    std::vector<std::string> header{"index"};
    for (int i = 0; i < cfg.at("ambient_dim").get<int>(); ++i)
        header.push_back("n" + std::to_string(i + 1));
    write_csv(ctx.out_dir / "witnesses.csv", header, rows);

    write_report(ctx, "gauss-map", cfg, results);
    return kExitOk;
}

// ---- area-growth -----------------------------------------------------------------

json resolve_area_growth(const json& raw) {
    json c;
    c["surface"] = resolve_surface(raw.at("surface"));
    c["radii"] = raw.at("radii");
    require(c["radii"].is_array() && c["radii"].size() >= 2, "radii must have >= 2 entries");
    return c;
}

int run_area_growth(const json& cfg, const RunContext& ctx) {
    const CanonicalSurface surface = build_surface(cfg.at("surface"));
    std::vector<double> radii;
    for (const auto& r : cfg.at("radii")) radii.push_back(r.get<double>());
    const GrowthReport rep = measured_growth(surface, radii);

    std::vector<Vec> rows;
    for (std::size_t i = 0; i < rep.radii.size(); ++i)
        rows.push_back({rep.radii[i], rep.areas[i]});
    write_csv(ctx.out_dir / "growth.csv", {"r", "area"}, rows);

    json results;
    results["fitted_exponent"] = rep.fitted_exponent;
    results["bound_exponent"] = rep.bound_exponent;
    results["infimum_source"] = rep.infimum_source;
    results["within_bound"] = rep.fitted_exponent <= rep.bound_exponent + 0.05;
    write_report(ctx, "area-growth", cfg, results);
    return rep.fitted_exponent <= rep.bound_exponent + 0.05 ? kExitOk : kExitInvariant;
}

}  // namespace

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names{"verify-canonical", "solve-graph", "bernstein",
                                                "flow", "operator-check", "gauss-map",
                                                "area-growth"};
    return names;
}

json resolve_config(const std::string& command, const json& raw) {
    try {
        if (command == "verify-canonical") return resolve_verify_canonical(raw);
        if (command == "solve-graph") return resolve_solve_graph(raw);
        if (command == "bernstein") return resolve_bernstein(raw);
        if (command == "flow") return resolve_flow(raw);
        if (command == "operator-check") return resolve_operator_check(raw);
        if (command == "gauss-map") return resolve_gauss_map(raw);
        if (command == "area-growth") return resolve_area_growth(raw);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config error: ") + e.what());
    }
    throw ValidationError("unknown command: " + command);
}

int run_command(const std::string& command, const json& config, const RunContext& ctx) {
    std::filesystem::create_directories(ctx.out_dir);
    if (command == "verify-canonical") return run_verify_canonical(config, ctx);
    if (command == "solve-graph") return run_solve_graph(config, ctx);
    if (command == "bernstein") return run_bernstein(config, ctx);
    if (command == "flow") return run_flow_cmd(config, ctx);
    if (command == "operator-check") return run_operator_check(config, ctx);
    if (command == "gauss-map") return run_gauss_map(config, ctx);
    if (command == "area-growth") return run_area_growth(config, ctx);
    throw ValidationError("unknown command: " + command);
}

}  // namespace lambdasurf
