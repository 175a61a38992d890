#include "sweepkit/funnel.hpp"

#include "sweepkit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sweepkit {

double ContactCurve::image_length() const
{
    double len = 0.0;
    for (std::size_t i = 1; i < image.size(); ++i) len += (image[i] - image[i - 1]).norm();
    if (closed && image.size() > 2) len += (image.front() - image.back()).norm();
    return len;
}

namespace {

double gradient_floor(const SweepScene& scene)
{
    return 1e-12 * std::max(scene.velocity_scale(), 1e-300);
}

}  // namespace

std::pair<Vec3, Vec3> frame(const SweepScene& scene, const SweepEval& e)
{
    const double g2 = e.fu * e.fu + e.fv * e.fv;
    if (!(std::sqrt(g2) > gradient_floor(scene))) {
        std::ostringstream msg;
        msg << "(fu, fv) vanishes at (u,v,t) = (" << e.u << ", " << e.v << ", " << e.t << ")";
        throw FrameDegeneracyError(msg.str());
    }
    const Vec3 alpha(-e.fu * e.ft, -e.fv * e.ft, g2);
    const Vec3 beta(-e.fv, e.fu, 0.0);
    return {alpha, beta};
}

std::pair<Vec3, Vec3> frame(const SweepScene& scene, const FunnelPoint& fp)
{
    return frame(scene, fp.eval);
}

FunnelPoint make_funnel_point(const SweepScene& scene, const SweepEval& e)
{
    FunnelPoint fp;
    fp.u = e.u;
    fp.v = e.v;
    fp.t = e.t;
    fp.eval = e;
    std::tie(fp.alpha, fp.beta) = frame(scene, e);
    return fp;
}

namespace {

/// Newton on f at fixed t along (fu, fv). Returns the converged (unwrapped) iterate.
struct Projection {
    bool ok = false;
    Vec2 uv;
    SweepEval eval;
    double residual = 0.0;
};

Projection project(const SweepScene& scene, Vec2 uv, double t, int max_iterations)
{
    const double tol = scene.funnel_tolerance();
    const double tight = 1e-4 * tol;
    const double floor = gradient_floor(scene);
    Projection out;
    SweepEval e = evaluate_unchecked(scene, uv.x(), uv.y(), t);
    for (int it = 0; it < max_iterations; ++it) {
        if (std::abs(e.f) <= tight) break;
        const Vec2 g = e.grad_uv();
        const double g2 = g.squaredNorm();
        if (!(std::sqrt(g2) > floor)) break;
        const Vec2 step = -(e.f / g2) * g;
        uv += step;
        e = evaluate_unchecked(scene, uv.x(), uv.y(), t);
        if (step.norm() <= 1e-15 * (1.0 + uv.norm())) break;
    }
    out.uv = uv;
    out.eval = e;
    out.residual = std::abs(e.f);
    out.ok = std::isfinite(e.f) && out.residual <= tol;
    return out;
}

SweepEval eval_at(const SweepScene& scene, const Vec2& uv, double t)
{
    return evaluate_unchecked(scene, uv.x(), uv.y(), t);
}

}  // namespace

FunnelPoint snap_to_funnel(const SweepScene& scene, double u, double v, double t,
                           int max_iterations)
{
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("time outside [0,1]");
    Projection p;
    try {
        p = project(scene, Vec2(u, v), t, max_iterations);
    } catch (const DegenerateSurfaceError&) {
        throw ConvergenceError("funnel snap hit an irregular surface point", Vec2(u, v), INFINITY);
    }
    if (!p.ok)
        throw ConvergenceError("funnel snap did not converge", p.uv, p.residual);
    const Vec2 uv = scene.domain().wrap(p.uv);
    if (!scene.domain().contains(uv.x(), uv.y())) {
        std::ostringstream msg;
        msg << "funnel snap left the domain at (" << uv.x() << ", " << uv.y() << ")";
        throw DomainError(msg.str());
    }
    return make_funnel_point(scene, evaluate(scene, uv.x(), uv.y(), t));
}

// ---------------------------------------------------------------------------
// Grid scan

namespace {

struct Edge {
    Vec2 a, b;  // f(a) and f(b) have opposite signs
    double fa, fb;
};

struct GridScan {
    std::vector<Edge> v_edges;  // along v
    std::vector<Edge> u_edges;  // along u
    double max_abs_f = 0.0;
    double cell = 0.0;  // cell diagonal
};

GridScan scan(const SweepScene& scene, double t, int grid)
{
    if (grid < 2) throw PreconditionError("grid resolution must be at least 2");
    const ParamDomain& d = scene.domain();
    const int nu = grid + (d.periodic_u ? 0 : 1);
    const int nv = grid + (d.periodic_v ? 0 : 1);
    const double du = (d.u1 - d.u0) / grid;
    const double dv = (d.v1 - d.v0) / grid;
    auto node = [&](int i, int j) { return Vec2(d.u0 + du * i, d.v0 + dv * j); };

    std::vector<double> f(static_cast<std::size_t>(nu * nv));
    GridScan out;
    out.cell = std::hypot(du, dv);
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            const Vec2 p = node(i, j);
            const double val = eval_at(scene, p, t).f;
            f[static_cast<std::size_t>(i * nv + j)] = val;
            out.max_abs_f = std::max(out.max_abs_f, std::abs(val));
        }
    }
    auto at = [&](int i, int j) { return f[static_cast<std::size_t>(i * nv + j)]; };
    auto differ = [](double a, double b) { return (a < 0.0) != (b < 0.0); };

    for (int i = 0; i < nu; ++i) {
        const int jmax = d.periodic_v ? nv : nv - 1;
        for (int j = 0; j < jmax; ++j) {
            const int j2 = (j + 1) % nv;
            if (differ(at(i, j), at(i, j2)))
                out.v_edges.push_back({node(i, j), node(i, j) + Vec2(0.0, dv), at(i, j), at(i, j2)});
        }
    }
    for (int j = 0; j < nv; ++j) {
        const int imax = d.periodic_u ? nu : nu - 1;
        for (int i = 0; i < imax; ++i) {
            const int i2 = (i + 1) % nu;
            if (differ(at(i, j), at(i2, j)))
                out.u_edges.push_back({node(i, j), node(i, j) + Vec2(du, 0.0), at(i, j), at(i2, j)});
        }
    }
    return out;
}

void check_nondegenerate(const SweepScene& scene, const GridScan& g)
{
    if (!(g.max_abs_f > scene.funnel_tolerance()) || scene.velocity_scale() == 0.0)
        throw DegenerateSweepError("f vanishes identically: the sweep is degenerate");
}

FunnelPoint seed_from_edge(const SweepScene& scene, const Edge& e, double t)
{
    Vec2 a = e.a, b = e.b;
    double fa = e.fa;
    for (int it = 0; it < 60; ++it) {
        const Vec2 mid = 0.5 * (a + b);
        const double fm = eval_at(scene, mid, t).f;
        if ((fm < 0.0) == (fa < 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    const Vec2 mid = 0.5 * (a + b);
    return snap_to_funnel(scene, mid.x(), mid.y(), t);
}

void require_regular(const SweepScene& scene, const FunnelPoint& fp)
{
    if (!(fp.eval.grad().norm() > gradient_floor(scene))) {
        std::ostringstream msg;
        msg << "grad f vanishes at funnel point (" << fp.u << ", " << fp.v << ", " << fp.t << ")";
        throw DegenerateSweepError(msg.str());
    }
}

}  // namespace

FunnelPoint find_seed(const SweepScene& scene, double t, int grid)
{
    if (!(t >= 0.0 && t <= 1.0)) throw DomainError("time outside [0,1]");
    const GridScan g = scan(scene, t, grid);
    check_nondegenerate(scene, g);
    std::string last_error;
    for (const auto* edges : {&g.v_edges, &g.u_edges}) {
        for (const Edge& e : *edges) {
            try {
                FunnelPoint fp = seed_from_edge(scene, e, t);
                require_regular(scene, fp);
                return fp;
            } catch (const ConvergenceError& ex) {
                last_error = ex.what();
            } catch (const DomainError& ex) {
                last_error = ex.what();
            } catch (const FrameDegeneracyError& ex) {
                last_error = ex.what();
            }
        }
    }
    std::ostringstream msg;
    msg << "no sign change of f at t = " << t << " on a " << grid << "x" << grid << " grid";
    if (!last_error.empty()) msg << " (last failure: " << last_error << ")";
    throw NotFoundError(msg.str());
}

// ---------------------------------------------------------------------------
// Tracing

namespace {

enum class MarchEnd { closed, boundary, failed };

struct March {
    std::vector<FunnelPoint> points;
    MarchEnd end = MarchEnd::failed;
    std::string error;
};

double segment_distance(const Vec2& a, const Vec2& b)
{
    // Distance from the origin to segment [a, b].
    const Vec2 ab = b - a;
    const double len2 = ab.squaredNorm();
    const double s = len2 > 0.0 ? std::clamp(-a.dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (a + s * ab).norm();
}

/// First point where the segment x -> y leaves the non-periodic domain, moved onto f = 0 along
/// the boundary line.
std::optional<FunnelPoint> boundary_hit(const SweepScene& scene, const Vec2& x, const Vec2& y,
                                        double t)
{
    const ParamDomain& d = scene.domain();
    double s_hit = 2.0;
    int axis = -1;
    double value = 0.0;
    auto consider = [&](int ax, double lo, double hi) {
        const double a = x[ax], b = y[ax];
        if (b > hi && b != a) {
            const double s = (hi - a) / (b - a);
            if (s < s_hit) { s_hit = s; axis = ax; value = hi; }
        }
        if (b < lo && b != a) {
            const double s = (lo - a) / (b - a);
            if (s < s_hit) { s_hit = s; axis = ax; value = lo; }
        }
    };
    if (!d.periodic_u) consider(0, d.u0, d.u1);
    if (!d.periodic_v) consider(1, d.v0, d.v1);
    if (axis < 0) return std::nullopt;

    Vec2 p = x + std::clamp(s_hit, 0.0, 1.0) * (y - x);
    p[axis] = value;
    const int free_axis = 1 - axis;
    const double tol = scene.funnel_tolerance();
    for (int it = 0; it < 50; ++it) {
        const SweepEval e = eval_at(scene, p, t);
        if (std::abs(e.f) <= 1e-4 * tol) break;
        const double g = e.grad_uv()[free_axis];
        if (!(std::abs(g) > gradient_floor(scene))) break;
        const double step = -e.f / g;
        p[free_axis] += step;
        if (std::abs(step) <= 1e-15 * (1.0 + std::abs(p[free_axis]))) break;
    }
    const SweepEval e = eval_at(scene, p, t);
    const Vec2 w = d.wrap(p);
    if (!(std::abs(e.f) <= tol) || !d.contains(w.x(), w.y())) return std::nullopt;
    return make_funnel_point(scene, evaluate(scene, w.x(), w.y(), t));
}

bool outside(const ParamDomain& d, const Vec2& uv)
{
    const Vec2 w = d.wrap(uv);
    return !d.contains(w.x(), w.y());
}

March march(const SweepScene& scene, double t, const FunnelPoint& seed, double direction,
            double step, const TraceOptions& opt)
{
    const ParamDomain& d = scene.domain();
    March out;
    out.points.push_back(seed);
    Vec2 x = seed.uv();           // unwrapped running position
    SweepEval ex = seed.eval;
    Vec2 heading = Vec2::Zero();

    while (out.points.size() < opt.max_points) {
        Vec2 tangent(-ex.fv, ex.fu);
        const double tn = tangent.norm();
        if (!(tn > gradient_floor(scene))) {
            out.error = "frame degeneracy: (fu, fv) vanishes during the trace";
            return out;
        }
        tangent /= tn;
        // Keep the marching sense: beta flips where the pcurve crosses itself.
        if (out.points.size() == 1) {
            tangent *= direction;
        } else if (tangent.dot(heading) < 0.0) {
            tangent = -tangent;
        }

        double h = step;
        Projection next;
        bool accepted = false;
        for (int attempt = 0; attempt < 6 && !accepted; ++attempt, h *= 0.5) {
            try {
                next = project(scene, x + h * tangent, t, opt.max_corrector_iterations);
            } catch (const DegenerateSurfaceError&) {
                continue;
            }
            const Vec2 moved = next.uv - x;
            accepted = next.ok && moved.norm() <= 2.0 * h && moved.dot(tangent) > 0.0;
        }
        if (!accepted) {
            std::ostringstream msg;
            msg << "corrector diverged near (u,v) = (" << x.x() << ", " << x.y() << ") at t = " << t;
            out.error = msg.str();
            return out;
        }

        const Vec2 moved = next.uv - x;
        heading = moved.normalized();
        if (outside(d, next.uv)) {
            if (auto hit = boundary_hit(scene, x, next.uv, t)) {
                if (d.delta(out.points.back().uv(), hit->uv()).norm() > 1e-12 * d.diagonal())
                    out.points.push_back(*hit);
                out.end = MarchEnd::boundary;
            } else {
                out.error = "could not place the boundary point of an open contact curve";
            }
            return out;
        }

        if (static_cast<int>(out.points.size()) >= opt.min_steps_before_closure &&
            segment_distance(d.delta(seed.uv(), x), d.delta(seed.uv(), x) + moved) <= 0.5 * step) {
            out.end = MarchEnd::closed;
            return out;
        }

        const Vec2 w = d.wrap(next.uv);
        out.points.push_back(make_funnel_point(scene, evaluate(scene, w.x(), w.y(), t)));
        ex = out.points.back().eval;
        x = w;
    }
    out.error = "trace exceeded the maximum number of points";
    return out;
}

void fill_image(ContactCurve& c)
{
    c.image.clear();
    c.image.reserve(c.points.size());
    for (const auto& p : c.points) c.image.push_back(p.eval.sigma);
}

}  // namespace

ContactCurve trace_pcurve(const SweepScene& scene, double t, const FunnelPoint& seed,
                          const TraceOptions& options)
{
    const double step = options.step > 0.0 ? options.step : scene.default_step();
    if (std::abs(seed.eval.f) > scene.funnel_tolerance())
        throw PreconditionError("trace seed is not on the funnel");

    ContactCurve curve;
    curve.t = t;
    March fwd = march(scene, t, seed, +1.0, step, options);
    if (fwd.end == MarchEnd::closed) {
        curve.points = std::move(fwd.points);
        curve.closed = true;
        fill_image(curve);
        return curve;
    }
    if (fwd.end == MarchEnd::failed) {
        curve.points = std::move(fwd.points);
        fill_image(curve);
        throw TraceError(fwd.error, std::move(curve));
    }

    March bwd = march(scene, t, seed, -1.0, step, options);
    curve.points.assign(bwd.points.rbegin(), bwd.points.rend());
    curve.points.insert(curve.points.end(), fwd.points.begin() + 1, fwd.points.end());
    fill_image(curve);
    if (bwd.end == MarchEnd::failed) throw TraceError(bwd.error, std::move(curve));
    if (bwd.end == MarchEnd::closed)
        throw TraceError("open trace closed on itself in reverse direction", std::move(curve));
    return curve;
}

// ---------------------------------------------------------------------------
// Slices

FunnelSlice trace_slice(const SweepScene& scene, double t, const SampleOptions& options)
{
    FunnelSlice slice;
    slice.t = t;
    const double step = options.step > 0.0 ? options.step : scene.default_step();
    const ParamDomain& d = scene.domain();

    GridScan g;
    try {
        g = scan(scene, t, options.grid);
        check_nondegenerate(scene, g);
    } catch (const Error& ex) {
        slice.errors.emplace_back(ex.what());
        return slice;
    }

    std::vector<Edge> edges = g.v_edges;
    edges.insert(edges.end(), g.u_edges.begin(), g.u_edges.end());
    std::vector<bool> covered(edges.size(), false);
    const double radius = g.cell + step;

    auto mark = [&](const std::vector<FunnelPoint>& pts) {
        for (std::size_t k = 0; k < edges.size(); ++k) {
            if (covered[k]) continue;
            const Vec2 mid = 0.5 * (edges[k].a + edges[k].b);
            for (const auto& p : pts) {
                if (d.delta(mid, p.uv()).norm() <= radius) {
                    covered[k] = true;
                    break;
                }
            }
        }
    };

    constexpr std::size_t kMaxComponents = 64;
    TraceOptions topt;
    topt.step = step;
    for (std::size_t k = 0; k < edges.size() && slice.curves.size() < kMaxComponents; ++k) {
        if (covered[k]) continue;
        covered[k] = true;
        try {
            const FunnelPoint seed = seed_from_edge(scene, edges[k], t);
            require_regular(scene, seed);
            ContactCurve c = trace_pcurve(scene, t, seed, topt);
            mark(c.points);
            slice.curves.push_back(std::move(c));
        } catch (const TraceError& ex) {
            mark(ex.partial().points);
            slice.errors.emplace_back(ex.what());
        } catch (const Error& ex) {
            slice.errors.emplace_back(ex.what());
        }
    }
    return slice;
}

std::vector<FunnelSlice> sample_funnel(const SweepScene& scene, int nt,
                                       const SampleOptions& options, double t_begin, double t_end)
{
    if (nt < 2) throw PreconditionError("sample_funnel needs nt >= 2");
    if (!(t_begin >= 0.0 && t_end <= 1.0 && t_begin < t_end))
        throw DomainError("time window must lie in [0,1]");
    std::vector<FunnelSlice> slices(static_cast<std::size_t>(nt));
    parallel_for(slices.size(), [&](std::size_t i) {
        const double t = i + 1 == slices.size()
                             ? t_end
                             : t_begin + (t_end - t_begin) * static_cast<double>(i) / (nt - 1);
        slices[i] = trace_slice(scene, t, options);
    });
    return slices;
}

}  // namespace sweepkit
