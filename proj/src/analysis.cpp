#include "sweepkit/analysis.hpp"

#include "sweepkit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sweepkit {

double theta_raw(const SweepEval& e) { return e.l * e.fu + e.m * e.fv - e.ft; }

namespace {

void require_on_funnel(const SweepScene& scene, const FunnelPoint& fp)
{
    if (!(std::abs(fp.eval.f) <= scene.funnel_tolerance())) {
        std::ostringstream msg;
        msg << "point (" << fp.u << ", " << fp.v << ", " << fp.t << ") is off the funnel, |f| = "
            << std::abs(fp.eval.f);
        throw PreconditionError(msg.str());
    }
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double theta(const SweepScene& scene, const FunnelPoint& fp)
{
    require_on_funnel(scene, fp);
    return theta_raw(fp.eval);
}

Mat2 frame_transform(const SweepEval& e)
{
    const double g2 = e.fu * e.fu + e.fv * e.fv;
    Mat2 D;
    D << -e.ft * e.fu + e.l * g2, -e.fv,
         -e.ft * e.fv + e.m * g2, e.fu;
    return D;
}

double det_frame_transform(const SweepScene& scene, const FunnelPoint& fp)
{
    frame(scene, fp);  // throws on (fu, fv) = (0, 0)
    return frame_transform(fp.eval).determinant();
}

double lambda_ddot(const SweepScene& scene, const FunnelPoint& fp)
{
    require_on_funnel(scene, fp);
    const SweepEval& e = fp.eval;
    const Mat3 omega = e.motion.dA * e.motion.A.transpose();
    const Vec3 dN = e.l * e.N_u() + e.m * e.N_v();  // shape operator applied to V
    return (-e.sigma_tt + 2.0 * omega * e.V).dot(e.N) + dN.dot(e.V);
}

double clearance(const SweepScene& scene, const FunnelPoint& fp, double t, Vec2& uv)
{
    // Body-frame position of the fixed space point sigma(fp) at time t. Its distance to S
    // equals that of the re-based inverse trajectory point to S_{t0}.
    const MotionJet h = scene.trajectory().sample(t);
    const Vec3 z = h.A.transpose() * (fp.eval.sigma - h.b);
    const ParametricSurface& s = scene.surface();
    const double L = scene.length_scale();

    Vec2 x = uv;
    SurfaceJet j = s.jet_unchecked(x.x(), x.y());
    double residual = kInf;
    for (int it = 0; it < 60; ++it) {
        const Vec3 r = z - j.S;
        const Vec2 F(r.dot(j.Su), r.dot(j.Sv));
        residual = F.norm() / (j.Su.norm() + j.Sv.norm());
        Mat2 J;
        J << -j.Su.dot(j.Su) + r.dot(j.Suu), -j.Su.dot(j.Sv) + r.dot(j.Suv),
             -j.Su.dot(j.Sv) + r.dot(j.Suv), -j.Sv.dot(j.Sv) + r.dot(j.Svv);
        if (std::abs(J.determinant()) < 1e-300) break;
        Vec2 step = -J.inverse() * F;
        const double cap = 0.25 * scene.domain().diagonal();
        if (step.norm() > cap) step *= cap / step.norm();
        x += step;
        j = s.jet_unchecked(x.x(), x.y());
        if (step.norm() <= 1e-15 * (1.0 + x.norm())) {
            const Vec3 r2 = z - j.S;
            residual = Vec2(r2.dot(j.Su), r2.dot(j.Sv)).norm() / (j.Su.norm() + j.Sv.norm());
            break;
        }
    }
    if (!(residual <= 1e-12 * L)) {
        throw ConvergenceError("closest-point projection did not converge", x, residual);
    }
    uv = x;
    return (z - j.S).dot(j.N);
}

double ClearanceProfile::min_lambda() const
{
    double m = kInf;
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        if (converged[i]) m = std::min(m, lambdas[i]);
    return m;
}

ClearanceProfile clearance_profile(const SweepScene& scene, const FunnelPoint& fp,
                                   double halfwidth, int n)
{
    if (n < 2) throw PreconditionError("clearance profile needs at least 2 samples");
    if (!(halfwidth > 0.0)) throw PreconditionError("clearance halfwidth must be positive");
    require_on_funnel(scene, fp);
    ClearanceProfile p;
    p.fp = fp;
    const double lo = std::max(0.0, fp.t - halfwidth), hi = std::min(1.0, fp.t + halfwidth);
    p.ts.resize(static_cast<std::size_t>(n));
    p.lambdas.assign(p.ts.size(), std::numeric_limits<double>::quiet_NaN());
    p.converged.assign(p.ts.size(), false);
    std::size_t nearest = 0;
    for (int i = 0; i < n; ++i) {
        p.ts[static_cast<std::size_t>(i)] = i + 1 == n ? hi : lo + (hi - lo) * i / (n - 1);
        if (std::abs(p.ts[static_cast<std::size_t>(i)] - fp.t) < std::abs(p.ts[nearest] - fp.t))
            nearest = static_cast<std::size_t>(i);
    }
    // March outward from t0 so each projection is warm-started from its neighbour.
    for (int dir : {-1, 1}) {
        Vec2 uv = fp.uv();
        for (long i = static_cast<long>(nearest) + (dir > 0 ? 1 : 0); i >= 0 && i < n; i += dir) {
            const auto k = static_cast<std::size_t>(i);
            try {
                Vec2 guess = uv;
                p.lambdas[k] = clearance(scene, fp, p.ts[k], guess);
                p.converged[k] = true;
                uv = guess;
            } catch (const ConvergenceError&) {
                p.converged[k] = false;
            }
        }
    }
    return p;
}

ThetaSample sample_theta(const SweepScene& scene, const FunnelPoint& fp)
{
    ThetaSample s;
    s.fp = fp;
    s.l = fp.eval.l;
    s.m = fp.eval.m;
    s.theta = theta(scene, fp);
    s.detD = det_frame_transform(scene, fp);
    s.lambda_ddot = lambda_ddot(scene, fp);
    return s;
}

Tolerances default_tolerances(const SweepScene& scene, const std::vector<ThetaSample>& samples)
{
    Tolerances tol;
    double scale = scene.theta_scale();
    if (!samples.empty()) {
        std::vector<double> a;
        a.reserve(samples.size());
        for (const auto& s : samples) a.push_back(std::abs(s.theta));
        std::nth_element(a.begin(), a.begin() + static_cast<long>(a.size() / 2), a.end());
        scale = a[a.size() / 2];
    }
    tol.eps_theta = 1e-6 * scale;
    tol.eps_lambda = 1e-8 * scene.length_scale();
    return tol;
}

std::string to_string(PointClass c)
{
    switch (c) {
        case PointClass::clean: return "clean";
        case PointClass::lsi: return "type1+type2";
        case PointClass::boundary_type2: return "boundary-type2";
        case PointClass::singular_boundary: return "singular-boundary";
    }
    return "unknown";
}

Classification classify_point(const SweepScene& scene, const FunnelPoint& fp, const Tolerances& tol)
{
    Classification c;
    c.theta = theta(scene, fp);
    c.min_lambda = kInf;
    if (c.theta < -tol.eps_theta) {
        c.kind = PointClass::lsi;
        c.type1 = c.type2 = true;
    } else if (c.theta > tol.eps_theta) {
        c.kind = PointClass::clean;
    } else {
        c.type1 = true;
        c.min_lambda = clearance_profile(scene, fp).min_lambda();
        c.type2 = c.min_lambda < -tol.eps_lambda;
        c.kind = c.type2 ? PointClass::boundary_type2 : PointClass::singular_boundary;
    }
    return c;
}

Classification classify_point(const SweepScene& scene, const FunnelPoint& fp)
{
    return classify_point(scene, fp, default_tolerances(scene));
}

std::string to_string(Verdict v)
{
    switch (v) {
        case Verdict::clean: return "clean";
        case Verdict::singular: return "singular";
        case Verdict::type1_lsi: return "type1-lsi";
        case Verdict::type2_lsi: return "type2-lsi";
        case Verdict::degenerate: return "degenerate";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------

namespace {

/// Funnel point on the polyline through a = p[i-1], c = p[i], b = p[i+1], at s in [-1, 1].
struct LocalChart {
    const SweepScene& scene;
    double t;
    Vec2 center, back, ahead;

    std::optional<FunnelPoint> at(double s) const
    {
        const Vec2 uv = center + (s < 0.0 ? -s * back : s * ahead);
        try {
            FunnelPoint fp = snap_to_funnel(scene, uv.x(), uv.y(), t);
            return fp;
        } catch (const Error&) {
            return std::nullopt;
        }
    }
};

std::optional<FunnelPoint> golden_minimum(const LocalChart& chart)
{
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = -1.0, b = 1.0;
    auto value = [&](double s) {
        auto fp = chart.at(s);
        return fp ? theta_raw(fp->eval) : kInf;
    };
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = value(x1), f2 = value(x2);
    for (int it = 0; it < 80 && b - a > 1e-12; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = value(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = value(x2);
        }
    }
    return chart.at(0.5 * (a + b));
}

std::optional<FunnelPoint> theta_zero(const LocalChart& chart, double theta_center)
{
    // Bisection on [0, 1] (center -> ahead), theta changes sign across it.
    double a = 0.0, b = 1.0;
    double fa = theta_center;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (a + b);
        auto fp = chart.at(mid);
        if (!fp) return std::nullopt;
        const double fm = theta_raw(fp->eval);
        if ((fm <= 0.0) == (fa <= 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return chart.at(0.5 * (a + b));
}

std::vector<FunnelPoint> refine_curve(const SweepScene& scene, const ContactCurve& c,
                                      const std::vector<double>& th, double median_abs)
{
    std::vector<FunnelPoint> out;
    const std::size_t n = c.points.size();
    if (n < 3) return out;
    const ParamDomain& d = scene.domain();
    constexpr std::size_t kMaxRefinements = 16;

    auto chart = [&](std::size_t i, std::size_t prev, std::size_t next) {
        const Vec2 center = c.points[i].uv();
        return LocalChart{scene, c.t, center, d.delta(center, c.points[prev].uv()),
                          d.delta(center, c.points[next].uv())};
    };

    for (std::size_t i = 0; i < n && out.size() < kMaxRefinements; ++i) {
        const bool has_next = i + 1 < n || c.closed;
        const bool has_prev = i > 0 || c.closed;
        const std::size_t prev = i == 0 ? n - 1 : i - 1;
        const std::size_t next = i + 1 == n ? 0 : i + 1;
        // Local minimum of positive theta well below the typical magnitude: possible tangential
        // touch of zero between samples.
        if (has_prev && has_next && th[i] > 0.0 && th[i] < th[prev] && th[i] <= th[next] &&
            th[i] < 0.1 * median_abs) {
            if (auto fp = golden_minimum(chart(i, prev, next))) out.push_back(*fp);
        }
        if (has_next && (th[i] <= 0.0) != (th[next] <= 0.0)) {
            if (auto fp = theta_zero(chart(i, prev, next), th[i])) out.push_back(*fp);
        }
    }
    return out;
}

}  // namespace

LsiReport detect_singularity(const SweepScene& scene, const std::vector<FunnelSlice>& slices,
                             bool refine)
{
    DetectOptions options;
    options.refine = refine;
    return detect_singularity(scene, slices, options);
}

LsiReport detect_singularity(const SweepScene& scene, const std::vector<FunnelSlice>& slices,
                             const DetectOptions& options)
{
    const bool refine = options.refine;
    LsiReport report;
    report.scene_id = scene.id();
    report.boundary_min_lambda = kInf;

    std::vector<std::vector<ThetaSample>> per_slice(slices.size());
    std::vector<std::vector<std::string>> slice_errors(slices.size());
    for (std::size_t k = 0; k < slices.size(); ++k)
        for (const auto& e : slices[k].errors) {
            std::ostringstream msg;
            msg << "t=" << slices[k].t << ": " << e;
            slice_errors[k].push_back(msg.str());
        }

    parallel_for(slices.size(), [&](std::size_t k) {
        for (const auto& c : slices[k].curves) {
            std::vector<double> th;
            th.reserve(c.points.size());
            for (const auto& fp : c.points) {
                try {
                    per_slice[k].push_back(sample_theta(scene, fp));
                    th.push_back(per_slice[k].back().theta);
                } catch (const Error& ex) {
                    slice_errors[k].emplace_back(ex.what());
                    th.push_back(theta_raw(fp.eval));
                }
            }
            if (!refine) continue;
            std::vector<double> a;
            for (double x : th) a.push_back(std::abs(x));
            if (a.empty()) continue;
            std::nth_element(a.begin(), a.begin() + static_cast<long>(a.size() / 2), a.end());
            for (const auto& fp : refine_curve(scene, c, th, a[a.size() / 2])) {
                try {
                    ThetaSample s = sample_theta(scene, fp);
                    s.refined = true;
                    per_slice[k].push_back(s);
                } catch (const Error& ex) {
                    slice_errors[k].emplace_back(ex.what());
                }
            }
        }
    });
    for (std::size_t k = 0; k < slices.size(); ++k) {
        report.samples.insert(report.samples.end(), per_slice[k].begin(), per_slice[k].end());
        report.errors.insert(report.errors.end(), slice_errors[k].begin(), slice_errors[k].end());
    }

    if (report.samples.empty()) {
        report.verdict = Verdict::degenerate;
        return report;
    }

    report.tolerances = default_tolerances(scene, report.samples);
    if (options.eps_theta) report.tolerances.eps_theta = *options.eps_theta;
    if (options.eps_lambda) report.tolerances.eps_lambda = *options.eps_lambda;
    const Tolerances& tol = report.tolerances;
    report.min_theta = kInf;
    report.max_theta = -kInf;
    Excision& ex = report.excision;
    ex.uvt_min = ex.xyz_min = Vec3::Constant(kInf);
    ex.uvt_max = ex.xyz_max = Vec3::Constant(-kInf);
    std::vector<const ThetaSample*> boundary;
    for (const auto& s : report.samples) {
        report.min_theta = std::min(report.min_theta, s.theta);
        report.max_theta = std::max(report.max_theta, s.theta);
        if (s.theta <= tol.eps_theta) {
            ++ex.count;
            ex.uvt_min = ex.uvt_min.cwiseMin(s.fp.uvt());
            ex.uvt_max = ex.uvt_max.cwiseMax(s.fp.uvt());
            ex.xyz_min = ex.xyz_min.cwiseMin(s.fp.eval.sigma);
            ex.xyz_max = ex.xyz_max.cwiseMax(s.fp.eval.sigma);
            if (std::find(ex.times.begin(), ex.times.end(), s.fp.t) == ex.times.end())
                ex.times.push_back(s.fp.t);
        }
        if (std::abs(s.theta) <= tol.eps_theta) boundary.push_back(&s);
    }
    std::sort(ex.times.begin(), ex.times.end());
    if (ex.count == 0) {
        ex.uvt_min = ex.uvt_max = ex.xyz_min = ex.xyz_max = Vec3::Zero();
    }

    std::vector<double> lam(boundary.size(), kInf);
    parallel_for(boundary.size(), [&](std::size_t i) {
        lam[i] = clearance_profile(scene, boundary[i]->fp).min_lambda();
    });
    for (double l : lam) report.boundary_min_lambda = std::min(report.boundary_min_lambda, l);

    if (report.min_theta < -tol.eps_theta)
        report.verdict = Verdict::type1_lsi;
    else if (report.boundary_min_lambda < -tol.eps_lambda)
        report.verdict = Verdict::type2_lsi;
    else if (!boundary.empty())
        report.verdict = Verdict::singular;
    else
        report.verdict = Verdict::clean;
    return report;
}

LsiReport detect_singularity(const SweepScene& scene, const DetectOptions& options)
{
    return detect_singularity(scene, sample_funnel(scene, options.nt, options.sampling), options);
}

}  // namespace sweepkit
