#include "sweepkit/envelope.hpp"

#include "sweepkit/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace sweepkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Contact curve as an unwrapped parameter polyline with object-space arclength.
struct Polyline {
    std::vector<Vec2> uv;   // unwrapped; closed curves repeat the start (shifted by the winding)
    std::vector<double> s;  // cumulative object-space arclength
    bool closed = false;
    Vec2 winding = Vec2::Zero();

    double length() const { return s.back(); }

    Vec2 at(double arc) const
    {
        if (closed) {
            const double L = length();
            const double turns = std::floor(arc / L);
            const double a = arc - turns * L;
            return interpolate(a) + turns * winding;
        }
        return interpolate(std::clamp(arc, 0.0, length()));
    }

private:
    Vec2 interpolate(double a) const
    {
        auto it = std::upper_bound(s.begin(), s.end(), a);
        std::size_t k = static_cast<std::size_t>(std::max<long>(1, it - s.begin()));
        k = std::min(k, s.size() - 1);
        const double len = s[k] - s[k - 1];
        const double w = len > 0.0 ? (a - s[k - 1]) / len : 0.0;
        return uv[k - 1] + w * (uv[k] - uv[k - 1]);
    }
};

Polyline make_polyline(const ParamDomain& d, const ContactCurve& c)
{
    Polyline pl;
    pl.closed = c.closed;
    const std::size_t n = c.points.size();
    pl.uv.push_back(c.points[0].uv());
    pl.s.push_back(0.0);
    for (std::size_t k = 1; k < n; ++k) {
        pl.uv.push_back(pl.uv.back() + d.delta(c.points[k - 1].uv(), c.points[k].uv()));
        pl.s.push_back(pl.s.back() + (c.image[k] - c.image[k - 1]).norm());
    }
    if (c.closed) {
        pl.uv.push_back(pl.uv.back() + d.delta(c.points[n - 1].uv(), c.points[0].uv()));
        pl.s.push_back(pl.s.back() + (c.image[0] - c.image[n - 1]).norm());
        pl.winding = pl.uv.back() - pl.uv.front();
        // Snap the winding to whole periods.
        if (d.periodic_u) pl.winding.x() = std::round(pl.winding.x() / d.u_period()) * d.u_period();
        else pl.winding.x() = 0.0;
        if (d.periodic_v) pl.winding.y() = std::round(pl.winding.y() / d.v_period()) * d.v_period();
        else pl.winding.y() = 0.0;
    }
    return pl;
}

ContactCurve reversed(const ContactCurve& c)
{
    // Closed curves keep their first point; open curves swap ends.
    ContactCurve r = c;
    const std::size_t n = c.points.size();
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t src = c.closed ? (n - k) % n : n - 1 - k;
        r.points[k] = c.points[src];
        r.image[k] = c.image[src];
    }
    return r;
}

/// Mean parameter distance from the sample points of one curve to another curve's vertices.
double curve_distance(const ParamDomain& d, const ContactCurve& a, const ContactCurve& b)
{
    const std::size_t stride = std::max<std::size_t>(1, a.points.size() / 16);
    double sum = 0.0;
    int count = 0;
    for (std::size_t i = 0; i < a.points.size(); i += stride) {
        double best = kInf;
        for (const auto& q : b.points) best = std::min(best, d.delta(a.points[i].uv(), q.uv()).norm());
        sum += best;
        ++count;
    }
    return sum / std::max(count, 1);
}

/// Arclength position on the polyline nearest (in parameter space) to q.
double nearest_arclength(const ParamDomain& d, const Polyline& pl, const Vec2& q)
{
    double best = kInf, best_s = 0.0;
    for (std::size_t k = 1; k < pl.uv.size(); ++k) {
        const Vec2 a = pl.uv[k - 1];
        const Vec2 ab = pl.uv[k] - a;
        const Vec2 aq = d.delta(a, q);
        const double len2 = ab.squaredNorm();
        const double w = len2 > 0.0 ? std::clamp(aq.dot(ab) / len2, 0.0, 1.0) : 0.0;
        const double dist = (aq - w * ab).norm();
        if (dist < best) {
            best = dist;
            best_s = pl.s[k - 1] + w * (pl.s[k] - pl.s[k - 1]);
        }
    }
    return best_s;
}

Vec2 shift_near(const ParamDomain& d, const Vec2& x, const Vec2& ref)
{
    // Add whole periods to x so that it lies nearest to ref.
    Vec2 y = x;
    if (d.periodic_u) y.x() += std::round((ref.x() - x.x()) / d.u_period()) * d.u_period();
    if (d.periodic_v) y.y() += std::round((ref.y() - x.y()) / d.v_period()) * d.v_period();
    return y;
}

Vec2 snap_unwrapped(const SweepScene& scene, const Vec2& guess, double t, double& residual)
{
    const ParamDomain& d = scene.domain();
    try {
        const Vec2 w = d.wrap(guess);
        const FunnelPoint fp = snap_to_funnel(scene, w.x(), w.y(), t);
        residual = std::abs(fp.eval.f);
        return guess + d.delta(guess, fp.uv());
    } catch (const Error&) {
        residual = std::abs(evaluate_unchecked(scene, guess.x(), guess.y(), t).f);
        return guess;
    }
}

}  // namespace

SeedSurface build_seed(const SweepScene& scene, int nt, int np, const SeedOptions& options)
{
    if (nt < 2) throw PreconditionError("build_seed needs at least 2 time slices");
    if (np < 4) throw PreconditionError("build_seed needs at least 4 points per slice");
    const ParamDomain& d = scene.domain();
    const std::vector<FunnelSlice> slices =
        sample_funnel(scene, nt, options.sampling, options.t_begin, options.t_end);

    // Choose and align one component per slice.
    std::vector<ContactCurve> chosen;
    const std::size_t count0 = slices[0].curves.size();
    for (const auto& s : slices) {
        if (s.curves.empty()) {
            std::ostringstream msg;
            msg << "no contact curve at t = " << s.t;
            if (!s.errors.empty()) msg << " (" << s.errors.front() << ")";
            throw NotFoundError(msg.str());
        }
        if (s.curves.size() != count0) {
            std::ostringstream msg;
            msg << "contact curve count changes from " << count0 << " to " << s.curves.size()
                << " at t = " << s.t;
            throw TopologyChangeError(msg.str());
        }
    }
    if (options.component >= count0)
        throw PreconditionError("requested contact-curve component does not exist");

    chosen.push_back(slices[0].curves[options.component]);
    for (std::size_t i = 1; i < slices.size(); ++i) {
        const ContactCurve& prev = chosen.back();
        const ContactCurve* best = nullptr;
        double best_d = kInf;
        for (const auto& c : slices[i].curves) {
            const double dist = curve_distance(d, prev, c);
            if (dist < best_d) {
                best_d = dist;
                best = &c;
            }
        }
        if (best->closed != prev.closed) {
            std::ostringstream msg;
            msg << "contact curve changes between open and closed at t = " << slices[i].t;
            throw TopologyChangeError(msg.str());
        }
        chosen.push_back(*best);
    }

    SeedSurface seed;
    seed.closed_ = chosen[0].closed;
    seed.np_ = np;
    seed.samples_.resize(chosen.size());
    seed.max_site_residual_ = 0.0;

    Vec2 drift = Vec2::Zero();
    Vec2 prev_start = Vec2::Zero(), prev_dir = Vec2::Zero();
    for (std::size_t i = 0; i < chosen.size(); ++i) {
        ContactCurve c = chosen[i];
        const double t = slices[i].t;
        Polyline pl = make_polyline(d, c);

        double s0 = 0.0;
        if (i > 0) {
            if (c.closed) {
                s0 = nearest_arclength(d, pl, prev_start);
                const double h = 1e-3 * pl.length();
                const Vec2 dir = pl.at(s0 + h) - pl.at(s0 - h);
                if (dir.dot(prev_dir) < 0.0) {
                    c = reversed(c);
                    pl = make_polyline(d, c);
                    s0 = nearest_arclength(d, pl, prev_start);
                }
            } else {
                const Vec2 a = pl.uv.front(), b = pl.uv.back();
                if (d.delta(prev_start, b).norm() < d.delta(prev_start, a).norm()) {
                    c = reversed(c);
                    pl = make_polyline(d, c);
                }
            }
        }
        if (c.closed) {
            if (i == 0) drift = pl.winding;
            else if ((pl.winding - drift).norm() > 1e-9 * (1.0 + drift.norm()))
                throw TopologyChangeError("contact curve winding changes between slices");
        }

        auto& row = seed.samples_[i];
        row.resize(static_cast<std::size_t>(np));
        const double L = pl.length();
        for (int j = 0; j < np; ++j) {
            Vec2 uv;
            double res = 0.0;
            if (c.closed) {
                uv = snap_unwrapped(scene, pl.at(s0 + L * j / np), t, res);
            } else if (j == 0 || j == np - 1) {
                uv = j == 0 ? pl.uv.front() : pl.uv.back();
                res = std::abs(evaluate_unchecked(scene, uv.x(), uv.y(), t).f);
            } else {
                uv = snap_unwrapped(scene, pl.at(L * j / (np - 1)), t, res);
            }
            row[static_cast<std::size_t>(j)] = uv;
            seed.max_site_residual_ = std::max(seed.max_site_residual_, res);
        }
        // Keep the unwrapped chart continuous across slices.
        if (i > 0) {
            const Vec2 shift = shift_near(d, row[0], prev_start) - row[0];
            for (auto& x : row) x += shift;
        }
        if (c.closed) {
            // Start of the next slice is matched against this one.
            prev_dir = d.delta(row[0], row[1]);
        }
        prev_start = row[0];
        c.t = t;
        seed.curves_.push_back(std::move(c));
    }
    seed.drift_ = seed.closed_ ? drift : Vec2::Zero();

    // Fit.
    const int nts = static_cast<int>(chosen.size());
    for (const auto& s : slices) seed.t_sites_.push_back(s.t);
    seed.degree_t_ = std::min(3, nts - 1);
    seed.t_knots_ = bspline::averaged_knots(seed.degree_t_, seed.t_sites_);
    seed.n_ctrl_t_ = nts;
    const Eigen::MatrixXd Bt = bspline::collocation(seed.degree_t_, seed.t_knots_, nts, seed.t_sites_);

    std::vector<double> p_sites(static_cast<std::size_t>(np));
    Eigen::MatrixXd Bp;
    if (seed.closed_) {
        for (int j = 0; j < np; ++j) p_sites[static_cast<std::size_t>(j)] = static_cast<double>(j) / np;
        seed.degree_p_ = 3;
        Bp = bspline::periodic_collocation(3, np, p_sites);
    } else {
        for (int j = 0; j < np; ++j) p_sites[static_cast<std::size_t>(j)] = static_cast<double>(j) / (np - 1);
        seed.degree_p_ = std::min(3, np - 1);
        seed.p_knots_ = bspline::averaged_knots(seed.degree_p_, p_sites);
        Bp = bspline::collocation(seed.degree_p_, seed.p_knots_, np, p_sites);
    }
    seed.n_ctrl_p_ = np;

    Eigen::MatrixXd Du(np, nts), Dv(np, nts);
    for (int i = 0; i < nts; ++i) {
        for (int j = 0; j < np; ++j) {
            const Vec2 x = seed.samples_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -
                           seed.drift_ * p_sites[static_cast<std::size_t>(j)];
            Du(j, i) = x.x();
            Dv(j, i) = x.y();
        }
    }
    const Eigen::PartialPivLU<Eigen::MatrixXd> lp(Bp), lt(Bt);
    // C = Bp^-1 D Bt^-T, computed as (Bt^-1 (Bp^-1 D)^T)^T.
    auto solve = [&](const Eigen::MatrixXd& D) -> Eigen::MatrixXd {
        const Eigen::MatrixXd X = lp.solve(D);                      // np x nt
        return lt.solve(X.transpose()).transpose();                  // np x nt
    };
    seed.coeff_u_ = solve(Du);
    seed.coeff_v_ = solve(Dv);

    // Fitting error between sites.
    double mid = 0.0;
    for (int i = 0; i < nts; ++i) {
        for (int j = 0; j + 1 < np + (seed.closed_ ? 1 : 0); ++j) {
            const double p = seed.closed_ ? (j + 0.5) / np : (j + 0.5) / (np - 1);
            const Vec2 uv = seed.eval(p, seed.t_sites_[static_cast<std::size_t>(i)]).uv;
            mid = std::max(mid, std::abs(evaluate_unchecked(scene, uv.x(), uv.y(),
                                                            seed.t_sites_[static_cast<std::size_t>(i)]).f));
        }
    }
    for (int i = 0; i + 1 < nts; ++i) {
        const double t = 0.5 * (seed.t_sites_[static_cast<std::size_t>(i)] + seed.t_sites_[static_cast<std::size_t>(i + 1)]);
        for (int j = 0; j < np; ++j) {
            const double p = seed.closed_ ? static_cast<double>(j) / np : static_cast<double>(j) / (np - 1);
            const Vec2 uv = seed.eval(p, t).uv;
            try {
                mid = std::max(mid, std::abs(evaluate_unchecked(scene, uv.x(), uv.y(), t).f));
            } catch (const Error&) {
                mid = kInf;
            }
        }
    }
    seed.max_midpoint_residual_ = mid;
    return seed;
}

SeedJet SeedSurface::eval(double p, double t) const
{
    const bspline::BasisEval bp = closed_ ? bspline::periodic_basis(degree_p_, np_, p, 2)
                                          : bspline::clamped_basis(degree_p_, p_knots_, n_ctrl_p_,
                                                                   std::clamp(p, 0.0, 1.0), 2);
    const bspline::BasisEval bt = bspline::clamped_basis(
        degree_t_, t_knots_, n_ctrl_t_, std::clamp(t, t_knots_.front(), t_knots_.back()), 1);

    SeedJet out;
    const auto np1 = static_cast<Eigen::Index>(bp.index.size());
    const auto nt1 = static_cast<Eigen::Index>(bt.index.size());
    for (Eigen::Index a = 0; a < np1; ++a) {
        for (Eigen::Index b = 0; b < nt1; ++b) {
            const Vec2 c(coeff_u_(bp.index[static_cast<std::size_t>(a)], bt.index[static_cast<std::size_t>(b)]),
                         coeff_v_(bp.index[static_cast<std::size_t>(a)], bt.index[static_cast<std::size_t>(b)]));
            const double n0 = bp.ders(0, a), n1 = bp.ders(1, a), n2 = bp.ders(2, a);
            const double m0 = bt.ders(0, b), m1 = bt.ders(1, b);
            out.uv += n0 * m0 * c;
            out.d_p += n1 * m0 * c;
            out.d_pp += n2 * m0 * c;
            out.d_t += n0 * m1 * c;
            out.d_pt += n1 * m1 * c;
        }
    }
    if (closed_) {
        out.uv += drift_ * p;
        out.d_p += drift_;
    }
    return out;
}

// ---------------------------------------------------------------------------

struct ProceduralEnvelope::Approx {
    SeedJet g;
    SweepEval e;  // at the seed point
    Vec3 E, Ep, Epp, Et, Ept;
};

ProceduralEnvelope::ProceduralEnvelope(SweepScene scene, SeedSurface seed, NewtonSettings settings)
    : scene_(std::move(scene)), seed_(std::move(seed)), settings_(settings)
{
}

void ProceduralEnvelope::check_parameters(double p, double t) const
{
    const double slack = 1e-12;
    if (!(t >= seed_.t_begin() - slack && t <= seed_.t_end() + slack)) {
        std::ostringstream msg;
        msg << "t = " << t << " outside the seed range [" << seed_.t_begin() << ", " << seed_.t_end() << "]";
        throw DomainError(msg.str());
    }
    if (!seed_.closed() && !(p >= -slack && p <= 1.0 + slack)) {
        std::ostringstream msg;
        msg << "p = " << p << " outside [0,1]";
        throw DomainError(msg.str());
    }
    if (!std::isfinite(p)) throw DomainError("p is not finite");
}

ProceduralEnvelope::Approx ProceduralEnvelope::approximate(double p, double t) const
{
    Approx a;
    a.g = seed_.eval(p, t);
    const Vec2 w = scene_.domain().wrap(a.g.uv);
    a.e = evaluate_unchecked(scene_, w.x(), w.y(), t);
    const SweepEval& e = a.e;
    const Vec2& gp = a.g.d_p;
    const Vec2& gt = a.g.d_t;
    const Vec3 suu = e.sigma_uu(), suv = e.sigma_uv(), svv = e.sigma_vv();
    const Vec3 sut = e.motion.dA * e.jet.Su, svt = e.motion.dA * e.jet.Sv;
    a.E = e.sigma;
    a.Ep = e.sigma_u * gp.x() + e.sigma_v * gp.y();
    a.Epp = suu * gp.x() * gp.x() + 2.0 * suv * gp.x() * gp.y() + svv * gp.y() * gp.y() +
            e.sigma_u * a.g.d_pp.x() + e.sigma_v * a.g.d_pp.y();
    a.Et = e.sigma_u * gt.x() + e.sigma_v * gt.y() + e.V;
    a.Ept = (suu * gt.x() + suv * gt.y() + sut) * gp.x() + (suv * gt.x() + svv * gt.y() + svt) * gp.y() +
            e.sigma_u * a.g.d_pt.x() + e.sigma_v * a.g.d_pt.y();
    return a;
}

double ProceduralEnvelope::funnel_bound() const { return 1e-10 * scene_.velocity_scale(); }

double ProceduralEnvelope::plane_bound(const Vec3& Ebar_p) const
{
    return 1e-10 * scene_.length_scale() * Ebar_p.norm();
}

EnvelopeJet ProceduralEnvelope::eval(double p, double t) const
{
    check_parameters(p, t);
    const Approx a = approximate(p, t);
    const ParamDomain& d = scene_.domain();
    const double fs = std::max(scene_.velocity_scale(), 1e-300);
    const double ps = std::max(scene_.length_scale() * a.Ep.norm(), 1e-300);

    auto residual = [&](const Vec2& x, SweepEval& e, Vec2& F) {
        const Vec2 w = d.wrap(x);
        e = evaluate_unchecked(scene_, w.x(), w.y(), t);
        F = Vec2(e.f, (e.sigma - a.E).dot(a.Ep));
        return std::hypot(F.x() / fs, F.y() / ps);
    };

    Vec2 x = a.g.uv;
    SweepEval e;
    Vec2 F;
    double r = residual(x, e, F);
    int it = 0;
    for (; it < settings_.max_iterations; ++it) {
        if (std::abs(F.x()) <= settings_.tolerance * fs && std::abs(F.y()) <= settings_.tolerance * ps)
            break;
        Mat2 J;
        J << e.fu, e.fv, e.sigma_u.dot(a.Ep), e.sigma_v.dot(a.Ep);
        const double det = J.determinant();
        if (!(std::abs(det) > 1e-14 * J.cwiseAbs().maxCoeff() * J.cwiseAbs().maxCoeff())) {
            throw SingularSystemError("envelope Newton Jacobian is singular (normal plane tangent to C_t)");
        }
        const Vec2 dx = -J.inverse() * F;
        double lambda = 1.0;
        Vec2 xn = x + dx;
        SweepEval en;
        Vec2 Fn;
        double rn = residual(xn, en, Fn);
        for (int h = 0; h < 30 && !(rn < r); ++h) {
            lambda *= 0.5;
            xn = x + lambda * dx;
            rn = residual(xn, en, Fn);
        }
        if (!(rn <= r)) break;  // no decrease along the Newton direction: stagnated
        x = xn;
        e = en;
        F = Fn;
        r = rn;
    }
    if (!(std::abs(F.x()) <= funnel_bound() && std::abs(F.y()) <= plane_bound(a.Ep))) {
        throw ConvergenceError("envelope Newton iteration did not converge", x, r);
    }
    const Vec2 w = d.wrap(x);
    // Open contact curves end on the patch boundary. Between seed slices the normal plane at an
    // end can meet the analytically continued C_t slightly outside the patch.
    const double slack = 1e-2 * d.diagonal();
    const bool inside = (d.periodic_u || (w.x() >= d.u0 - slack && w.x() <= d.u1 + slack)) &&
                        (d.periodic_v || (w.y() >= d.v0 - slack && w.y() <= d.v1 + slack));
    if (!inside) {
        std::ostringstream msg;
        msg << "envelope point (" << w.x() << ", " << w.y() << ") left the surface domain";
        throw DomainError(msg.str());
    }

    EnvelopeJet jet;
    jet.p = p;
    jet.t = t;
    jet.E = e.sigma;
    jet.N = e.N;
    jet.u = w.x();
    jet.v = w.y();
    jet.iterations = it;
    jet.residual_funnel = std::abs(F.x());
    jet.residual_plane = std::abs(F.y());
    return jet;
}

EnvelopeJet ProceduralEnvelope::eval_with_derivatives(double p, double t) const
{
    EnvelopeJet jet = eval(p, t);
    const Approx a = approximate(p, t);
    const SweepEval e = evaluate_unchecked(scene_, jet.u, jet.v, t);
    Mat2 J;
    J << e.fu, e.fv, e.sigma_u.dot(a.Ep), e.sigma_v.dot(a.Ep);
    const Eigen::FullPivLU<Mat2> lu(J);
    if (!lu.isInvertible()) throw SingularSystemError("envelope derivative system is singular");
    const Vec3 diff = e.sigma - a.E;
    const Vec2 dp = lu.solve(Vec2(0.0, a.Ep.squaredNorm() - diff.dot(a.Epp)));
    const Vec2 dt = lu.solve(Vec2(-e.ft, -(e.V - a.Et).dot(a.Ep) - diff.dot(a.Ept)));
    jet.Ep = e.sigma_u * dp.x() + e.sigma_v * dp.y();
    jet.Et = e.sigma_u * dt.x() + e.sigma_v * dt.y() + e.V;
    return jet;
}

Vec3 ProceduralEnvelope::derivative(double p, double t, Wrt which) const
{
    const EnvelopeJet jet = eval_with_derivatives(p, t);
    return which == Wrt::p ? jet.Ep : jet.Et;
}

// ---------------------------------------------------------------------------

AssumptionReport validate_assumption(const ProceduralEnvelope& env, int samples)
{
    AssumptionReport report;
    const SweepScene& scene = env.scene();
    const SeedSurface& seed = env.seed();
    const int side = std::max(2, static_cast<int>(std::lround(std::sqrt(std::max(samples, 4)))));
    const ParamDomain& d = scene.domain();

    for (int it = 0; it < side; ++it) {
        const double t = seed.t_begin() + (seed.t_end() - seed.t_begin()) * it / (side - 1);
        const FunnelSlice slice = trace_slice(scene, t);
        if (slice.curves.empty()) continue;
        for (int ip = 0; ip < side; ++ip) {
            const double p = seed.closed() ? static_cast<double>(ip) / side
                                           : static_cast<double>(ip) / (side - 1);
            const SeedJet g = seed.eval(p, t);
            const Vec2 w = d.wrap(g.uv);
            const SweepEval e = evaluate_unchecked(scene, w.x(), w.y(), t);
            const Vec3 P = e.sigma;
            const Vec3 n = e.sigma_u * g.d_p.x() + e.sigma_v * g.d_p.y();

            // The traced component nearest to the seed point.
            const ContactCurve* curve = nullptr;
            std::size_t k0 = 0;
            double best = kInf;
            for (const auto& c : slice.curves) {
                for (std::size_t k = 0; k < c.image.size(); ++k) {
                    const double dist = (c.image[k] - P).norm();
                    if (dist < best) {
                        best = dist;
                        curve = &c;
                        k0 = k;
                    }
                }
            }
            const std::size_t m = curve->image.size();
            std::vector<std::size_t> idx;
            if (curve->closed) {
                const long half = static_cast<long>(m / 4);
                for (long k = -half; k <= half; ++k)
                    idx.push_back(static_cast<std::size_t>((static_cast<long>(k0) + k + static_cast<long>(m)) % static_cast<long>(m)));
            } else {
                for (std::size_t k = 0; k < m; ++k) idx.push_back(k);
            }
            // Vertices within tol of the plane count once per run; this catches open curves
            // whose end lies on the plane.
            const double tol = 1e-9 * scene.length_scale() * n.norm();
            int crossings = 0;
            int last = 0;
            bool on_plane = false;
            // Open curves are extended along their end tangents by the same slack eval allows
            // outside the patch.
            std::vector<Vec3> pts;
            pts.reserve(idx.size() + 2);
            const double ext = 1e-2 * scene.length_scale();
            if (!curve->closed && m >= 2) {
                const Vec3 d0 = (curve->image[0] - curve->image[1]).normalized();
                pts.push_back(curve->image[0] + ext * d0);
            }
            for (std::size_t k : idx) pts.push_back(curve->image[k]);
            if (!curve->closed && m >= 2) {
                const Vec3 d1 = (curve->image[m - 1] - curve->image[m - 2]).normalized();
                pts.push_back(curve->image[m - 1] + ext * d1);
            }
            for (const Vec3& x : pts) {
                const double s = (x - P).dot(n);
                if (std::abs(s) <= tol) {
                    if (!on_plane) ++crossings;
                    on_plane = true;
                    last = 0;
                    continue;
                }
                on_plane = false;
                const int sign = s > 0.0 ? 1 : -1;
                if (last != 0 && sign != last) ++crossings;
                last = sign;
            }
            ++report.samples;
            if (crossings != 1) report.violations.push_back({p, t, crossings});
        }
    }
    return report;
}

double gaussian_curvature_translational(const SweepScene& scene, const FunnelPoint& fp)
{
    const Trajectory& traj = scene.trajectory();
    bool translational = traj.is_translational();
    for (int k = 0; translational && k <= 8; ++k)
        translational = (traj.sample(k / 8.0).A - Mat3::Identity()).norm() <= 1e-14;
    if (!translational)
        throw PreconditionError("translational curvature formula needs A(t) = I for all t");
    if (!(std::abs(fp.eval.f) <= scene.funnel_tolerance()))
        throw PreconditionError("curvature point is off the funnel");

    const SweepEval& e = fp.eval;
    const double nvt = e.N.dot(e.sigma_tt);  // V_t = b'' when A = I
    const double kv2 = (e.l * e.N_u() + e.m * e.N_v()).dot(e.V);
    const double den = nvt - kv2;
    if (!(std::abs(den) > 1e-12 * (std::abs(nvt) + std::abs(kv2)))) {
        throw CurvatureDegeneracyError("translational curvature denominator vanishes");
    }
    return nvt / den * e.jet.W.determinant();
}

}  // namespace sweepkit
