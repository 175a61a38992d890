#include "sweepkit/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sweepkit {

SweepScene::SweepScene(SurfacePtr surface, TrajectoryPtr trajectory, std::string id)
    : surface_(std::move(surface)), trajectory_(std::move(trajectory)), id_(std::move(id))
{
    if (!surface_ || !trajectory_) throw PreconditionError("scene needs a surface and a trajectory");

    const ParamDomain& d = surface_->domain();
    constexpr int kGrid = 16;
    Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 hi = -lo;
    double vmax = 0.0;
    for (int i = 0; i <= kGrid; ++i) {
        for (int j = 0; j <= kGrid; ++j) {
            const double u = d.u0 + (d.u1 - d.u0) * i / kGrid;
            const double v = d.v0 + (d.v1 - d.v0) * j / kGrid;
            const SurfaceJet s = surface_->jet_unchecked(u, v);
            lo = lo.cwiseMin(s.S);
            hi = hi.cwiseMax(s.S);
            for (int k = 0; k <= 4; ++k) {
                const MotionJet h = trajectory_->sample(k / 4.0);
                vmax = std::max(vmax, (h.dA * s.S + h.db).norm());
            }
        }
    }
    length_scale_ = std::max((hi - lo).norm(), 1e-300);
    velocity_scale_ = vmax;
}

double SweepScene::theta_scale() const
{
    return velocity_scale_ * velocity_scale_ / length_scale_;
}

double SweepScene::funnel_tolerance() const { return 1e-10 * velocity_scale_; }

Vec3 sweep_map(const SweepScene& scene, double u, double v, double t)
{
    const MotionJet h = scene.trajectory().sample(t);
    return h.apply(scene.surface().eval_jet(u, v).S);
}

Vec4 extended_sweep(const SweepScene& scene, double u, double v, double t)
{
    Vec4 out;
    out.head<3>() = sweep_map(scene, u, v, t);
    out[3] = t;
    return out;
}

namespace {

SweepEval assemble(const SurfaceJet& s, const MotionJet& h, double t)
{
    SweepEval e;
    e.u = s.u;
    e.v = s.v;
    e.t = t;
    e.jet = s;
    e.motion = h;
    e.sigma = h.A * s.S + h.b;
    e.sigma_u = h.A * s.Su;
    e.sigma_v = h.A * s.Sv;
    e.V = h.dA * s.S + h.db;
    e.sigma_tt = h.ddA * s.S + h.ddb;
    e.N = h.A * s.N;
    e.f = e.V.dot(e.N);

    const Vec3 Nu = h.A * s.Nu();
    const Vec3 Nv = h.A * s.Nv();
    e.fu = (h.dA * s.Su).dot(e.N) + e.V.dot(Nu);
    e.fv = (h.dA * s.Sv).dot(e.N) + e.V.dot(Nv);
    e.ft = e.sigma_tt.dot(e.N) + e.V.dot(h.dA * s.N);

    Mat2 G;
    G << e.sigma_u.dot(e.sigma_u), e.sigma_u.dot(e.sigma_v), e.sigma_u.dot(e.sigma_v),
        e.sigma_v.dot(e.sigma_v);
    const double det = G.determinant();
    if (!(det > 1e-24 * G.trace() * G.trace()))
        throw DegenerateSurfaceError("degenerate Gram matrix of {sigma_u, sigma_v}");
    const Vec2 lm = G.inverse() * Vec2(e.sigma_u.dot(e.V), e.sigma_v.dot(e.V));
    e.l = lm.x();
    e.m = lm.y();
    return e;
}

}  // namespace

SweepEval evaluate(const SweepScene& scene, double u, double v, double t)
{
    const MotionJet h = scene.trajectory().sample(t);
    return assemble(scene.surface().eval_jet(u, v), h, t);
}

SweepEval evaluate_unchecked(const SweepScene& scene, double u, double v, double t)
{
    const MotionJet h = scene.trajectory().sample(t);
    return assemble(scene.surface().jet_unchecked(u, v), h, t);
}

Mat3 jacobian(const SweepScene& scene, double u, double v, double t)
{
    const SweepEval e = evaluate(scene, u, v, t);
    Mat3 J;
    J.col(0) = e.sigma_u;
    J.col(1) = e.sigma_v;
    J.col(2) = e.V;
    return J;
}

double orientation_sign(const SweepEval& e)
{
    return e.sigma_u.cross(e.sigma_v).dot(e.N) >= 0.0 ? 1.0 : -1.0;
}

}  // namespace sweepkit
