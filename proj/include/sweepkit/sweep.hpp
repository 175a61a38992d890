#pragma once

#include "sweepkit/kinematics.hpp"
#include "sweepkit/surface.hpp"

#include <string>

namespace sweepkit {

/// A surface swept along a trajectory over t in [0,1], plus the characteristic
/// scales used to make tolerances dimensionless.
class SweepScene {
public:
    SweepScene(SurfacePtr surface, TrajectoryPtr trajectory, std::string id = "scene");

    const ParametricSurface& surface() const { return *surface_; }
    const Trajectory& trajectory() const { return *trajectory_; }
    const SurfacePtr& surface_ptr() const { return surface_; }
    const TrajectoryPtr& trajectory_ptr() const { return trajectory_; }
    const std::string& id() const { return id_; }
    const ParamDomain& domain() const { return surface_->domain(); }

    /// Bounding-box diagonal of the surface (sampled).
    double length_scale() const { return length_scale_; }
    /// Largest sampled |V| over the domain and [0,1]; 0 for a motionless sweep.
    double velocity_scale() const { return velocity_scale_; }
    /// Characteristic magnitude of theta: v^2 / L.
    double theta_scale() const;
    /// Funnel membership tolerance |f| <= 1e-10 * velocity scale.
    double funnel_tolerance() const;
    /// Default marching step: 1% of the parameter-domain diagonal.
    double default_step() const { return 0.01 * domain().diagonal(); }

private:
    SurfacePtr surface_;
    TrajectoryPtr trajectory_;
    std::string id_;
    double length_scale_ = 1.0;
    double velocity_scale_ = 0.0;
};

/// Everything the funnel condition needs at (u, v, t).
struct SweepEval {
    double u = 0.0, v = 0.0, t = 0.0;
    SurfaceJet jet;
    MotionJet motion;
    Vec3 sigma;
    Vec3 sigma_u, sigma_v;
    Vec3 V;          // sigma_t
    Vec3 sigma_tt;   // ddA S + ddb
    Vec3 N;          // A N(u,v)
    double f = 0.0;  // <V, N>
    double fu = 0.0, fv = 0.0, ft = 0.0;
    double l = 0.0, m = 0.0;  // least-squares V ~ l sigma_u + m sigma_v

    Vec3 grad() const { return {fu, fv, ft}; }
    Vec2 grad_uv() const { return {fu, fv}; }
    Vec3 sigma_uu() const { return motion.A * jet.Suu; }
    Vec3 sigma_uv() const { return motion.A * jet.Suv; }
    Vec3 sigma_vv() const { return motion.A * jet.Svv; }
    Vec3 N_u() const { return motion.A * jet.Nu(); }
    Vec3 N_v() const { return motion.A * jet.Nv(); }
};

Vec3 sweep_map(const SweepScene& scene, double u, double v, double t);

/// (sigma(u,v,t), t).
Vec4 extended_sweep(const SweepScene& scene, double u, double v, double t);

/// Analytic f and its partials. Domain-checked.
SweepEval evaluate(const SweepScene& scene, double u, double v, double t);

/// As evaluate, without the (u,v) domain check (Newton iterates).
SweepEval evaluate_unchecked(const SweepScene& scene, double u, double v, double t);

/// [sigma_u sigma_v sigma_t].
Mat3 jacobian(const SweepScene& scene, double u, double v, double t);

/// +1 when the oriented normal equals (S_u x S_v)/|S_u x S_v|, else -1; det(J) = s |sigma_u x
/// sigma_v| f.
double orientation_sign(const SweepEval& e);

}  // namespace sweepkit
