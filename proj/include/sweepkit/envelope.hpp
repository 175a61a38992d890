#pragma once

#include "sweepkit/funnel.hpp"

#include <string>
#include <vector>

namespace sweepkit {

/// Values of the seed map gamma(p,t) = (ubar, vbar) and its partials.
struct SeedJet {
    Vec2 uv = Vec2::Zero();
    Vec2 d_p = Vec2::Zero();
    Vec2 d_pp = Vec2::Zero();
    Vec2 d_t = Vec2::Zero();
    Vec2 d_pt = Vec2::Zero();
};

struct SeedOptions {
    double t_begin = 0.0;
    double t_end = 1.0;
    std::size_t component = 0;  // which contact-curve component at t_begin to follow
    SampleOptions sampling;
};

/// Interpolating tensor-product spline (p,t) -> (ubar, vbar). Cubic in p (periodic for closed
/// contact curves), degree min(3, nt - 1) in t. Unwrapped v-coordinates of curves that wind
/// around a periodic direction are stored as a periodic part plus a linear drift in p.
class SeedSurface {
public:
    SeedJet eval(double p, double t) const;

    bool closed() const { return closed_; }
    double t_begin() const { return t_knots_.front(); }
    double t_end() const { return t_knots_.back(); }
    int nt() const { return static_cast<int>(t_sites_.size()); }
    int np() const { return np_; }
    const std::vector<double>& times() const { return t_sites_; }
    /// Parameter-space samples the spline interpolates, row-major [slice][p-index].
    const std::vector<std::vector<Vec2>>& samples() const { return samples_; }
    /// Largest |f| over the interpolation sites (after snapping, before fitting).
    double max_site_residual() const { return max_site_residual_; }
    /// Largest |f| at the mid-points between sites, a measure of fitting error.
    double max_midpoint_residual() const { return max_midpoint_residual_; }

    /// Contact curves the seed was sampled from, one per slice.
    const std::vector<ContactCurve>& curves() const { return curves_; }

private:
    friend SeedSurface build_seed(const SweepScene&, int, int, const SeedOptions&);

    bool closed_ = false;
    int np_ = 0;
    int degree_p_ = 3, degree_t_ = 3;
    std::vector<double> p_knots_;  // clamped case
    std::vector<double> t_knots_;
    std::vector<double> t_sites_;
    int n_ctrl_p_ = 0, n_ctrl_t_ = 0;
    Eigen::MatrixXd coeff_u_, coeff_v_;  // n_ctrl_p x n_ctrl_t
    Vec2 drift_ = Vec2::Zero();          // uv(p + 1) - uv(p) for closed curves
    std::vector<std::vector<Vec2>> samples_;
    std::vector<ContactCurve> curves_;
    double max_site_residual_ = 0.0;
    double max_midpoint_residual_ = 0.0;
};

/// Traces nt slices over [t_begin, t_end], resamples the chosen component to np points by
/// object-space arclength with nearest-point start alignment, snaps, and fits the spline.
SeedSurface build_seed(const SweepScene& scene, int nt, int np, const SeedOptions& options = {});

struct EnvelopeJet {
    double p = 0.0, t = 0.0;
    Vec3 E = Vec3::Zero();
    Vec3 Ep = Vec3::Zero();
    Vec3 Et = Vec3::Zero();
    Vec3 N = Vec3::Zero();
    double u = 0.0, v = 0.0;
    int iterations = 0;
    double residual_funnel = 0.0;  // |f|
    double residual_plane = 0.0;   // |<sigma - Ebar, Ebar_p>|
};

struct NewtonSettings {
    double tolerance = 1e-12;  // relative to the scene scales
    int max_iterations = 50;
};

class ProceduralEnvelope {
public:
    ProceduralEnvelope(SweepScene scene, SeedSurface seed, NewtonSettings settings = {});

    /// Point on the contact set at (p, t): 2x2 Newton on f = 0 and the normal-plane condition,
    /// seeded at gamma(p, t). Ep and Et are left zero.
    EnvelopeJet eval(double p, double t) const;

    /// eval plus both first derivatives.
    EnvelopeJet eval_with_derivatives(double p, double t) const;

    enum class Wrt { p, t };
    /// dE/dp or dE/dt from the linearized system at a converged point.
    Vec3 derivative(double p, double t, Wrt which) const;

    /// Funnel residual bound and plane residual bound used to accept a Newton result.
    double funnel_bound() const;
    double plane_bound(const Vec3& Ebar_p) const;

    const SweepScene& scene() const { return scene_; }
    const SeedSurface& seed() const { return seed_; }
    const NewtonSettings& settings() const { return settings_; }

private:
    struct Approx;
    Approx approximate(double p, double t) const;
    void check_parameters(double p, double t) const;

    SweepScene scene_;
    SeedSurface seed_;
    NewtonSettings settings_;
};

struct AssumptionViolation {
    double p = 0.0, t = 0.0;
    int crossings = 0;
};

struct AssumptionReport {
    std::size_t samples = 0;
    std::vector<AssumptionViolation> violations;
    bool ok() const { return violations.empty(); }
};

/// For a grid of roughly `samples` (p, t) values, counts transversal crossings of the traced
/// C_t with the normal plane to the iso-t seed curve. Closed curves are examined within a
/// quarter of their length on either side of the nearest traced point; open curves are extended
/// past their ends by 1% of the scene length scale.
AssumptionReport validate_assumption(const ProceduralEnvelope& env, int samples = 64);

/// Gaussian curvature of the contact set for a purely translational sweep:
/// K = <N, V_t> / (<N, V_t> - <W(V), V>) * det W.
double gaussian_curvature_translational(const SweepScene& scene, const FunnelPoint& fp);

}  // namespace sweepkit
