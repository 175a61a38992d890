#pragma once

#include "sweepkit/funnel.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sweepkit {

/// l fu + m fv - ft from an evaluation, with no funnel-membership check.
double theta_raw(const SweepEval& e);

/// theta at a funnel point. Throws PreconditionError when |f| exceeds the funnel tolerance.
double theta(const SweepScene& scene, const FunnelPoint& fp);

/// The 2x2 matrix D(p) whose determinant is (fu^2 + fv^2) theta.
Mat2 frame_transform(const SweepEval& e);

/// det D(p). Throws FrameDegeneracyError when (fu, fv) = (0, 0).
double det_frame_transform(const SweepScene& scene, const FunnelPoint& fp);

/// Second time derivative of the clearance of the inverse trajectory at t0, evaluated as
/// <-sigma_tt + 2 Omega V, N> + kappa v^2, Omega = dA(t0) A(t0)^T, kappa v^2 = <W(V), V>.
double lambda_ddot(const SweepScene& scene, const FunnelPoint& fp);

/// Signed distance at time t of the inverse-trajectory point of sigma(fp) to the surface
/// placed at fp.t; negative inside. `uv_guess` seeds the closest-point Newton iteration and
/// receives the converged foot point. Throws ConvergenceError on divergence.
double clearance(const SweepScene& scene, const FunnelPoint& fp, double t, Vec2& uv_guess);

struct ClearanceProfile {
    FunnelPoint fp;
    std::vector<double> ts;
    std::vector<double> lambdas;
    std::vector<bool> converged;  // per-sample projection status

    /// Smallest lambda over converged samples (+inf when none converged).
    double min_lambda() const;
};

/// n samples of lambda over [t0 - halfwidth, t0 + halfwidth] clipped to [0,1].
ClearanceProfile clearance_profile(const SweepScene& scene, const FunnelPoint& fp,
                                   double halfwidth = 0.05, int n = 21);

struct ThetaSample {
    FunnelPoint fp;
    double l = 0.0, m = 0.0;
    double theta = 0.0;
    double detD = 0.0;
    double lambda_ddot = 0.0;
    bool refined = false;  // produced by minimum/zero refinement rather than tracing
};

ThetaSample sample_theta(const SweepScene& scene, const FunnelPoint& fp);

/// theta-boundary tolerances.
struct Tolerances {
    double eps_theta = 0.0;
    double eps_lambda = 0.0;
};

/// eps_theta = 1e-6 * median |theta| (scene theta scale when no samples);
/// eps_lambda = 1e-8 * scene length scale.
Tolerances default_tolerances(const SweepScene& scene, const std::vector<ThetaSample>& samples = {});

enum class PointClass { clean, lsi, boundary_type2, singular_boundary };

std::string to_string(PointClass c);

struct Classification {
    PointClass kind = PointClass::clean;
    double theta = 0.0;
    double min_lambda = 0.0;  // only computed on the theta ~ 0 boundary
    bool type1 = false;
    bool type2 = false;
};

/// theta < -eps: type-1 and type-2; theta > eps: clean; otherwise decided by the clearance
/// profile (lambda < -eps_lambda somewhere: type-2, else singular boundary).
Classification classify_point(const SweepScene& scene, const FunnelPoint& fp,
                              const Tolerances& tol);
Classification classify_point(const SweepScene& scene, const FunnelPoint& fp);

enum class Verdict { clean, singular, type1_lsi, type2_lsi, degenerate };

std::string to_string(Verdict v);

struct Excision {
    std::size_t count = 0;
    Vec3 uvt_min = Vec3::Zero(), uvt_max = Vec3::Zero();
    Vec3 xyz_min = Vec3::Zero(), xyz_max = Vec3::Zero();
    std::vector<double> times;  // slice times holding excised samples
};

struct LsiReport {
    std::string scene_id;
    std::vector<ThetaSample> samples;
    double min_theta = 0.0;
    double max_theta = 0.0;
    Tolerances tolerances;
    Verdict verdict = Verdict::degenerate;
    Excision excision;  // samples with theta <= eps_theta
    double boundary_min_lambda = 0.0;  // min lambda over theta ~ 0 samples (+inf when none)
    std::vector<std::string> errors;
};

struct DetectOptions {
    int nt = 10;
    SampleOptions sampling;
    bool refine = true;
    std::optional<double> eps_theta;   // overrides the default tolerances when set
    std::optional<double> eps_lambda;
};

/// theta over traced funnel slices, refined at local minima and sign changes of theta along
/// each curve.
LsiReport detect_singularity(const SweepScene& scene, const std::vector<FunnelSlice>& slices,
                             bool refine = true);
LsiReport detect_singularity(const SweepScene& scene, const std::vector<FunnelSlice>& slices,
                             const DetectOptions& options);
LsiReport detect_singularity(const SweepScene& scene, const DetectOptions& options = {});

}  // namespace sweepkit
