#pragma once

#include "sweepkit/sweep.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sweepkit {

/// Point of the funnel {f = 0} with its tangent frame:
/// beta = (-fv, fu, 0) along the pcurve-of-contact, alpha = grad f x beta.
struct FunnelPoint {
    double u = 0.0, v = 0.0, t = 0.0;
    SweepEval eval;
    Vec3 alpha = Vec3::Zero();
    Vec3 beta = Vec3::Zero();

    Vec2 uv() const { return {u, v}; }
    Vec3 uvt() const { return {u, v, t}; }
};

/// Ordered polyline of funnel points at a fixed time, with its image C_t.
struct ContactCurve {
    double t = 0.0;
    std::vector<FunnelPoint> points;
    bool closed = false;
    std::vector<Vec3> image;

    std::size_t size() const { return points.size(); }
    /// Object-space length of the image polyline (closing segment included when closed).
    double image_length() const;
};

/// Tracing failure; keeps whatever was traced before the failure.
class TraceError : public Error {
public:
    TraceError(const std::string& what, ContactCurve partial)
        : Error(what), partial_(std::move(partial)) {}
    const ContactCurve& partial() const { return partial_; }

private:
    ContactCurve partial_;
};

struct TraceOptions {
    double step = 0.0;          // parameter-space arclength; <= 0 selects the scene default
    int max_corrector_iterations = 25;
    std::size_t max_points = 20000;
    int min_steps_before_closure = 10;
};

/// alpha and beta at an on-funnel evaluation. Throws FrameDegeneracyError when
/// (fu, fv) vanishes.
std::pair<Vec3, Vec3> frame(const SweepScene& scene, const SweepEval& e);
std::pair<Vec3, Vec3> frame(const SweepScene& scene, const FunnelPoint& fp);

/// Wraps an evaluation into a FunnelPoint (frame included). No membership check.
FunnelPoint make_funnel_point(const SweepScene& scene, const SweepEval& e);

/// Newton projection onto f = 0 at fixed t, moving (u,v) along (fu, fv).
/// Throws ConvergenceError when |f| stays above the funnel tolerance.
FunnelPoint snap_to_funnel(const SweepScene& scene, double u, double v, double t,
                           int max_iterations = 50);

/// Grid-scan bracketing of a sign change of f (edges along v first), bisection, then snap.
FunnelPoint find_seed(const SweepScene& scene, double t, int grid = 64);

/// Predictor along beta, Newton corrector back to f = 0. Traces both directions from the
/// seed when the curve is open (ends on the domain boundary).
ContactCurve trace_pcurve(const SweepScene& scene, double t, const FunnelPoint& seed,
                          const TraceOptions& options = {});

struct FunnelSlice {
    double t = 0.0;
    std::vector<ContactCurve> curves;
    std::vector<std::string> errors;
};

struct SampleOptions {
    double step = 0.0;  // <= 0: scene default
    int grid = 64;
};

/// Contact curves at nt uniform times in [t_begin, t_end], re-seeding on sign-change cells
/// that are not yet covered. Per-slice failures are recorded in FunnelSlice::errors.
std::vector<FunnelSlice> sample_funnel(const SweepScene& scene, int nt,
                                       const SampleOptions& options = {}, double t_begin = 0.0,
                                       double t_end = 1.0);

/// All contact curves at a single time (the per-slice work of sample_funnel).
FunnelSlice trace_slice(const SweepScene& scene, double t, const SampleOptions& options = {});

}  // namespace sweepkit
