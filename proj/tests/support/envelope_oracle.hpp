#pragma once

#include "sweepkit/envelope.hpp"

#include <cmath>

namespace oracle {

using namespace sweepkit;

/// Distance from x to the iso-t curve E(., t) of env, by Gauss-Newton on |E(q,t) - x|^2
/// started at q = p.
inline double distance_to_iso_curve(const ProceduralEnvelope& env, const Vec3& x, double p, double t)
{
    double q = p;
    double dist = 0.0;
    for (int it = 0; it < 30; ++it) {
        const EnvelopeJet j = env.eval_with_derivatives(q, t);
        const Vec3 r = j.E - x;
        dist = r.norm();
        const double step = r.dot(j.Ep) / j.Ep.squaredNorm();
        double qn = q - step;
        if (!env.seed().closed()) qn = std::clamp(qn, 0.0, 1.0);
        if (std::abs(qn - q) < 1e-15) break;
        q = qn;
    }
    return dist;
}

/// Central difference of the envelope position along p or t.
inline Vec3 central_difference(const ProceduralEnvelope& env, double p, double t,
                               ProceduralEnvelope::Wrt which, double h)
{
    if (which == ProceduralEnvelope::Wrt::p)
        return (env.eval(p + h, t).E - env.eval(p - h, t).E) / (2.0 * h);
    return (env.eval(p, t + h).E - env.eval(p, t - h).E) / (2.0 * h);
}

}  // namespace oracle
