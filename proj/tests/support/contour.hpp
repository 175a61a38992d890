#pragma once

// Brute-force oracle: zero crossings of f on a dense (u,v) grid, linearly interpolated
// along grid edges, and parameter-space Hausdorff distances against traced curves.

#include "sweepkit/funnel.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace oracle {

using namespace sweepkit;

inline std::vector<Vec2> zero_crossings(const SweepScene& sc, double t, int n = 400)
{
    const ParamDomain& d = sc.domain();
    const double du = (d.u1 - d.u0) / n, dv = (d.v1 - d.v0) / n;
    std::vector<double> f(static_cast<std::size_t>((n + 1) * (n + 1)));
    auto idx = [n](int i, int j) { return static_cast<std::size_t>(i * (n + 1) + j); };
    for (int i = 0; i <= n; ++i)
        for (int j = 0; j <= n; ++j)
            f[idx(i, j)] = evaluate_unchecked(sc, d.u0 + i * du, d.v0 + j * dv, t).f;
    std::vector<Vec2> out;
    auto add = [&](Vec2 a, Vec2 b, double fa, double fb) {
        if ((fa < 0.0) == (fb < 0.0)) return;
        const double s = fa / (fa - fb);
        out.push_back(a + s * (b - a));
    };
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            const Vec2 p(d.u0 + i * du, d.v0 + j * dv);
            if (j < n) add(p, p + Vec2(0, dv), f[idx(i, j)], f[idx(i, j + 1)]);
            if (i < n) add(p, p + Vec2(du, 0), f[idx(i, j)], f[idx(i + 1, j)]);
        }
    }
    return out;
}

inline double point_segment(const ParamDomain& d, const Vec2& p, const Vec2& a, const Vec2& b)
{
    const Vec2 pa = d.delta(a, p);
    const Vec2 ab = d.delta(a, b);
    const double len2 = ab.squaredNorm();
    const double s = len2 > 0 ? std::clamp(pa.dot(ab) / len2, 0.0, 1.0) : 0.0;
    return (pa - s * ab).norm();
}

inline double distance_to_curves(const ParamDomain& d, const Vec2& p,
                                 const std::vector<ContactCurve>& curves)
{
    double best = std::numeric_limits<double>::infinity();
    for (const auto& c : curves) {
        const std::size_t n = c.points.size();
        if (n == 1) best = std::min(best, d.delta(p, c.points[0].uv()).norm());
        for (std::size_t i = 0; i + 1 < n; ++i)
            best = std::min(best, point_segment(d, p, c.points[i].uv(), c.points[i + 1].uv()));
        if (c.closed && n > 2)
            best = std::min(best, point_segment(d, p, c.points[n - 1].uv(), c.points[0].uv()));
    }
    return best;
}

/// Symmetric Hausdorff distance between traced curves and grid zero crossings.
inline double hausdorff(const SweepScene& sc, const std::vector<ContactCurve>& curves,
                        const std::vector<Vec2>& crossings)
{
    const ParamDomain& d = sc.domain();
    double h = 0.0;
    for (const Vec2& p : crossings) h = std::max(h, distance_to_curves(d, p, curves));
    for (const auto& c : curves) {
        for (const auto& fp : c.points) {
            double best = std::numeric_limits<double>::infinity();
            for (const Vec2& q : crossings) best = std::min(best, d.delta(fp.uv(), q).norm());
            h = std::max(h, best);
        }
    }
    return h;
}

}  // namespace oracle
