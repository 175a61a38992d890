#pragma once

// In-code copies of the bundled scenes, independent of the config loader.

#include "sweepkit/sweep.hpp"

#include <cmath>
#include <memory>

namespace corpus {

using namespace sweepkit;

inline Mat3 rows(double a, double b, double c, double d, double e, double f, double g, double h,
                 double i)
{
    Mat3 m;
    m << a, b, c, d, e, f, g, h, i;
    return m;
}

inline TrajectoryPtr quarter_circle()
{
    return std::make_shared<CircularTranslation>(3.0, Vec3::UnitZ(), Vec3::UnitX(), kPi / 2);
}

inline SweepScene example1()
{
    ParamDomain d{-1.25, 1.25, -kPi, kPi, false, true};
    Placement pl{rows(1, 0, 0, 0, 0, 1, 0, -1, 0), Vec3::Zero()};
    auto cyl = std::make_shared<CylinderSurface>(2.0, d, pl, true);
    auto rot = std::make_shared<AxisRotation>(Vec3::UnitX(), Vec3::Zero(),
                                              AnglePolynomial({0.1 * kPi}));
    auto traj = std::make_shared<ComposedTrajectory>(quarter_circle(), rot);
    return SweepScene(cyl, traj, "cylinder_example1");
}

inline SweepScene example2()
{
    Placement pl{rows(-1, 0, 0, 0, 0, 1, 0, 1, 0), Vec3::Zero()};
    auto ell = std::make_shared<EllipsoidSurface>(Vec3(3, 1, 1), EllipsoidSurface::default_domain(),
                                                  pl, true);
    return SweepScene(ell, quarter_circle(), "ellipsoid_example2");
}

/// Unit sphere, poles along the motion so the funnel is the equator u = 0.
inline SweepScene translating_sphere(Vec3 velocity = Vec3::UnitX())
{
    Placement pl{rows(0, 0, 1, 1, 0, 0, 0, 1, 0), Vec3::Zero()};
    auto s = std::make_shared<SphereSurface>(1.0, EllipsoidSurface::default_domain(), pl, true);
    return SweepScene(s, std::make_shared<LinearTranslation>(velocity), "translating_sphere");
}

/// Unit sphere translated along a quarter of a circle of radius 3; poles along the mean
/// direction of motion so no contact circle passes through them.
inline SweepScene circular_sphere()
{
    const double r = 1.0 / std::sqrt(2.0);
    Placement pl{rows(0, r, -r, 0, r, r, 1, 0, 0), Vec3::Zero()};
    auto s = std::make_shared<SphereSurface>(1.0, EllipsoidSurface::default_domain(), pl, true);
    return SweepScene(s, quarter_circle(), "circular_sphere");
}

/// Unit sphere rotating a quarter turn about the z-parallel line through (1,0,0); poles along y.
inline SweepScene tangent_axis_sphere()
{
    Placement pl{rows(1, 0, 0, 0, 0, 1, 0, -1, 0), Vec3::Zero()};
    auto s = std::make_shared<SphereSurface>(1.0, EllipsoidSurface::default_domain(), pl, true);
    auto rot = std::make_shared<AxisRotation>(Vec3::UnitZ(), Vec3::UnitX(),
                                              AnglePolynomial({kPi / 2}));
    return SweepScene(s, rot, "tangent_axis_sphere");
}

}  // namespace corpus
