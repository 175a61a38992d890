#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace sweepkit {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec4 = Eigen::Vector4d;
using Mat2 = Eigen::Matrix2d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

/// Base of every error raised by the kernel. The CLI maps all of them to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a map (time outside [0,1], (u,v) outside the patch).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Surface is not regular at the requested point.
class DegenerateSurfaceError : public Error {
public:
    using Error::Error;
};

/// The sweep violates non-degeneracy (f identically zero, or grad f vanishes on the funnel).
class DegenerateSweepError : public Error {
public:
    using Error::Error;
};

/// (fu, fv) = (0, 0) at a funnel point; the {alpha, beta} frame is undefined there.
class FrameDegeneracyError : public Error {
public:
    using Error::Error;
};

/// Precondition of an operation not met by the caller.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// No funnel point found at the requested resolution.
class NotFoundError : public Error {
public:
    using Error::Error;
};

/// Number of contact-curve components changes between time slices.
class TopologyChangeError : public Error {
public:
    using Error::Error;
};

/// Newton iteration failed to reach tolerance. Carries the last iterate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, Vec2 last_iterate, double residual)
        : Error(what), last_(std::move(last_iterate)), residual_(residual) {}

    const Vec2& last_iterate() const noexcept { return last_; }
    double residual() const noexcept { return residual_; }

private:
    Vec2 last_;
    double residual_;
};

/// Denominator of the translational curvature formula vanishes.
class CurvatureDegeneracyError : public Error {
public:
    using Error::Error;
};

/// Linear system that should be regular is (numerically) singular.
class SingularSystemError : public Error {
public:
    using Error::Error;
};

}  // namespace sweepkit
