#pragma once

#include "sweepkit/common.hpp"

#include <memory>
#include <string>
#include <vector>

namespace sweepkit {

/// Rigid motion x -> A x + b at time t, with first and second time derivatives.
struct MotionJet {
    double t = 0.0;
    Mat3 A = Mat3::Identity();
    Mat3 dA = Mat3::Zero();
    Mat3 ddA = Mat3::Zero();
    Vec3 b = Vec3::Zero();
    Vec3 db = Vec3::Zero();
    Vec3 ddb = Vec3::Zero();

    Vec3 apply(const Vec3& x) const { return A * x + b; }

    /// Group inverse (A^T, -A^T b) with derivatives by the product rule.
    MotionJet inverse() const;

    /// this ∘ inner, i.e. x -> A (A_i x + b_i) + b.
    MotionJet compose(const MotionJet& inner) const;
};

/// Position of a point carried by a motion, with its velocity and acceleration.
struct PointTrajectory {
    Vec3 y;
    Vec3 dy;
    Vec3 ddy;
};

/// C^2 rigid-motion trajectory on t in [0,1] with h(0) = identity.
class Trajectory {
public:
    virtual ~Trajectory() = default;

    /// Throws DomainError for t outside [0,1].
    MotionJet sample(double t) const;

    virtual std::string kind() const = 0;

    /// True when A(t) = I for all t by construction.
    virtual bool is_translational() const { return false; }

protected:
    virtual MotionJet evaluate(double t) const = 0;
};

using TrajectoryPtr = std::shared_ptr<const Trajectory>;

class IdentityTrajectory final : public Trajectory {
public:
    std::string kind() const override { return "identity"; }
    bool is_translational() const override { return true; }

protected:
    MotionJet evaluate(double t) const override;
};

/// b(t) = v t + a t^2 / 2, A = I.
class LinearTranslation final : public Trajectory {
public:
    LinearTranslation(Vec3 velocity, Vec3 acceleration = Vec3::Zero());
    std::string kind() const override { return "linear_translation"; }
    bool is_translational() const override { return true; }

protected:
    MotionJet evaluate(double t) const override;

private:
    Vec3 velocity_;
    Vec3 acceleration_;
};

/// Translation along a circle of the given radius through the origin:
/// b(t) = r [ (cos wt - 1) e + sin wt (n x e) ], A = I.
class CircularTranslation final : public Trajectory {
public:
    CircularTranslation(double radius, Vec3 normal, Vec3 start_dir, double rate);
    std::string kind() const override { return "circular_translation"; }
    bool is_translational() const override { return true; }

protected:
    MotionJet evaluate(double t) const override;

private:
    double radius_;
    Vec3 e_;
    Vec3 f_;
    double rate_;
};

/// Angle as a polynomial in t without constant term: phi(t) = c1 t + c2 t^2 + ...
class AnglePolynomial {
public:
    AnglePolynomial() = default;
    explicit AnglePolynomial(std::vector<double> coefficients);

    double value(double t) const;
    double rate(double t) const;
    double acceleration(double t) const;

    const std::vector<double>& coefficients() const { return coeffs_; }

private:
    std::vector<double> coeffs_;  // coeffs_[k] multiplies t^(k+1)
};

/// Rotation by phi(t) about the line through `point` with direction `axis`,
/// optionally advancing along the axis by pitch * phi(t) (screw motion).
class ScrewMotion : public Trajectory {
public:
    ScrewMotion(Vec3 axis, Vec3 point, AnglePolynomial angle, double pitch);
    std::string kind() const override { return pitch_ == 0.0 ? "axis_rotation" : "screw"; }

protected:
    MotionJet evaluate(double t) const override;

private:
    Vec3 axis_;
    Vec3 point_;
    AnglePolynomial angle_;
    double pitch_;
};

class AxisRotation final : public ScrewMotion {
public:
    AxisRotation(Vec3 axis, Vec3 point, AnglePolynomial angle)
        : ScrewMotion(std::move(axis), std::move(point), std::move(angle), 0.0) {}
};

/// h(t) = outer(t) ∘ inner(t).
class ComposedTrajectory final : public Trajectory {
public:
    ComposedTrajectory(TrajectoryPtr outer, TrajectoryPtr inner);
    std::string kind() const override { return "compose"; }
    bool is_translational() const override
    {
        return outer_->is_translational() && inner_->is_translational();
    }

protected:
    MotionJet evaluate(double t) const override;

private:
    TrajectoryPtr outer_;
    TrajectoryPtr inner_;
};

struct Keyframe {
    double t;
    Eigen::Quaterniond rotation;
    Vec3 position;
};

/// Natural cubic splines through keyframe quaternions (sign-aligned) and positions.
/// The rotation is the normalized-quaternion matrix of the spline value, so A stays
/// exactly orthogonal and C^2 in t.
class KeyframeTrajectory final : public Trajectory {
public:
    /// Keyframes must start at t=0 with the identity pose and end at t=1.
    explicit KeyframeTrajectory(std::vector<Keyframe> keys);
    std::string kind() const override { return "keyframes"; }

protected:
    MotionJet evaluate(double t) const override;

private:
    struct CubicSpline {
        std::vector<double> x, y, m;  // m: second derivatives at knots
        void fit(std::vector<double> xs, std::vector<double> ys);
        void eval(double t, double& v, double& d, double& dd) const;
    };
    std::vector<double> times_;
    CubicSpline q_[4];
    CubicSpline p_[3];
};

/// Trajectory conjugated so that the motion at t0 is the identity:
/// h'(t) = h(t) ∘ h(t0)^-1.
MotionJet rebased_motion(const Trajectory& traj, double t0, double t);

MotionJet sample_motion(const Trajectory& traj, double t);
MotionJet inverse_motion(const Trajectory& traj, double t);
PointTrajectory point_trajectory(const Trajectory& traj, const Vec3& x, double t);

/// Inverse trajectory of x in the frame re-based at t0: ybar(t) = A'^T(t)(x - b'(t)).
PointTrajectory inverse_point_trajectory(const Trajectory& traj, const Vec3& x, double t0,
                                         double t);

/// Skew matrix K with K v = axis x v.
Mat3 skew(const Vec3& axis);

}  // namespace sweepkit
