#include "sweepkit/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sweepkit {

Mat3 skew(const Vec3& a)
{
    Mat3 k;
    k << 0.0, -a.z(), a.y(),
         a.z(), 0.0, -a.x(),
        -a.y(), a.x(), 0.0;
    return k;
}

MotionJet MotionJet::inverse() const
{
    MotionJet inv;
    inv.t = t;
    inv.A = A.transpose();
    inv.dA = dA.transpose();
    inv.ddA = ddA.transpose();
    inv.b = -inv.A * b;
    inv.db = -inv.dA * b - inv.A * db;
    inv.ddb = -inv.ddA * b - 2.0 * inv.dA * db - inv.A * ddb;
    return inv;
}

MotionJet MotionJet::compose(const MotionJet& in) const
{
    MotionJet out;
    out.t = t;
    out.A = A * in.A;
    out.dA = dA * in.A + A * in.dA;
    out.ddA = ddA * in.A + 2.0 * dA * in.dA + A * in.ddA;
    out.b = A * in.b + b;
    out.db = dA * in.b + A * in.db + db;
    out.ddb = ddA * in.b + 2.0 * dA * in.db + A * in.ddb + ddb;
    return out;
}

MotionJet Trajectory::sample(double t) const
{
    if (!(t >= 0.0 && t <= 1.0)) {
        std::ostringstream msg;
        msg << "time " << t << " outside [0,1]";
        throw DomainError(msg.str());
    }
    MotionJet jet = evaluate(t);
    jet.t = t;
    return jet;
}

MotionJet IdentityTrajectory::evaluate(double t) const
{
    MotionJet jet;
    jet.t = t;
    return jet;
}

LinearTranslation::LinearTranslation(Vec3 velocity, Vec3 acceleration)
    : velocity_(std::move(velocity)), acceleration_(std::move(acceleration))
{
}

MotionJet LinearTranslation::evaluate(double t) const
{
    MotionJet jet;
    jet.b = velocity_ * t + 0.5 * acceleration_ * t * t;
    jet.db = velocity_ + acceleration_ * t;
    jet.ddb = acceleration_;
    return jet;
}

CircularTranslation::CircularTranslation(double radius, Vec3 normal, Vec3 start_dir, double rate)
    : radius_(radius), rate_(rate)
{
    if (normal.norm() == 0.0) throw PreconditionError("circular_translation: zero normal");
    normal.normalize();
    start_dir -= normal * normal.dot(start_dir);
    if (start_dir.norm() < 1e-12)
        throw PreconditionError("circular_translation: start_dir parallel to normal");
    e_ = start_dir.normalized();
    f_ = normal.cross(e_);
}

MotionJet CircularTranslation::evaluate(double t) const
{
    const double a = rate_ * t;
    const double c = std::cos(a), s = std::sin(a);
    MotionJet jet;
    jet.b = radius_ * ((c - 1.0) * e_ + s * f_);
    jet.db = radius_ * rate_ * (-s * e_ + c * f_);
    jet.ddb = -radius_ * rate_ * rate_ * (c * e_ + s * f_);
    return jet;
}

AnglePolynomial::AnglePolynomial(std::vector<double> coefficients)
    : coeffs_(std::move(coefficients))
{
}

double AnglePolynomial::value(double t) const
{
    double v = 0.0, p = t;
    for (double c : coeffs_) {
        v += c * p;
        p *= t;
    }
    return v;
}

double AnglePolynomial::rate(double t) const
{
    double v = 0.0, p = 1.0;
    for (std::size_t k = 0; k < coeffs_.size(); ++k) {
        v += static_cast<double>(k + 1) * coeffs_[k] * p;
        p *= t;
    }
    return v;
}

double AnglePolynomial::acceleration(double t) const
{
    double v = 0.0, p = 1.0;
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
        v += static_cast<double>((k + 1) * k) * coeffs_[k] * p;
        p *= t;
    }
    return v;
}

ScrewMotion::ScrewMotion(Vec3 axis, Vec3 point, AnglePolynomial angle, double pitch)
    : axis_(std::move(axis)), point_(std::move(point)), angle_(std::move(angle)), pitch_(pitch)
{
    if (axis_.norm() == 0.0) throw PreconditionError("rotation axis must be nonzero");
    axis_.normalize();
}

MotionJet ScrewMotion::evaluate(double t) const
{
    const double phi = angle_.value(t);
    const double w = angle_.rate(t);
    const double dw = angle_.acceleration(t);
    const Mat3 K = skew(axis_);
    const Mat3 K2 = K * K;

    MotionJet jet;
    jet.A = Mat3::Identity() + std::sin(phi) * K + (1.0 - std::cos(phi)) * K2;
    jet.dA = w * K * jet.A;
    jet.ddA = dw * K * jet.A + w * w * K2 * jet.A;
    jet.b = point_ - jet.A * point_ + pitch_ * phi * axis_;
    jet.db = -jet.dA * point_ + pitch_ * w * axis_;
    jet.ddb = -jet.ddA * point_ + pitch_ * dw * axis_;
    return jet;
}

ComposedTrajectory::ComposedTrajectory(TrajectoryPtr outer, TrajectoryPtr inner)
    : outer_(std::move(outer)), inner_(std::move(inner))
{
    if (!outer_ || !inner_) throw PreconditionError("compose: missing trajectory");
}

MotionJet ComposedTrajectory::evaluate(double t) const
{
    return outer_->sample(t).compose(inner_->sample(t));
}

// ---------------------------------------------------------------------------
// Keyframes

void KeyframeTrajectory::CubicSpline::fit(std::vector<double> xs, std::vector<double> ys)
{
    x = std::move(xs);
    y = std::move(ys);
    const std::size_t n = x.size();
    m.assign(n, 0.0);
    if (n < 3) return;
    // natural spline: tridiagonal system for interior second derivatives
    const std::size_t k = n - 2;
    std::vector<double> lower(k), diag(k), upper(k), rhs(k);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double h0 = x[i] - x[i - 1];
        const double h1 = x[i + 1] - x[i];
        lower[i - 1] = h0;
        diag[i - 1] = 2.0 * (h0 + h1);
        upper[i - 1] = h1;
        rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
    }
    for (std::size_t i = 1; i < k; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    for (std::size_t i = k; i-- > 0;) {
        double r = rhs[i];
        if (i + 1 < k) r -= upper[i] * m[i + 2];
        m[i + 1] = r / diag[i];
    }
}

void KeyframeTrajectory::CubicSpline::eval(double t, double& v, double& d, double& dd) const
{
    const std::size_t n = x.size();
    std::size_t i = static_cast<std::size_t>(
        std::upper_bound(x.begin(), x.end(), t) - x.begin());
    i = std::clamp<std::size_t>(i, 1, n - 1);
    const double h = x[i] - x[i - 1];
    const double a = (x[i] - t) / h;
    const double b = (t - x[i - 1]) / h;
    v = a * y[i - 1] + b * y[i] + ((a * a * a - a) * m[i - 1] + (b * b * b - b) * m[i]) * h * h / 6.0;
    d = (y[i] - y[i - 1]) / h - (3.0 * a * a - 1.0) * h / 6.0 * m[i - 1] +
        (3.0 * b * b - 1.0) * h / 6.0 * m[i];
    dd = a * m[i - 1] + b * m[i];
}

KeyframeTrajectory::KeyframeTrajectory(std::vector<Keyframe> keys)
{
    if (keys.size() < 2) throw PreconditionError("keyframes: need at least two keys");
    std::sort(keys.begin(), keys.end(), [](const Keyframe& a, const Keyframe& b) { return a.t < b.t; });
    for (std::size_t i = 1; i < keys.size(); ++i)
        if (!(keys[i].t > keys[i - 1].t)) throw PreconditionError("keyframes: times must be distinct");
    if (std::abs(keys.front().t) > 0.0 || std::abs(keys.back().t - 1.0) > 0.0)
        throw PreconditionError("keyframes: times must span exactly [0,1]");
    const Eigen::Quaterniond q0 = keys.front().rotation.normalized();
    if (std::abs(std::abs(q0.w()) - 1.0) > 1e-12 || keys.front().position.norm() > 1e-12)
        throw PreconditionError("keyframes: pose at t=0 must be the identity");

    std::vector<double> ts;
    std::vector<double> qs[4], ps[3];
    Eigen::Vector4d prev(1.0, 0.0, 0.0, 0.0);
    for (const auto& k : keys) {
        Eigen::Quaterniond q = k.rotation.normalized();
        Eigen::Vector4d c(q.w(), q.x(), q.y(), q.z());
        if (c.dot(prev) < 0.0) c = -c;
        prev = c;
        ts.push_back(k.t);
        for (int j = 0; j < 4; ++j) qs[j].push_back(c[j]);
        for (int j = 0; j < 3; ++j) ps[j].push_back(k.position[j]);
    }
    times_ = ts;
    for (int j = 0; j < 4; ++j) q_[j].fit(ts, qs[j]);
    for (int j = 0; j < 3; ++j) p_[j].fit(ts, ps[j]);
}

namespace {

// Symmetric bilinear form with quat_matrix(q, q) = |q|^2 R(q/|q|).
Mat3 quat_matrix(const Eigen::Vector4d& p, const Eigen::Vector4d& q)
{
    const double ww = p[0] * q[0], xx = p[1] * q[1], yy = p[2] * q[2], zz = p[3] * q[3];
    const double xy = p[1] * q[2] + p[2] * q[1];
    const double xz = p[1] * q[3] + p[3] * q[1];
    const double yz = p[2] * q[3] + p[3] * q[2];
    const double wx = p[0] * q[1] + p[1] * q[0];
    const double wy = p[0] * q[2] + p[2] * q[0];
    const double wz = p[0] * q[3] + p[3] * q[0];
    Mat3 m;
    m << ww + xx - yy - zz, xy - wz, xz + wy,
         xy + wz, ww - xx + yy - zz, yz - wx,
         xz - wy, yz + wx, ww - xx - yy + zz;
    return m;
}

}  // namespace

MotionJet KeyframeTrajectory::evaluate(double t) const
{
    Eigen::Vector4d q, dq, ddq;
    for (int j = 0; j < 4; ++j) q_[j].eval(t, q[j], dq[j], ddq[j]);

    const double n = q.squaredNorm();
    const double dn = 2.0 * q.dot(dq);
    const double ddn = 2.0 * (dq.squaredNorm() + q.dot(ddq));
    const double g = 1.0 / n;
    const double dg = -dn / (n * n);
    const double ddg = -ddn / (n * n) + 2.0 * dn * dn / (n * n * n);

    const Mat3 M = quat_matrix(q, q);
    const Mat3 dM = 2.0 * quat_matrix(q, dq);
    const Mat3 ddM = 2.0 * quat_matrix(dq, dq) + 2.0 * quat_matrix(q, ddq);

    MotionJet jet;
    jet.A = M * g;
    jet.dA = dM * g + M * dg;
    jet.ddA = ddM * g + 2.0 * dM * dg + M * ddg;
    for (int j = 0; j < 3; ++j) p_[j].eval(t, jet.b[j], jet.db[j], jet.ddb[j]);
    return jet;
}

// ---------------------------------------------------------------------------

MotionJet sample_motion(const Trajectory& traj, double t) { return traj.sample(t); }

MotionJet inverse_motion(const Trajectory& traj, double t) { return traj.sample(t).inverse(); }

PointTrajectory point_trajectory(const Trajectory& traj, const Vec3& x, double t)
{
    const MotionJet h = traj.sample(t);
    return {h.A * x + h.b, h.dA * x + h.db, h.ddA * x + h.ddb};
}

MotionJet rebased_motion(const Trajectory& traj, double t0, double t)
{
    MotionJet base = traj.sample(t0).inverse();
    base.dA.setZero();
    base.ddA.setZero();
    base.db.setZero();
    base.ddb.setZero();
    MotionJet out = traj.sample(t).compose(base);
    out.t = t;
    return out;
}

PointTrajectory inverse_point_trajectory(const Trajectory& traj, const Vec3& x, double t0, double t)
{
    const MotionJet inv = rebased_motion(traj, t0, t).inverse();
    return {inv.A * x + inv.b, inv.dA * x + inv.db, inv.ddA * x + inv.ddb};
}

}  // namespace sweepkit
