#include "sweepkit/surface.hpp"

#include "sweepkit/bspline.hpp"

#include <cmath>
#include <sstream>

namespace sweepkit {

Mat2 SurfaceJet::first_form() const
{
    Mat2 g;
    g << Su.dot(Su), Su.dot(Sv), Su.dot(Sv), Sv.dot(Sv);
    return g;
}

double ParamDomain::diagonal() const { return std::hypot(u1 - u0, v1 - v0); }

bool ParamDomain::contains(double u, double v) const
{
    const double eps_u = 1e-12 * (1.0 + std::abs(u1 - u0));
    const double eps_v = 1e-12 * (1.0 + std::abs(v1 - v0));
    const bool ok_u = periodic_u || (u >= u0 - eps_u && u <= u1 + eps_u);
    const bool ok_v = periodic_v || (v >= v0 - eps_v && v <= v1 + eps_v);
    return ok_u && ok_v && std::isfinite(u) && std::isfinite(v);
}

namespace {

double wrap_into(double x, double lo, double hi)
{
    const double period = hi - lo;
    double y = std::fmod(x - lo, period);
    if (y < 0.0) y += period;
    return lo + y;
}

double periodic_delta(double d, double period)
{
    d = std::fmod(d, period);
    if (d > 0.5 * period) d -= period;
    if (d < -0.5 * period) d += period;
    return d;
}

}  // namespace

Vec2 ParamDomain::wrap(const Vec2& uv) const
{
    Vec2 out = uv;
    if (periodic_u) out.x() = wrap_into(uv.x(), u0, u1);
    if (periodic_v) out.y() = wrap_into(uv.y(), v0, v1);
    return out;
}

Vec2 ParamDomain::delta(const Vec2& a, const Vec2& b) const
{
    Vec2 d = b - a;
    if (periodic_u) d.x() = periodic_delta(d.x(), u_period());
    if (periodic_v) d.y() = periodic_delta(d.y(), v_period());
    return d;
}

bool is_rotation(const Mat3& r, double tol)
{
    return (r.transpose() * r - Mat3::Identity()).norm() <= tol &&
           std::abs(r.determinant() - 1.0) <= tol;
}

ParametricSurface::ParametricSurface(ParamDomain domain, Placement placement, bool outward)
    : domain_(domain), placement_(std::move(placement)), outward_(outward)
{
    if (!(domain_.u1 > domain_.u0) || !(domain_.v1 > domain_.v0))
        throw PreconditionError("surface domain must have positive extent");
    if (!is_rotation(placement_.rotation, 1e-9))
        throw PreconditionError("surface placement rotation is not in SO(3)");
}

SurfaceJet ParametricSurface::eval_jet(double u, double v) const
{
    if (!domain_.contains(u, v)) {
        std::ostringstream msg;
        msg << kind() << ": (u,v) = (" << u << ", " << v << ") outside domain";
        throw DomainError(msg.str());
    }
    return jet_unchecked(u, v);
}

SurfaceJet ParametricSurface::jet_unchecked(double u, double v) const
{
    const Partials c = canonical(u, v);
    const Mat3& R = placement_.rotation;

    SurfaceJet j;
    j.u = u;
    j.v = v;
    j.S = R * c.S + placement_.origin;
    j.Su = R * c.Su;
    j.Sv = R * c.Sv;
    j.Suu = R * c.Suu;
    j.Suv = R * c.Suv;
    j.Svv = R * c.Svv;

    const Vec3 n = j.Su.cross(j.Sv);
    const double len = n.norm();
    if (!(len > regularity_tolerance())) {
        std::ostringstream msg;
        msg << kind() << ": irregular point (u,v) = (" << u << ", " << v << ")";
        throw DegenerateSurfaceError(msg.str());
    }
    const double sign = outward_ ? exterior_sign() : -exterior_sign();
    j.N = (sign / len) * n;

    // W = -I^-1 II with II_ij = <S_ij, N>.
    const Mat2 I = j.first_form();
    Mat2 II;
    II << j.Suu.dot(j.N), j.Suv.dot(j.N), j.Suv.dot(j.N), j.Svv.dot(j.N);
    j.W = -I.inverse() * II;
    return j;
}

// ---------------------------------------------------------------------------

PlaneSurface::PlaneSurface(ParamDomain domain, Placement placement, bool outward)
    : ParametricSurface(domain, std::move(placement), outward)
{
}

ParametricSurface::Partials PlaneSurface::canonical(double u, double v) const
{
    Partials p;
    p.S = Vec3(u, v, 0.0);
    p.Su = Vec3::UnitX();
    p.Sv = Vec3::UnitY();
    p.Suu = p.Suv = p.Svv = Vec3::Zero();
    return p;
}

EllipsoidSurface::EllipsoidSurface(Vec3 semi_axes, ParamDomain domain, Placement placement,
                                   bool outward)
    : ParametricSurface(domain, std::move(placement), outward), axes_(std::move(semi_axes))
{
    if ((axes_.array() <= 0.0).any()) throw PreconditionError("ellipsoid axes must be positive");
}

ParamDomain EllipsoidSurface::default_domain(double pole_margin)
{
    ParamDomain d;
    d.u0 = -0.5 * kPi + pole_margin;
    d.u1 = 0.5 * kPi - pole_margin;
    d.v0 = -kPi;
    d.v1 = kPi;
    d.periodic_v = true;
    return d;
}

ParametricSurface::Partials EllipsoidSurface::canonical(double u, double v) const
{
    const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
    const Vec3& a = axes_;
    Partials p;
    p.S = Vec3(a.x() * cu * cv, a.y() * cu * sv, a.z() * su);
    p.Su = Vec3(-a.x() * su * cv, -a.y() * su * sv, a.z() * cu);
    p.Sv = Vec3(-a.x() * cu * sv, a.y() * cu * cv, 0.0);
    p.Suu = Vec3(-a.x() * cu * cv, -a.y() * cu * sv, -a.z() * su);
    p.Suv = Vec3(a.x() * su * sv, -a.y() * su * cv, 0.0);
    p.Svv = Vec3(-a.x() * cu * cv, -a.y() * cu * sv, 0.0);
    return p;
}

CylinderSurface::CylinderSurface(double radius, ParamDomain domain, Placement placement,
                                 bool outward)
    : ParametricSurface(domain, std::move(placement), outward), radius_(radius)
{
    if (!(radius_ > 0.0)) throw PreconditionError("cylinder radius must be positive");
}

ParametricSurface::Partials CylinderSurface::canonical(double u, double v) const
{
    const double cv = std::cos(v), sv = std::sin(v);
    Partials p;
    p.S = Vec3(radius_ * cv, radius_ * sv, u);
    p.Su = Vec3::UnitZ();
    p.Sv = Vec3(-radius_ * sv, radius_ * cv, 0.0);
    p.Suu = Vec3::Zero();
    p.Suv = Vec3::Zero();
    p.Svv = Vec3(-radius_ * cv, -radius_ * sv, 0.0);
    return p;
}

TorusSurface::TorusSurface(double major, double minor, ParamDomain domain, Placement placement,
                           bool outward)
    : ParametricSurface(domain, std::move(placement), outward), major_(major), minor_(minor)
{
    if (!(major_ > minor_ && minor_ > 0.0))
        throw PreconditionError("torus needs major > minor > 0");
}

ParametricSurface::Partials TorusSurface::canonical(double u, double v) const
{
    const double cu = std::cos(u), su = std::sin(u), cv = std::cos(v), sv = std::sin(v);
    const double rho = major_ + minor_ * cu;
    Partials p;
    p.S = Vec3(rho * cv, rho * sv, minor_ * su);
    p.Su = Vec3(-minor_ * su * cv, -minor_ * su * sv, minor_ * cu);
    p.Sv = Vec3(-rho * sv, rho * cv, 0.0);
    p.Suu = Vec3(-minor_ * cu * cv, -minor_ * cu * sv, -minor_ * su);
    p.Suv = Vec3(minor_ * su * sv, -minor_ * su * cv, 0.0);
    p.Svv = Vec3(-rho * cv, -rho * sv, 0.0);
    return p;
}

SplinePatchSurface::SplinePatchSurface(int degree_u, int degree_v, std::vector<double> knots_u,
                                       std::vector<double> knots_v, int n_u, int n_v,
                                       std::vector<Vec3> controls, Placement placement,
                                       bool outward)
    : ParametricSurface(
          ParamDomain{knots_u.at(degree_u), knots_u.at(n_u), knots_v.at(degree_v), knots_v.at(n_v)},
          std::move(placement), outward),
      pu_(degree_u), pv_(degree_v), ku_(std::move(knots_u)), kv_(std::move(knots_v)), nu_(n_u),
      nv_(n_v), ctrl_(std::move(controls))
{
    if (static_cast<int>(ku_.size()) != nu_ + pu_ + 1 || static_cast<int>(kv_.size()) != nv_ + pv_ + 1)
        throw PreconditionError("spline_patch: knot vector length mismatch");
    if (static_cast<int>(ctrl_.size()) != nu_ * nv_)
        throw PreconditionError("spline_patch: control net size mismatch");
    if (pu_ < 2 || pv_ < 2) throw PreconditionError("spline_patch: degree must be at least 2 (C^2 needs 3)");
}

ParametricSurface::Partials SplinePatchSurface::canonical(double u, double v) const
{
    const int su = bspline::find_span(pu_, ku_, nu_, u);
    const int sv = bspline::find_span(pv_, kv_, nv_, v);
    const Eigen::MatrixXd Nu = bspline::basis_derivatives(pu_, ku_, su, u, 2);
    const Eigen::MatrixXd Nv = bspline::basis_derivatives(pv_, kv_, sv, v, 2);

    Vec3 d[3][3];
    for (auto& row : d)
        for (auto& x : row) x.setZero();
    for (int i = 0; i <= pu_; ++i) {
        for (int j = 0; j <= pv_; ++j) {
            const Vec3& c = ctrl_[static_cast<std::size_t>((su - pu_ + i) * nv_ + (sv - pv_ + j))];
            for (int a = 0; a <= 2; ++a)
                for (int b = 0; a + b <= 2; ++b) d[a][b] += Nu(a, i) * Nv(b, j) * c;
        }
    }
    return {d[0][0], d[1][0], d[0][1], d[2][0], d[1][1], d[0][2]};
}

}  // namespace sweepkit
