#pragma once

#include "sweepkit/common.hpp"

#include <memory>
#include <string>
#include <vector>

namespace sweepkit {

/// Point on a parametric surface with partials up to order two, the oriented unit
/// normal and the Weingarten matrix W defined by [N_u N_v] = [S_u S_v] W.
struct SurfaceJet {
    double u = 0.0;
    double v = 0.0;
    Vec3 S, Su, Sv, Suu, Suv, Svv;
    Vec3 N;
    Mat2 W;

    Vec3 Nu() const { return W(0, 0) * Su + W(1, 0) * Sv; }
    Vec3 Nv() const { return W(0, 1) * Su + W(1, 1) * Sv; }

    /// First fundamental form.
    Mat2 first_form() const;
};

/// Rectangular parameter domain; a periodic direction wraps with period (hi - lo).
struct ParamDomain {
    double u0 = 0.0, u1 = 1.0, v0 = 0.0, v1 = 1.0;
    bool periodic_u = false;
    bool periodic_v = false;

    double u_period() const { return u1 - u0; }
    double v_period() const { return v1 - v0; }
    double diagonal() const;

    bool contains(double u, double v) const;

    /// Wrap periodic coordinates into [lo, hi).
    Vec2 wrap(const Vec2& uv) const;

    /// Shortest parameter-space displacement b - a, honoring periodicity.
    Vec2 delta(const Vec2& a, const Vec2& b) const;
};

/// Rigid placement of a canonical surface in world coordinates.
struct Placement {
    Mat3 rotation = Mat3::Identity();
    Vec3 origin = Vec3::Zero();
};

/// Regular C^2 parametric surface. Subclasses supply canonical partials; the base
/// applies the placement, orients the normal and builds the shape operator.
class ParametricSurface {
public:
    virtual ~ParametricSurface() = default;

    /// Throws DomainError outside the domain, DegenerateSurfaceError at irregular points.
    SurfaceJet eval_jet(double u, double v) const;

    /// Same as eval_jet without the domain check.
    /// Used by Newton iterates that may step marginally past a boundary.
    SurfaceJet jet_unchecked(double u, double v) const;

    Mat2 shape_operator(double u, double v) const { return eval_jet(u, v).W; }

    const ParamDomain& domain() const { return domain_; }
    const Placement& placement() const { return placement_; }
    bool outward() const { return outward_; }
    double regularity_tolerance() const { return 1e-9 * domain_.diagonal(); }

    virtual std::string kind() const = 0;

protected:
    struct Partials {
        Vec3 S, Su, Sv, Suu, Suv, Svv;
    };

    ParametricSurface(ParamDomain domain, Placement placement, bool outward);

    virtual Partials canonical(double u, double v) const = 0;

    /// +1 if S_u x S_v points to the exterior in the canonical parametrization.
    virtual double exterior_sign() const { return 1.0; }

private:
    ParamDomain domain_;
    Placement placement_;
    bool outward_;
};

using SurfacePtr = std::shared_ptr<const ParametricSurface>;

/// origin + u e1 + v e2 in the placement frame (canonical e1 = x, e2 = y).
class PlaneSurface final : public ParametricSurface {
public:
    PlaneSurface(ParamDomain domain, Placement placement, bool outward = true);
    std::string kind() const override { return "plane"; }

protected:
    Partials canonical(double u, double v) const override;
};

/// (a cos u cos v, b cos u sin v, c sin u): latitude u, longitude v.
class EllipsoidSurface : public ParametricSurface {
public:
    EllipsoidSurface(Vec3 semi_axes, ParamDomain domain, Placement placement, bool outward = true);
    std::string kind() const override { return "ellipsoid"; }

    static ParamDomain default_domain(double pole_margin = 1e-3);

protected:
    Partials canonical(double u, double v) const override;
    double exterior_sign() const override { return -1.0; }

private:
    Vec3 axes_;
};

class SphereSurface final : public EllipsoidSurface {
public:
    SphereSurface(double radius, ParamDomain domain, Placement placement, bool outward = true)
        : EllipsoidSurface(Vec3::Constant(radius), domain, placement, outward) {}
    std::string kind() const override { return "sphere"; }
};

/// (r cos v, r sin v, u): axis along canonical z.
class CylinderSurface final : public ParametricSurface {
public:
    CylinderSurface(double radius, ParamDomain domain, Placement placement, bool outward = true);
    std::string kind() const override { return "cylinder"; }

protected:
    Partials canonical(double u, double v) const override;
    double exterior_sign() const override { return -1.0; }

private:
    double radius_;
};

/// ((R + r cos u) cos v, (R + r cos u) sin v, r sin u).
class TorusSurface final : public ParametricSurface {
public:
    TorusSurface(double major, double minor, ParamDomain domain, Placement placement,
                 bool outward = true);
    std::string kind() const override { return "torus"; }

protected:
    Partials canonical(double u, double v) const override;
    double exterior_sign() const override { return -1.0; }

private:
    double major_;
    double minor_;
};

/// Tensor-product B-spline patch (clamped knots) evaluated by Cox-de Boor recursion.
/// Controls are row-major: index i * n_v + j for u-index i, v-index j.
class SplinePatchSurface final : public ParametricSurface {
public:
    SplinePatchSurface(int degree_u, int degree_v, std::vector<double> knots_u,
                       std::vector<double> knots_v, int n_u, int n_v, std::vector<Vec3> controls,
                       Placement placement, bool outward = true);
    std::string kind() const override { return "spline_patch"; }

protected:
    Partials canonical(double u, double v) const override;

private:
    int pu_, pv_;
    std::vector<double> ku_, kv_;
    int nu_, nv_;
    std::vector<Vec3> ctrl_;
};

/// Orthonormality/orientation check for placement and config matrices.
bool is_rotation(const Mat3& r, double tol);

}  // namespace sweepkit
