#include "sweepkit/surface.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sweepkit;

namespace {

Mat3 rows(double a, double b, double c, double d, double e, double f, double g, double h, double i)
{
    Mat3 m;
    m << a, b, c, d, e, f, g, h, i;
    return m;
}

std::vector<SurfacePtr> catalog()
{
    std::vector<SurfacePtr> out;
    out.push_back(std::make_shared<PlaneSurface>(ParamDomain{-1, 1, -2, 2},
                                                 Placement{rows(1, 0, 0, 0, 0, -1, 0, 1, 0), Vec3(1, 2, 3)}));
    out.push_back(std::make_shared<SphereSurface>(1.0, EllipsoidSurface::default_domain(), Placement{}));
    out.push_back(std::make_shared<EllipsoidSurface>(Vec3(3, 1, 1), EllipsoidSurface::default_domain(),
                                                     Placement{rows(-1, 0, 0, 0, 0, 1, 0, 1, 0), Vec3::Zero()}));
    out.push_back(std::make_shared<CylinderSurface>(2.0, ParamDomain{-1.25, 1.25, -kPi, kPi, false, true},
                                                    Placement{rows(1, 0, 0, 0, 0, 1, 0, -1, 0), Vec3::Zero()}));
    out.push_back(std::make_shared<TorusSurface>(3.0, 1.0, ParamDomain{-kPi, kPi, -kPi, kPi, true, true},
                                                 Placement{}));
    // Bicubic patch over a bumpy 5x5 net.
    const int n = 5;
    std::vector<double> knots{0, 0, 0, 0, 0.5, 1, 1, 1, 1};
    std::vector<Vec3> ctrl;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            ctrl.emplace_back(i * 0.5, j * 0.5, 0.3 * std::sin(i + 2.0 * j));
    out.push_back(std::make_shared<SplinePatchSurface>(3, 3, knots, knots, n, n, ctrl, Placement{}));
    return out;
}

struct Sampler {
    std::mt19937 rng{11};
    Vec2 operator()(const ParamDomain& d)
    {
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const double mu = 0.02 * (d.u1 - d.u0), mv = 0.02 * (d.v1 - d.v0);
        return {d.u0 + mu + (d.u1 - d.u0 - 2 * mu) * U(rng), d.v0 + mv + (d.v1 - d.v0 - 2 * mv) * U(rng)};
    }
};

double rel(const Vec3& a, const Vec3& b, double scale)
{
    return (a - b).norm() / std::max(scale, 1e-3);
}

}  // namespace

TEST(Surface, JetInvariantsAndFiniteDifferences)
{
    Sampler sample;
    const double h = 1e-5;
    for (const auto& s : catalog()) {
        for (int k = 0; k < 200; ++k) {
            const Vec2 p = sample(s->domain());
            const SurfaceJet j = s->eval_jet(p.x(), p.y());
            EXPECT_NEAR(j.N.norm(), 1.0, 1e-12);
            EXPECT_LT(std::abs(j.N.dot(j.Su)), 1e-10 * j.Su.norm());
            EXPECT_LT(std::abs(j.N.dot(j.Sv)), 1e-10 * j.Sv.norm());

            const SurfaceJet up = s->eval_jet(p.x() + h, p.y()), um = s->eval_jet(p.x() - h, p.y());
            const SurfaceJet vp = s->eval_jet(p.x(), p.y() + h), vm = s->eval_jet(p.x(), p.y() - h);
            const double scale = j.Su.norm() + j.Sv.norm();
            EXPECT_LT(rel((up.S - um.S) / (2 * h), j.Su, scale), 1e-5) << s->kind();
            EXPECT_LT(rel((vp.S - vm.S) / (2 * h), j.Sv, scale), 1e-5) << s->kind();
            const double scale2 = std::max(1.0, j.Suu.norm() + j.Suv.norm() + j.Svv.norm());
            EXPECT_LT(rel((up.Su - um.Su) / (2 * h), j.Suu, scale2), 1e-5) << s->kind();
            EXPECT_LT(rel((vp.Su - vm.Su) / (2 * h), j.Suv, scale2), 1e-5) << s->kind();
            EXPECT_LT(rel((vp.Sv - vm.Sv) / (2 * h), j.Svv, scale2), 1e-5) << s->kind();

            // Weingarten matrix against FD of the normal field.
            const Vec3 Nu = (up.N - um.N) / (2 * h), Nv = (vp.N - vm.N) / (2 * h);
            const double nscale = std::max(1.0, Nu.norm() + Nv.norm());
            EXPECT_LT((Nu - j.Nu()).norm() / nscale, 1e-5) << s->kind();
            EXPECT_LT((Nv - j.Nv()).norm() / nscale, 1e-5) << s->kind();

            // Self-adjointness: I W is symmetric.
            const Mat2 IW = j.first_form() * j.W;
            EXPECT_LT(std::abs(IW(0, 1) - IW(1, 0)), 1e-8 * std::max(1.0, IW.norm())) << s->kind();
        }
    }
}

TEST(Surface, Example1Cylinder)
{
    const auto cyl = catalog()[3];
    const SurfaceJet j = cyl->eval_jet(0.0, 0.0);
    EXPECT_LT((j.S - Vec3(2, 0, 0)).norm(), 1e-15);
    EXPECT_LT((j.Su - Vec3(0, 1, 0)).norm(), 1e-15);
    EXPECT_LT((j.Sv - Vec3(0, 0, -2)).norm(), 1e-15);
    EXPECT_LT((j.N - Vec3(1, 0, 0)).norm(), 1e-15);  // outward
    // Principal curvatures: eigenvalues of W (similar to a symmetric matrix here since I is diagonal).
    const Vec2 k = Eigen::EigenSolver<Mat2>(j.W).eigenvalues().real();
    const double kmin = k.minCoeff(), kmax = k.maxCoeff();
    EXPECT_NEAR(kmin, 0.0, 1e-12);
    EXPECT_NEAR(kmax, 0.5, 1e-12);
    for (double u : {-1.0, 0.3})
        for (double v : {-2.0, 0.5, 3.0}) EXPECT_NEAR(cyl->eval_jet(u, v).W.determinant(), 0.0, 1e-9);
}

TEST(Surface, UnitSphereShapeOperator)
{
    const auto sph = catalog()[1];
    Sampler sample;
    for (int k = 0; k < 100; ++k) {
        const Vec2 p = sample(sph->domain());
        const SurfaceJet j = sph->eval_jet(p.x(), p.y());
        EXPECT_LT((j.W - Mat2::Identity()).norm(), 1e-10);
        EXPECT_NEAR(j.W.determinant(), 1.0, 1e-9);
        EXPECT_LT((j.N - j.S).norm(), 1e-12);
    }
    const double u = sph->domain().u1;
    const SurfaceJet pole = sph->eval_jet(u, 0.4);
    EXPECT_LT((pole.N - pole.S.normalized()).norm(), 1e-12);

    SphereSurface inward(1.0, EllipsoidSurface::default_domain(), Placement{}, false);
    EXPECT_LT((inward.eval_jet(0.2, 0.3).W + Mat2::Identity()).norm(), 1e-10);
}

TEST(Surface, Errors)
{
    const auto cyl = catalog()[3];
    EXPECT_THROW(cyl->eval_jet(2.0, 0.0), DomainError);
    EXPECT_NO_THROW(cyl->eval_jet(0.0, 3.0));
    SphereSurface full(1.0, ParamDomain{-kPi / 2, kPi / 2, -kPi, kPi, false, true}, Placement{});
    EXPECT_THROW(full.eval_jet(kPi / 2, 0.0), DegenerateSurfaceError);
    EXPECT_THROW(SphereSurface(1.0, EllipsoidSurface::default_domain(),
                               Placement{rows(1, 0, 0, 0, 1, 0, 0, 0, 2), Vec3::Zero()}),
                 PreconditionError);
}

TEST(Surface, DomainWrapAndDelta)
{
    ParamDomain d{0, 1, -kPi, kPi, false, true};
    EXPECT_NEAR(d.wrap(Vec2(0.5, kPi + 0.1)).y(), -kPi + 0.1, 1e-15);
    EXPECT_NEAR(d.delta(Vec2(0, 3.0), Vec2(0, -3.0)).y(), 2 * kPi - 6.0, 1e-14);
    EXPECT_NEAR(d.delta(Vec2(0, 0), Vec2(0.7, 0)).x(), 0.7, 1e-15);
}
