#include "support/contour.hpp"
#include "support/corpus.hpp"

#include <gtest/gtest.h>

using namespace sweepkit;

namespace {

void check_point(const SweepScene& sc, const FunnelPoint& fp)
{
    const SweepEval& e = fp.eval;
    EXPECT_LE(std::abs(e.f), sc.funnel_tolerance());
    const Vec3 g = e.grad();
    const double s = g.squaredNorm() * std::max(1.0, g.norm());
    EXPECT_LE(std::abs(fp.alpha.dot(g)), 1e-10 * s);
    EXPECT_LE(std::abs(fp.beta.dot(g)), 1e-10 * s);
    EXPECT_LE(std::abs(fp.alpha.dot(fp.beta)), 1e-10 * s);
    const Mat3 J = jacobian(sc, fp.u, fp.v, fp.t);
    const Vec3 Ja = J * fp.alpha, Jb = J * fp.beta;
    EXPECT_LE(std::abs(Ja.dot(e.N)), 1e-9 * std::max(Ja.norm(), 1e-300));
    EXPECT_LE(std::abs(Jb.dot(e.N)), 1e-9 * std::max(Jb.norm(), 1e-300));
}

}  // namespace

TEST(Funnel, FrameDefinition)
{
    const SweepScene sc = corpus::translating_sphere();
    const FunnelPoint fp = snap_to_funnel(sc, 0.05, 1.0, 0.5);
    const auto [alpha, beta] = frame(sc, fp);
    const SweepEval& e = fp.eval;
    EXPECT_EQ(beta, Vec3(-e.fv, e.fu, 0.0));
    EXPECT_LT((alpha - e.grad().cross(beta)).norm(), 1e-14);
    // Uniform translation: ft = 0 so alpha is purely time-directed.
    EXPECT_LT(std::abs(e.ft), 1e-14);
    EXPECT_LT(alpha.head<2>().norm(), 1e-14);
    EXPECT_NEAR(alpha.z(), e.fu * e.fu + e.fv * e.fv, 1e-14);
    check_point(sc, fp);
}

TEST(Funnel, FrameDegeneracyIsReported)
{
    const SweepScene sc = corpus::example1();
    // At t = 0, f vanishes with its (u,v)-gradient at u = 0, v = 0 (crossing of two contact lines).
    const SweepEval e = evaluate(sc, 0.0, 0.0, 0.0);
    EXPECT_LT(std::abs(e.f), 1e-15);
    EXPECT_THROW(frame(sc, e), FrameDegeneracyError);
}

TEST(Funnel, SeedsOnKnownZeroSets)
{
    const SweepScene sph = corpus::translating_sphere();
    const FunnelPoint s = find_seed(sph, 0.5);
    EXPECT_LT(std::abs(s.eval.f), 1e-10);
    EXPECT_LT(std::abs(s.u), 1e-10);  // equator

    const SweepScene ex1 = corpus::example1();
    const FunnelPoint s1 = find_seed(ex1, 0.1);
    EXPECT_LT(std::abs(s1.eval.f), 1e-10);
    check_point(ex1, s1);

    const SweepScene still(sph.surface_ptr(), std::make_shared<IdentityTrajectory>());
    EXPECT_THROW(find_seed(still, 0.5), DegenerateSweepError);
    EXPECT_THROW(find_seed(sph, 1.5), DomainError);
}

TEST(Funnel, Example1ReportedPointSnaps)
{
    const SweepScene sc = corpus::example1();
    const FunnelPoint fp = snap_to_funnel(sc, 0.18, 1.53, 0.1);
    EXPECT_LT(std::hypot(fp.u - 0.18, fp.v - 1.53), 0.1);
    check_point(sc, fp);
    const Vec3 Jb = jacobian(sc, fp.u, fp.v, fp.t) * fp.beta;
    EXPECT_LT(std::abs(Jb.dot(fp.eval.N)), 1e-9 * Jb.norm());
}

TEST(Funnel, TranslatingSphereGreatCircle)
{
    const SweepScene sc = corpus::translating_sphere();
    const FunnelPoint seed = find_seed(sc, 0.3);
    TraceOptions opt;
    opt.step = 0.01;
    const ContactCurve c = trace_pcurve(sc, 0.3, seed, opt);
    EXPECT_TRUE(c.closed);
    EXPECT_NEAR(c.image_length(), 2 * kPi, 0.01 * 2 * kPi);
    for (const auto& p : c.points) check_point(sc, p);
    for (std::size_t i = 1; i < c.size(); ++i)
        EXPECT_LE(sc.domain().delta(c.points[i - 1].uv(), c.points[i].uv()).norm(), 1.05 * opt.step);
}

TEST(Funnel, BetaIsTangentToTrace)
{
    for (const SweepScene& sc : {corpus::example1(), corpus::example2(), corpus::circular_sphere()}) {
        const double t = 0.45;
        TraceOptions opt;
        opt.step = 0.005;
        const ContactCurve c = trace_pcurve(sc, t, find_seed(sc, t), opt);
        ASSERT_GT(c.size(), 10u);
        const ParamDomain& d = sc.domain();
        for (std::size_t i = 1; i + 1 < c.size(); ++i) {
            const Vec2 tan = d.delta(c.points[i - 1].uv(), c.points[i + 1].uv());
            const Vec2 beta = c.points[i].beta.head<2>();
            const double cosang = std::abs(tan.dot(beta)) / (tan.norm() * beta.norm());
            EXPECT_GT(cosang, std::cos(kPi / 180.0)) << sc.id() << " i=" << i;
        }
    }
}

TEST(Funnel, TracesMatchGridOracle)
{
    struct Case {
        SweepScene scene;
        double t;
    };
    const std::vector<Case> cases{
        {corpus::example1(), 0.0},        {corpus::example1(), 0.1},
        {corpus::example1(), 0.6},        {corpus::example2(), 0.8},
        {corpus::example2(), 0.3},        {corpus::translating_sphere(), 0.5},
        {corpus::circular_sphere(), 0.7}, {corpus::tangent_axis_sphere(), 0.4},
    };
    for (const auto& c : cases) {
        SampleOptions opt;
        const double step = c.scene.default_step();
        const FunnelSlice slice = trace_slice(c.scene, c.t, opt);
        ASSERT_FALSE(slice.curves.empty()) << c.scene.id();
        const auto crossings = oracle::zero_crossings(c.scene, c.t);
        const double h = oracle::hausdorff(c.scene, slice.curves, crossings);
        EXPECT_LT(h, 2 * step) << c.scene.id() << " t=" << c.t;
        for (const auto& curve : slice.curves)
            for (const auto& p : curve.points) EXPECT_LE(std::abs(p.eval.f), c.scene.funnel_tolerance());
    }
}

TEST(Funnel, ComponentCounts)
{
    // Example 1: the grid oracle shows two open contact lines per slice for t > 0.
    const SweepScene ex1 = corpus::example1();
    const auto slices = sample_funnel(ex1, 10);
    ASSERT_EQ(slices.size(), 10u);
    std::size_t total = 0;
    for (const auto& s : slices) {
        EXPECT_TRUE(s.errors.empty()) << "t=" << s.t << ": " << (s.errors.empty() ? "" : s.errors[0]);
        for (const auto& c : s.curves) total += c.size();
        if (s.t > 0.0) {
            EXPECT_EQ(s.curves.size(), 2u) << "t=" << s.t;
            for (const auto& c : s.curves) EXPECT_FALSE(c.closed);
        }
    }
    EXPECT_GT(total, 0u);

    const SweepScene sph = corpus::translating_sphere();
    const auto circles = sample_funnel(sph, 5);
    ASSERT_EQ(circles.size(), 5u);
    for (const auto& s : circles) {
        ASSERT_EQ(s.curves.size(), 1u);
        EXPECT_TRUE(s.curves[0].closed);
        Vec3 centroid = Vec3::Zero();
        for (const Vec3& x : s.curves[0].image) centroid += x;
        centroid /= static_cast<double>(s.curves[0].image.size());
        EXPECT_LT((centroid - Vec3(s.t, 0, 0)).norm(), 1e-2);
    }
}

TEST(Funnel, DegenerateSceneGivesEmptySlicesWithDiagnostics)
{
    const SweepScene still(corpus::translating_sphere().surface_ptr(), std::make_shared<IdentityTrajectory>());
    const auto slices = sample_funnel(still, 3);
    for (const auto& s : slices) {
        EXPECT_TRUE(s.curves.empty());
        ASSERT_FALSE(s.errors.empty());
    }
    EXPECT_THROW(sample_funnel(still, 1), PreconditionError);
}
