#include "support/corpus.hpp"

#include "sweepkit/analysis.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace sweepkit;

namespace {

/// Funnel points spread over the slices of a scene, away from the ends of [0,1].
std::vector<FunnelPoint> funnel_points(const SweepScene& sc, std::size_t want)
{
    std::vector<FunnelPoint> all;
    for (const auto& s : sample_funnel(sc, 5, {}, 0.1, 0.9))
        for (const auto& c : s.curves)
            for (const auto& p : c.points) all.push_back(p);
    std::vector<FunnelPoint> out;
    const std::size_t stride = std::max<std::size_t>(1, all.size() / want);
    for (std::size_t i = 0; i < all.size() && out.size() < want; i += stride) out.push_back(all[i]);
    return out;
}

/// Five-point second difference of the clearance around t0.
double fd_lambda_ddot(const SweepScene& sc, const FunnelPoint& fp, double h)
{
    double lam[5];
    for (int k = -2; k <= 2; ++k) {
        Vec2 uv = fp.uv();
        lam[k + 2] = clearance(sc, fp, fp.t + k * h, uv);
    }
    return (-lam[0] + 16 * lam[1] - 30 * lam[2] + 16 * lam[3] - lam[4]) / (12 * h * h);
}

std::vector<SweepScene> scenes()
{
    return {corpus::example1(), corpus::example2(), corpus::translating_sphere(),
            corpus::circular_sphere(), corpus::tangent_axis_sphere()};
}

}  // namespace

TEST(Analysis, UniformTranslationGivesUnitTheta)
{
    const SweepScene sc = corpus::translating_sphere();
    for (const auto& fp : funnel_points(sc, 50)) {
        EXPECT_NEAR(theta(sc, fp), 1.0, 1e-9);
        EXPECT_NEAR(lambda_ddot(sc, fp), 1.0, 1e-9);
        EXPECT_GT(det_frame_transform(sc, fp), 0.0);
        EXPECT_EQ(classify_point(sc, fp).kind, PointClass::clean);
    }
}

TEST(Analysis, FrameTransformDeterminantIdentity)
{
    for (const auto& sc : scenes()) {
        for (const auto& fp : funnel_points(sc, 100)) {
            const double th = theta(sc, fp);
            const double g2 = fp.eval.fu * fp.eval.fu + fp.eval.fv * fp.eval.fv;
            const double detD = det_frame_transform(sc, fp);
            EXPECT_LE(std::abs(detD - g2 * th), 1e-9 * std::max(std::abs(detD), 1e-12 * g2))
                << sc.id();
        }
    }
}

TEST(Analysis, ThetaEqualsLambdaDdot)
{
    for (const auto& sc : scenes()) {
        for (const auto& fp : funnel_points(sc, 30)) {
            const double th = theta(sc, fp);
            EXPECT_LE(std::abs(th - lambda_ddot(sc, fp)), 1e-8 * (1 + std::abs(th))) << sc.id();
            const double fd = fd_lambda_ddot(sc, fp, 5e-3);
            EXPECT_LE(std::abs(th - fd), 1e-3 * (1 + std::abs(th))) << sc.id() << " at (" << fp.u
                                                                      << ", " << fp.v << ", " << fp.t << ")";
        }
    }
}

TEST(Analysis, ClearanceProfileTouchesAtT0)
{
    for (const auto& sc : scenes()) {
        for (const auto& fp : funnel_points(sc, 10)) {
            Vec2 uv = fp.uv();
            EXPECT_LT(std::abs(clearance(sc, fp, fp.t, uv)), 1e-8 * sc.length_scale());
            const double h = 1e-4;
            Vec2 a = fp.uv(), b = fp.uv();
            const double d = (clearance(sc, fp, fp.t + h, a) - clearance(sc, fp, fp.t - h, b)) / (2 * h);
            EXPECT_LT(std::abs(d), 1e-6 * std::max(1.0, sc.velocity_scale())) << sc.id();
        }
    }
}

TEST(Analysis, TranslatingSphereProfileIsPositiveBump)
{
    const SweepScene sc = corpus::translating_sphere();
    const FunnelPoint fp = snap_to_funnel(sc, 0.0, 0.7, 0.5);
    const ClearanceProfile p = clearance_profile(sc, fp);
    ASSERT_EQ(p.ts.size(), 21u);
    for (std::size_t i = 0; i < p.ts.size(); ++i) {
        ASSERT_TRUE(p.converged[i]);
        if (std::abs(p.ts[i] - fp.t) > 1e-12) EXPECT_GT(p.lambdas[i], 0.0);
    }
}

TEST(Analysis, Example1ReportedPoint)
{
    const SweepScene sc = corpus::example1();
    const FunnelPoint fp = snap_to_funnel(sc, 0.18, 1.53, 0.1);
    const double th = theta(sc, fp);
    EXPECT_LT(th, 0.0);
    EXPECT_LE(std::abs(th - lambda_ddot(sc, fp)), 1e-6 * (1 + std::abs(th)));
    const Classification c = classify_point(sc, fp);
    EXPECT_EQ(c.kind, PointClass::lsi);
    EXPECT_TRUE(c.type1 && c.type2);
}

TEST(Analysis, Example2ProfileEntersSolid)
{
    const SweepScene sc = corpus::example2();
    const FunnelPoint fp = snap_to_funnel(sc, -0.791, -0.157, 0.8);
    EXPECT_LT(theta(sc, fp), 0.0);
    EXPECT_LT(clearance_profile(sc, fp).min_lambda(), 0.0);
}

TEST(Analysis, TangentAxisBoundaryIsSingularNotType2)
{
    const SweepScene sc = corpus::tangent_axis_sphere();
    // Tangency point on the equator: v = 0 (body point (1,0,0) lies on the axis).
    const FunnelPoint fp = snap_to_funnel(sc, 0.0, 0.0, 0.5);
    EXPECT_LT(std::abs(theta(sc, fp)), 1e-12);
    EXPECT_LT(std::abs(det_frame_transform(sc, fp)), 1e-12);
    const Classification c = classify_point(sc, fp);
    EXPECT_EQ(c.kind, PointClass::singular_boundary);
    EXPECT_TRUE(c.type1);
    EXPECT_FALSE(c.type2);
}

TEST(Analysis, DetectVerdicts)
{
    const LsiReport r1 = detect_singularity(corpus::example1());
    EXPECT_EQ(r1.verdict, Verdict::type1_lsi);
    EXPECT_LT(r1.min_theta, 0.0);
    EXPECT_GT(r1.excision.count, 0u);
    std::cout << "example1 min theta " << r1.min_theta << " max " << r1.max_theta << " samples "
              << r1.samples.size() << "\n";

    const LsiReport rs = detect_singularity(corpus::translating_sphere());
    EXPECT_EQ(rs.verdict, Verdict::clean);
    EXPECT_NEAR(rs.min_theta, 1.0, 1e-9);
    EXPECT_EQ(rs.excision.count, 0u);

    DetectOptions opt;
    opt.nt = 11;
    const LsiReport r2 = detect_singularity(corpus::example2(), opt);
    EXPECT_EQ(r2.verdict, Verdict::type1_lsi);
    EXPECT_NE(std::find(r2.excision.times.begin(), r2.excision.times.end(), 0.8), r2.excision.times.end());
    std::cout << "example2 min theta " << r2.min_theta << " errors " << r2.errors.size() << "\n";
    for (const auto& e : r2.errors) std::cout << "  " << e << "\n";

    const LsiReport r4 = detect_singularity(corpus::tangent_axis_sphere());
    EXPECT_EQ(r4.verdict, Verdict::singular);
    EXPECT_LE(r4.min_theta, 1e-6);
    EXPECT_GE(r4.boundary_min_lambda, -1e-6 * corpus::tangent_axis_sphere().length_scale());
    std::cout << "tangent min theta " << r4.min_theta << "\n";

    const SweepScene still(corpus::translating_sphere().surface_ptr(), std::make_shared<IdentityTrajectory>());
    EXPECT_EQ(detect_singularity(still).verdict, Verdict::degenerate);
}
