#include "sweepkit/io.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace sweepkit;

namespace {

Eigen::MatrixXd stack(const std::vector<Vec3>& xs)
{
    Eigen::MatrixXd m(static_cast<Eigen::Index>(xs.size()), 3);
    for (std::size_t i = 0; i < xs.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = xs[i].transpose();
    return m;
}

py::dict curve_dict(const ContactCurve& c)
{
    Eigen::MatrixXd uv(static_cast<Eigen::Index>(c.points.size()), 2);
    for (std::size_t i = 0; i < c.points.size(); ++i) uv.row(static_cast<Eigen::Index>(i)) = c.points[i].uv().transpose();
    py::dict d;
    d["t"] = c.t;
    d["closed"] = c.closed;
    d["uv"] = uv;
    d["xyz"] = stack(c.image);
    return d;
}

py::dict jet_dict(const EnvelopeJet& j)
{
    py::dict d;
    d["p"] = j.p;
    d["t"] = j.t;
    d["E"] = j.E;
    d["Ep"] = j.Ep;
    d["Et"] = j.Et;
    d["N"] = j.N;
    d["u"] = j.u;
    d["v"] = j.v;
    d["iterations"] = j.iterations;
    d["residual_funnel"] = j.residual_funnel;
    d["residual_plane"] = j.residual_plane;
    return d;
}

}  // namespace

PYBIND11_MODULE(_sweepkit, m)
{
    m.doc() = "Contact sets, theta invariant and procedural envelopes of swept surfaces.";
    m.attr("__version__") = kToolVersion;

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<DomainError>(m, "DomainError", base.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", base.ptr());
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", base.ptr());
    py::register_exception<TopologyChangeError>(m, "TopologyChangeError", base.ptr());
    py::register_exception<NotFoundError>(m, "NotFoundError", base.ptr());

    py::class_<SweepScene>(m, "Scene")
        .def_property_readonly("id", &SweepScene::id)
        .def_property_readonly("length_scale", &SweepScene::length_scale)
        .def_property_readonly("velocity_scale", &SweepScene::velocity_scale)
        .def_property_readonly("default_step", &SweepScene::default_step)
        .def_property_readonly("domain", [](const SweepScene& s) {
            const ParamDomain& d = s.domain();
            return py::make_tuple(d.u0, d.u1, d.v0, d.v1, d.periodic_u, d.periodic_v);
        });

    m.def("load_scene", [](const std::string& path) { return load_scene(path).scene; }, py::arg("path"));
    m.def("load_scene_from_string", [](const std::string& text) { return load_scene_from_string(text).scene; },
          py::arg("text"));

    py::class_<SweepEval>(m, "SweepEval")
        .def_readonly("u", &SweepEval::u)
        .def_readonly("v", &SweepEval::v)
        .def_readonly("t", &SweepEval::t)
        .def_readonly("sigma", &SweepEval::sigma)
        .def_readonly("sigma_u", &SweepEval::sigma_u)
        .def_readonly("sigma_v", &SweepEval::sigma_v)
        .def_readonly("V", &SweepEval::V)
        .def_readonly("N", &SweepEval::N)
        .def_readonly("f", &SweepEval::f)
        .def_readonly("fu", &SweepEval::fu)
        .def_readonly("fv", &SweepEval::fv)
        .def_readonly("ft", &SweepEval::ft)
        .def_readonly("l", &SweepEval::l)
        .def_readonly("m", &SweepEval::m);

    py::class_<FunnelPoint>(m, "FunnelPoint")
        .def_readonly("u", &FunnelPoint::u)
        .def_readonly("v", &FunnelPoint::v)
        .def_readonly("t", &FunnelPoint::t)
        .def_readonly("eval", &FunnelPoint::eval)
        .def_readonly("alpha", &FunnelPoint::alpha)
        .def_readonly("beta", &FunnelPoint::beta);

    m.def("sweep_map", &sweep_map, py::arg("scene"), py::arg("u"), py::arg("v"), py::arg("t"));
    m.def("evaluate", &evaluate, py::arg("scene"), py::arg("u"), py::arg("v"), py::arg("t"));
    m.def("jacobian", &jacobian, py::arg("scene"), py::arg("u"), py::arg("v"), py::arg("t"));
    m.def("snap_to_funnel", &snap_to_funnel, py::arg("scene"), py::arg("u"), py::arg("v"), py::arg("t"),
          py::arg("max_iterations") = 50);

    m.def(
        "trace_slice",
        [](const SweepScene& s, double t, double step) {
            SampleOptions opt;
            opt.step = step;
            const FunnelSlice slice = trace_slice(s, t, opt);
            py::list curves;
            for (const auto& c : slice.curves) curves.append(curve_dict(c));
            return curves;
        },
        py::arg("scene"), py::arg("t"), py::arg("step") = 0.0);

    m.def("theta", &theta, py::arg("scene"), py::arg("point"));
    m.def("det_frame_transform", &det_frame_transform, py::arg("scene"), py::arg("point"));
    m.def("lambda_ddot", &lambda_ddot, py::arg("scene"), py::arg("point"));
    m.def(
        "clearance_profile",
        [](const SweepScene& s, const FunnelPoint& fp, double halfwidth, int n) {
            const ClearanceProfile p = clearance_profile(s, fp, halfwidth, n);
            return py::make_tuple(p.ts, p.lambdas);
        },
        py::arg("scene"), py::arg("point"), py::arg("halfwidth") = 0.05, py::arg("n") = 21);
    m.def(
        "classify_point", [](const SweepScene& s, const FunnelPoint& fp) { return to_string(classify_point(s, fp).kind); },
        py::arg("scene"), py::arg("point"));
    m.def(
        "detect_json",
        [](const SweepScene& s, int nt, bool refine) {
            DetectOptions opt;
            opt.nt = nt;
            opt.refine = refine;
            SceneConfig cfg;
            cfg.id = s.id();
            return report_json(detect_singularity(s, opt), cfg).dump();
        },
        py::arg("scene"), py::arg("nt") = 10, py::arg("refine") = true);
    m.def("gaussian_curvature_translational", &gaussian_curvature_translational, py::arg("scene"),
          py::arg("point"));

    py::class_<ProceduralEnvelope>(m, "Envelope")
        .def(py::init([](const SweepScene& s, int nt, int np, double t_begin, double t_end, std::size_t component) {
                 SeedOptions opt;
                 opt.t_begin = t_begin;
                 opt.t_end = t_end;
                 opt.component = component;
                 return ProceduralEnvelope(s, build_seed(s, nt, np, opt));
             }),
             py::arg("scene"), py::arg("nt") = 8, py::arg("np") = 32, py::arg("t_begin") = 0.0,
             py::arg("t_end") = 1.0, py::arg("component") = 0)
        .def_property_readonly("closed", [](const ProceduralEnvelope& e) { return e.seed().closed(); })
        .def_property_readonly("t_range",
                               [](const ProceduralEnvelope& e) { return py::make_tuple(e.seed().t_begin(), e.seed().t_end()); })
        .def("eval", [](const ProceduralEnvelope& e, double p, double t) { return jet_dict(e.eval_with_derivatives(p, t)); },
             py::arg("p"), py::arg("t"))
        .def(
            "validate_assumption",
            [](const ProceduralEnvelope& e, int samples) {
                const AssumptionReport r = validate_assumption(e, samples);
                py::list v;
                for (const auto& x : r.violations) v.append(py::make_tuple(x.p, x.t, x.crossings));
                return py::make_tuple(r.samples, v);
            },
            py::arg("samples") = 64)
        .def(
            "mesh",
            [](const ProceduralEnvelope& e, int grid) {
                const EnvelopeMesh mesh = tessellate(e, grid, grid);
                Eigen::MatrixXi tri(static_cast<Eigen::Index>(mesh.triangles.size()), 3);
                for (std::size_t i = 0; i < mesh.triangles.size(); ++i)
                    for (int k = 0; k < 3; ++k) tri(static_cast<Eigen::Index>(i), k) = mesh.triangles[i][static_cast<std::size_t>(k)];
                return py::make_tuple(stack(mesh.vertices), tri, mesh.theta);
            },
            py::arg("grid") = 32);
}
