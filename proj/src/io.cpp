#include "sweepkit/io.hpp"

#include "sweepkit/parallel.hpp"

#include <cmath>
#include <cstdio>

namespace sweepkit {

std::string format_double(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trace_csv(std::ostream& out, const FunnelSlice& slice)
{
    out << "u,v,t,x,y,z,curve\n";
    for (std::size_t c = 0; c < slice.curves.size(); ++c) {
        const ContactCurve& curve = slice.curves[c];
        for (std::size_t k = 0; k < curve.points.size(); ++k) {
            const FunnelPoint& fp = curve.points[k];
            const Vec3& x = curve.image[k];
            out << format_double(fp.u) << ',' << format_double(fp.v) << ',' << format_double(fp.t) << ','
                << format_double(x.x()) << ',' << format_double(x.y()) << ',' << format_double(x.z()) << ','
                << c << '\n';
        }
    }
}

void write_theta_csv(std::ostream& out, const std::vector<ThetaSample>& samples)
{
    out << "u,v,t,theta,lambdaDdot,detD\n";
    for (const auto& s : samples) {
        out << format_double(s.fp.u) << ',' << format_double(s.fp.v) << ',' << format_double(s.fp.t) << ','
            << format_double(s.theta) << ',' << format_double(s.lambda_ddot) << ',' << format_double(s.detD)
            << '\n';
    }
}

namespace {

nlohmann::ordered_json vec(const Vec3& x) { return {x.x(), x.y(), x.z()}; }

// JSON has no infinities; those become null.
nlohmann::ordered_json finite_or_null(double x)
{
    return std::isfinite(x) ? nlohmann::ordered_json(x) : nlohmann::ordered_json(nullptr);
}

}  // namespace

nlohmann::ordered_json report_json(const LsiReport& report, const SceneConfig& config)
{
    nlohmann::ordered_json j;
    j["schema"] = kReportSchema;
    j["toolVersion"] = kToolVersion;
    j["sceneId"] = report.scene_id;
    j["verdict"] = to_string(report.verdict);
    j["minTheta"] = finite_or_null(report.min_theta);
    j["maxTheta"] = finite_or_null(report.max_theta);
    j["sampleCount"] = report.samples.size();
    j["tolerances"] = {{"epsTheta", report.tolerances.eps_theta}, {"epsLambda", report.tolerances.eps_lambda}};
    j["boundaryMinLambda"] = finite_or_null(report.boundary_min_lambda);

    nlohmann::ordered_json ex;
    ex["count"] = report.excision.count;
    if (report.excision.count > 0) {
        ex["uvtMin"] = vec(report.excision.uvt_min);
        ex["uvtMax"] = vec(report.excision.uvt_max);
        ex["xyzMin"] = vec(report.excision.xyz_min);
        ex["xyzMax"] = vec(report.excision.xyz_max);
        ex["times"] = report.excision.times;
    }
    j["excision"] = ex;

    nlohmann::ordered_json samples = nlohmann::ordered_json::array();
    for (const auto& s : report.samples) {
        samples.push_back({{"u", s.fp.u},
                           {"v", s.fp.v},
                           {"t", s.fp.t},
                           {"l", s.l},
                           {"m", s.m},
                           {"theta", s.theta},
                           {"detD", s.detD},
                           {"lambdaDdot", s.lambda_ddot},
                           {"refined", s.refined}});
    }
    j["samples"] = samples;
    j["errors"] = report.errors;
    j["config"] = {{"source", config.source}, {"text", config.text}};
    return j;
}

EnvelopeMesh tessellate(const ProceduralEnvelope& env, int np, int nt)
{
    if (np < 2 || nt < 2) throw PreconditionError("mesh grid needs at least 2 x 2 points");
    const SeedSurface& seed = env.seed();
    EnvelopeMesh mesh;
    mesh.np = np;
    mesh.nt = nt;
    mesh.closed = seed.closed();
    for (int j = 0; j < np; ++j)
        mesh.ps.push_back(mesh.closed ? static_cast<double>(j) / np : static_cast<double>(j) / (np - 1));
    for (int i = 0; i < nt; ++i)
        mesh.ts.push_back(seed.t_begin() + (seed.t_end() - seed.t_begin()) * i / (nt - 1));

    const std::size_t n = static_cast<std::size_t>(np) * static_cast<std::size_t>(nt);
    mesh.vertices.resize(n);
    mesh.uv.resize(n);
    mesh.theta.resize(n);
    parallel_for(n, [&](std::size_t k) {
        const double t = mesh.ts[k / static_cast<std::size_t>(np)];
        const double p = mesh.ps[k % static_cast<std::size_t>(np)];
        const EnvelopeJet jet = env.eval(p, t);
        mesh.vertices[k] = jet.E;
        mesh.uv[k] = Vec2(jet.u, jet.v);
        mesh.theta[k] = theta_raw(evaluate_unchecked(env.scene(), jet.u, jet.v, t));
    });

    const int pcols = mesh.closed ? np : np - 1;
    for (int i = 0; i + 1 < nt; ++i) {
        for (int j = 0; j < pcols; ++j) {
            const int j1 = (j + 1) % np;
            const int a = i * np + j, b = i * np + j1, c = (i + 1) * np + j1, d = (i + 1) * np + j;
            mesh.triangles.push_back({a, b, c});
            mesh.triangles.push_back({a, c, d});
        }
    }
    return mesh;
}

void write_obj(std::ostream& out, const EnvelopeMesh& mesh, const std::string& scene_id)
{
    out << "# sweepkit " << kToolVersion << " envelope mesh\n";
    out << "# scene " << scene_id << "\n";
    out << "# grid " << mesh.np << " x " << mesh.nt << (mesh.closed ? " closed" : " open") << "\n";
    for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
        const Vec3& x = mesh.vertices[k];
        out << "v " << format_double(x.x()) << ' ' << format_double(x.y()) << ' ' << format_double(x.z()) << '\n';
        out << "# theta " << format_double(mesh.theta[k]) << '\n';
    }
    for (const auto& f : mesh.triangles) out << "f " << f[0] + 1 << ' ' << f[1] + 1 << ' ' << f[2] + 1 << '\n';
}

void write_mesh_csv(std::ostream& out, const EnvelopeMesh& mesh)
{
    out << "vertex,p,t,u,v,x,y,z,theta\n";
    for (std::size_t k = 0; k < mesh.vertices.size(); ++k) {
        const double t = mesh.ts[k / static_cast<std::size_t>(mesh.np)];
        const double p = mesh.ps[k % static_cast<std::size_t>(mesh.np)];
        const Vec3& x = mesh.vertices[k];
        out << k + 1 << ',' << format_double(p) << ',' << format_double(t) << ',' << format_double(mesh.uv[k].x())
            << ',' << format_double(mesh.uv[k].y()) << ',' << format_double(x.x()) << ',' << format_double(x.y())
            << ',' << format_double(x.z()) << ',' << format_double(mesh.theta[k]) << '\n';
    }
}

std::string format_eval(const EnvelopeJet& jet)
{
    std::string s;
    const Vec3* parts[] = {&jet.E, &jet.Ep, &jet.Et};
    for (const Vec3* v : parts) {
        for (int i = 0; i < 3; ++i) {
            if (!s.empty()) s += ',';
            s += format_double((*v)(i));
        }
    }
    return s;
}

}  // namespace sweepkit
