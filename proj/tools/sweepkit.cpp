#include "sweepkit/io.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>

using namespace sweepkit;

namespace {

struct Args {
    std::string scene;
    double time = 0.0;
    int nt = 0, np = 0;  // 0: take the value from the scene file
    double step = 0.0;
    int grid = 32;
    double p = 0.0;
    std::string out;
};

class Output {
public:
    explicit Output(const std::string& path)
    {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path);
        if (!*file_) throw Error("cannot open output file '" + path + "'");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

std::string pick(const std::string& flag, const std::string& configured) { return flag.empty() ? configured : flag; }

SampleOptions sampling(const Args& a, const SceneConfig& c)
{
    SampleOptions s;
    s.step = a.step > 0.0 ? a.step : c.analysis.step;
    s.grid = c.analysis.grid;
    return s;
}

int slices(const Args& a, const SceneConfig& c) { return a.nt > 0 ? a.nt : c.analysis.nt; }

ProceduralEnvelope envelope(const LoadedScene& ls, const Args& a)
{
    const AnalysisConfig& an = ls.config.analysis;
    SeedOptions opt;
    opt.t_begin = an.t_begin;
    opt.t_end = an.t_end;
    opt.component = an.component;
    opt.sampling = sampling(a, ls.config);
    return ProceduralEnvelope(ls.scene, build_seed(ls.scene, slices(a, ls.config), a.np > 0 ? a.np : an.np, opt));
}

int cmd_trace(const LoadedScene& ls, const Args& a)
{
    const FunnelSlice slice = trace_slice(ls.scene, a.time, sampling(a, ls.config));
    for (const auto& e : slice.errors) std::cerr << "warning: " << e << '\n';
    if (slice.curves.empty()) std::cerr << "warning: no contact curve at t = " << a.time << '\n';
    Output out(pick(a.out, ls.config.output.trace));
    write_trace_csv(out.stream(), slice);
    return 0;
}

int cmd_theta_field(const LoadedScene& ls, const Args& a)
{
    const auto sl = sample_funnel(ls.scene, slices(a, ls.config), sampling(a, ls.config));
    const LsiReport r = detect_singularity(ls.scene, sl, false);
    for (const auto& e : r.errors) std::cerr << "warning: " << e << '\n';
    Output out(pick(a.out, ls.config.output.theta_field));
    write_theta_csv(out.stream(), r.samples);
    return 0;
}

int cmd_detect(const LoadedScene& ls, const Args& a)
{
    DetectOptions opt;
    opt.nt = slices(a, ls.config);
    opt.sampling = sampling(a, ls.config);
    opt.eps_theta = ls.config.analysis.eps_theta;
    opt.eps_lambda = ls.config.analysis.eps_lambda;
    const LsiReport r = detect_singularity(ls.scene, opt);
    Output out(pick(a.out, ls.config.output.detect));
    out.stream() << report_json(r, ls.config).dump(2) << '\n';
    std::cerr << ls.scene.id() << ": " << to_string(r.verdict) << " (min theta " << format_double(r.min_theta)
              << ")\n";
    switch (r.verdict) {
    case Verdict::clean: return 0;
    case Verdict::singular:
    case Verdict::type1_lsi:
    case Verdict::type2_lsi: return 1;
    case Verdict::degenerate: break;
    }
    std::cerr << "error: no funnel samples; the sweep is degenerate or the funnel is empty\n";
    return 2;
}

int cmd_mesh(const LoadedScene& ls, const Args& a)
{
    const std::string path = pick(a.out, ls.config.output.mesh);
    if (path.empty() || path == "-") throw Error("mesh needs --out <file.obj>");
    const EnvelopeMesh mesh = tessellate(envelope(ls, a), a.grid, a.grid);
    std::filesystem::path sidecar(path);
    sidecar.replace_extension();
    sidecar += "_theta.csv";
    Output obj(path), csv(sidecar.string());
    write_obj(obj.stream(), mesh, ls.scene.id());
    write_mesh_csv(csv.stream(), mesh);
    return 0;
}

int cmd_eval(const LoadedScene& ls, const Args& a)
{
    const EnvelopeJet jet = envelope(ls, a).eval_with_derivatives(a.p, a.time);
    Output out(a.out);
    out.stream() << format_eval(jet) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Contact sets, theta invariant and procedural envelopes of swept surfaces"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);
    Args a;

    auto add = [&](const std::string& name, const std::string& help) {
        CLI::App* c = app.add_subcommand(name, help);
        c->add_option("--scene", a.scene, "Scene file (YAML)")->required()->check(CLI::ExistingFile);
        c->add_option("--out", a.out, "Output path (default: scene output block, else stdout)");
        c->add_option("--step", a.step, "Marching step in parameter space (default: 1% of the domain diagonal)")
            ->check(CLI::NonNegativeNumber);
        return c;
    };

    CLI::App* trace = add("trace", "Contact curves at one time as CSV");
    trace->add_option("--time", a.time, "Time in [0,1]")->check(CLI::Range(0.0, 1.0));

    CLI::App* field = add("theta-field", "theta over the sampled funnel as CSV");
    field->add_option("--nt", a.nt, "Time slices")->check(CLI::Range(2, 100000));

    CLI::App* detect = add("detect", "Singularity / self-intersection report as JSON");
    detect->add_option("--nt", a.nt, "Time slices")->check(CLI::Range(2, 100000));

    CLI::App* mesh = add("mesh", "Envelope tessellation as OBJ plus a theta CSV sidecar");
    mesh->add_option("--nt", a.nt, "Seed time slices")->check(CLI::Range(2, 100000));
    mesh->add_option("--np", a.np, "Seed points per slice")->check(CLI::Range(4, 100000));
    mesh->add_option("--grid", a.grid, "Mesh vertices per direction")->check(CLI::Range(2, 100000));

    CLI::App* eval = add("eval", "Envelope point and derivatives at (p, t)");
    eval->add_option("--time", a.time, "Time in [0,1]")->check(CLI::Range(0.0, 1.0));
    eval->add_option("--p", a.p, "Seed parameter p");
    eval->add_option("--nt", a.nt, "Seed time slices")->check(CLI::Range(2, 100000));
    eval->add_option("--np", a.np, "Seed points per slice")->check(CLI::Range(4, 100000));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const LoadedScene ls = load_scene(a.scene);
        if (*trace) return cmd_trace(ls, a);
        if (*field) return cmd_theta_field(ls, a);
        if (*detect) return cmd_detect(ls, a);
        if (*mesh) return cmd_mesh(ls, a);
        if (*eval) return cmd_eval(ls, a);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
