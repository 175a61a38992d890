#include "sweepkit/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <set>
#include <sstream>

namespace sweepkit {

ConfigError::ConfigError(const std::string& what, int line)
    : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line)
{
}

namespace {

// Recursive-descent evaluator for the small expression grammar used in scene files.
class ExprParser {
public:
    explicit ExprParser(const std::string& s) : s_(s) {}

    double parse()
    {
        const double v = sum();
        skip();
        if (i_ != s_.size()) fail();
        return v;
    }

private:
    double sum()
    {
        double v = product();
        for (;;) {
            skip();
            if (eat('+')) v += product();
            else if (eat('-')) v -= product();
            else return v;
        }
    }

    double product()
    {
        double v = unary();
        for (;;) {
            skip();
            if (eat('*')) v *= unary();
            else if (eat('/')) v /= unary();
            else return v;
        }
    }

    double unary()
    {
        skip();
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return atom();
    }

    double atom()
    {
        skip();
        if (eat('(')) {
            const double v = sum();
            skip();
            if (!eat(')')) fail();
            return v;
        }
        if (s_.compare(i_, 5, "sqrt(") == 0) {
            i_ += 5;
            const double v = sum();
            skip();
            if (!eat(')')) fail();
            return std::sqrt(v);
        }
        if (s_.compare(i_, 2, "pi") == 0) {
            i_ += 2;
            return kPi;
        }
        const char* begin = s_.c_str() + i_;
        char* end = nullptr;
        const double v = std::strtod(begin, &end);
        if (end == begin) fail();
        i_ += static_cast<std::size_t>(end - begin);
        return v;
    }

    void skip()
    {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool eat(char c)
    {
        if (i_ < s_.size() && s_[i_] == c) {
            ++i_;
            return true;
        }
        return false;
    }

    [[noreturn]] void fail() const { throw ConfigError("cannot parse number '" + s_ + "'"); }

    const std::string& s_;
    std::size_t i_ = 0;
};

int line_of(const YAML::Node& n) { return n.Mark().line + 1; }

void require_map(const YAML::Node& n, const std::string& what)
{
    if (!n.IsMap()) throw ConfigError(what + " must be a mapping", line_of(n));
}

void check_keys(const YAML::Node& n, std::initializer_list<const char*> allowed, const std::string& where)
{
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& kv : n) {
        const std::string key = kv.first.as<std::string>();
        if (!ok.count(key)) throw ConfigError("unknown key '" + key + "' in " + where, line_of(kv.first));
    }
}

YAML::Node required(const YAML::Node& n, const char* key, const std::string& where)
{
    const YAML::Node v = n[key];
    if (!v) throw ConfigError(std::string("missing '") + key + "' in " + where, line_of(n));
    return v;
}

double number(const YAML::Node& n)
{
    if (!n.IsScalar()) throw ConfigError("expected a number", line_of(n));
    try {
        return parse_expression(n.Scalar());
    } catch (const ConfigError& e) {
        throw ConfigError(e.what(), line_of(n));
    }
}

int integer(const YAML::Node& n)
{
    const double v = number(n);
    if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("expected an integer", line_of(n));
    return static_cast<int>(v);
}

bool boolean(const YAML::Node& n)
{
    try {
        return n.as<bool>();
    } catch (const YAML::Exception&) {
        throw ConfigError("expected true or false", line_of(n));
    }
}

std::string text(const YAML::Node& n)
{
    if (!n.IsScalar()) throw ConfigError("expected a string", line_of(n));
    return n.Scalar();
}

std::vector<double> numbers(const YAML::Node& n)
{
    if (!n.IsSequence()) throw ConfigError("expected a list of numbers", line_of(n));
    std::vector<double> out;
    for (const auto& x : n) out.push_back(number(x));
    return out;
}

Vec3 vec3(const YAML::Node& n)
{
    const std::vector<double> v = numbers(n);
    if (v.size() != 3) throw ConfigError("expected 3 numbers", line_of(n));
    return Vec3(v[0], v[1], v[2]);
}

Vec2 range(const YAML::Node& n)
{
    const std::vector<double> v = numbers(n);
    if (v.size() != 2 || !(v[1] > v[0])) throw ConfigError("expected an increasing pair [lo, hi]", line_of(n));
    return Vec2(v[0], v[1]);
}

Mat3 matrix3(const YAML::Node& n)
{
    if (!n.IsSequence() || n.size() != 3) throw ConfigError("expected a 3x3 matrix as three rows", line_of(n));
    Mat3 m;
    for (int r = 0; r < 3; ++r) m.row(r) = vec3(n[r]).transpose();
    return m;
}

Mat3 rotation(const YAML::Node& n)
{
    const Mat3 m = matrix3(n);
    if (!is_rotation(m, 1e-9))
        throw ConfigError("rotation is not orthonormal with determinant 1", line_of(n));
    return m;
}

ParamDomain domain(const YAML::Node& n, const std::string& where)
{
    require_map(n, where);
    check_keys(n, {"u", "v", "periodic_u", "periodic_v"}, where);
    ParamDomain d;
    const Vec2 u = range(required(n, "u", where));
    const Vec2 v = range(required(n, "v", where));
    d.u0 = u.x();
    d.u1 = u.y();
    d.v0 = v.x();
    d.v1 = v.y();
    if (n["periodic_u"]) d.periodic_u = boolean(n["periodic_u"]);
    if (n["periodic_v"]) d.periodic_v = boolean(n["periodic_v"]);
    return d;
}

SurfacePtr surface(const YAML::Node& n)
{
    require_map(n, "surface");
    const std::string kind = text(required(n, "kind", "surface"));
    const std::string where = "surface (" + kind + ")";

    Placement pl;
    if (n["rotation"]) pl.rotation = rotation(n["rotation"]);
    if (n["origin"]) pl.origin = vec3(n["origin"]);
    const bool outward = n["outward"] ? boolean(n["outward"]) : true;

    auto dom_or = [&](const ParamDomain& fallback) {
        return n["domain"] ? domain(n["domain"], "surface domain") : fallback;
    };
    auto ellipsoid_domain = [&]() {
        const double margin = n["pole_margin"] ? number(n["pole_margin"]) : 1e-3;
        return dom_or(EllipsoidSurface::default_domain(margin));
    };

    if (kind == "plane") {
        check_keys(n, {"kind", "domain", "rotation", "origin", "outward"}, where);
        return std::make_shared<PlaneSurface>(domain(required(n, "domain", where), "surface domain"), pl, outward);
    }
    if (kind == "sphere") {
        check_keys(n, {"kind", "radius", "domain", "pole_margin", "rotation", "origin", "outward"}, where);
        return std::make_shared<SphereSurface>(number(required(n, "radius", where)), ellipsoid_domain(), pl, outward);
    }
    if (kind == "ellipsoid") {
        check_keys(n, {"kind", "semi_axes", "domain", "pole_margin", "rotation", "origin", "outward"}, where);
        return std::make_shared<EllipsoidSurface>(vec3(required(n, "semi_axes", where)), ellipsoid_domain(), pl,
                                                  outward);
    }
    if (kind == "cylinder") {
        check_keys(n, {"kind", "radius", "domain", "rotation", "origin", "outward"}, where);
        return std::make_shared<CylinderSurface>(number(required(n, "radius", where)),
                                                 domain(required(n, "domain", where), "surface domain"), pl, outward);
    }
    if (kind == "torus") {
        check_keys(n, {"kind", "major", "minor", "domain", "rotation", "origin", "outward"}, where);
        ParamDomain full{-kPi, kPi, -kPi, kPi, true, true};
        return std::make_shared<TorusSurface>(number(required(n, "major", where)), number(required(n, "minor", where)),
                                              dom_or(full), pl, outward);
    }
    if (kind == "spline_patch") {
        check_keys(n, {"kind", "degree_u", "degree_v", "knots_u", "knots_v", "n_u", "n_v", "controls", "rotation",
                       "origin", "outward"},
                   where);
        const YAML::Node c = required(n, "controls", where);
        if (!c.IsSequence()) throw ConfigError("controls must be a list of points", line_of(c));
        std::vector<Vec3> ctrl;
        for (const auto& p : c) ctrl.push_back(vec3(p));
        return std::make_shared<SplinePatchSurface>(
            integer(required(n, "degree_u", where)), integer(required(n, "degree_v", where)),
            numbers(required(n, "knots_u", where)), numbers(required(n, "knots_v", where)),
            integer(required(n, "n_u", where)), integer(required(n, "n_v", where)), std::move(ctrl), pl, outward);
    }
    throw ConfigError("unknown surface kind '" + kind + "'", line_of(n["kind"]));
}

TrajectoryPtr trajectory(const YAML::Node& n, const std::string& where)
{
    require_map(n, where);
    const std::string kind = text(required(n, "kind", where));
    const std::string w = where + " (" + kind + ")";
    auto angle = [&]() {
        const YAML::Node a = required(n, "angle", w);
        return AnglePolynomial(a.IsSequence() ? numbers(a) : std::vector<double>{number(a)});
    };

    if (kind == "identity") {
        check_keys(n, {"kind"}, w);
        return std::make_shared<IdentityTrajectory>();
    }
    if (kind == "linear_translation") {
        check_keys(n, {"kind", "velocity", "acceleration"}, w);
        return std::make_shared<LinearTranslation>(vec3(required(n, "velocity", w)),
                                                   n["acceleration"] ? vec3(n["acceleration"]) : Vec3::Zero());
    }
    if (kind == "circular_translation") {
        check_keys(n, {"kind", "radius", "normal", "start_dir", "rate"}, w);
        return std::make_shared<CircularTranslation>(number(required(n, "radius", w)), vec3(required(n, "normal", w)),
                                                     vec3(required(n, "start_dir", w)), number(required(n, "rate", w)));
    }
    if (kind == "axis_rotation") {
        check_keys(n, {"kind", "axis", "point", "angle"}, w);
        return std::make_shared<AxisRotation>(vec3(required(n, "axis", w)),
                                              n["point"] ? vec3(n["point"]) : Vec3::Zero(), angle());
    }
    if (kind == "screw") {
        check_keys(n, {"kind", "axis", "point", "angle", "pitch"}, w);
        return std::make_shared<ScrewMotion>(vec3(required(n, "axis", w)), n["point"] ? vec3(n["point"]) : Vec3::Zero(),
                                             angle(), number(required(n, "pitch", w)));
    }
    if (kind == "composed") {
        check_keys(n, {"kind", "outer", "inner"}, w);
        return std::make_shared<ComposedTrajectory>(trajectory(required(n, "outer", w), "outer trajectory"),
                                                    trajectory(required(n, "inner", w), "inner trajectory"));
    }
    if (kind == "keyframes") {
        check_keys(n, {"kind", "keys"}, w);
        const YAML::Node keys = required(n, "keys", w);
        if (!keys.IsSequence()) throw ConfigError("keys must be a list", line_of(keys));
        std::vector<Keyframe> frames;
        for (const auto& k : keys) {
            require_map(k, "keyframe");
            check_keys(k, {"t", "rotation", "position"}, "keyframe");
            Keyframe f;
            f.t = number(required(k, "t", "keyframe"));
            f.rotation = Eigen::Quaterniond(k["rotation"] ? rotation(k["rotation"]) : Mat3::Identity());
            f.position = k["position"] ? vec3(k["position"]) : Vec3::Zero();
            frames.push_back(f);
        }
        return std::make_shared<KeyframeTrajectory>(std::move(frames));
    }
    throw ConfigError("unknown trajectory kind '" + kind + "'", line_of(n["kind"]));
}

AnalysisConfig analysis(const YAML::Node& n)
{
    AnalysisConfig a;
    if (!n) return a;
    require_map(n, "analysis");
    check_keys(n, {"nt", "np", "step", "grid", "seed_window", "component", "eps_theta", "eps_lambda"}, "analysis");
    if (n["nt"]) a.nt = integer(n["nt"]);
    if (n["np"]) a.np = integer(n["np"]);
    if (n["step"]) a.step = number(n["step"]);
    if (n["grid"]) a.grid = integer(n["grid"]);
    if (n["seed_window"]) {
        const Vec2 r = range(n["seed_window"]);
        if (r.x() < 0.0 || r.y() > 1.0) throw ConfigError("seed_window must lie in [0,1]", line_of(n["seed_window"]));
        a.t_begin = r.x();
        a.t_end = r.y();
    }
    if (n["component"]) a.component = static_cast<std::size_t>(std::max(0, integer(n["component"])));
    if (n["eps_theta"]) a.eps_theta = number(n["eps_theta"]);
    if (n["eps_lambda"]) a.eps_lambda = number(n["eps_lambda"]);
    if (a.nt < 2) throw ConfigError("analysis.nt must be at least 2", line_of(n["nt"]));
    if (a.np < 4) throw ConfigError("analysis.np must be at least 4", line_of(n["np"]));
    if (a.step < 0.0) throw ConfigError("analysis.step must be non-negative", line_of(n["step"]));
    if (a.grid < 4) throw ConfigError("analysis.grid must be at least 4", line_of(n["grid"]));
    return a;
}

OutputConfig output(const YAML::Node& n)
{
    OutputConfig o;
    if (!n) return o;
    require_map(n, "output");
    check_keys(n, {"trace", "theta_field", "detect", "mesh"}, "output");
    if (n["trace"]) o.trace = text(n["trace"]);
    if (n["theta_field"]) o.theta_field = text(n["theta_field"]);
    if (n["detect"]) o.detect = text(n["detect"]);
    if (n["mesh"]) o.mesh = text(n["mesh"]);
    return o;
}

// Regularity spot check on a 5x5 parameter grid.
void spot_check(const ParametricSurface& s, int line)
{
    const ParamDomain& d = s.domain();
    for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
            const double u = d.u0 + (d.u1 - d.u0) * (i + 0.5) / 5.0;
            const double v = d.v0 + (d.v1 - d.v0) * (j + 0.5) / 5.0;
            try {
                s.eval_jet(u, v);
            } catch (const Error& e) {
                throw ConfigError(std::string("surface fails regularity check: ") + e.what(), line);
            }
        }
    }
}

}  // namespace

double parse_expression(const std::string& text) { return ExprParser(text).parse(); }

LoadedScene load_scene_from_string(const std::string& text_in, const std::string& source)
{
    YAML::Node root;
    try {
        root = YAML::Load(text_in);
    } catch (const YAML::ParserException& e) {
        throw ConfigError(e.msg, e.mark.line + 1);
    }
    if (!root || !root.IsMap()) throw ConfigError("scene file must be a mapping", 1);
    check_keys(root, {"id", "surface", "trajectory", "analysis", "output"}, "scene");

    SceneConfig cfg;
    cfg.source = source;
    cfg.text = text_in;
    cfg.id = text(required(root, "id", "scene"));

    const YAML::Node sn = required(root, "surface", "scene");
    const YAML::Node tn = required(root, "trajectory", "scene");
    SurfacePtr surf;
    TrajectoryPtr traj;
    try {
        surf = surface(sn);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("surface: ") + e.what(), line_of(sn));
    }
    spot_check(*surf, line_of(sn));
    try {
        traj = trajectory(tn, "trajectory");
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("trajectory: ") + e.what(), line_of(tn));
    }
    cfg.analysis = analysis(root["analysis"]);
    cfg.output = output(root["output"]);
    return LoadedScene{SweepScene(surf, traj, cfg.id), std::move(cfg)};
}

LoadedScene load_scene(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open scene file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return load_scene_from_string(ss.str(), path);
}

}  // namespace sweepkit
