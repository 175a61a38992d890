#pragma once

#include "sweepkit/sweep.hpp"

#include <optional>
#include <string>

namespace sweepkit {

/// Parse or validation failure in a scene file. line is 1-based, 0 when unknown.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0);
    int line() const { return line_; }

private:
    int line_;
};

struct AnalysisConfig {
    int nt = 8;       // time slices for detect / theta-field / seed
    int np = 32;      // seed points per slice
    double step = 0.0;  // marching step; 0 picks the scene default
    int grid = 64;    // seed-search grid per slice
    double t_begin = 0.0, t_end = 1.0;  // seed window
    std::size_t component = 0;
    std::optional<double> eps_theta;
    std::optional<double> eps_lambda;
};

struct OutputConfig {
    std::string trace, theta_field, detect, mesh;  // default paths; empty means unset
};

struct SceneConfig {
    std::string id;
    std::string source;  // file path or "<string>"
    std::string text;    // raw file contents, echoed in reports
    AnalysisConfig analysis;
    OutputConfig output;
};

struct LoadedScene {
    SweepScene scene;
    SceneConfig config;
};

LoadedScene load_scene(const std::string& path);
LoadedScene load_scene_from_string(const std::string& text, const std::string& source = "<string>");

/// Arithmetic on numbers, `pi` and `sqrt(...)`: + - * / and parentheses.
double parse_expression(const std::string& text);

}  // namespace sweepkit
