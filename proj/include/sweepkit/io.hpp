#pragma once

#include "sweepkit/analysis.hpp"
#include "sweepkit/config.hpp"
#include "sweepkit/envelope.hpp"

#include <json.hpp>

#include <array>
#include <ostream>
#include <string>
#include <vector>

namespace sweepkit {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr int kReportSchema = 1;

/// %.17g
std::string format_double(double x);

/// Header u,v,t,x,y,z,curve; one row per traced funnel point.
void write_trace_csv(std::ostream& out, const FunnelSlice& slice);

/// Header u,v,t,theta,lambdaDdot,detD.
void write_theta_csv(std::ostream& out, const std::vector<ThetaSample>& samples);

nlohmann::ordered_json report_json(const LsiReport& report, const SceneConfig& config);

/// Regular (p, t) grid of envelope points. Closed seeds wrap in p.
struct EnvelopeMesh {
    int np = 0, nt = 0;
    bool closed = false;
    std::vector<double> ps, ts;
    std::vector<Vec3> vertices;  // row-major [t-index][p-index]
    std::vector<Vec2> uv;
    std::vector<double> theta;
    std::vector<std::array<int, 3>> triangles;  // zero-based
};

EnvelopeMesh tessellate(const ProceduralEnvelope& env, int np, int nt);

/// OBJ with a "# theta <value>" comment after every vertex line.
void write_obj(std::ostream& out, const EnvelopeMesh& mesh, const std::string& scene_id);

/// Header vertex,p,t,u,v,x,y,z,theta; vertex indices are one-based as in the OBJ.
void write_mesh_csv(std::ostream& out, const EnvelopeMesh& mesh);

/// x,y,z,Ep_x,Ep_y,Ep_z,Et_x,Et_y,Et_z on one line.
std::string format_eval(const EnvelopeJet& jet);

}  // namespace sweepkit
