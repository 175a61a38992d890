#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

const fs::path& workdir()
{
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / ("sweepkit_cli_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string scene(const std::string& name) { return std::string(SWEEPKIT_SCENES_DIR) + "/" + name + ".yaml"; }

int run(const std::string& args, const std::string& env = "")
{
    const std::string cmd = env + " " + SWEEPKIT_CLI + " " + args + " 2>" + (workdir() / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const fs::path& p)
{
    std::vector<std::string> out;
    std::ifstream in(p);
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

nlohmann::json detect(const std::string& name, int expected_exit)
{
    const fs::path out = workdir() / (name + ".json");
    EXPECT_EQ(run("detect --scene " + scene(name) + " --out " + out.string()), expected_exit) << name;
    return nlohmann::json::parse(slurp(out));
}

}  // namespace

TEST(Cli, DetectExample1)
{
    const nlohmann::json r = detect("cylinder_example1", 1);
    EXPECT_EQ(r["schema"], 1);
    EXPECT_EQ(r["verdict"], "type1-lsi");
    EXPECT_LE(r["minTheta"].get<double>(), -2.3);
}

TEST(Cli, DetectExample2)
{
    const nlohmann::json r = detect("ellipsoid_example2", 1);
    EXPECT_EQ(r["verdict"], "type1-lsi");
    bool has_08 = false;
    for (double t : r["excision"]["times"]) has_08 = has_08 || std::abs(t - 0.8) < 1e-12;
    EXPECT_TRUE(has_08);
}

TEST(Cli, DetectCleanAndSingular)
{
    EXPECT_EQ(detect("translating_sphere", 0)["verdict"], "clean");
    EXPECT_EQ(detect("circular_sphere", 0)["verdict"], "clean");
    EXPECT_EQ(detect("tangent_axis_sphere", 1)["verdict"], "singular");
}

TEST(Cli, ErrorsExitTwo)
{
    EXPECT_EQ(run("detect --scene " + std::string(SWEEPKIT_SCENES_DIR) + "/invalid/non_orthogonal_rotation.yaml"), 2);
    EXPECT_NE(slurp(workdir() / "stderr.txt").find("line 5"), std::string::npos);
    EXPECT_EQ(run("detect --scene " + std::string(SWEEPKIT_SCENES_DIR) + "/invalid/unknown_key.yaml"), 2);
    EXPECT_EQ(run("detect --scene /nonexistent.yaml"), 2);
    EXPECT_EQ(run("frobnicate --scene " + scene("translating_sphere")), 2);
    EXPECT_EQ(run("eval --scene " + scene("circular_sphere") + " --time 1.5"), 2);
    EXPECT_EQ(run("mesh --scene " + scene("translating_sphere")), 2);  // no output path
    EXPECT_EQ(run(""), 2);
}

TEST(Cli, MeshTranslatingSphere)
{
    const fs::path obj = workdir() / "tube.obj";
    ASSERT_EQ(run("mesh --scene " + scene("translating_sphere") + " --grid 32 --out " + obj.string()), 0);
    int vertices = 0, faces = 0, thetas = 0;
    double worst = 0.0;
    for (const auto& l : lines(obj)) {
        if (l.rfind("v ", 0) == 0) {
            std::istringstream ss(l.substr(2));
            double x, y, z;
            ss >> x >> y >> z;
            worst = std::max(worst, std::abs(std::hypot(y, z) - 1.0));
            ++vertices;
        } else if (l.rfind("f ", 0) == 0) {
            ++faces;
        } else if (l.rfind("# theta ", 0) == 0) {
            ++thetas;
        }
    }
    EXPECT_EQ(vertices, 1024);
    EXPECT_EQ(thetas, 1024);
    EXPECT_EQ(faces, 2 * 32 * 31);
    EXPECT_LE(worst, 1e-8);
    const auto csv = lines(workdir() / "tube_theta.csv");
    ASSERT_EQ(csv.size(), 1025u);
    EXPECT_EQ(csv[0], "vertex,p,t,u,v,x,y,z,theta");
}

TEST(Cli, TraceAndThetaFieldCsv)
{
    const fs::path trace = workdir() / "trace.csv";
    ASSERT_EQ(run("trace --scene " + scene("circular_sphere") + " --time 0.5 --out " + trace.string()), 0);
    const auto t = lines(trace);
    ASSERT_GT(t.size(), 10u);
    EXPECT_EQ(t[0], "u,v,t,x,y,z,curve");
    const fs::path field = workdir() / "field.csv";
    ASSERT_EQ(run("theta-field --scene " + scene("translating_sphere") + " --nt 3 --out " + field.string()), 0);
    const auto f = lines(field);
    ASSERT_GT(f.size(), 10u);
    EXPECT_EQ(f[0], "u,v,t,theta,lambdaDdot,detD");
    for (std::size_t i = 1; i < f.size(); ++i) {
        std::vector<double> row;
        std::stringstream ss(f[i]);
        for (std::string c; std::getline(ss, c, ',');) row.push_back(std::stod(c));
        ASSERT_EQ(row.size(), 6u);
        EXPECT_NEAR(row[3], 1.0, 1e-9);
        EXPECT_NEAR(row[4], 1.0, 1e-9);
    }
}

TEST(Cli, EvalPrintsOneLine)
{
    const fs::path out = workdir() / "eval.txt";
    ASSERT_EQ(run("eval --scene " + scene("translating_sphere") + " --p 0.25 --time 0.5 --out " + out.string()), 0);
    const auto l = lines(out);
    ASSERT_EQ(l.size(), 1u);
    std::vector<double> v;
    std::stringstream ss(l[0]);
    for (std::string c; std::getline(ss, c, ',');) v.push_back(std::stod(c));
    ASSERT_EQ(v.size(), 9u);
    EXPECT_NEAR(v[0], 0.5, 1e-10);
    EXPECT_NEAR(std::hypot(v[1], v[2]), 1.0, 1e-10);
}

TEST(Cli, OutputsAreDeterministic)
{
    for (const std::string cmd : {"detect", "theta-field"}) {
        const fs::path a = workdir() / ("a_" + cmd), b = workdir() / ("b_" + cmd);
        ASSERT_EQ(run(cmd + " --scene " + scene("ellipsoid_example2") + " --out " + a.string()), cmd == "detect" ? 1 : 0);
        ASSERT_EQ(run(cmd + " --scene " + scene("ellipsoid_example2") + " --out " + b.string(), "SWEEPKIT_THREADS=1"),
                  cmd == "detect" ? 1 : 0);
        EXPECT_EQ(slurp(a), slurp(b)) << cmd;
    }
}

namespace {

class CleanWorkdir : public ::testing::Environment {
public:
    void TearDown() override { fs::remove_all(workdir()); }
};

const auto* const kCleanup = ::testing::AddGlobalTestEnvironment(new CleanWorkdir);

}  // namespace
