#include "opinion/io.hpp"

#include "opinion/errors.hpp"
#include "opinion/svg.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

using namespace opinion;

namespace {

Eigen::VectorXd vec3(double a, double b, double c) {
    Eigen::VectorXd v(3);
    v << a, b, c;
    return v;
}

DesignResult case1_design() {
    Eigen::MatrixXd a(3, 3);
    a << 0, -1, 0, 0, 0, 4, -2, 0, 0;
    return design_laplacian(a, TransformMatrix::diagonal(vec3(2, -2, -2)));
}

struct TempDir {
    std::filesystem::path path;
    TempDir() {
        path = std::filesystem::temp_directory_path() /
               ("opinion_io_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

} // namespace

TEST_CASE("scenario parsing covers every transform mode") {
    const char* gauge = R"({"graph": "g.json", "x0": [1, 2],
                            "transform": {"mode": "gauge", "magnitudes": [1, 1]},
                            "sim": {"dt": 0.01, "t_end": 5.0}})";
    Scenario sc = load_scenario(gauge);
    CHECK(sc.mode == TransformMode::Gauge);
    CHECK(sc.sim.dt == 0.01);
    CHECK(sc.sim.t_end == 5.0);
    CHECK(sc.x0 == Eigen::VectorXd(vec3(1, 2, 0).head(2)));

    CHECK(load_scenario(R"({"graph": "g", "x0": [1], "transform": {"mode": "file", "path": "p.json"}})")
              .mode == TransformMode::File);
    CHECK(load_scenario(R"({"graph": "g", "x0": [1], "transform": {"mode": "reverse", "xf": [2]}})")
              .mode == TransformMode::Reverse);
    CHECK(load_scenario(R"({"graph": "g", "x0": [1], "transform": {"mode": "ratio", "ratios": [2]}})")
              .mode == TransformMode::Ratio);

    CHECK_THROWS_AS(load_scenario(R"({"x0": [1]})"), InputError);
    CHECK_THROWS_AS(load_scenario(R"({"graph": "g", "x0": [1]})"), InputError);
    CHECK_THROWS_AS(
        load_scenario(R"({"graph": "g", "x0": [1], "transform": {"mode": "nope"}})"),
        InputError);
    CHECK_THROWS_AS(
        load_scenario(R"({"graph": "g", "x0": [1], "transform": {"mode": "reverse"}})"),
        InputError);
}

TEST_CASE("relative paths resolve against the scenario directory") {
    const Scenario sc = load_scenario(
        R"({"graph": "../g.json", "x0": [1], "transform": {"mode": "gauge"}})",
        "/tmp/scenarios/sc.json");
    CHECK(sc.graph_path == std::filesystem::path("/tmp/scenarios/../g.json"));
}

TEST_CASE("trajectory CSV shape, header and precision") {
    const DesignResult d = case1_design();
    SimOptions opt;
    opt.dt = 1e-2;
    opt.t_end = 1.0;
    const Trajectory traj = simulate(d.Lx, vec3(10, 20, 50), opt);
    const std::string csv = trajectory_csv(traj);

    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,x1,x2,x3");
    std::size_t rows = 0;
    while (std::getline(lines, line))
        ++rows;
    CHECK(rows == traj.samples.size());
    // full precision: the initial row carries exact values
    CHECK(csv.find("0,10,20,50\n") != std::string::npos);
}

TEST_CASE("CSV thinning caps rows at 10000 and keeps the endpoints") {
    const DesignResult d = case1_design();
    SimOptions opt;
    opt.dt = 1e-3;
    opt.t_end = 30.0;
    opt.max_samples = 0; // force the writer to thin
    const Trajectory traj = simulate(d.Lx, vec3(10, 20, 50), opt);
    REQUIRE(traj.samples.size() == 30001);
    const std::string csv = trajectory_csv(traj);
    const std::size_t rows = std::count(csv.begin(), csv.end(), '\n') - 1;
    CHECK(rows <= 10000);
    CHECK(csv.find("\n0,10,20,50\n") != std::string::npos);
    CHECK(csv.rfind("\n30,") != std::string::npos); // final sample retained
}

TEST_CASE("simulate thins by default") {
    const DesignResult d = case1_design();
    SimOptions opt;
    opt.dt = 1e-3;
    opt.t_end = 30.0; // 30001 raw samples
    const Trajectory traj = simulate(d.Lx, vec3(10, 20, 50), opt);
    CHECK(traj.samples.size() <= 10000);
    CHECK(traj.samples.front().t == 0.0);
    CHECK(traj.samples.back().t == doctest::Approx(30.0));
}

TEST_CASE("re-running a scenario reproduces CSV and report byte for byte") {
    const DesignResult d = case1_design();
    SimOptions opt;
    opt.dt = 1e-3;
    opt.t_end = 5.0;
    const VerificationReport v1 = verify(d, vec3(10, 20, 50), opt);
    const VerificationReport v2 = verify(d, vec3(10, 20, 50), opt);
    CHECK(trajectory_csv(v1.trajectory) == trajectory_csv(v2.trajectory));

    Eigen::MatrixXd a(3, 3);
    a << 0, -1, 0, 0, 0, 4, -2, 0, 0;
    const BalanceCertificate cert = classify(SignedDigraph{a});
    const SpectrumReport sp = spectrum(a);
    CHECK(report_json(cert, sp, d, v1) == report_json(cert, sp, d, v2));
}

TEST_CASE("report JSON carries the required fields") {
    const DesignResult d = case1_design();
    SimOptions opt;
    const VerificationReport ver = verify(d, vec3(10, 20, 50), opt);
    Eigen::MatrixXd a(3, 3);
    a << 0, -1, 0, 0, 0, 4, -2, 0, 0;
    const std::string json = report_json(classify(SignedDigraph{a}), spectrum(a), d, ver);
    for (const char* field :
         {"classification", "spectrum", "theta_x", "L_x", "xf_predicted", "xf_simulated",
          "max_error", "stable", "pass"})
        CHECK_MESSAGE(json.find(std::string("\"") + field + "\"") != std::string::npos, field);
    CHECK(json.find("\"Balanced\"") != std::string::npos);
}

TEST_CASE("SVG plot is self-contained with one polyline per agent") {
    const DesignResult d = case1_design();
    SimOptions opt;
    opt.dt = 1e-2;
    opt.t_end = 5.0;
    const Trajectory traj = simulate(d.Lx, vec3(10, 20, 50), opt);
    const std::string svg = trajectory_svg(traj);
    CHECK(svg.find("<svg") != std::string::npos);
    std::size_t polylines = 0, pos = 0;
    while ((pos = svg.find("<polyline", pos)) != std::string::npos) {
        ++polylines;
        pos += 9;
    }
    CHECK(polylines == 3);
    CHECK(svg.find("agent 1") != std::string::npos);
    CHECK(svg.find("http") == svg.find("http://www.w3.org/2000/svg")); // xmlns only
    CHECK(svg.find("href") == std::string::npos);                      // no external assets
}

TEST_CASE("artifact writers create parent directories") {
    TempDir tmp;
    const DesignResult d = case1_design();
    SimOptions opt;
    opt.dt = 1e-2;
    opt.t_end = 1.0;
    const Trajectory traj = simulate(d.Lx, vec3(10, 20, 50), opt);
    const auto csv_path = tmp.path / "nested" / "traj.csv";
    write_trajectory_csv(traj, csv_path);
    CHECK(std::filesystem::exists(csv_path));
    const auto svg_path = tmp.path / "nested2" / "traj.svg";
    write_trajectory_svg(traj, svg_path);
    CHECK(std::filesystem::exists(svg_path));
}
