// End-to-end checks of the opinionflow binary: exit codes, artifacts,
// output wording. The binary path and the data directory come in through
// compile definitions.

#include "opinion/errors.hpp"

#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

namespace {

namespace fs = std::filesystem;

struct RunResult {
    int exit_code = -1;
    std::string output;
};

RunResult run(const std::string& args) {
    const std::string cmd = std::string(OPINIONFLOW_BIN) + " " + args + " 2>&1";
    std::array<char, 4096> buf{};
    RunResult res;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    while (std::fgets(buf.data(), buf.size(), pipe))
        res.output += buf.data();
    const int status = ::pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("opinion_cli_" + std::to_string(::getpid()));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

const std::string kData = DATA_DIR;

} // namespace

TEST_CASE("classify: balanced graph, wording and exit code") {
    const RunResult r = run("classify " + kData + "/graph1.json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("Balanced") != std::string::npos);
    CHECK(r.output.find("V1={1}") != std::string::npos);
    CHECK(r.output.find("V2={2,3}") != std::string::npos);
    CHECK(r.output.find("irreducible") != std::string::npos);
    CHECK(r.output.find("period 3") != std::string::npos);
    CHECK(r.output.find("P exists") != std::string::npos);
}

TEST_CASE("classify: anti-balanced graph reports non-existence") {
    TempDir tmp;
    write_file(tmp.path / "antineg.json",
               R"({"n": 3, "edges": [
                   {"i": 1, "j": 2, "w": -1}, {"i": 2, "j": 1, "w": -1},
                   {"i": 2, "j": 3, "w": -1}, {"i": 3, "j": 2, "w": -1},
                   {"i": 1, "j": 3, "w": -1}, {"i": 3, "j": 1, "w": -1}]})");
    const RunResult r = run("classify " + (tmp.path / "antineg.json").string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("AntiBalanced") != std::string::npos);
    CHECK(r.output.find("P does not exist") != std::string::npos);
}

TEST_CASE("classify: unsigned graph") {
    TempDir tmp;
    write_file(tmp.path / "u.json",
               R"({"n": 3, "edges": [
                   {"i": 1, "j": 2, "w": 1}, {"i": 2, "j": 3, "w": 1},
                   {"i": 3, "j": 1, "w": 1}]})");
    const RunResult r = run("classify " + (tmp.path / "u.json").string());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("Unsigned") != std::string::npos);
    CHECK(r.output.find("P exists") != std::string::npos);
}

TEST_CASE("classify: parse error exits 2 and names file and line") {
    TempDir tmp;
    write_file(tmp.path / "broken.json", "{\n  \"n\": 2,\n  edges\n}");
    const RunResult r = run("classify " + (tmp.path / "broken.json").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("broken.json") != std::string::npos);
    CHECK(r.output.find(":3") != std::string::npos);
}

TEST_CASE("run: the two 3-agent scenarios pass and write artifacts") {
    TempDir tmp;
    const std::string csv = (tmp.path / "t.csv").string();
    const std::string svg = (tmp.path / "t.svg").string();
    const std::string report = (tmp.path / "r.json").string();
    const RunResult r = run("run " + kData + "/scenarios/case1.json --csv " + csv +
                            " --svg " + svg + " --report " + report);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);
    CHECK(fs::exists(csv));
    CHECK(fs::exists(svg));
    CHECK(fs::exists(report));

    std::ifstream rep(report);
    std::stringstream ss;
    ss << rep.rdbuf();
    CHECK(ss.str().find("\"pass\": true") != std::string::npos);

    const RunResult r2 = run("run " + kData + "/scenarios/case2.json --csv " +
                             (tmp.path / "t2.csv").string());
    CHECK(r2.exit_code == 0);
    CHECK(r2.output.find("-16.7") != std::string::npos);
}

TEST_CASE("run: exit 1 when the verification tolerance cannot be met") {
    TempDir tmp;
    // too-short horizon: the flow has not approached the projector value yet
    write_file(tmp.path / "g.json", R"({"n": 3, "edges": [
        {"i": 1, "j": 2, "w": -1}, {"i": 2, "j": 3, "w": 4}, {"i": 3, "j": 1, "w": -2}]})");
    write_file(tmp.path / "short.json", R"({
        "graph": "g.json", "x0": [10, 20, 50],
        "transform": {"mode": "gauge", "magnitudes": [2, 2, 2]},
        "sim": {"dt": 0.001, "t_end": 0.5}})");
    const RunResult r = run("run " + (tmp.path / "short.json").string());
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("FAIL") != std::string::npos);
}

TEST_CASE("run: reverse target violating the constraint exits 2 with the residual") {
    TempDir tmp;
    write_file(tmp.path / "g.json", R"({"n": 3, "edges": [
        {"i": 1, "j": 2, "w": 1}, {"i": 2, "j": 3, "w": 1}, {"i": 3, "j": 1, "w": 1}]})");
    write_file(tmp.path / "bad.json", R"({
        "graph": "g.json", "x0": [10, 20, 50],
        "transform": {"mode": "reverse", "xf": [20, 20, 50]}})");
    const RunResult r = run("run " + (tmp.path / "bad.json").string());
    CHECK(r.exit_code == 2);
    CHECK(r.output.find("residual") != std::string::npos);
}

TEST_CASE("reverse: gate failure is reported instead of a wrong prediction") {
    const RunResult r =
        run("reverse " + kData + "/graph1.json --x0 10,20,50 --xf -10,10,25");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("FAILS") != std::string::npos);
    CHECK(r.output.find("not guaranteed") != std::string::npos);
    // the honest projected value, not the requested one
    CHECK(r.output.find("projected x_f") != std::string::npos);
}

TEST_CASE("spectrum subcommand prints the eigenvalues") {
    const RunResult r = run("spectrum " + kData + "/graph1.json");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("spectral_radius 2") != std::string::npos);
}

TEST_CASE("sweep: summary table, one row per scenario, deterministic order") {
    TempDir tmp;
    write_file(tmp.path / "g.json", R"({"n": 3, "edges": [
        {"i": 1, "j": 2, "w": -1}, {"i": 2, "j": 3, "w": 4}, {"i": 3, "j": 1, "w": -2}]})");
    write_file(tmp.path / "a_first.json", R"({
        "graph": "g.json", "x0": [10, 20, 50],
        "transform": {"mode": "gauge", "magnitudes": [2, 2, 2]},
        "sim": {"dt": 0.001, "t_end": 20.0}})");
    write_file(tmp.path / "b_second.json", R"({
        "graph": "g.json", "x0": [1, 2, 3],
        "transform": {"mode": "gauge"},
        "sim": {"dt": 0.001, "t_end": 20.0}})");
    const RunResult ok = run("sweep " + tmp.path.string());
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("a_first") != std::string::npos);
    CHECK(ok.output.find("b_second") != std::string::npos);
    CHECK(ok.output.find("a_first") < ok.output.find("b_second"));

    // empty directory: empty table, success
    fs::create_directories(tmp.path / "empty");
    const RunResult empty = run("sweep " + (tmp.path / "empty").string());
    CHECK(empty.exit_code == 0);

    // one malformed scenario flips the exit code and is reported inline
    write_file(tmp.path / "c_broken.json", "{nope");
    const RunResult broken = run("sweep " + tmp.path.string());
    CHECK(broken.exit_code == 1);
    CHECK(broken.output.find("error") != std::string::npos);
    CHECK(broken.output.find("a_first") != std::string::npos);
}

TEST_CASE("design subcommand prints theta_x for the block graph") {
    const RunResult r =
        run("design " + kData + "/graph2.json --magnitudes 2,2,2,1.2,1,1");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("theta_x") != std::string::npos);
    CHECK(r.output.find("0.5") != std::string::npos);
}
