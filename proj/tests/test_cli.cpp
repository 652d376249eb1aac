#include <doctest.h>

#include <fstream>
#include <iterator>
#include <regex>
#include <sstream>

#include "foam/cli.hpp"
#include "foam/scenario_io.hpp"

using namespace foam;
namespace fs = std::filesystem;

namespace {

fs::path scenario(const char* name) { return fs::path(FOAM_SCENARIO_DIR) / name; }

struct TempDir {
    fs::path path;
    explicit TempDir(const char* name) : path(fs::temp_directory_path() / name) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    fs::path operator/(const char* leaf) const { return path / leaf; }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

nlohmann::json without_latency(nlohmann::json j) {
    if (j.is_object()) {
        j.erase("mean_latency");
        j.erase("p95_latency");
        for (auto& [k, v] : j.items()) v = without_latency(v);
    } else if (j.is_array()) {
        for (auto& v : j) v = without_latency(v);
    }
    return j;
}

// (x, y) pairs of the trajectory polyline.
std::vector<std::pair<double, double>> trajectory_points(const std::string& svg) {
    const std::regex line(R"(id="trajectory"[^>]*points="([^"]*)\")");
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, line));
    std::vector<std::pair<double, double>> pts;
    std::istringstream in(m[1].str());
    std::string pair;
    while (in >> pair) {
        const auto comma = pair.find(',');
        pts.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
    }
    return pts;
}

double reference_y(const std::string& svg) {
    const std::regex line(R"re(id="reference" x1="[^"]*" y1="([^"]*)")re");
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, line));
    return std::stod(m[1].str());
}

}  // namespace

TEST_CASE("exit codes follow the mission status") {
    CHECK(exit_code(MissionStatus::Success) == 0);
    CHECK(exit_code(MissionStatus::Collision) == 2);
    CHECK(exit_code(MissionStatus::Timeout) == 3);
}

TEST_CASE("run") {
    TempDir dir("foam_cli_run");
    std::ostringstream out, err;

    SUBCASE("empty world succeeds and writes the trace") {
        CHECK(cmd_run(scenario("empty.json"), dir / "t.csv", {}, std::nullopt, out, err) == 0);
        CHECK(fs::file_size(dir / "t.csv") > 0);
        CHECK(out.str().rfind("status=Success", 0) == 0);
        CHECK(err.str().empty());
        CHECK_FALSE(read_trace(dir / "t.csv").empty());
    }
    SUBCASE("an even sector count is rejected by name") {
        CHECK(cmd_run(scenario("empty.json"), dir / "t.csv", {"foam.sectors=4"}, std::nullopt, out, err) == 1);
        CHECK(err.str().find("odd") != std::string::npos);
        CHECK(err.str().find("foam.sectors") != std::string::npos);
        CHECK(out.str().empty());
    }
    SUBCASE("unreadable scenario") {
        CHECK(cmd_run(dir / "missing.json", dir / "t.csv", {}, std::nullopt, out, err) == 1);
        CHECK_FALSE(err.str().empty());
    }
    SUBCASE("timeout and collision exit codes") {
        CHECK(cmd_run(scenario("empty.json"), dir / "t.csv", {"t_max=1"}, std::nullopt, out, err) == 3);
        CHECK(cmd_run(scenario("pole.json"), dir / "t.csv", {"sim.yaw_rate_limit_deg=0.000001"}, std::nullopt,
                      out, err) == 2);
    }
    SUBCASE("pole summary reports clearance") {
        CHECK(cmd_run(scenario("pole.json"), dir / "t.csv", {}, std::nullopt, out, err) == 0);
        const std::regex clearance(R"(min_clearance=([0-9.]+)m)");
        std::smatch m;
        const std::string line = out.str();
        REQUIRE(std::regex_search(line, m, clearance));
        CHECK(std::stod(m[1].str()) >= 0.5);
    }
}

TEST_CASE("batch") {
    TempDir dir("foam_cli_batch");
    std::ostringstream out, err;

    SUBCASE("one seed matches a single run") {
        REQUIRE(cmd_batch(scenario("empty.json"), 1, dir / "r.json", {}, out, err) == 0);
        const auto report = nlohmann::json::parse(slurp(dir / "r.json"));
        CHECK(report["runs"] == 1);
        const Scenario s = load_with_overrides(scenario("empty.json"), {}, 0);
        const MissionRun run = run_mission(s, SimConfig::from(s));
        nlohmann::json seed0 = report["seeds"][0];
        seed0.erase("seed");
        CHECK(without_latency(seed0) == without_latency(metrics_json(run.result)));
        CHECK(out.str() == "runs=1 successes=1 success_rate=1.000\n");
    }
    SUBCASE("repeated batches agree apart from latency") {
        REQUIRE(cmd_batch(scenario("forest.json"), 2, dir / "a.json", {"t_max=4"}, out, err) == 0);
        REQUIRE(cmd_batch(scenario("forest.json"), 2, dir / "b.json", {"t_max=4"}, out, err) == 0);
        const auto a = nlohmann::json::parse(slurp(dir / "a.json"));
        const auto b = nlohmann::json::parse(slurp(dir / "b.json"));
        CHECK(without_latency(a) == without_latency(b));
        CHECK(without_latency(a).dump() == without_latency(b).dump());
        CHECK(a["seeds"][0]["seed"] == 0);
        CHECK(a["seeds"][1]["seed"] == 1);
        const double rate = a["success_rate"];
        CHECK(rate >= 0.0);
        CHECK(rate <= 1.0);
    }
    SUBCASE("seed count must be positive") {
        CHECK(cmd_batch(scenario("empty.json"), 0, dir / "r.json", {}, out, err) == 1);
    }
    SUBCASE("success rate arithmetic") {
        BatchReport r;
        r.runs.resize(4);
        r.runs[1].result.status = MissionStatus::Success;
        CHECK(r.successes() == 1);
        CHECK(r.success_rate() == 0.25);
    }
}

TEST_CASE("dump-frames") {
    TempDir dir("foam_cli_dump");
    std::ostringstream err;
    REQUIRE(cmd_dump_frames(scenario("pole.json"), 0, 0, dir.path, {}, std::nullopt, err) == 0);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir.path)) files.push_back(e.path());
    REQUIRE(files.size() == 1);
    CHECK(files[0].filename() == "frame_000000.pgm");
    const std::string first = slurp(files[0]);
    CHECK(first.size() == 15 + 307200);
    CHECK(first.rfind("P5\n640 480\n255\n", 0) == 0);

    REQUIRE(cmd_dump_frames(scenario("pole.json"), 0, 0, dir.path, {}, std::nullopt, err) == 0);
    CHECK(slurp(dir / "frame_000000.pgm") == first);

    REQUIRE(cmd_dump_frames(scenario("pole.json"), 3, 5, dir / "later", {}, std::nullopt, err) == 0);
    CHECK(fs::exists(dir / "later/frame_000003.pgm"));
    CHECK(fs::exists(dir / "later/frame_000005.pgm"));
    CHECK_FALSE(fs::exists(dir / "later/frame_000006.pgm"));

    CHECK(cmd_dump_frames(scenario("pole.json"), 2, 1, dir.path, {}, std::nullopt, err) == 1);
    std::ofstream(dir / "blocker") << "x";
    CHECK(cmd_dump_frames(scenario("pole.json"), 0, 0, dir / "blocker/sub", {}, std::nullopt, err) == 1);
}

TEST_CASE("plot") {
    TempDir dir("foam_cli_plot");
    std::ostringstream out, err;

    SUBCASE("empty trace") {
        std::ofstream(dir / "empty.csv") << "t,x,y,psi,yaw_setpoint,s_d,P_1,P_2,P_3,P_4,P_5,P_6,P_7,P_8,P_9,"
                                            "min_clearance,cross_track,latency_s\n";
        CHECK(cmd_plot(dir / "empty.csv", scenario("empty.json"), dir / "p.svg", {}, std::nullopt, err) == 1);
        std::ofstream(dir / "nothing.csv");
        CHECK(cmd_plot(dir / "nothing.csv", scenario("empty.json"), dir / "p.svg", {}, std::nullopt, err) == 1);
    }
    SUBCASE("straight flight lies on the reference line") {
        REQUIRE(cmd_run(scenario("empty.json"), dir / "t.csv", {}, std::nullopt, out, err) == 0);
        REQUIRE(cmd_plot(dir / "t.csv", scenario("empty.json"), dir / "p.svg", {}, std::nullopt, err) == 0);
        const std::string svg = slurp(dir / "p.svg");
        const double ref = reference_y(svg);
        const auto pts = trajectory_points(svg);
        CHECK(pts.size() > 100);
        for (const auto& p : pts) REQUIRE(std::abs(p.second - ref) <= 0.0015);
        CHECK(svg.find("id=\"pom-strip\"") != std::string::npos);
    }
    SUBCASE("pole flight leaves the line") {
        REQUIRE(cmd_run(scenario("pole.json"), dir / "t.csv", {}, std::nullopt, out, err) == 0);
        REQUIRE(cmd_plot(dir / "t.csv", scenario("pole.json"), dir / "p.svg", {}, std::nullopt, err) == 0);
        const std::string svg = slurp(dir / "p.svg");
        const double ref = reference_y(svg);
        double excursion = 0.0;
        for (const auto& p : trajectory_points(svg)) excursion = std::max(excursion, std::abs(p.second - ref));
        CHECK(excursion > 5.0);  // pixels; 12.5 px per metre here
        CHECK(svg.find("<circle cx=") != std::string::npos);
    }
    SUBCASE("sector count mismatch") {
        REQUIRE(cmd_run(scenario("empty.json"), dir / "t.csv", {}, std::nullopt, out, err) == 0);
        CHECK(cmd_plot(dir / "t.csv", scenario("empty.json"), dir / "p.svg", {"foam.sectors=7"}, std::nullopt,
                       err) == 1);
    }
}
