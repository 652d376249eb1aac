// Serial reference kernels against their OpenMP counterparts, plus one full
// perception tick on rendered forest frames.

#include <benchmark/benchmark.h>

#include <filesystem>

#include "foam/planner.hpp"
#include "foam/pom.hpp"
#include "foam/scenario_io.hpp"
#include "foam/simkernel.hpp"

using namespace foam;

namespace {

struct Fixture {
    Scenario scenario;
    QuadState state;
    std::vector<ImageFrame> frames;
    RgbFrame rgb;
    std::vector<Vec2> corners;
    Pyramid p0, p1;
};

const Fixture& fixture() {
    static const Fixture f = [] {
        Fixture x;
        x.scenario = with_seed(load_scenario(std::filesystem::path(FOAM_SCENARIO_DIR) / "forest.json"), 0);
        x.state.x = 2.0;
        x.state.z = x.scenario.height;
        x.state.v = x.scenario.cruise_speed;
        for (int k = 0; k < 4; ++k) {
            QuadState q = x.state;
            q.x += 0.1 * k;
            q.t = k / 30.0;
            x.frames.push_back(render_frame(x.scenario, q, x.scenario.sensor));
        }
        const GrayPlane& g = x.frames[0].intensities;
        x.rgb = {g, g, g, 0.0};
        for (const Corner& c : detect_corners(x.frames[0], x.scenario.vision)) x.corners.push_back(c.position);
        const VisionParams& v = x.scenario.vision;
        x.p0 = build_pyramid(x.frames[0], v.pyramid_levels, v.lk_window);
        x.p1 = build_pyramid(x.frames[1], v.pyramid_levels, v.lk_window);
        return x;
    }();
    return f;
}

template <auto Fn>
void bm_render(benchmark::State& st) {
    const Fixture& f = fixture();
    for (auto _ : st) benchmark::DoNotOptimize(Fn(f.scenario, f.state, f.scenario.sensor));
}

template <auto Fn>
void bm_grayscale(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(Fn(fixture().rgb));
}

template <auto Fn>
void bm_eigen(benchmark::State& st) {
    const Fixture& f = fixture();
    for (auto _ : st) benchmark::DoNotOptimize(Fn(f.frames[0], f.scenario.vision.corner_block));
}

template <auto Fn>
void bm_corners(benchmark::State& st) {
    const Fixture& f = fixture();
    for (auto _ : st) benchmark::DoNotOptimize(Fn(f.frames[0], f.scenario.vision));
}

template <auto Fn>
void bm_pyramid(benchmark::State& st) {
    const Fixture& f = fixture();
    const VisionParams& v = f.scenario.vision;
    for (auto _ : st) benchmark::DoNotOptimize(Fn(f.frames[0], v.pyramid_levels, v.lk_window));
}

template <auto Fn>
void bm_lk(benchmark::State& st) {
    const Fixture& f = fixture();
    for (auto _ : st) benchmark::DoNotOptimize(Fn(f.p0, f.p1, f.corners, f.scenario.vision));
    st.counters["points"] = static_cast<double>(f.corners.size());
}

// grayscale + pyramid + corners + three-step LK + both maps + plan.
void bm_perception_tick(benchmark::State& st) {
    const Fixture& f = fixture();
    const Scenario& s = f.scenario;
    const LidarScan scan = simulate_lidar(s, f.state, s.sensor);
    const PlannerConfig planner = PlannerConfig::from(s);
    std::vector<RgbFrame> rgb;
    for (const ImageFrame& fr : f.frames) rgb.push_back({fr.intensities, fr.intensities, fr.intensities, 0.0});
    CameraPipeline camera(s.vision, s.foam.sectors, s.foam.epsilon);
    for (int k = 0; k < 3; ++k) (void)camera.process(grayscale(rgb[static_cast<std::size_t>(k)]));
    std::size_t k = 3;
    for (auto _ : st) {
        const auto pc = camera.process(grayscale(rgb[k % 4]));
        const SectorPom pl = lidar_pom(scan, s.sensor.camera_hfov, s.foam.sectors, s.foam.d_max, s.foam.epsilon);
        benchmark::DoNotOptimize(plan(f.state, pc, pl, s.goal, planner));
        ++k;
    }
}

}  // namespace

BENCHMARK(bm_render<&serial::render_frame>)->Name("render/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(bm_render<&foam::render_frame>)
    ->Name("render/omp")
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bm_grayscale<&serial::grayscale>)->Name("grayscale/serial")->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_grayscale<&foam::grayscale>)
    ->Name("grayscale/omp")
    ->Unit(benchmark::kMicrosecond);
BENCHMARK(bm_eigen<&serial::min_eigenvalue_map>)->Name("eigen_map/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(bm_eigen<&foam::min_eigenvalue_map>)
    ->Name("eigen_map/omp")
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bm_corners<&serial::detect_corners>)->Name("corners/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(bm_corners<&foam::detect_corners>)
    ->Name("corners/omp")
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bm_pyramid<&serial::build_pyramid>)->Name("pyramid/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(bm_pyramid<&foam::build_pyramid>)
    ->Name("pyramid/omp")
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bm_lk<&serial::lk_track>)->Name("lk/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(bm_lk<&foam::lk_track>)
    ->Name("lk/omp")
    ->Unit(benchmark::kMillisecond);
BENCHMARK(bm_perception_tick)->Name("perception_tick")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
