#include "foam/simkernel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace foam {

SimConfig SimConfig::from(const Scenario& s) {
    return {s.sim.dt, s.sensor.camera_rate, s.sensor.lidar_rate, s.sim.yaw_rate_limit,
            s.sim.goal_tolerance, s.seed};
}

const char* to_string(MissionStatus status) {
    switch (status) {
        case MissionStatus::Success: return "Success";
        case MissionStatus::Collision: return "Collision";
        case MissionStatus::Timeout: return "Timeout";
    }
    return "?";
}

QuadState step_kinematics(const QuadState& state, const Command& cmd, double dt, double yaw_rate_limit) {
    const double max_turn = yaw_rate_limit * dt;
    const double error = wrap_angle(cmd.yaw_setpoint - state.psi);
    QuadState next = state;
    next.psi = wrap_angle(state.psi + std::clamp(error, -max_turn, max_turn));
    next.v = cmd.forward_speed;
    next.z = cmd.height;
    next.x = state.x + next.v * std::cos(next.psi) * dt;
    next.y = state.y + next.v * std::sin(next.psi) * dt;
    next.t = state.t + dt;
    return next;
}

CameraPipeline::CameraPipeline(const VisionParams& vision, int sectors, double epsilon)
    : vision_(vision), sectors_(sectors), epsilon_(epsilon) {}

std::optional<SectorPom> CameraPipeline::process(const ImageFrame& frame) {
    frames_.push_back(frame);
    pyramids_.push_back(build_pyramid(frame, vision_.pyramid_levels, vision_.lk_window));
    while (frames_.size() > 4) {
        frames_.pop_front();
        pyramids_.pop_front();
    }
    tracks_.clear();
    if (frames_.size() < 4) return std::nullopt;

    const auto corners = detect_corners(frames_.front(), vision_);
    const Pyramid* window[4] = {&pyramids_[0], &pyramids_[1], &pyramids_[2], &pyramids_[3]};
    auto tracks = track_three_frames(std::span<const Pyramid* const>(window), corners, vision_);
    tracks_ = std::move(*tracks);
    return camera_pom(tracks_, frame.width(), sectors_, epsilon_);
}

bool sensor_due(std::size_t tick, double dt, double rate) {
    if (tick == 0) return true;
    const auto sample = [&](std::size_t k) {
        return std::floor(static_cast<double>(k) * dt * rate + 1e-9);
    };
    return sample(tick) > sample(tick - 1);
}

MissionRun run_mission(const Scenario& scenario, const SimConfig& config) {
    return run_mission(scenario, config, FrameObserver{});
}

MissionRun run_mission(const Scenario& scenario, const SimConfig& config, const FrameObserver& observer) {
    validate(scenario);
    if (!(config.dt > 0.0)) throw ScenarioError("sim.dt must be positive");

    const PlannerConfig planner = PlannerConfig::from(scenario);
    const FoamParams& fp = scenario.foam;
    CameraPipeline camera(scenario.vision, fp.sectors, fp.epsilon);

    QuadState state;
    state.x = scenario.start.x;
    state.y = scenario.start.y;
    state.z = scenario.height;
    state.psi = wrap_angle(scenario.start.heading);
    state.v = scenario.cruise_speed;
    state.t = 0.0;

    MissionRun run;
    LidarScan scan;
    std::optional<SectorPom> camera_map;
    using clock = std::chrono::steady_clock;

    for (std::size_t tick = 0;; ++tick) {
        std::optional<ImageFrame> frame;
        if (sensor_due(tick, config.dt, config.camera_rate)) {
            frame = render_frame(scenario, state, scenario.sensor);
            if (observer && !observer(tick, *frame)) {
                run.result.aborted = true;
                break;
            }
        }
        if (sensor_due(tick, config.dt, config.lidar_rate)) {
            scan = simulate_lidar(scenario, state, scenario.sensor);
        }

        const auto started = clock::now();
        if (frame) camera_map = camera.process(*frame);
        const SectorPom lidar_map =
            lidar_pom(scan, scenario.sensor.camera_hfov, fp.sectors, fp.d_max, fp.epsilon);
        const Decision decision = plan(state, camera_map, lidar_map, scenario.goal, planner);
        const double latency = std::chrono::duration<double>(clock::now() - started).count();

        TraceRow row;
        row.t = state.t;
        row.x = state.x;
        row.y = state.y;
        row.z = state.z;
        row.psi = state.psi;
        row.v = state.v;
        row.yaw_setpoint = decision.command.yaw_setpoint;
        row.s_d = decision.selected_sector;
        row.pom = decision.fused.values;
        row.min_clearance = min_clearance(scenario, state.position());
        row.cross_track = cross_track_deviation(scenario.start_position(), scenario.goal, state.position());
        row.latency_s = latency;
        row.vision_active = camera_map.has_value();
        row.lidar_timestamp = scan.timestamp;
        row.lidar_pom = lidar_map.values;
        run.trace.push_back(std::move(row));

        std::optional<MissionStatus> status;
        if (goal_reached(state, scenario.goal, config.goal_tolerance)) {
            status = MissionStatus::Success;
        } else if (is_collision(scenario, state)) {
            status = MissionStatus::Collision;
        } else if (state.t > scenario.t_max) {
            status = MissionStatus::Timeout;
        }
        if (status) {
            run.result.status = *status;
            break;
        }
        state = step_kinematics(state, decision.command, config.dt, config.yaw_rate_limit);
    }

    if (run.trace.empty()) return run;
    run.result.metrics = summarize(run.trace, scenario);
    run.result.final_goal_distance = distance(state.position(), scenario.goal);
    return run;
}

double trace_round(double value) {
    if (!std::isfinite(value)) return value;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return std::strtod(buf, nullptr);
}

MissionMetrics summarize(const Trace& trace, const Scenario& scenario) {
    if (trace.empty()) throw std::invalid_argument("summarize: empty trace");
    MissionMetrics m;
    m.ticks = trace.size();
    m.duration = trace_round(trace.back().t) - trace_round(trace.front().t);
    m.min_clearance = kNoObstacleClearance;
    std::vector<double> latencies;
    double cross_sum = 0.0;
    double heading_sum = 0.0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const TraceRow& r = trace[i];
        const Vec2 p{trace_round(r.x), trace_round(r.y)};
        if (i > 0) m.path_length += distance(p, {trace_round(trace[i - 1].x), trace_round(trace[i - 1].y)});
        const double xt = cross_track_deviation(scenario.start_position(), scenario.goal, p);
        m.max_cross_track = std::max(m.max_cross_track, xt);
        cross_sum += xt;
        m.min_clearance = std::min(m.min_clearance, trace_round(r.min_clearance));
        heading_sum += std::abs(wrap_angle(trace_round(r.yaw_setpoint) - trace_round(r.psi)));
        if (r.vision_active) latencies.push_back(trace_round(r.latency_s));
    }
    const auto n = static_cast<double>(trace.size());
    m.mean_cross_track = cross_sum / n;
    m.mean_heading_error = heading_sum / n;
    if (!latencies.empty()) {
        double sum = 0.0;
        for (double l : latencies) sum += l;
        m.mean_latency = sum / static_cast<double>(latencies.size());
        std::sort(latencies.begin(), latencies.end());
        const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(latencies.size())));
        m.p95_latency = latencies[std::max<std::size_t>(rank, 1) - 1];
    }
    return m;
}

}  // namespace foam
