// Closed-loop mission execution: sensor scheduling, the perception ->
// plan -> act loop, kinematic integration, termination, metrics and traces.

#pragma once

#include <deque>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "foam/planner.hpp"
#include "foam/pom.hpp"
#include "foam/sensesim.hpp"
#include "foam/vision.hpp"
#include "foam/world.hpp"

namespace foam {

struct SimConfig {
    double dt{1.0 / 30.0};
    double camera_rate{30.0};
    double lidar_rate{10.0};
    double yaw_rate_limit{deg2rad(90.0)};
    double goal_tolerance{1.0};
    std::uint64_t seed{0};

    [[nodiscard]] static SimConfig from(const Scenario& scenario);
};

/// One control tick. z, v, the lidar map and the vision flag are kept in
/// memory only; the trace file carries the columns listed in write_trace.
struct TraceRow {
    double t{0.0};
    double x{0.0};
    double y{0.0};
    double z{0.0};
    double psi{0.0};
    double v{0.0};
    double yaw_setpoint{0.0};
    int s_d{0};
    std::vector<double> pom;  ///< fused P_1..P_M
    double min_clearance{0.0};
    double cross_track{0.0};
    double latency_s{0.0};
    bool vision_active{false};
    double lidar_timestamp{0.0};
    std::vector<double> lidar_pom;
};

using Trace = std::vector<TraceRow>;

enum class MissionStatus { Success, Collision, Timeout };

[[nodiscard]] const char* to_string(MissionStatus status);

/// Metrics derived from a trace.
struct MissionMetrics {
    double duration{0.0};
    double path_length{0.0};
    double max_cross_track{0.0};
    double mean_cross_track{0.0};
    double min_clearance{0.0};
    double mean_heading_error{0.0};  ///< mean |yaw_setpoint - psi| [rad]
    double mean_latency{0.0};
    double p95_latency{0.0};
    std::size_t ticks{0};

    friend bool operator==(const MissionMetrics&, const MissionMetrics&) = default;
};

struct MissionResult {
    MissionStatus status{MissionStatus::Timeout};
    MissionMetrics metrics;
    double final_goal_distance{0.0};
    bool aborted{false};  ///< stopped early by a frame observer; status is not meaningful
};

struct MissionRun {
    MissionResult result;
    Trace trace;
};

/// Rate-limited heading tracking followed by a constant-speed unicycle step
/// using the updated heading.
[[nodiscard]] QuadState step_kinematics(const QuadState& state, const Command& cmd, double dt,
                                        double yaw_rate_limit);

/// Sliding four-frame camera pipeline. Corners are detected on the oldest
/// buffered frame and tracked through the three newer ones.
class CameraPipeline {
public:
    CameraPipeline(const VisionParams& vision, int sectors, double epsilon);

    /// Buffers `frame`; returns the camera occupancy map once four frames
    /// are available, std::nullopt before that.
    std::optional<SectorPom> process(const ImageFrame& frame);

    [[nodiscard]] const std::vector<FlowTrack>& last_tracks() const noexcept { return tracks_; }
    [[nodiscard]] std::size_t buffered() const noexcept { return frames_.size(); }

private:
    VisionParams vision_;
    int sectors_;
    double epsilon_;
    std::deque<ImageFrame> frames_;
    std::deque<Pyramid> pyramids_;
    std::vector<FlowTrack> tracks_;
};

/// True when a sensor running at `rate` delivers a sample on control tick `tick`.
[[nodiscard]] bool sensor_due(std::size_t tick, double dt, double rate);

/// Runs a mission to Success, Collision or Timeout. The scenario is
/// validated first; ScenarioError propagates before any tick runs.
[[nodiscard]] MissionRun run_mission(const Scenario& scenario, const SimConfig& config);

/// Receives every rendered camera frame; returning false ends the run early.
using FrameObserver = std::function<bool(std::size_t tick, const ImageFrame& frame)>;

[[nodiscard]] MissionRun run_mission(const Scenario& scenario, const SimConfig& config,
                                     const FrameObserver& observer);

/// Throws std::invalid_argument for an empty trace.
[[nodiscard]] MissionMetrics summarize(const Trace& trace, const Scenario& scenario);

/// Rounds to the 9 significant digits the trace file stores.
[[nodiscard]] double trace_round(double value);

void write_trace(const std::filesystem::path& path, const Trace& trace, int sectors);
/// Parses a trace file. Throws std::runtime_error when malformed.
[[nodiscard]] Trace read_trace(const std::filesystem::path& path);

}  // namespace foam
