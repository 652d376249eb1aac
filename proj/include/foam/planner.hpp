// Local planner: turns the fused sector map and the goal geometry into a
// yaw setpoint at constant forward speed and height.

#pragma once

#include <optional>

#include "foam/pom.hpp"
#include "foam/world.hpp"

namespace foam {

struct Command {
    double yaw_setpoint{0.0};  ///< [rad], (-pi, pi]
    double forward_speed{0.0}; ///< [m/s]
    double height{0.0};        ///< [m]
    friend bool operator==(const Command&, const Command&) = default;
};

enum class PlanMode { SeekGoal, SwingToGoal, Avoid };

struct PlannerConfig {
    FoamParams foam;
    double hfov{deg2rad(90.0)};
    double cruise_speed{3.0};
    double height{2.0};

    [[nodiscard]] static PlannerConfig from(const Scenario& scenario);
};

struct Decision {
    Command command;
    SectorPom fused;
    int selected_sector{0};  ///< least-occupied sector of the fused map
    PlanMode mode{PlanMode::Avoid};
};

/// Bearing of the goal relative to the heading, positive to the right,
/// wrapped to (-pi, pi]. Zero when the vehicle sits on the goal.
[[nodiscard]] double goal_bearing(const QuadState& state, Vec2 goal);

/// current_yaw + yaw_step * (sector - median), wrapped. Throws
/// std::out_of_range for a sector outside [1, sectors].
[[nodiscard]] double yaw_from_sector(double current_yaw, int sector, int sectors, double yaw_step);

/// Camera and lidar maps fused with the configured weights, or the lidar map
/// alone while the camera map is unavailable.
[[nodiscard]] SectorPom fuse_for_planning(const std::optional<SectorPom>& camera,
                                          const SectorPom& lidar, const FoamParams& params);

/// Seek the goal when its sector is free, swing toward an out-of-view goal
/// when the median sector is free, otherwise steer to the least-occupied
/// sector.
[[nodiscard]] Decision plan(const QuadState& state, const SectorPom& fused, Vec2 goal,
                            const PlannerConfig& config);

[[nodiscard]] Decision plan(const QuadState& state, const std::optional<SectorPom>& camera,
                            const SectorPom& lidar, Vec2 goal, const PlannerConfig& config);

/// Inclusive: a distance equal to the tolerance counts as reached.
[[nodiscard]] bool goal_reached(const QuadState& state, Vec2 goal, double tolerance);

}  // namespace foam
