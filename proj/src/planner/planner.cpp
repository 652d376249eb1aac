#include "foam/planner.hpp"

#include <cmath>
#include <stdexcept>

namespace foam {

PlannerConfig PlannerConfig::from(const Scenario& s) {
    return {s.foam, s.sensor.camera_hfov, s.cruise_speed, s.height};
}

double goal_bearing(const QuadState& state, Vec2 goal) {
    const Vec2 d = goal - state.position();
    if (d.x == 0.0 && d.y == 0.0) return 0.0;
    return wrap_angle(std::atan2(d.y, d.x) - state.psi);
}

double yaw_from_sector(double current_yaw, int sector, int sectors, double yaw_step) {
    if (sector < 1 || sector > sectors) throw std::out_of_range("yaw_from_sector: sector out of range");
    const int median = (sectors + 1) / 2;
    return wrap_angle(current_yaw + yaw_step * (sector - median));
}

SectorPom fuse_for_planning(const std::optional<SectorPom>& camera, const SectorPom& lidar,
                            const FoamParams& params) {
    if (!camera) return lidar;
    return fuse(*camera, lidar, params.w_camera, params.w_lidar);
}

Decision plan(const QuadState& state, const SectorPom& fused, Vec2 goal, const PlannerConfig& config) {
    const FoamParams& p = config.foam;
    const double half_fov = 0.5 * config.hfov;
    const double bearing = goal_bearing(state, goal);

    Decision out;
    out.fused = fused;
    out.selected_sector = min_yaw_cost(fused);
    out.command.forward_speed = config.cruise_speed;
    out.command.height = config.height;

    if (const auto goal_sector = sector_of_bearing(bearing, config.hfov, p.sectors);
        goal_sector && fused(*goal_sector) <= p.p_free) {
        out.mode = PlanMode::SeekGoal;
        out.command.yaw_setpoint = wrap_angle(state.psi + bearing);
    } else if (!goal_sector && fused(p.median_sector()) <= p.p_free) {
        out.mode = PlanMode::SwingToGoal;
        out.command.yaw_setpoint = wrap_angle(state.psi + std::copysign(half_fov, bearing));
    } else {
        out.mode = PlanMode::Avoid;
        out.command.yaw_setpoint = yaw_from_sector(state.psi, out.selected_sector, p.sectors, p.yaw_step);
    }
    return out;
}

Decision plan(const QuadState& state, const std::optional<SectorPom>& camera, const SectorPom& lidar,
              Vec2 goal, const PlannerConfig& config) {
    return plan(state, fuse_for_planning(camera, lidar, config.foam), goal, config);
}

bool goal_reached(const QuadState& state, Vec2 goal, double tolerance) {
    return distance(state.position(), goal) <= tolerance;
}

}  // namespace foam
