// Scenario model, planar obstacle geometry, ray casting and the
// clearance / deviation metrics used by the simulator.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "foam/geometry.hpp"
#include "foam/params.hpp"

namespace foam {

/// Raised for any scenario that violates the schema or a model invariant.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Circle {
    Vec2 center;
    double radius{1.0};
    friend bool operator==(const Circle&, const Circle&) = default;
};

/// Axis-aligned box.
struct Box {
    Vec2 min_corner;
    Vec2 max_corner;
    friend bool operator==(const Box&, const Box&) = default;
};

using Obstacle = std::variant<Circle, Box>;

/// Randomized tree placement. Trees are circles placed uniformly in
/// `region`, rejected if they come within `clearance` of the start or goal.
struct ForestSpec {
    double density{0.01};        ///< obstacles per square meter of `region`
    double radius_min{0.3};
    double radius_max{0.8};
    double clearance{3.0};
    Box region;

    friend bool operator==(const ForestSpec&, const ForestSpec&) = default;
};

struct Pose2 {
    double x{0.0};
    double y{0.0};
    double heading{0.0};  ///< [rad]
    friend bool operator==(const Pose2&, const Pose2&) = default;
};

struct Scenario {
    Box bounds;
    /// Explicit obstacles first, followed by any forest-generated ones.
    std::vector<Obstacle> obstacles;
    std::size_t explicit_obstacle_count{0};
    std::optional<ForestSpec> forest;
    Pose2 start;
    Vec2 goal;
    double cruise_speed{3.0};
    double height{2.0};
    double t_max{120.0};
    double quad_radius{0.5};
    SensorParams sensor;
    FoamParams foam;
    VisionParams vision;
    SimParams sim;
    std::uint64_t seed{0};

    [[nodiscard]] Vec2 start_position() const { return {start.x, start.y}; }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct QuadState {
    double x{0.0};
    double y{0.0};
    double z{0.0};
    double psi{0.0};  ///< (-pi, pi]
    double v{0.0};
    double t{0.0};

    [[nodiscard]] Vec2 position() const { return {x, y}; }
    friend bool operator==(const QuadState&, const QuadState&) = default;
};

/// Clearance reported for a world without obstacles.
inline constexpr double kNoObstacleClearance = std::numeric_limits<double>::infinity();

/// Ray query with the surface information the renderer needs.
struct RayHit {
    double distance{0.0};
    int obstacle{-1};      ///< -1 when nothing was hit within range
    double surface_u{0.0}; ///< arc-length style coordinate along the struck surface [m]
};

[[nodiscard]] RayHit ray_hit(const std::vector<Obstacle>& obstacles, Vec2 origin,
                             double azimuth, double max_range);

/// Distance along the ray to the nearest obstacle, clamped to max_range.
/// Returns 0 when the origin is inside an obstacle.
[[nodiscard]] double ray_cast(const Scenario& scenario, Vec2 origin, double azimuth,
                              double max_range);

[[nodiscard]] double signed_distance(const Obstacle& obstacle, Vec2 point);

/// Minimum signed distance to every obstacle (negative inside);
/// kNoObstacleClearance when there are none.
[[nodiscard]] double min_clearance(const std::vector<Obstacle>& obstacles, Vec2 point);
[[nodiscard]] double min_clearance(const Scenario& scenario, Vec2 point);

/// Strict: touching the vehicle radius is not a collision.
[[nodiscard]] bool is_collision(const Scenario& scenario, const QuadState& state);

/// Unsigned distance from `point` to the line through start and goal. A
/// degenerate line (start == goal) falls back to the distance to start.
[[nodiscard]] double cross_track_deviation(Vec2 start, Vec2 goal, Vec2 point);

[[nodiscard]] bool contains(const Box& box, Vec2 p);

/// Checks every scenario invariant; throws ScenarioError naming the first violation.
void validate(const Scenario& scenario);

/// Re-populates the forest-generated obstacles for the scenario's seed.
void regenerate_forest(Scenario& scenario);

/// Copy of `scenario` with a different seed and its forest regenerated.
[[nodiscard]] Scenario with_seed(const Scenario& scenario, std::uint64_t seed);

}  // namespace foam
