#include "foam/world.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace foam {

namespace {

struct Intersection {
    double t;
    double surface_u;
};

constexpr double kNoHit = std::numeric_limits<double>::infinity();

Intersection intersect(const Circle& c, Vec2 o, Vec2 d) {
    const Vec2 f = o - c.center;
    const double b = f.dot(d);
    const double cc = f.dot(f) - c.radius * c.radius;
    if (cc < 0.0) return {0.0, 0.0};
    const double disc = b * b - cc;
    if (disc < 0.0) return {kNoHit, 0.0};
    const double t = -b - std::sqrt(disc);
    if (t < 0.0) return {kNoHit, 0.0};
    const Vec2 h = o + d * t - c.center;
    return {t, c.radius * (std::atan2(h.y, h.x) + kPi)};
}

// Slab test. Origins strictly inside report 0.
Intersection intersect(const Box& b, Vec2 o, Vec2 d) {
    if (o.x > b.min_corner.x && o.x < b.max_corner.x && o.y > b.min_corner.y &&
        o.y < b.max_corner.y) {
        return {0.0, 0.0};
    }
    double t_enter = -kNoHit;
    double t_exit = kNoHit;
    int enter_axis = 0;
    const double origin[2] = {o.x, o.y};
    const double dir[2] = {d.x, d.y};
    const double lo[2] = {b.min_corner.x, b.min_corner.y};
    const double hi[2] = {b.max_corner.x, b.max_corner.y};
    for (int axis = 0; axis < 2; ++axis) {
        if (dir[axis] == 0.0) {
            if (origin[axis] < lo[axis] || origin[axis] > hi[axis]) return {kNoHit, 0.0};
            continue;
        }
        double t0 = (lo[axis] - origin[axis]) / dir[axis];
        double t1 = (hi[axis] - origin[axis]) / dir[axis];
        if (t0 > t1) std::swap(t0, t1);
        if (t0 > t_enter) {
            t_enter = t0;
            enter_axis = axis;
        }
        t_exit = std::min(t_exit, t1);
    }
    if (t_enter > t_exit || t_exit < 0.0 || t_enter < 0.0) return {kNoHit, 0.0};
    const Vec2 h = o + d * t_enter;
    // Faces normal to x are parameterized by y and vice versa.
    return {t_enter, enter_axis == 0 ? h.y : h.x};
}

}  // namespace

RayHit ray_hit(const std::vector<Obstacle>& obstacles, Vec2 origin, double azimuth,
               double max_range) {
    const Vec2 d = unit_from_angle(azimuth);
    RayHit best{max_range, -1, 0.0};
    for (std::size_t i = 0; i < obstacles.size(); ++i) {
        const Intersection hit =
            std::visit([&](const auto& shape) { return intersect(shape, origin, d); },
                       obstacles[i]);
        if (hit.t < best.distance) {
            best = {hit.t, static_cast<int>(i), hit.surface_u};
        }
    }
    return best;
}

double ray_cast(const Scenario& scenario, Vec2 origin, double azimuth, double max_range) {
    return ray_hit(scenario.obstacles, origin, azimuth, max_range).distance;
}

double signed_distance(const Obstacle& obstacle, Vec2 p) {
    if (const auto* c = std::get_if<Circle>(&obstacle)) {
        return (p - c->center).norm() - c->radius;
    }
    const Box& b = std::get<Box>(obstacle);
    const Vec2 center = (b.min_corner + b.max_corner) * 0.5;
    const Vec2 half = (b.max_corner - b.min_corner) * 0.5;
    const double qx = std::abs(p.x - center.x) - half.x;
    const double qy = std::abs(p.y - center.y) - half.y;
    const double outside = std::hypot(std::max(qx, 0.0), std::max(qy, 0.0));
    const double inside = std::min(std::max(qx, qy), 0.0);
    return outside + inside;
}

double min_clearance(const std::vector<Obstacle>& obstacles, Vec2 point) {
    double best = kNoObstacleClearance;
    for (const auto& o : obstacles) best = std::min(best, signed_distance(o, point));
    return best;
}

double min_clearance(const Scenario& scenario, Vec2 point) {
    return min_clearance(scenario.obstacles, point);
}

bool is_collision(const Scenario& scenario, const QuadState& state) {
    return min_clearance(scenario, state.position()) < scenario.quad_radius;
}

double cross_track_deviation(Vec2 start, Vec2 goal, Vec2 point) {
    const Vec2 line = goal - start;
    const double len = line.norm();
    if (len == 0.0) return distance(point, start);
    return std::abs(line.cross(point - start)) / len;
}

bool contains(const Box& box, Vec2 p) {
    return p.x >= box.min_corner.x && p.x <= box.max_corner.x && p.y >= box.min_corner.y &&
           p.y <= box.max_corner.y;
}

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) throw ScenarioError(message);
}

void validate_box(const Box& b, const std::string& what) {
    require(b.min_corner.x < b.max_corner.x && b.min_corner.y < b.max_corner.y,
            what + ": min corner must be strictly less than max corner");
}

}  // namespace

void validate(const Scenario& s) {
    validate_box(s.bounds, "bounds");
    for (std::size_t i = 0; i < s.obstacles.size(); ++i) {
        const std::string what = "obstacle " + std::to_string(i);
        if (const auto* c = std::get_if<Circle>(&s.obstacles[i])) {
            require(c->radius > 0.0, what + ": radius must be positive");
        } else {
            validate_box(std::get<Box>(s.obstacles[i]), what);
        }
    }
    if (s.forest) {
        const ForestSpec& f = *s.forest;
        validate_box(f.region, "random_forest.region");
        require(f.density >= 0.0, "random_forest.density must be non-negative");
        require(f.radius_min > 0.0 && f.radius_min <= f.radius_max,
                "random_forest radii must satisfy 0 < radius_min <= radius_max");
        require(f.clearance >= 0.0, "random_forest.clearance must be non-negative");
    }
    require(contains(s.bounds, s.start_position()), "start must lie inside bounds");
    require(contains(s.bounds, s.goal), "goal must lie inside bounds");
    require(s.cruise_speed > 0.0, "cruise_speed must be positive");
    require(s.height > 0.0, "height must be positive");
    require(s.t_max > 0.0, "t_max must be positive");
    require(s.quad_radius > 0.0, "quad_radius must be positive");

    const SensorParams& sp = s.sensor;
    require(sp.lidar_range > 0.0, "sensor.lidar_range must be positive");
    require(sp.lidar_rate > 0.0 && sp.camera_rate > 0.0, "sensor rates must be positive");
    require(sp.camera_hfov > 0.0 && sp.camera_hfov < kPi,
            "sensor.camera_hfov must lie in (0, 180) degrees");
    require(sp.image_width > 0 && sp.image_height > 0, "image dimensions must be positive");

    const FoamParams& fp = s.foam;
    require(fp.sectors % 2 == 1, "M must be odd (foam.sectors = " + std::to_string(fp.sectors) + ")");
    require(fp.sectors >= 3, "M must be at least 3");
    require(sp.lidar_beams >= fp.sectors, "sensor.lidar_beams must be at least M");
    require(fp.w_camera >= 0.0 && fp.w_lidar >= 0.0, "fusion weights must be non-negative");
    require(std::abs(fp.w_camera + fp.w_lidar - 1.0) <= 1e-9,
            "fusion weights must satisfy w_camera + w_lidar = 1");
    require(fp.epsilon > 0.0, "foam.epsilon must be positive");
    require(fp.d_max > 0.0 && fp.d_max <= sp.lidar_range,
            "foam.d_max must lie in (0, lidar_range]");
    require(fp.yaw_step > 0.0, "foam.yaw_step must be positive");
    require(fp.p_free >= 0.0 && fp.p_free <= 1.0, "foam.p_free must lie in [0, 1]");

    const VisionParams& vp = s.vision;
    require(vp.pyramid_levels >= 1, "vision.pyramid_levels must be at least 1");
    require(vp.lk_window >= 3 && vp.lk_window % 2 == 1, "vision.lk_window must be odd and >= 3");
    require(vp.corner_block >= 3 && vp.corner_block % 2 == 1,
            "vision.corner_block must be odd and >= 3");
    require(vp.lk_max_iterations >= 1, "vision.lk_max_iterations must be at least 1");
    require(vp.lk_epsilon > 0.0, "vision.lk_epsilon must be positive");
    require(vp.quality_level > 0.0 && vp.quality_level <= 1.0,
            "vision.quality_level must lie in (0, 1]");
    require(vp.max_corners >= 1, "vision.max_corners must be at least 1");
    require(vp.min_corner_distance >= 0.0, "vision.min_corner_distance must be non-negative");

    require(s.sim.dt > 0.0, "sim.dt must be positive");
    require(s.sim.yaw_rate_limit > 0.0, "sim.yaw_rate_limit must be positive");
    require(s.sim.goal_tolerance > 0.0, "sim.goal_tolerance must be positive");

    require(min_clearance(s, s.start_position()) >= s.quad_radius,
            "start position is in collision with an obstacle");
}

namespace {

// Portable uniform double in [0, 1) from a 64-bit engine.
double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

void regenerate_forest(Scenario& s) {
    s.obstacles.resize(s.explicit_obstacle_count);
    if (!s.forest) return;
    const ForestSpec& f = *s.forest;
    const Vec2 lo = f.region.min_corner;
    const Vec2 span = f.region.max_corner - f.region.min_corner;
    const auto count = static_cast<std::size_t>(std::llround(f.density * span.x * span.y));
    std::mt19937_64 rng(s.seed);
    const std::size_t max_attempts = 1000 * count + 1000;
    std::size_t placed = 0;
    for (std::size_t attempt = 0; attempt < max_attempts && placed < count; ++attempt) {
        const Vec2 c{lo.x + unit(rng) * span.x, lo.y + unit(rng) * span.y};
        const double r = f.radius_min + unit(rng) * (f.radius_max - f.radius_min);
        if (distance(c, s.start_position()) - r < f.clearance) continue;
        if (distance(c, s.goal) - r < f.clearance) continue;
        s.obstacles.emplace_back(Circle{c, r});
        ++placed;
    }
}

Scenario with_seed(const Scenario& scenario, std::uint64_t seed) {
    Scenario out = scenario;
    out.seed = seed;
    regenerate_forest(out);
    return out;
}

}  // namespace foam
