#include <doctest.h>

#include <cmath>
#include <random>

#include "foam/scenario_io.hpp"
#include "foam/world.hpp"
#include "oracles.hpp"

using namespace foam;
using namespace std::literals;

namespace {

Scenario one_circle(Vec2 c, double r) {
    Scenario s;
    s.bounds = {{-50, -50}, {50, 50}};
    s.obstacles = {Circle{c, r}};
    s.explicit_obstacle_count = 1;
    s.goal = {40, 0};
    return s;
}

std::vector<Obstacle> random_obstacles(std::mt19937_64& rng, int count) {
    std::uniform_real_distribution<double> pos(-15.0, 15.0), size(0.2, 3.0);
    std::bernoulli_distribution circle(0.6);
    std::vector<Obstacle> out;
    for (int i = 0; i < count; ++i) {
        const Vec2 c{pos(rng), pos(rng)};
        if (circle(rng)) {
            out.push_back(Circle{c, size(rng)});
        } else {
            out.push_back(Box{c, {c.x + size(rng), c.y + size(rng)}});
        }
    }
    return out;
}

}  // namespace

TEST_CASE("ray_cast examples") {
    Scenario empty;
    empty.bounds = {{-50, -50}, {50, 50}};
    for (double az : {0.0, 1.0, -2.5, kPi}) CHECK(ray_cast(empty, {0, 0}, az, 40.0) == 40.0);

    CHECK(ray_cast(one_circle({10, 0}, 2), {0, 0}, 0.0, 40.0) == doctest::Approx(8.0).epsilon(1e-12));

    Scenario box = empty;
    box.obstacles = {Box{{-1, -1}, {1, 1}}};
    CHECK(ray_cast(box, {0.2, 0.3}, 0.7, 40.0) == 0.0);
}

TEST_CASE("ray_cast agrees with a marching oracle on 10,000 configurations") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(-20.0, 20.0), az(-kPi, kPi), range(1.0, 40.0);
    int worst_config = -1;
    double worst = 0.0;
    for (int k = 0; k < 10000; ++k) {
        Scenario s;
        s.bounds = {{-50, -50}, {50, 50}};
        s.obstacles = random_obstacles(rng, 1 + k % 6);
        const Vec2 origin{pos(rng), pos(rng)};
        const double a = az(rng);
        const double r = range(rng);
        const double got = ray_cast(s, origin, a, r);
        const double want = oracle::march_ray(s.obstacles, origin, a, r);
        if (std::abs(got - want) > worst) {
            worst = std::abs(got - want);
            worst_config = k;
        }
    }
    INFO("worst configuration " << worst_config);
    CHECK(worst <= 1e-6);
}

TEST_CASE("ray_cast is monotone in max_range") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(-20.0, 20.0), az(-kPi, kPi), range(0.5, 40.0);
    for (int k = 0; k < 2000; ++k) {
        Scenario s;
        s.obstacles = random_obstacles(rng, 4);
        const Vec2 o{pos(rng), pos(rng)};
        const double a = az(rng);
        double r1 = range(rng), r2 = range(rng);
        if (r1 > r2) std::swap(r1, r2);
        const double d1 = ray_cast(s, o, a, r1);
        const double d2 = ray_cast(s, o, a, r2);
        REQUIRE(d1 <= d2);
        const double unbounded = ray_cast(s, o, a, 1e6);
        REQUIRE(d1 == doctest::Approx(std::min(unbounded, r1)).epsilon(1e-12));
    }
}

TEST_CASE("min_clearance examples") {
    const Scenario s = one_circle({0, 0}, 2);
    CHECK(min_clearance(s, {5, 0}) == doctest::Approx(3.0));
    CHECK(min_clearance(s, {0, 1}) == doctest::Approx(-1.0));
    Scenario empty;
    CHECK(min_clearance(empty, {1, 2}) == kNoObstacleClearance);
    CHECK(std::isinf(kNoObstacleClearance));
}

TEST_CASE("min_clearance matches dense boundary sampling") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pos(-20.0, 20.0);
    for (int k = 0; k < 200; ++k) {
        const auto obstacles = random_obstacles(rng, 1);
        const Obstacle& o = obstacles.front();
        const Vec2 p{pos(rng), pos(rng)};
        const bool is_circle = std::holds_alternative<Circle>(o);
        const double spacing = is_circle ? 1e-4 : 1e-3;
        const double sampled = oracle::sampled_boundary_distance(o, p, spacing);
        const double got = min_clearance(obstacles, p);
        const double want = oracle::inside(o, p) ? -sampled : sampled;
        CHECK(std::abs(got - want) <= (is_circle ? 1e-6 : 1e-3));
    }
}

TEST_CASE("is_collision boundary is strict") {
    Scenario s = one_circle({0, 0}, 1);
    s.quad_radius = 0.5;
    QuadState q;
    q.x = 4.0;
    CHECK_FALSE(is_collision(s, q));  // clearance 3.0
    q.x = 1.4;
    CHECK(is_collision(s, q));  // clearance 0.4
    s.obstacles = {Box{{-1, -1}, {1, 1}}};
    q.x = 1.5;
    q.y = 0.0;
    CHECK(min_clearance(s, q.position()) == 0.5);
    CHECK_FALSE(is_collision(s, q));
}

TEST_CASE("cross_track_deviation") {
    CHECK(cross_track_deviation({0, 0}, {10, 0}, {4, 0}) == 0.0);
    CHECK(cross_track_deviation({0, 0}, {10, 0}, {5, 3}) == doctest::Approx(3.0));
    CHECK(cross_track_deviation({0, 0}, {0, 0}, {3, 4}) == doctest::Approx(5.0));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-30.0, 30.0), ang(-kPi, kPi);
    for (int k = 0; k < 1000; ++k) {
        const Vec2 a{u(rng), u(rng)}, b{u(rng), u(rng)}, p{u(rng), u(rng)};
        const double d = cross_track_deviation(a, b, p);
        REQUIRE(d == doctest::Approx(oracle::line_distance(a, b, p)).epsilon(1e-9));
        REQUIRE(std::abs(cross_track_deviation(b, a, p) - d) <= 1e-9);
        const double th = ang(rng);
        const Vec2 shift{u(rng), u(rng)};
        const auto move = [&](Vec2 v) {
            return Vec2{std::cos(th) * v.x - std::sin(th) * v.y, std::sin(th) * v.x + std::cos(th) * v.y} + shift;
        };
        REQUIRE(std::abs(cross_track_deviation(move(a), move(b), move(p)) - d) <= 1e-9);
    }
}

TEST_CASE("parse_scenario defaults from a minimal document") {
    const Scenario s = parse_scenario(R"({
        "bounds": {"min": [0, -10], "max": [50, 10]},
        "obstacles": [{"type": "circle", "center": [20, 0], "radius": 1}],
        "start": {"x": 1, "y": 0},
        "goal": {"x": 40, "y": 0}
    })"sv);
    CHECK(s.foam.sectors == 9);
    CHECK(s.foam.w_camera == 0.5);
    CHECK(s.foam.w_lidar == 0.5);
    CHECK(s.foam.d_max == 10.0);
    CHECK(s.foam.epsilon == 1e-6);
    CHECK(s.foam.p_free == 0.05);
    CHECK(s.foam.yaw_step == doctest::Approx(deg2rad(10)));
    CHECK(s.t_max == 120.0);
    CHECK(s.quad_radius == 0.5);
    CHECK(s.sensor.lidar_beams == 360);
    CHECK(s.sensor.lidar_range == 40.0);
    CHECK(s.sensor.image_width == 640);
    CHECK(s.sensor.image_height == 480);
    CHECK(s.sim.dt == doctest::Approx(1.0 / 30.0));
    CHECK(s.vision.pyramid_levels == 3);
    CHECK(s.vision.lk_window == 15);
    CHECK(s.vision.max_corners == 400);
    CHECK(s.start.heading == doctest::Approx(0.0));
    REQUIRE(s.obstacles.size() == 1);
}

TEST_CASE("parse_scenario rejects invalid documents") {
    const auto base = nlohmann::json::parse(R"({
        "bounds": {"min": [0, -10], "max": [50, 10]},
        "obstacles": [{"type": "circle", "center": [20, 0], "radius": 1}],
        "start": {"x": 1, "y": 0},
        "goal": {"x": 40, "y": 0}
    })");
    const auto rejects = [&](const char* assignment, const char* fragment) {
        nlohmann::json doc = base;
        apply_override(doc, assignment);
        try {
            (void)parse_scenario(doc);
            FAIL("accepted " << assignment);
        } catch (const ScenarioError& e) {
            CHECK_MESSAGE(std::string(e.what()).find(fragment) != std::string::npos, e.what());
        }
    };
    rejects("foam.sectors=4", "M must be odd");
    rejects("foam.w_camera=0.7", "w_camera + w_lidar");
    rejects("cruise_speed=0", "cruise_speed");
    rejects("t_max=-1", "t_max");
    rejects("start.x=20", "start");
    rejects("goal.x=80", "goal");
    rejects("unknown_key=1", "unknown key");

    nlohmann::json doc = base;
    doc["obstacles"][0]["radius"] = -1;
    CHECK_THROWS_AS((void)parse_scenario(doc), ScenarioError);
}

TEST_CASE("serialize then parse echoes every field") {
    Scenario s;
    s.bounds = {{-5, -6}, {70, 8}};
    s.obstacles = {Circle{{20, 1}, 0.75}, Box{{30, -2}, {31.5, 2}}};
    s.explicit_obstacle_count = 2;
    s.start = {0.5, -1.0, deg2rad(12.5)};
    s.goal = {60, 2};
    s.cruise_speed = 4.25;
    s.height = 1.75;
    s.t_max = 95;
    s.quad_radius = 0.4;
    s.seed = 17;
    s.sensor.lidar_beams = 720;
    s.sensor.lidar_range = 35;
    s.sensor.lidar_rate = 5.5;
    s.sensor.camera_hfov = deg2rad(80);
    s.sensor.camera_rate = 20;
    s.sensor.image_width = 320;
    s.sensor.image_height = 240;
    s.foam.sectors = 7;
    s.foam.w_camera = 0.25;
    s.foam.w_lidar = 0.75;
    s.foam.epsilon = 1e-5;
    s.foam.d_max = 12;
    s.foam.yaw_step = deg2rad(8);
    s.foam.p_free = 0.1;
    s.vision.pyramid_levels = 2;
    s.vision.lk_window = 11;
    s.vision.lk_max_iterations = 30;
    s.vision.lk_epsilon = 0.02;
    s.vision.quality_level = 0.05;
    s.vision.max_corners = 200;
    s.vision.min_corner_distance = 6;
    s.vision.corner_block = 7;
    s.sim.dt = 0.05;
    s.sim.yaw_rate_limit = deg2rad(120);
    s.sim.goal_tolerance = 1.5;
    validate(s);

    Scenario back = parse_scenario(serialize_scenario(s));
    // Angles pass through degrees; compare them within rounding and the rest exactly.
    CHECK(back.start.heading == doctest::Approx(s.start.heading).epsilon(1e-12));
    CHECK(back.sensor.camera_hfov == doctest::Approx(s.sensor.camera_hfov).epsilon(1e-12));
    CHECK(back.foam.yaw_step == doctest::Approx(s.foam.yaw_step).epsilon(1e-12));
    CHECK(back.sim.yaw_rate_limit == doctest::Approx(s.sim.yaw_rate_limit).epsilon(1e-12));
    back.start.heading = s.start.heading;
    back.sensor.camera_hfov = s.sensor.camera_hfov;
    back.foam.yaw_step = s.foam.yaw_step;
    back.sim.yaw_rate_limit = s.sim.yaw_rate_limit;
    CHECK(back == s);
}

TEST_CASE("forest generation is seeded and keeps clearance around start and goal") {
    const Scenario base = load_scenario(FOAM_SCENARIO_DIR "/forest.json");
    REQUIRE(base.forest.has_value());
    const ForestSpec& f = *base.forest;
    const double area = (f.region.max_corner.x - f.region.min_corner.x) * (f.region.max_corner.y - f.region.min_corner.y);
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const Scenario a = with_seed(base, seed);
        const Scenario b = with_seed(base, seed);
        CHECK(a.obstacles == b.obstacles);
        CHECK(a.obstacles.size() <= static_cast<std::size_t>(std::lround(f.density * area)));
        for (const Obstacle& o : a.obstacles) {
            const auto& c = std::get<Circle>(o);
            CHECK(c.radius >= f.radius_min);
            CHECK(c.radius <= f.radius_max);
            CHECK(signed_distance(o, a.start_position()) >= f.clearance);
            CHECK(signed_distance(o, a.goal) >= f.clearance);
        }
    }
    CHECK(with_seed(base, 1).obstacles != with_seed(base, 2).obstacles);
}

TEST_CASE("validate rejects a start inside an obstacle") {
    Scenario s = one_circle({0, 0}, 1);
    s.start = {0.2, 0.0, 0.0};
    CHECK_THROWS_AS(validate(s), ScenarioError);
}
