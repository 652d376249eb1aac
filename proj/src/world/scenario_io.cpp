#include "foam/scenario_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace foam {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& message) { throw ScenarioError(message); }

void check_keys(const json& object, const std::string& where,
                std::initializer_list<const char*> allowed) {
    if (!object.is_object()) fail(where + ": expected an object");
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : object.items()) {
        if (!ok.contains(key)) fail(where + ": unknown key '" + key + "'");
    }
}

double number(const json& object, const char* key, const std::string& where) {
    if (!object.contains(key)) fail(where + ": missing required key '" + key + "'");
    const json& v = object.at(key);
    if (!v.is_number()) fail(where + "." + key + ": expected a number");
    return v.get<double>();
}

double number_or(const json& object, const char* key, double fallback, const std::string& where) {
    return object.contains(key) ? number(object, key, where) : fallback;
}

int integer_or(const json& object, const char* key, int fallback, const std::string& where) {
    if (!object.contains(key)) return fallback;
    const json& v = object.at(key);
    if (!v.is_number_integer()) fail(where + "." + key + ": expected an integer");
    return v.get<int>();
}

Vec2 point(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        fail(where + ": expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

Box parse_box(const json& v, const std::string& where) {
    if (!v.contains("min") || !v.contains("max")) fail(where + ": expected 'min' and 'max'");
    return {point(v.at("min"), where + ".min"), point(v.at("max"), where + ".max")};
}

Obstacle parse_obstacle(const json& v, const std::string& where) {
    if (!v.is_object() || !v.contains("type") || !v.at("type").is_string()) {
        fail(where + ": expected an object with a 'type'");
    }
    const std::string type = v.at("type").get<std::string>();
    if (type == "circle") {
        check_keys(v, where, {"type", "center", "radius"});
        if (!v.contains("center")) fail(where + ": missing 'center'");
        return Circle{point(v.at("center"), where + ".center"), number(v, "radius", where)};
    }
    if (type == "box") {
        check_keys(v, where, {"type", "min", "max"});
        return parse_box(v, where);
    }
    fail(where + ": unknown obstacle type '" + type + "'");
}

json to_json(Vec2 p) { return json::array({p.x, p.y}); }

}  // namespace

Scenario parse_scenario(const json& doc) {
    check_keys(doc, "scenario",
               {"bounds", "obstacles", "random_forest", "start", "goal", "cruise_speed", "height",
                "t_max", "quad_radius", "sensor", "foam", "sim", "seed"});
    Scenario s;
    if (!doc.contains("bounds")) fail("scenario: missing required key 'bounds'");
    check_keys(doc.at("bounds"), "bounds", {"min", "max"});
    s.bounds = parse_box(doc.at("bounds"), "bounds");

    if (doc.contains("obstacles")) {
        const json& list = doc.at("obstacles");
        if (!list.is_array()) fail("obstacles: expected an array");
        for (std::size_t i = 0; i < list.size(); ++i) {
            s.obstacles.push_back(parse_obstacle(list[i], "obstacles[" + std::to_string(i) + "]"));
        }
    }
    s.explicit_obstacle_count = s.obstacles.size();

    if (!doc.contains("goal")) fail("scenario: missing required key 'goal'");
    const json& goal = doc.at("goal");
    check_keys(goal, "goal", {"x", "y"});
    s.goal = {number(goal, "x", "goal"), number(goal, "y", "goal")};

    if (!doc.contains("start")) fail("scenario: missing required key 'start'");
    const json& start = doc.at("start");
    check_keys(start, "start", {"x", "y", "heading_deg"});
    s.start.x = number(start, "x", "start");
    s.start.y = number(start, "y", "start");
    // Default heading faces the goal.
    s.start.heading = start.contains("heading_deg")
                          ? wrap_angle(deg2rad(number(start, "heading_deg", "start")))
                          : wrap_angle(std::atan2(s.goal.y - s.start.y, s.goal.x - s.start.x));

    if (doc.contains("random_forest")) {
        const json& f = doc.at("random_forest");
        check_keys(f, "random_forest", {"density", "radius_min", "radius_max", "clearance", "region"});
        ForestSpec spec;
        spec.density = number(f, "density", "random_forest");
        spec.radius_min = number_or(f, "radius_min", spec.radius_min, "random_forest");
        spec.radius_max = number_or(f, "radius_max", spec.radius_max, "random_forest");
        spec.clearance = number_or(f, "clearance", spec.clearance, "random_forest");
        if (f.contains("region")) {
            check_keys(f.at("region"), "random_forest.region", {"min", "max"});
            spec.region = parse_box(f.at("region"), "random_forest.region");
        } else {
            spec.region = s.bounds;
        }
        s.forest = spec;
    }

    s.cruise_speed = number_or(doc, "cruise_speed", s.cruise_speed, "scenario");
    s.height = number_or(doc, "height", s.height, "scenario");
    s.t_max = number_or(doc, "t_max", s.t_max, "scenario");
    s.quad_radius = number_or(doc, "quad_radius", s.quad_radius, "scenario");
    if (doc.contains("seed")) {
        if (!doc.at("seed").is_number_unsigned()) fail("seed: expected a non-negative integer");
        s.seed = doc.at("seed").get<std::uint64_t>();
    }

    if (doc.contains("sensor")) {
        const json& j = doc.at("sensor");
        check_keys(j, "sensor",
                   {"lidar_beams", "lidar_range", "lidar_rate_hz", "camera_hfov_deg",
                    "camera_rate_hz", "image_width", "image_height"});
        SensorParams& p = s.sensor;
        p.lidar_beams = integer_or(j, "lidar_beams", p.lidar_beams, "sensor");
        p.lidar_range = number_or(j, "lidar_range", p.lidar_range, "sensor");
        p.lidar_rate = number_or(j, "lidar_rate_hz", p.lidar_rate, "sensor");
        p.camera_hfov = deg2rad(number_or(j, "camera_hfov_deg", rad2deg(p.camera_hfov), "sensor"));
        p.camera_rate = number_or(j, "camera_rate_hz", p.camera_rate, "sensor");
        p.image_width = integer_or(j, "image_width", p.image_width, "sensor");
        p.image_height = integer_or(j, "image_height", p.image_height, "sensor");
    }

    if (doc.contains("foam")) {
        const json& j = doc.at("foam");
        check_keys(j, "foam",
                   {"sectors", "w_camera", "w_lidar", "epsilon", "d_max", "yaw_step_deg", "p_free",
                    "vision"});
        FoamParams& p = s.foam;
        p.sectors = integer_or(j, "sectors", p.sectors, "foam");
        p.w_camera = number_or(j, "w_camera", p.w_camera, "foam");
        p.w_lidar = number_or(j, "w_lidar", p.w_lidar, "foam");
        p.epsilon = number_or(j, "epsilon", p.epsilon, "foam");
        p.d_max = number_or(j, "d_max", p.d_max, "foam");
        p.yaw_step = deg2rad(number_or(j, "yaw_step_deg", rad2deg(p.yaw_step), "foam"));
        p.p_free = number_or(j, "p_free", p.p_free, "foam");
        if (j.contains("vision")) {
            const json& v = j.at("vision");
            check_keys(v, "foam.vision",
                       {"pyramid_levels", "lk_window", "lk_max_iterations", "lk_epsilon",
                        "quality_level", "max_corners", "min_corner_distance", "corner_block"});
            VisionParams& q = s.vision;
            const std::string w = "foam.vision";
            q.pyramid_levels = integer_or(v, "pyramid_levels", q.pyramid_levels, w);
            q.lk_window = integer_or(v, "lk_window", q.lk_window, w);
            q.lk_max_iterations = integer_or(v, "lk_max_iterations", q.lk_max_iterations, w);
            q.lk_epsilon = number_or(v, "lk_epsilon", q.lk_epsilon, w);
            q.quality_level = number_or(v, "quality_level", q.quality_level, w);
            q.max_corners = integer_or(v, "max_corners", q.max_corners, w);
            q.min_corner_distance = number_or(v, "min_corner_distance", q.min_corner_distance, w);
            q.corner_block = integer_or(v, "corner_block", q.corner_block, w);
        }
    }

    if (doc.contains("sim")) {
        const json& j = doc.at("sim");
        check_keys(j, "sim", {"dt", "yaw_rate_limit_deg", "goal_tolerance"});
        SimParams& p = s.sim;
        p.dt = number_or(j, "dt", p.dt, "sim");
        p.yaw_rate_limit = deg2rad(number_or(j, "yaw_rate_limit_deg", rad2deg(p.yaw_rate_limit), "sim"));
        p.goal_tolerance = number_or(j, "goal_tolerance", p.goal_tolerance, "sim");
    }

    regenerate_forest(s);
    validate(s);
    return s;
}

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("malformed scenario document: ") + e.what());
    }
    return parse_scenario(doc);
}

json read_scenario_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail("cannot read scenario file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    try {
        return json::parse(buffer.str());
    } catch (const json::parse_error& e) {
        fail("malformed scenario file '" + path.string() + "': " + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path) {
    return parse_scenario(read_scenario_document(path));
}

json serialize_scenario(const Scenario& s) {
    json obstacles = json::array();
    for (std::size_t i = 0; i < s.explicit_obstacle_count; ++i) {
        if (const auto* c = std::get_if<Circle>(&s.obstacles[i])) {
            obstacles.push_back({{"type", "circle"}, {"center", to_json(c->center)}, {"radius", c->radius}});
        } else {
            const Box& b = std::get<Box>(s.obstacles[i]);
            obstacles.push_back({{"type", "box"}, {"min", to_json(b.min_corner)}, {"max", to_json(b.max_corner)}});
        }
    }
    json doc = {
        {"bounds", {{"min", to_json(s.bounds.min_corner)}, {"max", to_json(s.bounds.max_corner)}}},
        {"obstacles", obstacles},
        {"start", {{"x", s.start.x}, {"y", s.start.y}, {"heading_deg", rad2deg(s.start.heading)}}},
        {"goal", {{"x", s.goal.x}, {"y", s.goal.y}}},
        {"cruise_speed", s.cruise_speed},
        {"height", s.height},
        {"t_max", s.t_max},
        {"quad_radius", s.quad_radius},
        {"seed", s.seed},
        {"sensor",
         {{"lidar_beams", s.sensor.lidar_beams},
          {"lidar_range", s.sensor.lidar_range},
          {"lidar_rate_hz", s.sensor.lidar_rate},
          {"camera_hfov_deg", rad2deg(s.sensor.camera_hfov)},
          {"camera_rate_hz", s.sensor.camera_rate},
          {"image_width", s.sensor.image_width},
          {"image_height", s.sensor.image_height}}},
        {"foam",
         {{"sectors", s.foam.sectors},
          {"w_camera", s.foam.w_camera},
          {"w_lidar", s.foam.w_lidar},
          {"epsilon", s.foam.epsilon},
          {"d_max", s.foam.d_max},
          {"yaw_step_deg", rad2deg(s.foam.yaw_step)},
          {"p_free", s.foam.p_free},
          {"vision",
           {{"pyramid_levels", s.vision.pyramid_levels},
            {"lk_window", s.vision.lk_window},
            {"lk_max_iterations", s.vision.lk_max_iterations},
            {"lk_epsilon", s.vision.lk_epsilon},
            {"quality_level", s.vision.quality_level},
            {"max_corners", s.vision.max_corners},
            {"min_corner_distance", s.vision.min_corner_distance},
            {"corner_block", s.vision.corner_block}}}}},
        {"sim",
         {{"dt", s.sim.dt},
          {"yaw_rate_limit_deg", rad2deg(s.sim.yaw_rate_limit)},
          {"goal_tolerance", s.sim.goal_tolerance}}},
    };
    if (s.forest) {
        const ForestSpec& f = *s.forest;
        doc["random_forest"] = {{"density", f.density},
                                {"radius_min", f.radius_min},
                                {"radius_max", f.radius_max},
                                {"clearance", f.clearance},
                                {"region",
                                 {{"min", to_json(f.region.min_corner)},
                                  {"max", to_json(f.region.max_corner)}}}};
    }
    return doc;
}

void apply_override(json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        fail("override '" + std::string(assignment) + "' must have the form key.path=value");
    }
    const std::string path(assignment.substr(0, eq));
    const std::string raw(assignment.substr(eq + 1));
    json value;
    try {
        value = json::parse(raw);
    } catch (const json::parse_error&) {
        value = raw;
    }
    json* node = &doc;
    std::size_t begin = 0;
    while (true) {
        const auto dot = path.find('.', begin);
        const std::string key = path.substr(begin, dot == std::string::npos ? std::string::npos : dot - begin);
        if (key.empty()) fail("override path '" + path + "' has an empty component");
        if (!node->is_object()) fail("override path '" + path + "' does not name an object member");
        if (dot == std::string::npos) {
            (*node)[key] = value;
            return;
        }
        node = &(*node)[key];
        if (node->is_null()) *node = json::object();
        begin = dot + 1;
    }
}

}  // namespace foam
