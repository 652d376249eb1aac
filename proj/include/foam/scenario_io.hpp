// Scenario document I/O. The document is JSON with top-level keys
// bounds, obstacles, random_forest, start, goal, cruise_speed, height,
// t_max, quad_radius, sensor, foam, sim, seed. Angles are degrees in the
// file and radians in memory.

#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "foam/world.hpp"

namespace foam {

/// Builds and validates a scenario. Omitted optional fields take the
/// defaults declared in params.hpp / world.hpp. Throws ScenarioError.
[[nodiscard]] Scenario parse_scenario(const nlohmann::json& document);
[[nodiscard]] Scenario parse_scenario(std::string_view text);
[[nodiscard]] Scenario load_scenario(const std::filesystem::path& path);

/// Full document with every field explicit. Forest-generated obstacles are
/// not written; the generator block is.
[[nodiscard]] nlohmann::json serialize_scenario(const Scenario& scenario);

/// Reads a scenario file as raw JSON (no validation).
[[nodiscard]] nlohmann::json read_scenario_document(const std::filesystem::path& path);

/// Applies a `dotted.path=value` override. The value is parsed as JSON when
/// possible and taken as a string otherwise.
void apply_override(nlohmann::json& document, std::string_view assignment);

}  // namespace foam
