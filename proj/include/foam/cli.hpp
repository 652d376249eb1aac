// Command implementations behind the `foam` executable. They take explicit
// streams so tests can drive them without spawning processes.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "foam/simkernel.hpp"

namespace foam {

inline constexpr int kExitSuccess = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitCollision = 2;
inline constexpr int kExitTimeout = 3;

[[nodiscard]] int exit_code(MissionStatus status);

struct BatchEntry {
    std::uint64_t seed{0};
    MissionResult result;
};

struct BatchReport {
    std::vector<BatchEntry> runs;  ///< ordered by seed
    [[nodiscard]] std::size_t successes() const;
    [[nodiscard]] double success_rate() const;
    [[nodiscard]] nlohmann::json to_json() const;
};

/// Runs seeds 0..n_seeds-1, each regenerating the scenario's forest.
[[nodiscard]] BatchReport run_batch(const Scenario& scenario, int n_seeds);

[[nodiscard]] nlohmann::json metrics_json(const MissionResult& result);
[[nodiscard]] std::string summary_line(const MissionResult& result);

/// Loads the scenario file, applies a seed and dotted overrides, validates.
[[nodiscard]] Scenario load_with_overrides(const std::filesystem::path& path,
                                           const std::vector<std::string>& overrides,
                                           std::optional<std::uint64_t> seed);

/// SVG with obstacles, start/goal, the straight reference line, the flown
/// trajectory and a per-tick sector occupancy heat strip.
[[nodiscard]] std::string render_plot_svg(const Trace& trace, const Scenario& scenario);

int cmd_run(const std::filesystem::path& scenario_path, const std::filesystem::path& out_trace,
            const std::vector<std::string>& overrides, std::optional<std::uint64_t> seed,
            std::ostream& out, std::ostream& err);

int cmd_batch(const std::filesystem::path& scenario_path, int n_seeds,
              const std::filesystem::path& out_report, const std::vector<std::string>& overrides,
              std::ostream& out, std::ostream& err);

/// Writes frame_<tick:06>.pgm for every camera frame rendered in
/// [first_tick, last_tick] of the closed-loop run.
int cmd_dump_frames(const std::filesystem::path& scenario_path, std::size_t first_tick,
                    std::size_t last_tick, const std::filesystem::path& out_dir,
                    const std::vector<std::string>& overrides, std::optional<std::uint64_t> seed,
                    std::ostream& err);

int cmd_plot(const std::filesystem::path& trace_path, const std::filesystem::path& scenario_path,
             const std::filesystem::path& out_svg, const std::vector<std::string>& overrides,
             std::optional<std::uint64_t> seed, std::ostream& err);

}  // namespace foam
