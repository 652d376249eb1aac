#include <cstdio>
#include <fstream>
#include <ostream>

#include "foam/cli.hpp"
#include "foam/scenario_io.hpp"

namespace foam {

Scenario load_with_overrides(const std::filesystem::path& path, const std::vector<std::string>& overrides,
                             std::optional<std::uint64_t> seed) {
    nlohmann::json doc = read_scenario_document(path);
    for (const std::string& o : overrides) apply_override(doc, o);
    if (seed) doc["seed"] = *seed;
    return parse_scenario(doc);
}

int cmd_run(const std::filesystem::path& scenario_path, const std::filesystem::path& out_trace,
            const std::vector<std::string>& overrides, std::optional<std::uint64_t> seed,
            std::ostream& out, std::ostream& err) {
    Scenario scenario;
    try {
        scenario = load_with_overrides(scenario_path, overrides, seed);
    } catch (const std::exception& e) {
        err << "foam run: " << e.what() << '\n';
        return kExitUsage;
    }
    const MissionRun run = run_mission(scenario, SimConfig::from(scenario));
    try {
        write_trace(out_trace, run.trace, scenario.foam.sectors);
    } catch (const std::exception& e) {
        err << "foam run: " << e.what() << '\n';
        return kExitUsage;
    }
    out << summary_line(run.result) << '\n';
    return exit_code(run.result.status);
}

int cmd_batch(const std::filesystem::path& scenario_path, int n_seeds, const std::filesystem::path& out_report,
              const std::vector<std::string>& overrides, std::ostream& out, std::ostream& err) {
    if (n_seeds < 1) {
        err << "foam batch: --seeds must be at least 1\n";
        return kExitUsage;
    }
    Scenario scenario;
    try {
        scenario = load_with_overrides(scenario_path, overrides, std::nullopt);
    } catch (const std::exception& e) {
        err << "foam batch: " << e.what() << '\n';
        return kExitUsage;
    }
    BatchReport report;
    try {
        report = run_batch(scenario, n_seeds);
    } catch (const std::exception& e) {
        err << "foam batch: " << e.what() << '\n';
        return kExitUsage;
    }
    std::ofstream file(out_report);
    if (!file) {
        err << "foam batch: cannot open '" << out_report.string() << "' for writing\n";
        return kExitUsage;
    }
    file << report.to_json().dump(2) << '\n';
    char buf[128];
    std::snprintf(buf, sizeof buf, "runs=%zu successes=%zu success_rate=%.3f", report.runs.size(),
                  report.successes(), report.success_rate());
    out << buf << '\n';
    return kExitSuccess;
}

int cmd_dump_frames(const std::filesystem::path& scenario_path, std::size_t first_tick, std::size_t last_tick,
                    const std::filesystem::path& out_dir, const std::vector<std::string>& overrides,
                    std::optional<std::uint64_t> seed, std::ostream& err) {
    if (last_tick < first_tick) {
        err << "foam dump-frames: tick range is empty\n";
        return kExitUsage;
    }
    Scenario scenario;
    try {
        scenario = load_with_overrides(scenario_path, overrides, seed);
    } catch (const std::exception& e) {
        err << "foam dump-frames: " << e.what() << '\n';
        return kExitUsage;
    }
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) {
        err << "foam dump-frames: cannot create directory '" << out_dir.string() << "'\n";
        return kExitUsage;
    }
    std::string failure;
    const auto observer = [&](std::size_t tick, const ImageFrame& frame) {
        if (tick > last_tick) return false;
        if (tick < first_tick) return true;
        char name[32];
        std::snprintf(name, sizeof name, "frame_%06zu.pgm", tick);
        try {
            write_pgm(out_dir / name, frame.intensities);
        } catch (const std::exception& e) {
            failure = e.what();
            return false;
        }
        return true;
    };
    (void)run_mission(scenario, SimConfig::from(scenario), observer);
    if (!failure.empty()) {
        err << "foam dump-frames: " << failure << '\n';
        return kExitUsage;
    }
    return kExitSuccess;
}

int cmd_plot(const std::filesystem::path& trace_path, const std::filesystem::path& scenario_path,
             const std::filesystem::path& out_svg, const std::vector<std::string>& overrides,
             std::optional<std::uint64_t> seed, std::ostream& err) {
    try {
        const Scenario scenario = load_with_overrides(scenario_path, overrides, seed);
        const Trace trace = read_trace(trace_path);
        const std::string svg = render_plot_svg(trace, scenario);
        std::ofstream file(out_svg);
        if (!file) throw std::runtime_error("cannot open '" + out_svg.string() + "' for writing");
        file << svg;
    } catch (const std::exception& e) {
        err << "foam plot: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitSuccess;
}

}  // namespace foam
