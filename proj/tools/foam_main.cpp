// foam: run sense-and-avoid missions, seed sweeps, frame dumps and plots.

#include <iostream>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "foam/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"foam - camera + lidar sector-occupancy sense-and-avoid simulator"};
    app.require_subcommand(1);

    std::string scenario;
    std::string out;
    std::vector<std::string> overrides;
    std::optional<std::uint64_t> seed;

    auto common = [&](CLI::App* sub, const char* out_help) {
        sub->add_option("--scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, out_help)->required();
        sub->add_option("--set", overrides, "Dotted-path override, e.g. foam.sectors=7")->take_all();
    };

    CLI::App* run = app.add_subcommand("run", "Run one mission and write its trace");
    common(run, "Trace CSV output path");
    run->add_option("--seed", seed, "Scenario seed override");

    int n_seeds = 20;
    CLI::App* batch = app.add_subcommand("batch", "Run seeds 0..N-1 and write a JSON report");
    common(batch, "Report JSON output path");
    batch->add_option("--seeds", n_seeds, "Number of seeds")->check(CLI::PositiveNumber);

    std::string ticks = "0..0";
    CLI::App* dump = app.add_subcommand("dump-frames", "Write rendered camera frames as P5 graymaps");
    common(dump, "Output directory");
    dump->add_option("--ticks", ticks, "Inclusive tick range FIRST..LAST");
    dump->add_option("--seed", seed, "Scenario seed override");

    std::string trace;
    CLI::App* plot = app.add_subcommand("plot", "Render a trace and its scenario to SVG");
    common(plot, "SVG output path");
    plot->add_option("--trace", trace, "Trace CSV from `foam run`")->required();
    plot->add_option("--seed", seed, "Scenario seed override");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, std::cerr, std::cerr) == 0 ? 0 : foam::kExitUsage;
    }

    try {
        if (*run) return foam::cmd_run(scenario, out, overrides, seed, std::cout, std::cerr);
        if (*batch) return foam::cmd_batch(scenario, n_seeds, out, overrides, std::cout, std::cerr);
        if (*dump) {
            static const std::regex range(R"((\d+)\.\.(\d+))");
            std::smatch m;
            if (!std::regex_match(ticks, m, range)) {
                std::cerr << "foam dump-frames: --ticks must look like FIRST..LAST\n";
                return foam::kExitUsage;
            }
            return foam::cmd_dump_frames(scenario, std::stoull(m[1]), std::stoull(m[2]), out, overrides,
                                         seed, std::cerr);
        }
        if (*plot) return foam::cmd_plot(trace, scenario, out, overrides, seed, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "foam: " << e.what() << '\n';
        return foam::kExitUsage;
    }
    return foam::kExitUsage;
}
