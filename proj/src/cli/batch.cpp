#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>

#include "foam/cli.hpp"

namespace foam {

using nlohmann::json;

int exit_code(MissionStatus status) {
    switch (status) {
        case MissionStatus::Success: return kExitSuccess;
        case MissionStatus::Collision: return kExitCollision;
        case MissionStatus::Timeout: return kExitTimeout;
    }
    return kExitUsage;
}

std::size_t BatchReport::successes() const {
    return static_cast<std::size_t>(std::count_if(runs.begin(), runs.end(), [](const BatchEntry& e) {
        return e.result.status == MissionStatus::Success;
    }));
}

double BatchReport::success_rate() const {
    return runs.empty() ? 0.0 : static_cast<double>(successes()) / static_cast<double>(runs.size());
}

namespace {

// JSON has no infinity; an obstacle-free run reports null clearance.
json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json stats(std::vector<double> values) {
    values.erase(std::remove_if(values.begin(), values.end(), [](double v) { return !std::isfinite(v); }),
                 values.end());
    if (values.empty()) return nullptr;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    const auto rank = [&](double q) {
        const auto r = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size())));
        return values[std::max<std::size_t>(r, 1) - 1];
    };
    return {{"mean", sum / static_cast<double>(values.size())},
            {"min", values.front()},
            {"p50", rank(0.5)},
            {"p95", rank(0.95)},
            {"max", values.back()}};
}

}  // namespace

json metrics_json(const MissionResult& r) {
    const MissionMetrics& m = r.metrics;
    return {{"status", to_string(r.status)},
            {"duration", m.duration},
            {"path_length", m.path_length},
            {"max_cross_track", m.max_cross_track},
            {"mean_cross_track", m.mean_cross_track},
            {"min_clearance", finite_or_null(m.min_clearance)},
            {"mean_heading_error", m.mean_heading_error},
            {"final_goal_distance", r.final_goal_distance},
            {"ticks", m.ticks},
            {"mean_latency", m.mean_latency},
            {"p95_latency", m.p95_latency}};
}

std::string summary_line(const MissionResult& r) {
    const MissionMetrics& m = r.metrics;
    char buf[512];
    std::snprintf(buf, sizeof buf,
                  "status=%s duration=%.3fs path_length=%.3fm max_cross_track=%.3fm "
                  "mean_cross_track=%.3fm min_clearance=%.3fm mean_latency=%.2fms p95_latency=%.2fms",
                  to_string(r.status), m.duration, m.path_length, m.max_cross_track, m.mean_cross_track,
                  m.min_clearance, 1e3 * m.mean_latency, 1e3 * m.p95_latency);
    return buf;
}

json BatchReport::to_json() const {
    json per_seed = json::array();
    std::vector<double> duration, path, max_xt, mean_xt, clearance, latency, latency95;
    std::size_t collisions = 0, timeouts = 0;
    for (const BatchEntry& e : runs) {
        json row = metrics_json(e.result);
        row["seed"] = e.seed;
        per_seed.push_back(std::move(row));
        const MissionMetrics& m = e.result.metrics;
        duration.push_back(m.duration);
        path.push_back(m.path_length);
        max_xt.push_back(m.max_cross_track);
        mean_xt.push_back(m.mean_cross_track);
        clearance.push_back(m.min_clearance);
        latency.push_back(m.mean_latency);
        latency95.push_back(m.p95_latency);
        collisions += e.result.status == MissionStatus::Collision;
        timeouts += e.result.status == MissionStatus::Timeout;
    }
    return {{"runs", runs.size()},
            {"successes", successes()},
            {"collisions", collisions},
            {"timeouts", timeouts},
            {"success_rate", success_rate()},
            {"metrics",
             {{"duration", stats(duration)},
              {"path_length", stats(path)},
              {"max_cross_track", stats(max_xt)},
              {"mean_cross_track", stats(mean_xt)},
              {"min_clearance", stats(clearance)},
              {"mean_latency", stats(latency)},
              {"p95_latency", stats(latency95)}}},
            {"seeds", per_seed}};
}

BatchReport run_batch(const Scenario& scenario, int n_seeds) {
    BatchReport report;
    report.runs.resize(static_cast<std::size_t>(std::max(n_seeds, 0)));
    std::vector<std::exception_ptr> errors(report.runs.size());
    // Missions share nothing mutable; slots are filled by seed.
#pragma omp parallel for schedule(dynamic, 1)
    for (int seed = 0; seed < n_seeds; ++seed) {
        const auto slot = static_cast<std::size_t>(seed);
        try {
            const Scenario s = with_seed(scenario, static_cast<std::uint64_t>(seed));
            MissionRun run = run_mission(s, SimConfig::from(s));
            report.runs[slot] = {static_cast<std::uint64_t>(seed), run.result};
        } catch (...) {
            errors[slot] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return report;
}

}  // namespace foam
