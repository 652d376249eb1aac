#include "foam/pom.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace foam {

double SectorPom::total() const { return std::accumulate(values.begin(), values.end(), 0.0); }

int sector_of_column(int column, int image_width, int sectors) {
    if (column < 0 || column >= image_width) {
        throw std::out_of_range("sector_of_column: column " + std::to_string(column) +
                                " outside [0, " + std::to_string(image_width) + ")");
    }
    return static_cast<int>(static_cast<long>(column) * sectors / image_width) + 1;
}

std::optional<int> sector_of_bearing(double bearing, double hfov, int sectors) {
    if (std::abs(bearing) > 0.5 * hfov) return std::nullopt;
    const int s = static_cast<int>(std::floor((bearing + 0.5 * hfov) * sectors / hfov)) + 1;
    return std::clamp(s, 1, sectors);
}

namespace {

// Normalizes per-sector mass by (epsilon + total mass).
SectorPom normalize(std::vector<double> mass, double epsilon) {
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    for (double& m : mass) m /= (epsilon + total);
    return SectorPom(std::move(mass));
}

}  // namespace

SectorPom camera_pom(std::span<const FlowTrack> tracks, int image_width, int sectors, double epsilon) {
    std::vector<double> mass(static_cast<std::size_t>(sectors), 0.0);
    for (const FlowTrack& t : tracks) {
        if (!t.valid) continue;
        const int column = std::clamp(static_cast<int>(std::floor(t.sector_column)), 0, image_width - 1);
        mass[static_cast<std::size_t>(sector_of_column(column, image_width, sectors) - 1)] += t.magnitude;
    }
    return normalize(std::move(mass), epsilon);
}

SectorPom lidar_pom(const LidarScan& scan, double hfov, int sectors, double d_max, double epsilon) {
    std::vector<double> mass(static_cast<std::size_t>(sectors), 0.0);
    for (const LidarPoint& p : scan.points) {
        const auto sector = sector_of_bearing(p.azimuth, hfov, sectors);
        if (!sector) continue;
        const double d = std::min(p.range, d_max);
        mass[static_cast<std::size_t>(*sector - 1)] += d_max - d;
    }
    return normalize(std::move(mass), epsilon);
}

SectorPom fuse(const SectorPom& camera, const SectorPom& lidar, double w_camera, double w_lidar) {
    if (camera.sectors() != lidar.sectors()) {
        throw std::invalid_argument("fuse: camera and lidar maps have different sector counts");
    }
    SectorPom out(camera.sectors());
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        out.values[i] = w_camera * camera.values[i] + w_lidar * lidar.values[i];
    }
    return out;
}

int min_yaw_cost(const SectorPom& pom) {
    const int m = pom.sectors();
    if (m == 0) throw std::invalid_argument("min_yaw_cost: empty map");
    const double lowest = *std::min_element(pom.values.begin(), pom.values.end());
    const int median = (m + 1) / 2;
    int best = 0;
    for (int i = 1; i <= m; ++i) {
        if (pom(i) != lowest) continue;
        // Scanning upward keeps the smaller index on equal median distance.
        if (best == 0 || std::abs(i - median) < std::abs(best - median)) best = i;
    }
    return best;
}

}  // namespace foam
