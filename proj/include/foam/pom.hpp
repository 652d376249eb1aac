// Sector occupancy maps: per-sector occupancy probabilities from optical
// flow and from lidar depth, their weighted fusion, and the least-occupied
// sector selection that drives the yaw command.
//
// Sectors are 1-based and increase left to right across the camera field of
// view; the median sector (M + 1) / 2 is aligned with the heading.

#pragma once

#include <optional>
#include <span>
#include <vector>

#include "foam/sensesim.hpp"
#include "foam/vision.hpp"

namespace foam {

struct SectorPom {
    std::vector<double> values;  ///< values[i - 1] is sector i

    SectorPom() = default;
    explicit SectorPom(int sectors) : values(static_cast<std::size_t>(sectors), 0.0) {}
    explicit SectorPom(std::vector<double> v) : values(std::move(v)) {}

    [[nodiscard]] int sectors() const noexcept { return static_cast<int>(values.size()); }
    /// 1-based access.
    [[nodiscard]] double operator()(int sector) const { return values.at(static_cast<std::size_t>(sector - 1)); }
    [[nodiscard]] double total() const;

    friend bool operator==(const SectorPom&, const SectorPom&) = default;
};

/// floor(column * M / width) + 1. Throws std::out_of_range for columns
/// outside [0, width).
[[nodiscard]] int sector_of_column(int column, int image_width, int sectors);

/// Sector of a heading-relative bearing (positive to the right), or nullopt
/// when |bearing| > hfov / 2.
[[nodiscard]] std::optional<int> sector_of_bearing(double bearing, double hfov, int sectors);

/// Flow-mass occupancy. Tracks flagged invalid are ignored.
[[nodiscard]] SectorPom camera_pom(std::span<const FlowTrack> tracks, int image_width, int sectors,
                                   double epsilon);

/// Depth-deficit occupancy over the lidar points inside the camera field of
/// view; ranges are clamped to d_max so distant returns contribute nothing.
[[nodiscard]] SectorPom lidar_pom(const LidarScan& scan, double hfov, int sectors, double d_max,
                                  double epsilon);

/// w_camera * camera + w_lidar * lidar. Throws std::invalid_argument for
/// maps of different sizes.
[[nodiscard]] SectorPom fuse(const SectorPom& camera, const SectorPom& lidar, double w_camera,
                             double w_lidar);

/// Least-occupied sector; ties go to the sector nearest the median, then to
/// the smaller index.
[[nodiscard]] int min_yaw_cost(const SectorPom& pom);

}  // namespace foam
