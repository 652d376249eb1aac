// Simulated sensors: a 360 degree planar lidar and a grayscale pinhole
// camera rendering full-height obstacles with a world-anchored texture.

#pragma once

#include <vector>

#include "foam/image.hpp"
#include "foam/params.hpp"
#include "foam/world.hpp"

namespace foam {

struct LidarPoint {
    double azimuth{0.0};  ///< body frame [rad], positive to the right
    double range{0.0};    ///< [m]
    friend bool operator==(const LidarPoint&, const LidarPoint&) = default;
};

struct LidarScan {
    std::vector<LidarPoint> points;  ///< azimuths strictly increasing over [-pi, pi)
    double max_range{0.0};
    double timestamp{0.0};
    friend bool operator==(const LidarScan&, const LidarScan&) = default;
};

/// Smallest range a beam reports; a sensor buried in an obstacle reads this.
inline constexpr double kLidarMinRange = 1e-3;

[[nodiscard]] LidarScan simulate_lidar(const Scenario& scenario, const QuadState& state,
                                       const SensorParams& params);

/// Pinhole intrinsics with square pixels and the principal point at the
/// image center. Columns grow to the right, matching positive bearings.
struct CameraModel {
    int width{640};
    int height{480};
    double focal{320.0};  ///< [px]

    [[nodiscard]] static CameraModel from(const SensorParams& params);
    [[nodiscard]] double cx() const noexcept { return 0.5 * width; }
    [[nodiscard]] double cy() const noexcept { return 0.5 * height; }
    /// Bearing of the ray through the center of pixel column `column`.
    [[nodiscard]] double bearing_of_column(int column) const;
    /// Continuous column coordinate (pixel centers at integer + 0.5 offsets
    /// removed) for a bearing inside the field of view.
    [[nodiscard]] double column_of_bearing(double bearing) const;
};

/// Texture checker period on obstacle surfaces [m].
inline constexpr double kTexturePeriod = 0.25;

[[nodiscard]] ImageFrame render_frame(const Scenario& scenario, const QuadState& state,
                                      const SensorParams& params);

namespace serial {
/// Per-pixel reference renderer; bit-identical to foam::render_frame.
[[nodiscard]] ImageFrame render_frame(const Scenario& scenario, const QuadState& state,
                                      const SensorParams& params);
}  // namespace serial

}  // namespace foam
