// Tunable parameter blocks shared by the scenario model and the pipeline.
// All angles are radians and all lengths meters; the scenario file uses
// degrees and the loader converts.

#pragma once

#include <cstddef>

#include "foam/geometry.hpp"

namespace foam {

struct SensorParams {
    int lidar_beams{360};
    double lidar_range{40.0};                ///< [m]
    double lidar_rate{10.0};                 ///< [Hz]
    double camera_hfov{deg2rad(90.0)};       ///< [rad]
    double camera_rate{30.0};                ///< [Hz]
    int image_width{640};
    int image_height{480};

    friend bool operator==(const SensorParams&, const SensorParams&) = default;
};

struct FoamParams {
    int sectors{9};                  ///< M, always odd
    double w_camera{0.5};
    double w_lidar{0.5};
    double epsilon{1e-6};
    double d_max{10.0};              ///< [m] effective lidar depth for occupancy
    double yaw_step{deg2rad(10.0)};  ///< [rad] yaw offset per sector away from the median
    double p_free{0.05};             ///< fused occupancy at or below which a sector is free

    [[nodiscard]] int median_sector() const noexcept { return (sectors + 1) / 2; }

    friend bool operator==(const FoamParams&, const FoamParams&) = default;
};

struct VisionParams {
    int pyramid_levels{3};
    int lk_window{15};
    int lk_max_iterations{20};
    double lk_epsilon{0.01};         ///< [px]
    double quality_level{0.01};
    int max_corners{400};
    double min_corner_distance{8.0}; ///< [px]
    int corner_block{3};             ///< structure-tensor window of the corner detector

    friend bool operator==(const VisionParams&, const VisionParams&) = default;
};

struct SimParams {
    double dt{1.0 / 30.0};                 ///< [s] control tick
    double yaw_rate_limit{deg2rad(90.0)};  ///< [rad/s]
    double goal_tolerance{1.0};            ///< [m]

    friend bool operator==(const SimParams&, const SimParams&) = default;
};

}  // namespace foam
