#include "foam/sensesim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace foam {

LidarScan simulate_lidar(const Scenario& scenario, const QuadState& state,
                         const SensorParams& params) {
    LidarScan scan;
    scan.max_range = params.lidar_range;
    scan.timestamp = state.t;
    scan.points.resize(static_cast<std::size_t>(params.lidar_beams));
    const Vec2 origin = state.position();
    for (int k = 0; k < params.lidar_beams; ++k) {
        const double azimuth = -kPi + kTwoPi * k / params.lidar_beams;
        const double range = ray_cast(scenario, origin, state.psi + azimuth, params.lidar_range);
        scan.points[static_cast<std::size_t>(k)] = {azimuth, std::max(range, kLidarMinRange)};
    }
    return scan;
}

CameraModel CameraModel::from(const SensorParams& params) {
    return {params.image_width, params.image_height,
            0.5 * params.image_width / std::tan(0.5 * params.camera_hfov)};
}

double CameraModel::bearing_of_column(int column) const {
    return std::atan((column + 0.5 - cx()) / focal);
}

double CameraModel::column_of_bearing(double bearing) const {
    return cx() + focal * std::tan(bearing) - 0.5;
}

namespace {

std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Value noise in [0, 1) for one texture cell of one obstacle.
double cell_noise(int obstacle, std::int64_t iu, std::int64_t iz) {
    std::uint64_t h = mix(static_cast<std::uint64_t>(obstacle) + 0x9e3779b97f4a7c15ULL);
    h = mix(h ^ static_cast<std::uint64_t>(iu));
    h = mix(h ^ (static_cast<std::uint64_t>(iz) * 0x632be59bd9b4e019ULL));
    return static_cast<double>(h >> 40) * 0x1.0p-24;
}

// Round half up and saturate; all shading values are non-negative before clamping.
std::uint8_t to_byte(double v) {
    const double r = std::floor(v + 0.5);
    return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

struct ColumnHit {
    int obstacle{-1};
    double surface_u{0.0};
    double depth{0.0};  ///< forward (optical-axis) distance to the surface [m]
};

ColumnHit column_hit(const Scenario& scenario, const QuadState& state, const CameraModel& cam,
                     double range, int column) {
    const double xn = (column + 0.5 - cam.cx()) / cam.focal;
    const RayHit hit =
        ray_hit(scenario.obstacles, state.position(), state.psi + std::atan(xn), range);
    if (hit.obstacle < 0) return {};
    return {hit.obstacle, hit.surface_u, hit.distance / std::sqrt(1.0 + xn * xn)};
}

// Checker of period kTexturePeriod scaled by per-cell value noise, faded
// toward its mean once a cell projects to fewer than a few pixels.
std::uint8_t shade_surface(const ColumnHit& hit, double z, double focal) {
    constexpr double cell = 0.5 * kTexturePeriod;
    const auto iu = static_cast<std::int64_t>(std::floor(hit.surface_u / cell));
    const auto iz = static_cast<std::int64_t>(std::floor(z / cell));
    const double n = cell_noise(hit.obstacle, iu, iz);
    const double raw = ((iu + iz) & 1) ? 50.0 + 70.0 * n : 150.0 + 90.0 * n;
    const double cell_px = cell * focal / std::max(hit.depth, 1e-9);
    const double contrast = std::clamp((cell_px - 3.0) / 1.0, 0.0, 1.0);
    constexpr double mean = 135.0;
    return to_byte(mean + contrast * (raw - mean));
}

// Sky above the horizon, ground below; both depend on the row only.
std::uint8_t shade_background(double yn) {
    if (yn < 0.0) return to_byte(170.0 + 60.0 * std::min(1.0, -yn));
    return to_byte(110.0 - 50.0 * std::min(1.0, yn));
}

std::uint8_t shade_pixel(const ColumnHit& hit, const QuadState& state, const CameraModel& cam,
                         int row) {
    const double yn = (row + 0.5 - cam.cy()) / cam.focal;
    if (hit.obstacle < 0) return shade_background(yn);
    return shade_surface(hit, state.z - yn * hit.depth, cam.focal);
}

}  // namespace

ImageFrame render_frame(const Scenario& scenario, const QuadState& state,
                        const SensorParams& params) {
    const CameraModel cam = CameraModel::from(params);
    ImageFrame frame{GrayPlane(cam.width, cam.height, uninitialized), state.t};
    std::vector<ColumnHit> hits(static_cast<std::size_t>(cam.width));

#pragma omp parallel
    {
#pragma omp for schedule(static)
        for (int c = 0; c < cam.width; ++c) {
            hits[static_cast<std::size_t>(c)] = column_hit(scenario, state, cam, params.lidar_range, c);
        }
#pragma omp for schedule(static)
        for (int r = 0; r < cam.height; ++r) {
            auto row = frame.intensities.row(r);
            const double yn = (r + 0.5 - cam.cy()) / cam.focal;
            const std::uint8_t background = shade_background(yn);
            for (int c = 0; c < cam.width; ++c) {
                const ColumnHit& hit = hits[static_cast<std::size_t>(c)];
                row[static_cast<std::size_t>(c)] =
                    hit.obstacle < 0 ? background : shade_surface(hit, state.z - yn * hit.depth, cam.focal);
            }
        }
    }
    return frame;
}

namespace serial {

ImageFrame render_frame(const Scenario& scenario, const QuadState& state,
                        const SensorParams& params) {
    const CameraModel cam = CameraModel::from(params);
    ImageFrame frame{GrayPlane(cam.width, cam.height), state.t};
    for (int r = 0; r < cam.height; ++r) {
        for (int c = 0; c < cam.width; ++c) {
            const ColumnHit hit = column_hit(scenario, state, cam, params.lidar_range, c);
            frame.intensities.at(c, r) = shade_pixel(hit, state, cam, r);
        }
    }
    return frame;
}

}  // namespace serial

}  // namespace foam
