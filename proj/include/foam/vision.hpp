// Sparse vision kernel: luma conversion, Shi-Tomasi corners, binomial
// image pyramids and coarse-to-fine iterative Lucas-Kanade tracking.
//
// Pixel centers sit at integer coordinates. The data-parallel kernels are
// OpenMP loops; the serial:: namespace keeps straightforward reference
// implementations that the tests hold the parallel ones to, bit for bit.

#pragma once

#include <array>
#include <optional>
#include <span>
#include <vector>

#include "foam/geometry.hpp"
#include "foam/image.hpp"
#include "foam/params.hpp"

namespace foam {

struct Corner {
    Vec2 position;  ///< full-resolution pixel coordinates
    double score{0.0};  ///< minimum eigenvalue of the structure tensor
    friend bool operator==(const Corner&, const Corner&) = default;
};

struct FlowTrack {
    Vec2 origin;
    std::array<Vec2, 3> steps{};  ///< per-frame displacement [px]
    double magnitude{0.0};        ///< mean of the three step norms [px/frame]
    double sector_column{0.0};    ///< column of the final position in the newest frame
    bool valid{false};
};

/// Rounded BT.601 luma. Throws std::invalid_argument on mismatched planes.
[[nodiscard]] ImageFrame grayscale(const RgbFrame& rgb);

/// Shi-Tomasi response: lambda_min of the Sobel structure tensor summed over
/// a `window` x `window` neighborhood. Pixels whose window would need
/// gradients outside the frame hold 0. Throws std::invalid_argument for an
/// even or < 3 window, or a frame smaller than the window.
[[nodiscard]] ScalarField min_eigenvalue_map(const ImageFrame& frame, int window);

/// Smaller eigenvalue of the symmetric matrix [[a, b], [b, c]].
[[nodiscard]] inline double min_eigenvalue(double a, double b, double c) {
    return 0.5 * ((a + c) - std::sqrt((a - c) * (a - c) + 4.0 * b * b));
}

/// Shi-Tomasi corners ordered by score (descending) then row-major position.
[[nodiscard]] std::vector<Corner> detect_corners(const ImageFrame& frame, const VisionParams& params);

/// Gaussian pyramid plus per-level gradients (Sobel / 8) used by the tracker.
struct Pyramid {
    std::vector<FloatPlane> levels;
    std::vector<FloatPlane> grad_x;
    std::vector<FloatPlane> grad_y;

    [[nodiscard]] int size() const noexcept { return static_cast<int>(levels.size()); }
};

/// Level 0 is the input; each further level is the previous one blurred with
/// the 5-tap binomial kernel and decimated by 2. Throws std::invalid_argument
/// if either dimension is below 2^(levels-1) * window.
[[nodiscard]] Pyramid build_pyramid(const ImageFrame& frame, int levels, int window = 15);

struct LkResult {
    Vec2 displacement;
    bool converged{false};
};

[[nodiscard]] std::vector<LkResult> lk_track(const Pyramid& prev, const Pyramid& next,
                                             std::span<const Vec2> points,
                                             const VisionParams& params);

/// Chains lk_track across f[k-3] -> f[k-2] -> f[k-1] -> f[k] starting from
/// corners detected on f[k-3]. Returns std::nullopt when fewer than four
/// frames are supplied (camera occupancy unavailable).
[[nodiscard]] std::optional<std::vector<FlowTrack>> track_three_frames(
    std::span<const Pyramid* const> frames, std::span<const Corner> corners,
    const VisionParams& params);

[[nodiscard]] std::optional<std::vector<FlowTrack>> track_three_frames(
    std::span<const ImageFrame> frames, std::span<const Corner> corners,
    const VisionParams& params);

namespace serial {

[[nodiscard]] ImageFrame grayscale(const RgbFrame& rgb);
/// Direct per-pixel window summation.
[[nodiscard]] ScalarField min_eigenvalue_map(const ImageFrame& frame, int window);
[[nodiscard]] std::vector<Corner> detect_corners(const ImageFrame& frame, const VisionParams& params);
[[nodiscard]] Pyramid build_pyramid(const ImageFrame& frame, int levels, int window = 15);
[[nodiscard]] std::vector<LkResult> lk_track(const Pyramid& prev, const Pyramid& next,
                                             std::span<const Vec2> points,
                                             const VisionParams& params);

}  // namespace serial

}  // namespace foam
