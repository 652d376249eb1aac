// Per-pixel and per-point building blocks shared by the OpenMP kernels and
// their serial references, so both paths run identical arithmetic.

#pragma once

#include <cstdint>
#include <vector>

#include "foam/vision.hpp"

namespace foam::vision_detail {

inline int sobel_x(const GrayPlane& p, int x, int y) {
    return (p.at(x + 1, y - 1) + 2 * p.at(x + 1, y) + p.at(x + 1, y + 1)) -
           (p.at(x - 1, y - 1) + 2 * p.at(x - 1, y) + p.at(x - 1, y + 1));
}

inline int sobel_y(const GrayPlane& p, int x, int y) {
    return (p.at(x - 1, y + 1) + 2 * p.at(x, y + 1) + p.at(x + 1, y + 1)) -
           (p.at(x - 1, y - 1) + 2 * p.at(x, y - 1) + p.at(x + 1, y - 1));
}

inline std::uint8_t luma(std::uint8_t r, std::uint8_t g, std::uint8_t b) {
    // round(0.299 R + 0.587 G + 0.114 B) in exact integer arithmetic.
    return static_cast<std::uint8_t>((299 * r + 587 * g + 114 * b + 500) / 1000);
}

void check_rgb(const RgbFrame& rgb);
void check_eigen_window(const ImageFrame& frame, int window);
void check_pyramid_size(const ImageFrame& frame, int levels, int window);

/// Index reflection without repeating the edge pixel (dcb|abcd|cba).
inline int reflect101(int i, int n) {
    if (n == 1) return 0;
    while (i < 0 || i >= n) {
        if (i < 0) i = -i;
        if (i >= n) i = 2 * n - 2 - i;
    }
    return i;
}

inline constexpr double kBinomial[5] = {1.0, 4.0, 6.0, 4.0, 1.0};

/// Sobel / 8 of a float plane with reflected borders.
void gradients(const FloatPlane& level, FloatPlane& gx, FloatPlane& gy, bool parallel);

inline float gradient_x_at(const FloatPlane& p, int x, int y) {
    const int w = p.width();
    const int h = p.height();
    const int xm = reflect101(x - 1, w), xp = reflect101(x + 1, w);
    const int ym = reflect101(y - 1, h), yp = reflect101(y + 1, h);
    const double s = (static_cast<double>(p.at(xp, ym)) + 2.0 * p.at(xp, y) + p.at(xp, yp)) -
                     (static_cast<double>(p.at(xm, ym)) + 2.0 * p.at(xm, y) + p.at(xm, yp));
    return static_cast<float>(s / 8.0);
}

inline float gradient_y_at(const FloatPlane& p, int x, int y) {
    const int w = p.width();
    const int h = p.height();
    const int xm = reflect101(x - 1, w), xp = reflect101(x + 1, w);
    const int ym = reflect101(y - 1, h), yp = reflect101(y + 1, h);
    const double s = (static_cast<double>(p.at(xm, yp)) + 2.0 * p.at(x, yp) + p.at(xp, yp)) -
                     (static_cast<double>(p.at(xm, ym)) + 2.0 * p.at(x, ym) + p.at(xp, ym));
    return static_cast<float>(s / 8.0);
}

FloatPlane to_float(const GrayPlane& gray);

/// Local-maximum filtering, score ordering and greedy distance suppression
/// over a precomputed Shi-Tomasi response.
std::vector<Corner> select_corners(const ScalarField& response, const VisionParams& params);

/// Coarse-to-fine iterative Lucas-Kanade for one point.
LkResult track_point(const Pyramid& prev, const Pyramid& next, Vec2 point,
                     const VisionParams& params);

/// Singular-tensor threshold on the window-averaged structure tensor.
inline constexpr double kLkMinEigen = 1e-6;

}  // namespace foam::vision_detail
