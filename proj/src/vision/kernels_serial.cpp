// Serial reference kernels, written for clarity rather than speed.

#include "detail.hpp"

namespace foam::serial {

using namespace vision_detail;

ImageFrame grayscale(const RgbFrame& rgb) {
    check_rgb(rgb);
    ImageFrame out{GrayPlane(rgb.r.width(), rgb.r.height()), rgb.timestamp};
    for (int y = 0; y < rgb.r.height(); ++y) {
        for (int x = 0; x < rgb.r.width(); ++x) {
            out.intensities.at(x, y) = luma(rgb.r.at(x, y), rgb.g.at(x, y), rgb.b.at(x, y));
        }
    }
    return out;
}

ScalarField min_eigenvalue_map(const ImageFrame& frame, int window) {
    check_eigen_window(frame, window);
    const GrayPlane& img = frame.intensities;
    const int w = img.width();
    const int h = img.height();
    const int half = window / 2;
    ScalarField out(w, h, 0.0);
    for (int y = half + 1; y <= h - 2 - half; ++y) {
        for (int x = half + 1; x <= w - 2 - half; ++x) {
            double a = 0.0, b = 0.0, c = 0.0;
            for (int j = -half; j <= half; ++j) {
                for (int i = -half; i <= half; ++i) {
                    const double gx = sobel_x(img, x + i, y + j);
                    const double gy = sobel_y(img, x + i, y + j);
                    a += gx * gx;
                    b += gx * gy;
                    c += gy * gy;
                }
            }
            out.at(x, y) = min_eigenvalue(a, b, c);
        }
    }
    return out;
}

std::vector<Corner> detect_corners(const ImageFrame& frame, const VisionParams& params) {
    return select_corners(serial::min_eigenvalue_map(frame, params.corner_block), params);
}

namespace {

FloatPlane pyr_down(const FloatPlane& src) {
    const int w = src.width();
    const int h = src.height();
    FloatPlane dst((w + 1) / 2, (h + 1) / 2);
    for (int y = 0; y < dst.height(); ++y) {
        for (int x = 0; x < dst.width(); ++x) {
            double s = 0.0;
            for (int j = 0; j < 5; ++j) {
                for (int i = 0; i < 5; ++i) {
                    s += kBinomial[j] * kBinomial[i] *
                         src.at(reflect101(2 * x + i - 2, w), reflect101(2 * y + j - 2, h));
                }
            }
            dst.at(x, y) = static_cast<float>(s / 256.0);
        }
    }
    return dst;
}

}  // namespace

Pyramid build_pyramid(const ImageFrame& frame, int levels, int window) {
    check_pyramid_size(frame, levels, window);
    Pyramid pyr;
    pyr.levels.push_back(to_float(frame.intensities));
    for (int l = 1; l < levels; ++l) pyr.levels.push_back(pyr_down(pyr.levels.back()));
    pyr.grad_x.resize(pyr.levels.size());
    pyr.grad_y.resize(pyr.levels.size());
    for (std::size_t l = 0; l < pyr.levels.size(); ++l) {
        gradients(pyr.levels[l], pyr.grad_x[l], pyr.grad_y[l], false);
    }
    return pyr;
}

std::vector<LkResult> lk_track(const Pyramid& prev, const Pyramid& next, std::span<const Vec2> points,
                               const VisionParams& params) {
    std::vector<LkResult> out;
    out.reserve(points.size());
    for (const Vec2& p : points) out.push_back(track_point(prev, next, p, params));
    return out;
}

}  // namespace foam::serial
