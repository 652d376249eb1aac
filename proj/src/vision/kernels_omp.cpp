// OpenMP kernels. Each loop iteration writes disjoint outputs, so results do
// not depend on the thread count or schedule.

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "detail.hpp"

namespace foam {

using namespace vision_detail;

ImageFrame grayscale(const RgbFrame& rgb) {
    check_rgb(rgb);
    ImageFrame out{GrayPlane(rgb.r.width(), rgb.r.height()), rgb.timestamp};
    const int h = rgb.r.height();
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const auto r = rgb.r.row(y);
        const auto g = rgb.g.row(y);
        const auto b = rgb.b.row(y);
        auto dst = out.intensities.row(y);
        for (std::size_t x = 0; x < dst.size(); ++x) dst[x] = luma(r[x], g[x], b[x]);
    }
    return out;
}

ScalarField min_eigenvalue_map(const ImageFrame& frame, int window) {
    check_eigen_window(frame, window);
    const GrayPlane& img = frame.intensities;
    const int w = img.width();
    const int h = img.height();
    const int half = window / 2;
    const int y_lo = half + 1, y_hi = h - 2 - half;
    const int x_lo = half + 1, x_hi = w - 2 - half;
    const auto uw = static_cast<std::size_t>(w);

    // Streaming box filter over integer tensor products: a ring of `window`
    // product rows feeds per-column sums, then a running horizontal sum.
    // All sums are exact, so the result equals the direct reference bit for bit.
    ScalarField out(w, h, uninitialized);
    for (int y = 0; y < h; ++y) {
        if (y < y_lo || y > y_hi) std::fill(out.row(y).begin(), out.row(y).end(), 0.0);
    }
#pragma omp parallel
    {
        std::vector<std::int32_t> ring(3 * uw * static_cast<std::size_t>(window), 0);
        std::vector<std::int64_t> col(3 * uw, 0);
        const auto products = [&](int y, std::int32_t* dst) {
            const std::uint8_t* up = img.row(y - 1).data();
            const std::uint8_t* mid = img.row(y).data();
            const std::uint8_t* dn = img.row(y + 1).data();
            std::int32_t* pxx = dst;
            std::int32_t* pxy = dst + uw;
            std::int32_t* pyy = dst + 2 * uw;
            pxx[0] = pxy[0] = pyy[0] = 0;
            pxx[w - 1] = pxy[w - 1] = pyy[w - 1] = 0;
            for (int x = 1; x < w - 1; ++x) {
                const int gx = (up[x + 1] + 2 * mid[x + 1] + dn[x + 1]) - (up[x - 1] + 2 * mid[x - 1] + dn[x - 1]);
                const int gy = (dn[x - 1] + 2 * dn[x] + dn[x + 1]) - (up[x - 1] + 2 * up[x] + up[x + 1]);
                pxx[x] = gx * gx;
                pxy[x] = gx * gy;
                pyy[x] = gy * gy;
            }
        };
        int last = -1;
        const auto slot = [&](int y) {
            return ring.data() + 3 * uw * static_cast<std::size_t>(((y % window) + window) % window);
        };

#pragma omp for schedule(static)
        for (int y = y_lo; y <= y_hi; ++y) {
            // Each thread gets one contiguous block, so only its first row
            // primes the ring; later rows slide it by one.
            if (y != last + 1) {
                std::fill(col.begin(), col.end(), 0);
                for (int j = y - half; j <= y + half; ++j) {
                    std::int32_t* r = slot(j);
                    products(j, r);
                    for (std::size_t k = 0; k < 3 * uw; ++k) col[k] += r[k];
                }
            } else {
                std::int32_t* r = slot(y + half);
                const std::int32_t* old = r;
                for (std::size_t k = 0; k < 3 * uw; ++k) col[k] -= old[k];
                products(y + half, r);
                for (std::size_t k = 0; k < 3 * uw; ++k) col[k] += r[k];
            }
            last = y;

            const std::int64_t* cxx = col.data();
            const std::int64_t* cxy = col.data() + uw;
            const std::int64_t* cyy = col.data() + 2 * uw;
            std::int64_t a = 0, b = 0, c = 0;
            for (int i = x_lo - half; i <= x_lo + half; ++i) {
                a += cxx[i];
                b += cxy[i];
                c += cyy[i];
            }
            auto dst = out.row(y);
            std::fill(dst.begin(), dst.begin() + x_lo, 0.0);
            std::fill(dst.begin() + std::max(x_hi + 1, x_lo), dst.end(), 0.0);
            for (int x = x_lo; x <= x_hi; ++x) {
                if (x > x_lo) {
                    a += cxx[x + half] - cxx[x - half - 1];
                    b += cxy[x + half] - cxy[x - half - 1];
                    c += cyy[x + half] - cyy[x - half - 1];
                }
                dst[static_cast<std::size_t>(x)] =
                    min_eigenvalue(static_cast<double>(a), static_cast<double>(b), static_cast<double>(c));
            }
        }
    }
    return out;
}

std::vector<Corner> detect_corners(const ImageFrame& frame, const VisionParams& params) {
    return select_corners(min_eigenvalue_map(frame, params.corner_block), params);
}

namespace {

// Separable binomial blur + decimation. Intermediate sums are exact in
// double, matching the direct 5x5 reference.
FloatPlane pyr_down(const FloatPlane& src) {
    const int w = src.width();
    const int h = src.height();
    const int ow = (w + 1) / 2;
    const int oh = (h + 1) / 2;
    // Horizontal pass evaluated only at even columns.
    Plane<double> horiz(ow, h, uninitialized);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < h; ++y) {
        const auto row = src.row(y);
        auto out = horiz.row(y);
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            if (2 * x - 2 >= 0 && 2 * x + 2 < w) {
                const float* r = row.data() + 2 * x - 2;
                for (int i = 0; i < 5; ++i) s += kBinomial[i] * r[i];
            } else {
                for (int i = 0; i < 5; ++i) {
                    s += kBinomial[i] * row[static_cast<std::size_t>(reflect101(2 * x + i - 2, w))];
                }
            }
            out[static_cast<std::size_t>(x)] = s;
        }
    }
    FloatPlane dst(ow, oh, uninitialized);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < oh; ++y) {
        const double* rows[5];
        for (int j = 0; j < 5; ++j) rows[j] = horiz.row(reflect101(2 * y + j - 2, h)).data();
        auto out = dst.row(y);
        for (int x = 0; x < ow; ++x) {
            double s = 0.0;
            for (int j = 0; j < 5; ++j) s += kBinomial[j] * rows[j][x];
            out[static_cast<std::size_t>(x)] = static_cast<float>(s / 256.0);
        }
    }
    return dst;
}

}  // namespace

Pyramid build_pyramid(const ImageFrame& frame, int levels, int window) {
    check_pyramid_size(frame, levels, window);
    Pyramid pyr;
    pyr.levels.reserve(static_cast<std::size_t>(levels));
    pyr.levels.push_back(to_float(frame.intensities));
    for (int l = 1; l < levels; ++l) pyr.levels.push_back(pyr_down(pyr.levels.back()));
    pyr.grad_x.resize(pyr.levels.size());
    pyr.grad_y.resize(pyr.levels.size());
    for (std::size_t l = 0; l < pyr.levels.size(); ++l) {
        gradients(pyr.levels[l], pyr.grad_x[l], pyr.grad_y[l], true);
    }
    return pyr;
}

std::vector<LkResult> lk_track(const Pyramid& prev, const Pyramid& next, std::span<const Vec2> points,
                               const VisionParams& params) {
    std::vector<LkResult> out(points.size());
    const auto n = static_cast<long>(points.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        out[k] = track_point(prev, next, points[k], params);
    }
    return out;
}

}  // namespace foam
