#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>
#include <string>

#include "detail.hpp"

namespace foam::vision_detail {

void check_rgb(const RgbFrame& rgb) {
    const auto same = [](const GrayPlane& a, const GrayPlane& b) {
        return a.width() == b.width() && a.height() == b.height();
    };
    if (!same(rgb.r, rgb.g) || !same(rgb.r, rgb.b)) {
        throw std::invalid_argument("grayscale: channel dimensions differ");
    }
}

void check_eigen_window(const ImageFrame& frame, int window) {
    if (window < 3 || window % 2 == 0) {
        throw std::invalid_argument("min_eigenvalue_map: window must be odd and >= 3");
    }
    if (frame.width() < window + 2 || frame.height() < window + 2) {
        throw std::invalid_argument("min_eigenvalue_map: frame smaller than the window");
    }
}

void check_pyramid_size(const ImageFrame& frame, int levels, int window) {
    if (levels < 1) throw std::invalid_argument("build_pyramid: levels must be >= 1");
    const long need = (1L << (levels - 1)) * window;
    if (frame.width() < need || frame.height() < need) {
        throw std::invalid_argument("build_pyramid: frame too small for " + std::to_string(levels) +
                                    " levels at window " + std::to_string(window));
    }
}

FloatPlane to_float(const GrayPlane& gray) {
    FloatPlane out(gray.width(), gray.height(), uninitialized);
    const auto src = gray.pixels();
    auto dst = out.pixels();
    std::transform(src.begin(), src.end(), dst.begin(), [](std::uint8_t v) { return static_cast<float>(v); });
    return out;
}

void gradients(const FloatPlane& level, FloatPlane& gx, FloatPlane& gy, bool parallel) {
    gx = FloatPlane(level.width(), level.height(), uninitialized);
    gy = FloatPlane(level.width(), level.height(), uninitialized);
    const int h = level.height();
#pragma omp parallel for schedule(static) if (parallel)
    for (int y = 0; y < h; ++y) {
        const int w = level.width();
        if (!parallel || y == 0 || y == h - 1 || w < 3) {
            for (int x = 0; x < w; ++x) {
                gx.at(x, y) = gradient_x_at(level, x, y);
                gy.at(x, y) = gradient_y_at(level, x, y);
            }
            continue;
        }
        // Interior columns without border reflection; same arithmetic as
        // gradient_x_at / gradient_y_at.
        const float* up = level.row(y - 1).data();
        const float* mid = level.row(y).data();
        const float* dn = level.row(y + 1).data();
        float* ox = gx.row(y).data();
        float* oy = gy.row(y).data();
        ox[0] = gradient_x_at(level, 0, y);
        oy[0] = gradient_y_at(level, 0, y);
        ox[w - 1] = gradient_x_at(level, w - 1, y);
        oy[w - 1] = gradient_y_at(level, w - 1, y);
        for (int x = 1; x < w - 1; ++x) {
            const double sx = (static_cast<double>(up[x + 1]) + 2.0 * mid[x + 1] + dn[x + 1]) -
                              (static_cast<double>(up[x - 1]) + 2.0 * mid[x - 1] + dn[x - 1]);
            const double sy = (static_cast<double>(dn[x - 1]) + 2.0 * dn[x] + dn[x + 1]) -
                              (static_cast<double>(up[x - 1]) + 2.0 * up[x] + up[x + 1]);
            ox[x] = static_cast<float>(sx / 8.0);
            oy[x] = static_cast<float>(sy / 8.0);
        }
    }
}

std::vector<Corner> select_corners(const ScalarField& response, const VisionParams& params) {
    const int w = response.width();
    const int h = response.height();
    const auto values = response.pixels();
    const double peak = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
    if (!(peak > 0.0)) return {};
    const double threshold = params.quality_level * peak;

    const int margin = std::max(params.lk_window / 2, params.corner_block / 2 + 1);
    std::vector<Corner> candidates;
    for (int y = std::max(margin, 1); y < h - std::max(margin, 1); ++y) {
        for (int x = std::max(margin, 1); x < w - std::max(margin, 1); ++x) {
            const double v = response.at(x, y);
            if (!(v > threshold) || !(v > 0.0)) continue;
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    if (response.at(x + dx, y + dy) > v) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) candidates.push_back({{static_cast<double>(x), static_cast<double>(y)}, v});
        }
    }

    // A flat maximum (8-connected candidates of identical score, as an ideal
    // step corner produces) counts once, at its centroid.
    const auto key = [w](const Corner& c) {
        return static_cast<long>(c.position.y) * w + static_cast<long>(c.position.x);
    };
    std::vector<long> keys(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) keys[i] = key(candidates[i]);
    std::vector<char> taken(candidates.size(), 0);
    std::vector<Corner> merged;
    std::vector<std::size_t> stack;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (taken[i]) continue;
        taken[i] = 1;
        stack.assign(1, i);
        double sx = 0.0, sy = 0.0;
        std::size_t count = 0;
        while (!stack.empty()) {
            const Corner c = candidates[stack.back()];
            stack.pop_back();
            sx += c.position.x;
            sy += c.position.y;
            ++count;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const long k = key(c) + static_cast<long>(dy) * w + dx;
                    const auto it = std::lower_bound(keys.begin(), keys.end(), k);
                    if (it == keys.end() || *it != k) continue;
                    const auto j = static_cast<std::size_t>(it - keys.begin());
                    if (taken[j] || candidates[j].score != c.score) continue;
                    taken[j] = 1;
                    stack.push_back(j);
                }
            }
        }
        merged.push_back({{sx / static_cast<double>(count), sy / static_cast<double>(count)}, candidates[i].score});
    }
    candidates = std::move(merged);

    std::sort(candidates.begin(), candidates.end(), [](const Corner& a, const Corner& b) {
        if (a.score != b.score) return a.score > b.score;
        if (a.position.y != b.position.y) return a.position.y < b.position.y;
        return a.position.x < b.position.x;
    });

    const double min_dist = params.min_corner_distance;
    const double min_dist2 = min_dist * min_dist;
    const double cell = std::max(min_dist, 1.0);
    const int grid_w = static_cast<int>(std::ceil(w / cell)) + 1;
    const int grid_h = static_cast<int>(std::ceil(h / cell)) + 1;
    std::vector<std::vector<Vec2>> grid(static_cast<std::size_t>(grid_w * grid_h));

    std::vector<Corner> kept;
    for (const Corner& c : candidates) {
        if (static_cast<int>(kept.size()) >= params.max_corners) break;
        const int gx = static_cast<int>(c.position.x / cell);
        const int gy = static_cast<int>(c.position.y / cell);
        bool clear = true;
        for (int j = std::max(gy - 1, 0); j <= std::min(gy + 1, grid_h - 1) && clear; ++j) {
            for (int i = std::max(gx - 1, 0); i <= std::min(gx + 1, grid_w - 1) && clear; ++i) {
                for (const Vec2& p : grid[static_cast<std::size_t>(j * grid_w + i)]) {
                    const Vec2 d = p - c.position;
                    if (d.dot(d) < min_dist2) {
                        clear = false;
                        break;
                    }
                }
            }
        }
        if (!clear) continue;
        kept.push_back(c);
        grid[static_cast<std::size_t>(gy * grid_w + gx)].push_back(c.position);
    }
    return kept;
}

namespace {

// LK windows are stored row by row with the row length padded to a multiple
// of 8. Padding carries zero gradient, so it drops out of every sum.
struct Window {
    int half{0};
    int n{0};
    int stride{0};
};

Window make_window(int lk_window) {
    const int n = lk_window;
    return {n / 2, n, (n + 7) / 8 * 8};
}

struct Bilinear {
    int x0, y0;
    float w00, w10, w01, w11;
};

Bilinear bilinear_at(Vec2 c) {
    const double fx = std::floor(c.x);
    const double fy = std::floor(c.y);
    const auto ax = static_cast<float>(c.x - fx);
    const auto ay = static_cast<float>(c.y - fy);
    return {static_cast<int>(fx), static_cast<int>(fy), (1.0f - ax) * (1.0f - ay), ax * (1.0f - ay),
            (1.0f - ax) * ay, ax * ay};
}

// True when `count` samples per row starting at the window's left edge can
// be read without clamping.
bool unclamped(const FloatPlane& p, const Bilinear& b, const Window& w, int count) {
    return b.x0 - w.half >= 0 && b.x0 - w.half + count <= p.width() - 1 && b.y0 - w.half >= 0 &&
           b.y0 + w.half + 1 <= p.height() - 1;
}

// Bilinear sample of the window centred on `center`, with edge clamping.
// Only the first w.n entries of each row are written, so padding keeps
// whatever the caller put there.
void sample_window(const FloatPlane& p, Vec2 center, const Window& w, std::vector<float>& out) {
    const Bilinear b = bilinear_at(center);
    const int left = b.x0 - w.half;
    if (unclamped(p, b, w, w.n)) {
        for (int r = 0; r < w.n; ++r) {
            const float* ra = p.row(b.y0 - w.half + r).data() + left;
            const float* rb = ra + p.width();
            float* dst = out.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(w.stride);
#pragma omp simd
            for (int i = 0; i < w.n; ++i) {
                dst[i] = b.w00 * ra[i] + b.w10 * ra[i + 1] + b.w01 * rb[i] + b.w11 * rb[i + 1];
            }
        }
        return;
    }
    const int wmax = p.width() - 1;
    const int hmax = p.height() - 1;
    thread_local std::vector<int> xa, xb;
    xa.resize(static_cast<std::size_t>(w.n));
    xb.resize(static_cast<std::size_t>(w.n));
    for (int i = 0; i < w.n; ++i) {
        xa[static_cast<std::size_t>(i)] = std::clamp(left + i, 0, wmax);
        xb[static_cast<std::size_t>(i)] = std::clamp(left + i + 1, 0, wmax);
    }
    for (int r = 0; r < w.n; ++r) {
        float* dst = out.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(w.stride);
        const float* ra = p.row(std::clamp(b.y0 - w.half + r, 0, hmax)).data();
        const float* rb = p.row(std::clamp(b.y0 - w.half + r + 1, 0, hmax)).data();
        for (int i = 0; i < w.n; ++i) {
            const auto ia = static_cast<std::size_t>(i);
            dst[i] = b.w00 * ra[xa[ia]] + b.w10 * ra[xb[ia]] + b.w01 * rb[xa[ia]] + b.w11 * rb[xb[ia]];
        }
    }
}

using V4 = float __attribute__((vector_size(16)));

V4 load4(const float* p) {
    V4 v;
    std::memcpy(&v, p, sizeof v);
    return v;
}

// Dot products of the template gradients with the four integer-shifted
// target patches around one cell: m[2k] pairs with grad x, m[2k+1] with
// grad y, k = 00, 10, 01, 11. The bilinear sample at any offset inside the
// cell is a weighted sum of these, so they are reused while an iteration
// stays in the same cell.
struct CellMoments {
    int x0{0};
    int y0{0};
    bool valid{false};
    float m[8]{};
};

// Rows r and r + 1 of the target window start at row(r), each readable for
// w.stride + 1 floats.
template <typename RowAt>
void moments_over_rows(RowAt row, const Window& w, const std::vector<float>& gx, const std::vector<float>& gy,
                       float* m) {
    V4 a0 = {}, a1 = {}, a2 = {}, a3 = {}, a4 = {}, a5 = {}, a6 = {}, a7 = {};
    for (int r = 0; r < w.n; ++r) {
        const float* ra = row(r);
        const float* rb = row(r + 1);
        const float* px = gx.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(w.stride);
        const float* py = gy.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(w.stride);
        for (int i = 0; i < w.stride; i += 4) {
            const V4 gxv = load4(px + i), gyv = load4(py + i);
            const V4 p00 = load4(ra + i), p10 = load4(ra + i + 1);
            const V4 p01 = load4(rb + i), p11 = load4(rb + i + 1);
            a0 += p00 * gxv;
            a1 += p00 * gyv;
            a2 += p10 * gxv;
            a3 += p10 * gyv;
            a4 += p01 * gxv;
            a5 += p01 * gyv;
            a6 += p11 * gxv;
            a7 += p11 * gyv;
        }
    }
    const V4 acc[8] = {a0, a1, a2, a3, a4, a5, a6, a7};
    for (int k = 0; k < 8; ++k) m[k] = (acc[k][0] + acc[k][1]) + (acc[k][2] + acc[k][3]);
}

void cell_moments(const FloatPlane& img, const Bilinear& b, const Window& w, const std::vector<float>& gx,
                  const std::vector<float>& gy, CellMoments& out) {
    out = {b.x0, b.y0, true, {}};
    const int left = b.x0 - w.half;
    const int top = b.y0 - w.half;
    if (unclamped(img, b, w, w.stride)) {
        // Padding columns meet zero gradients.
        moments_over_rows([&](int r) { return img.row(top + r).data() + left; }, w, gx, gy, out.m);
        return;
    }
    // Near the border: copy the edge-clamped neighbourhood first.
    const int cols = w.stride + 1;
    thread_local std::vector<float> block;
    block.resize(static_cast<std::size_t>(w.n + 1) * static_cast<std::size_t>(cols));
    const int wmax = img.width() - 1;
    const int hmax = img.height() - 1;
    for (int r = 0; r <= w.n; ++r) {
        const float* src = img.row(std::clamp(top + r, 0, hmax)).data();
        float* dst = block.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(cols);
        for (int i = 0; i < cols; ++i) dst[i] = src[std::clamp(left + i, 0, wmax)];
    }
    moments_over_rows([&](int r) { return block.data() + static_cast<std::size_t>(r) * static_cast<std::size_t>(cols); },
                      w, gx, gy, out.m);
}

// Sum of the bilinear sample times grad over the window.
Vec2 weighted(const Bilinear& b, const CellMoments& c) {
    const float* m = c.m;
    return {double(b.w00) * m[0] + double(b.w10) * m[2] + double(b.w01) * m[4] + double(b.w11) * m[6],
            double(b.w00) * m[1] + double(b.w10) * m[3] + double(b.w01) * m[5] + double(b.w11) * m[7]};
}

// Mismatch vector sum((I - J) grad I) with J bilinear in `img` around q.
Vec2 mismatch(const FloatPlane& img, Vec2 q, const Window& w, Vec2 template_sum, const std::vector<float>& gx,
              const std::vector<float>& gy, CellMoments& cache) {
    const Bilinear b = bilinear_at(q);
    if (!cache.valid || cache.x0 != b.x0 || cache.y0 != b.y0) cell_moments(img, b, w, gx, gy, cache);
    return template_sum - weighted(b, cache);
}

bool window_inside(const FloatPlane& p, Vec2 center, int half) {
    return center.x - half >= 0.0 && center.y - half >= 0.0 && center.x + half <= p.width() - 1 &&
           center.y + half <= p.height() - 1;
}

}  // namespace

LkResult track_point(const Pyramid& prev, const Pyramid& next, Vec2 point,
                     const VisionParams& params) {
    const Window win = make_window(params.lk_window);
    const int half = win.half;
    const auto padded = static_cast<std::size_t>(win.n) * static_cast<std::size_t>(win.stride);
    // Padding columns are zeroed here and never written again.
    thread_local std::vector<float> patch_gx, patch_gy;
    if (patch_gx.size() != padded) {
        for (auto* v : {&patch_gx, &patch_gy}) v->assign(padded, 0.0f);
    }
    const int levels = std::min(prev.size(), next.size());

    Vec2 guess{0.0, 0.0};
    for (int level = levels - 1; level >= 0; --level) {
        const auto idx = static_cast<std::size_t>(level);
        const Vec2 p = point * std::ldexp(1.0, -level);
        const FloatPlane& image = prev.levels[idx];
        if (level == 0 && !window_inside(image, p, half)) return {guess, false};

        sample_window(prev.grad_x[idx], p, win, patch_gx);
        sample_window(prev.grad_y[idx], p, win, patch_gy);
        double gxx = 0.0, gxy = 0.0, gyy = 0.0;
        for (std::size_t k = 0; k < padded; ++k) {
            gxx += static_cast<double>(patch_gx[k]) * patch_gx[k];
            gxy += static_cast<double>(patch_gx[k]) * patch_gy[k];
            gyy += static_cast<double>(patch_gy[k]) * patch_gy[k];
        }
        const double n = static_cast<double>(win.n) * static_cast<double>(win.n);
        if (min_eigenvalue(gxx / n, gxy / n, gyy / n) < kLkMinEigen) return {guess, false};
        const double det = gxx * gyy - gxy * gxy;

        Vec2 d{0.0, 0.0};
        const FloatPlane& target_image = next.levels[idx];
        // Formed the same way as the target side so equal images give exactly zero mismatch.
        CellMoments at_p;
        const Bilinear bp = bilinear_at(p);
        cell_moments(image, bp, win, patch_gx, patch_gy, at_p);
        const Vec2 template_sum = weighted(bp, at_p);
        CellMoments cache;
        for (int it = 0; it < params.lk_max_iterations; ++it) {
            const Vec2 q = p + guess + d;
            if (level == 0 && !window_inside(target_image, q, half)) return {guess + d, false};
            const Vec2 e = mismatch(target_image, q, win, template_sum, patch_gx, patch_gy, cache);
            const Vec2 step{(gyy * e.x - gxy * e.y) / det, (gxx * e.y - gxy * e.x) / det};
            d += step;
            if (step.norm() < params.lk_epsilon) break;
        }
        if (level > 0) {
            guess = (guess + d) * 2.0;
        } else {
            guess = guess + d;
        }
    }
    // The final estimate must still leave the window inside the frame.
    if (!window_inside(next.levels[0], point + guess, half)) return {guess, false};
    return {guess, true};
}

}  // namespace foam::vision_detail
