// Synthetic scenes shared by the unit tests and the acceptance binary.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "foam/sensesim.hpp"
#include "foam/vision.hpp"
#include "oracles.hpp"

namespace scenes {

inline foam::Scenario open_world() {
    foam::Scenario s;
    s.bounds = {{-100, -100}, {100, 100}};
    s.goal = {50, 0};
    return s;
}

inline foam::QuadState pose(double x, double y, double psi) {
    foam::QuadState q;
    q.x = x;
    q.y = y;
    q.z = 2.0;
    q.psi = psi;
    q.v = 3.0;
    return q;
}

// Largest relative deviation of min_eigenvalue_map from the per-pixel
// Jacobi oracle over one random 64x64 frame.
inline double eigen_map_error(std::uint64_t seed, int window = 5) {
    const foam::ImageFrame f = oracle::noise_frame(64, 64, seed);
    const foam::ScalarField map = foam::min_eigenvalue_map(f, window);
    const int margin = window / 2 + 1;
    double worst = 0.0;
    for (int y = 0; y < 64; ++y) {
        for (int x = 0; x < 64; ++x) {
            const bool interior = x >= margin && y >= margin && x < 64 - margin && y < 64 - margin;
            const double want = interior ? oracle::jacobi_min_eigen(oracle::tensor_at(f.intensities, x, y, window)) : 0.0;
            const double got = map.at(x, y);
            const double err = std::abs(got - want) / std::max(1.0, std::abs(want));
            worst = std::max(worst, err);
        }
    }
    return worst;
}

// RMS error of lk_track on corners of a textured frame shifted by (t, 0).
inline double lk_shift_rms(int t, std::uint64_t seed = 7) {
    foam::VisionParams params;
    const foam::ImageFrame a = oracle::smooth_noise_frame(640, 480, 4, seed);
    const foam::ImageFrame b = oracle::wrap_shift(a, t, 0);
    const auto corners = foam::detect_corners(a, params);
    std::vector<foam::Vec2> pts;
    for (const foam::Corner& c : corners) pts.push_back(c.position);
    const foam::Pyramid pa = foam::build_pyramid(a, params.pyramid_levels, params.lk_window);
    const foam::Pyramid pb = foam::build_pyramid(b, params.pyramid_levels, params.lk_window);
    const auto res = foam::lk_track(pa, pb, pts, params);
    double sum = 0.0;
    int n = 0;
    for (std::size_t i = 0; i < res.size(); ++i) {
        // Points whose window would straddle the wrap seam see no true shift.
        if (pts[i].x + t + params.lk_window >= 640) continue;
        const foam::Vec2 e = res[i].displacement - foam::Vec2{double(t), 0.0};
        sum += e.dot(e);
        ++n;
    }
    return n ? std::sqrt(sum / n) : INFINITY;
}

struct PillarTrial {
    double near_flow{0.0};
    double far_flow{0.0};
    int near_tracks{0};
    int far_tracks{0};
    [[nodiscard]] bool holds() const { return near_tracks > 0 && far_tracks > 0 && near_flow > far_flow; }
};

// Camera advancing 0.15 m per frame toward two identical pillars at 4 m and
// 12 m on either side of the heading. Tracks are assigned to the pillar
// whose silhouette contains their final column.
inline PillarTrial two_pillar_trial(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> bearing(foam::deg2rad(12.0), foam::deg2rad(30.0));
    std::uniform_real_distribution<double> radius(0.3, 0.6);
    std::bernoulli_distribution near_left(0.5);
    const double b = bearing(rng), r = radius(rng);
    const double side = near_left(rng) ? -1.0 : 1.0;

    foam::Scenario s = open_world();
    const foam::Vec2 near{4.0 * std::cos(b), side * 4.0 * std::sin(b)};
    const foam::Vec2 far{12.0 * std::cos(b), -side * 12.0 * std::sin(b)};
    s.obstacles = {foam::Circle{near, r}, foam::Circle{far, r}};

    std::vector<foam::ImageFrame> frames;
    for (int k = 0; k < 4; ++k) frames.push_back(foam::render_frame(s, pose(0.15 * k, 0, 0), s.sensor));
    const auto corners = foam::detect_corners(frames[0], s.vision);
    const auto tracks = foam::track_three_frames(std::span<const foam::ImageFrame>(frames), corners, s.vision);

    const foam::CameraModel cam = foam::CameraModel::from(s.sensor);
    const auto span_of = [&](foam::Vec2 c) {
        const foam::Vec2 rel{c.x - 0.45, c.y};
        const double mid = std::atan2(rel.y, rel.x), half = std::asin(r / rel.norm());
        return std::pair{cam.column_of_bearing(mid - half), cam.column_of_bearing(mid + half)};
    };
    const auto [n0, n1] = span_of(near);
    const auto [f0, f1] = span_of(far);
    PillarTrial trial;
    for (const foam::FlowTrack& t : tracks.value()) {
        if (!t.valid) continue;
        if (t.sector_column >= n0 && t.sector_column <= n1) {
            trial.near_flow += t.magnitude;
            ++trial.near_tracks;
        } else if (t.sector_column >= f0 && t.sector_column <= f1) {
            trial.far_flow += t.magnitude;
            ++trial.far_tracks;
        }
    }
    if (trial.near_tracks) trial.near_flow /= trial.near_tracks;
    if (trial.far_tracks) trial.far_flow /= trial.far_tracks;
    return trial;
}

}  // namespace scenes
