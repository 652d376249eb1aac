#include <vector>

#include "foam/vision.hpp"

namespace foam {

std::optional<std::vector<FlowTrack>> track_three_frames(std::span<const Pyramid* const> frames,
                                                         std::span<const Corner> corners,
                                                         const VisionParams& params) {
    if (frames.size() < 4) return std::nullopt;
    const auto window = frames.subspan(frames.size() - 4);

    std::vector<FlowTrack> tracks(corners.size());
    std::vector<Vec2> positions(corners.size());
    for (std::size_t i = 0; i < corners.size(); ++i) {
        tracks[i].origin = corners[i].position;
        tracks[i].valid = true;
        positions[i] = corners[i].position;
    }

    // Only still-valid tracks are advanced to the next pair.
    std::vector<std::size_t> alive(corners.size());
    for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = i;
    for (std::size_t step = 0; step < 3; ++step) {
        std::vector<Vec2> query;
        query.reserve(alive.size());
        for (std::size_t i : alive) query.push_back(positions[i]);
        const auto results = lk_track(*window[step], *window[step + 1], query, params);
        std::vector<std::size_t> survivors;
        survivors.reserve(alive.size());
        for (std::size_t k = 0; k < alive.size(); ++k) {
            FlowTrack& track = tracks[alive[k]];
            if (!results[k].converged) {
                track.valid = false;
                continue;
            }
            track.steps[step] = results[k].displacement;
            positions[alive[k]] += results[k].displacement;
            survivors.push_back(alive[k]);
        }
        alive = std::move(survivors);
    }

    for (std::size_t i = 0; i < tracks.size(); ++i) {
        FlowTrack& t = tracks[i];
        if (!t.valid) continue;
        t.magnitude = (t.steps[0].norm() + t.steps[1].norm() + t.steps[2].norm()) / 3.0;
        t.sector_column = positions[i].x;
    }
    return tracks;
}

std::optional<std::vector<FlowTrack>> track_three_frames(std::span<const ImageFrame> frames,
                                                         std::span<const Corner> corners,
                                                         const VisionParams& params) {
    if (frames.size() < 4) return std::nullopt;
    std::vector<Pyramid> pyramids;
    for (const ImageFrame& f : frames.subspan(frames.size() - 4)) {
        pyramids.push_back(build_pyramid(f, params.pyramid_levels, params.lk_window));
    }
    const std::vector<const Pyramid*> ptrs{&pyramids[0], &pyramids[1], &pyramids[2], &pyramids[3]};
    return track_three_frames(std::span<const Pyramid* const>(ptrs), corners, params);
}

}  // namespace foam
