#pragma once

#include "mtmc/geometry.hpp"
#include "mtmc/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mtmc {

struct CameraInfo {
    int id = 0;
    // Constant offset added to this camera's frame numbers at ingestion,
    // for inputs that are not perfectly synchronized.
    std::int64_t frame_offset = 0;
    std::optional<Homography> homography;

    CameraInfo() = default;
    explicit CameraInfo(int camera_id, std::int64_t offset = 0,
                        std::optional<Homography> h = std::nullopt)
        : id(camera_id), frame_offset(offset), homography(std::move(h)) {}

    friend bool operator==(const CameraInfo&, const CameraInfo&) = default;
};

// A full evaluation instance. Immutable after construction; downstream
// operations take read-only access and may run concurrently.
struct Scenario {
    std::vector<Trajectory> truth;
    std::vector<Trajectory> computed;
    std::vector<CameraInfo> cameras;  // sorted by id, unique
    OverlapMode mode;

    const std::vector<Trajectory>& side(Side s) const {
        return s == Side::Truth ? truth : computed;
    }

    const CameraInfo* find_camera(int id) const {
        for (const CameraInfo& c : cameras)
            if (c.id == id) return &c;
        return nullptr;
    }

    std::int64_t total_truth_length() const {
        std::int64_t n = 0;
        for (const Trajectory& t : truth) n += t.length();
        return n;
    }
    std::int64_t total_computed_length() const {
        std::int64_t n = 0;
        for (const Trajectory& t : computed) n += t.length();
        return n;
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

namespace detail {

inline std::string describe_row(Side side, const Detection& d) {
    return std::string(side_name(side)) + " identity=" + d.identity +
           " camera=" + std::to_string(d.site.camera) +
           " frame=" + std::to_string(d.site.frame);
}

inline std::vector<Trajectory> group_rows(std::vector<Detection> rows, Side side,
                                          const std::vector<CameraInfo>& cameras,
                                          const OverlapMode& mode) {
    std::unordered_map<int, const CameraInfo*> camera_by_id;
    for (const CameraInfo& c : cameras) camera_by_id.emplace(c.id, &c);

    for (Detection& d : rows) {
        if (d.identity.empty())
            throw ValidationError(std::string("empty identity label on ") +
                                  side_name(side) + " row at camera=" +
                                  std::to_string(d.site.camera) +
                                  " frame=" + std::to_string(d.site.frame));
        if (!d.box && !d.world)
            throw ValidationError("detection carries neither box nor world point: " +
                                  describe_row(side, d));
        if (d.box && (d.box->width <= 0.0 || d.box->height <= 0.0))
            throw ValidationError("box dimensions must be positive: " +
                                  describe_row(side, d));

        auto cam = camera_by_id.find(d.site.camera);
        if (cam == camera_by_id.end())
            throw ValidationError("unknown camera: " + describe_row(side, d));
        d.site.frame += cam->second->frame_offset;
        if (d.site.frame < 0)
            throw ValidationError("negative frame after offset: " + describe_row(side, d));

        if (mode.kind == OverlapMode::Kind::Iou) {
            if (!d.box)
                throw ValidationError("IoU mode requires a box on every detection; "
                                      "first offender: " + describe_row(side, d));
        } else if (!d.world) {
            if (d.box && cam->second->homography) {
                d.world = project_box_foot(*cam->second->homography, *d.box);
            } else {
                throw ValidationError("ground-plane mode requires a world point or a "
                                      "camera homography plus box; first offender: " +
                                      describe_row(side, d));
            }
        }
    }

    // Group by identity in first-appearance order.
    std::vector<Trajectory> out;
    std::unordered_map<Identity, std::size_t> index;
    index.reserve(rows.size() / 4 + 1);
    for (Detection& d : rows) {
        auto [it, fresh] = index.emplace(d.identity, out.size());
        if (fresh) out.push_back(Trajectory{d.identity, side, {}});
        out[it->second].detections.push_back(std::move(d));
    }
    for (Trajectory& t : out) {
        std::sort(t.detections.begin(), t.detections.end(),
                  [](const Detection& a, const Detection& b) { return a.site < b.site; });
        for (std::size_t i = 1; i < t.detections.size(); ++i) {
            if (t.detections[i].site == t.detections[i - 1].site)
                throw ValidationError("duplicate detection: " +
                                      describe_row(side, t.detections[i]));
        }
    }
    return out;
}

} // namespace detail

inline Scenario build_scenario(std::vector<Detection> truth_rows,
                               std::vector<Detection> computed_rows,
                               std::vector<CameraInfo> cameras,
                               OverlapMode mode) {
    std::sort(cameras.begin(), cameras.end(),
              [](const CameraInfo& a, const CameraInfo& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < cameras.size(); ++i)
        if (cameras[i].id == cameras[i - 1].id)
            throw ValidationError("duplicate camera id " + std::to_string(cameras[i].id));
    for (const CameraInfo& c : cameras)
        if (c.homography) c.homography->validate();

    Scenario s;
    s.cameras = std::move(cameras);
    s.mode = mode;
    s.truth = detail::group_rows(std::move(truth_rows), Side::Truth, s.cameras, mode);
    s.computed = detail::group_rows(std::move(computed_rows), Side::Computed, s.cameras, mode);
    return s;
}

inline Scenario restrict_to_camera(const Scenario& s, int camera) {
    const CameraInfo* cam = s.find_camera(camera);
    if (cam == nullptr)
        throw ValidationError("unknown camera " + std::to_string(camera));

    Scenario out;
    out.cameras = {*cam};
    out.mode = s.mode;
    for (Side side : {Side::Truth, Side::Computed}) {
        auto& dst = side == Side::Truth ? out.truth : out.computed;
        for (const Trajectory& t : s.side(side)) {
            Trajectory kept{t.identity, t.side, {}};
            for (const Detection& d : t.detections)
                if (d.site.camera == camera) kept.detections.push_back(d);
            if (!kept.detections.empty()) dst.push_back(std::move(kept));
        }
    }
    return out;
}

struct CameraTimeline {
    int camera = 0;
    std::int64_t min_frame = 0;
    std::int64_t max_frame = 0;
    std::int64_t frames_spanned = 0;
    std::int64_t truth_detections = 0;
    std::int64_t computed_detections = 0;
    std::int64_t truth_identities = 0;
    std::int64_t computed_identities = 0;
};

struct TimelineStats {
    std::vector<CameraTimeline> cameras;
    // T: total number of true detections, the MOTA normalizer.
    std::int64_t total_true_detections = 0;
};

inline TimelineStats timeline_stats(const Scenario& s) {
    TimelineStats stats;
    stats.cameras.reserve(s.cameras.size());
    for (const CameraInfo& cam : s.cameras) {
        CameraTimeline line;
        line.camera = cam.id;
        bool any = false;
        for (Side side : {Side::Truth, Side::Computed}) {
            for (const Trajectory& t : s.side(side)) {
                std::int64_t here = 0;
                for (const Detection& d : t.detections) {
                    if (d.site.camera != cam.id) continue;
                    ++here;
                    if (!any || d.site.frame < line.min_frame) line.min_frame = d.site.frame;
                    if (!any || d.site.frame > line.max_frame) line.max_frame = d.site.frame;
                    any = true;
                }
                if (here == 0) continue;
                if (side == Side::Truth) {
                    line.truth_detections += here;
                    ++line.truth_identities;
                } else {
                    line.computed_detections += here;
                    ++line.computed_identities;
                }
            }
        }
        if (any) line.frames_spanned = line.max_frame - line.min_frame + 1;
        stats.cameras.push_back(line);
    }
    stats.total_true_detections = s.total_truth_length();
    return stats;
}

// Inverse of build_scenario: rows in trajectory order with camera frame
// offsets undone, so rebuilding with the same camera metadata reproduces
// the scenario exactly.
inline std::pair<std::vector<Detection>, std::vector<Detection>>
flatten_scenario(const Scenario& s) {
    std::unordered_map<int, std::int64_t> offset;
    for (const CameraInfo& c : s.cameras) offset.emplace(c.id, c.frame_offset);

    std::pair<std::vector<Detection>, std::vector<Detection>> rows;
    for (Side side : {Side::Truth, Side::Computed}) {
        auto& dst = side == Side::Truth ? rows.first : rows.second;
        for (const Trajectory& t : s.side(side)) {
            for (Detection d : t.detections) {
                d.site.frame -= offset.at(d.site.camera);
                dst.push_back(std::move(d));
            }
        }
    }
    return rows;
}

} // namespace mtmc
