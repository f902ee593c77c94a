#pragma once

#include "mtmc/errors.hpp"

#include <algorithm>
#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mtmc {

using Identity = std::string;

// One (camera, frame) slot on the synchronized global timeline. Two
// detections at the same site are simultaneous for the miss predicate.
struct Site {
    int camera = 0;
    std::int64_t frame = 0;

    // Time-major order: frame first, camera breaks ties.
    friend std::strong_ordering operator<=>(const Site& a, const Site& b) {
        if (auto c = a.frame <=> b.frame; c != 0) return c;
        return a.camera <=> b.camera;
    }
    friend bool operator==(const Site&, const Site&) = default;
};

struct Box {
    double left = 0;
    double top = 0;
    double width = 0;
    double height = 0;

    double right() const { return left + width; }
    double bottom() const { return top + height; }
    double area() const { return width * height; }

    friend bool operator==(const Box&, const Box&) = default;
};

// Ground-plane position in meters.
struct WorldPoint {
    double x = 0;
    double y = 0;

    friend bool operator==(const WorldPoint&, const WorldPoint&) = default;
};

struct Detection {
    Site site;
    Identity identity;
    std::optional<Box> box;
    std::optional<WorldPoint> world;

    friend bool operator==(const Detection&, const Detection&) = default;
};

enum class Side { Truth, Computed };

inline const char* side_name(Side s) {
    return s == Side::Truth ? "truth" : "computed";
}

// All detections of one identity label on one side, sorted by Site
// (time-major) with at most one detection per site.
struct Trajectory {
    Identity identity;
    Side side = Side::Truth;
    std::vector<Detection> detections;

    std::int64_t length() const {
        return static_cast<std::int64_t>(detections.size());
    }
    std::int64_t first_frame() const { return detections.front().site.frame; }
    std::int64_t last_frame() const { return detections.back().site.frame; }

    const Detection* at_site(const Site& s) const {
        auto it = std::lower_bound(
            detections.begin(), detections.end(), s,
            [](const Detection& d, const Site& site) { return d.site < site; });
        if (it != detections.end() && it->site == s) return &*it;
        return nullptr;
    }

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Spatial overlap test configuration. Image plane: a pair matches when
// IoU >= delta (delta in (0,1)). Ground plane: a pair matches when the
// Euclidean distance is at most delta meters.
struct OverlapMode {
    enum class Kind { Iou, GroundPlane };

    Kind kind = Kind::Iou;
    double delta = 0.5;

    static OverlapMode iou(double delta = 0.5) {
        if (!(delta > 0.0 && delta < 1.0))
            throw ValidationError("IoU overlap threshold must lie in (0,1), got " +
                                  std::to_string(delta));
        return OverlapMode{Kind::Iou, delta};
    }
    static OverlapMode ground_plane(double delta = 1.0) {
        if (!(delta > 0.0))
            throw ValidationError("ground-plane distance threshold must be positive, got " +
                                  std::to_string(delta));
        return OverlapMode{Kind::GroundPlane, delta};
    }

    friend bool operator==(const OverlapMode&, const OverlapMode&) = default;
};

} // namespace mtmc
