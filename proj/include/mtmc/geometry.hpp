#pragma once

#include "mtmc/types.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>

namespace mtmc {

inline double iou(const Box& a, const Box& b) {
    const double ix = std::min(a.right(), b.right()) - std::max(a.left, b.left);
    const double iy = std::min(a.bottom(), b.bottom()) - std::max(a.top, b.top);
    if (ix <= 0.0 || iy <= 0.0) return 0.0;
    const double inter = ix * iy;
    const double uni = a.area() + b.area() - inter;
    // right()-left can round differently from width, letting inter drift a
    // few ulps past the union for (near-)identical boxes
    return inter >= uni ? 1.0 : inter / uni;
}

// Plane projective map, row-major. Maps homogeneous image points (u, v, 1)
// to ground-plane points.
struct Homography {
    std::array<double, 9> m{1, 0, 0, 0, 1, 0, 0, 0, 1};

    double determinant() const {
        return m[0] * (m[4] * m[8] - m[5] * m[7]) -
               m[1] * (m[3] * m[8] - m[5] * m[6]) +
               m[2] * (m[3] * m[7] - m[4] * m[6]);
    }

    void validate() const {
        if (!std::isfinite(determinant()))
            throw ValidationError("homography has non-finite entries");
        if (std::abs(determinant()) < 1e-12)
            throw ValidationError("homography is singular (|det| < 1e-12)");
    }

    friend bool operator==(const Homography&, const Homography&) = default;
};

inline WorldPoint project_to_ground(const Homography& h, double u, double v) {
    const double w = h.m[6] * u + h.m[7] * v + h.m[8];
    if (std::abs(w) < 1e-9)
        throw DegenerateProjectionError("projection of (" + std::to_string(u) + ", " +
                                        std::to_string(v) + ") is degenerate (|w| < 1e-9)");
    return WorldPoint{(h.m[0] * u + h.m[1] * v + h.m[2]) / w,
                      (h.m[3] * u + h.m[4] * v + h.m[5]) / w};
}

// Annotation convention: a box stands on the person's foot contact point.
inline WorldPoint project_box_foot(const Homography& h, const Box& b) {
    return project_to_ground(h, b.left + b.width / 2.0, b.bottom());
}

inline Homography parse_homography(std::istream& in, const std::string& origin = "homography") {
    Homography h;
    for (double& entry : h.m) {
        if (!(in >> entry))
            throw ParseError(origin + ": expected 9 whitespace-separated numbers");
    }
    double extra;
    if (in >> extra)
        throw ParseError(origin + ": trailing data after 9 numbers");
    h.validate();
    return h;
}

inline Homography load_homography(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open homography file: " + path);
    return parse_homography(in, path);
}

// Miss predicate over two simultaneous detections; null means the trajectory
// has no detection at that site (or the partner is an irregular node), which
// always counts as a miss.
inline bool is_miss(const Detection* det_truth, const Detection* det_computed,
                    const OverlapMode& mode) {
    if (det_truth == nullptr || det_computed == nullptr) return true;
    if (mode.kind == OverlapMode::Kind::Iou) {
        if (!det_truth->box || !det_computed->box)
            throw ValidationError("IoU overlap requires boxes on both detections");
        return iou(*det_truth->box, *det_computed->box) < mode.delta;
    }
    if (!det_truth->world || !det_computed->world)
        throw ValidationError("ground-plane overlap requires world points on both detections");
    const double dx = det_truth->world->x - det_computed->world->x;
    const double dy = det_truth->world->y - det_computed->world->y;
    return std::sqrt(dx * dx + dy * dy) > mode.delta;
}

struct PairCost {
    std::int64_t fn = 0;
    std::int64_t fp = 0;
    std::int64_t total() const { return fn + fp; }
};

// Cost of tying trajectory tau to gamma: misses counted over tau's sites are
// false negatives, misses over gamma's sites are false positives. A site
// where both detections exist but do not overlap contributes to both sums.
// Null stands for the irregular partner (f+/f-), whose cost is the partner's
// full length; two irregular nodes cost nothing.
inline PairCost pair_cost(const Trajectory* tau, const Trajectory* gamma,
                          const OverlapMode& mode) {
    PairCost cost;
    if (tau == nullptr && gamma == nullptr) return cost;
    if (gamma == nullptr) {
        cost.fn = tau->length();
        return cost;
    }
    if (tau == nullptr) {
        cost.fp = gamma->length();
        return cost;
    }

    auto t = tau->detections.begin();
    auto g = gamma->detections.begin();
    while (t != tau->detections.end() && g != gamma->detections.end()) {
        if (t->site < g->site) {
            ++cost.fn;
            ++t;
        } else if (g->site < t->site) {
            ++cost.fp;
            ++g;
        } else {
            if (is_miss(&*t, &*g, mode)) {
                ++cost.fn;
                ++cost.fp;
            }
            ++t;
            ++g;
        }
    }
    cost.fn += tau->detections.end() - t;
    cost.fp += gamma->detections.end() - g;
    return cost;
}

} // namespace mtmc
