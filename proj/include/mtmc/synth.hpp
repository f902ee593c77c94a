#pragma once

#include "mtmc/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mtmc {

// splitmix64 (Steele/Lea/Vigna): tiny, portable, and stable across
// platforms, so generated scenarios are byte-identical everywhere.
struct SplitMix64 {
    std::uint64_t state = 0;

    explicit SplitMix64(std::uint64_t seed = 1) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Inclusive range; modulo bias is irrelevant at these range sizes.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(next() %
                                              static_cast<std::uint64_t>(hi - lo + 1));
    }

    bool chance(double p) { return uniform() < p; }
};

// Synthetic world: cameras side by side along a corridor, each seeing a
// fixed span of the x axis, optionally extended so neighboring views
// overlap. Image boxes are a fixed projection of the world point, so truth
// and tracker geometry coincide unless explicitly jittered.
struct CorridorGeometry {
    int cameras = 2;
    double camera_span = 10.0;  // meters seen by one camera
    double overlap = 0.0;       // extension past each boundary, meters

    double world_span() const { return camera_span * cameras; }
    double view_min(int camera) const { return camera_span * (camera - 1) - overlap; }
    double view_max(int camera) const { return camera_span * camera + overlap; }
    bool sees(int camera, double x) const {
        return x >= view_min(camera) && x < view_max(camera);
    }

    Box image_box(int camera, const WorldPoint& p) const {
        const double u = (p.x - view_min(camera)) * 80.0;
        return Box{u - 20.0, 100.0 + p.y * 10.0, 40.0, 100.0};
    }

    Detection detection(int camera, std::int64_t frame, Identity id,
                        const WorldPoint& p) const {
        return Detection{Site{camera, frame}, std::move(id), image_box(camera, p), p};
    }
};

// One tracker-error injection. Operators only ever rewrite the computed
// side; the truth rows they are derived from stay untouched.
struct CorruptionOp {
    enum class Kind { Fragment, Merge, Swap, Drop, Spurious, Jitter };

    Kind kind = Kind::Fragment;
    Identity target_a;
    Identity target_b;
    std::int64_t frame_begin = 0;
    std::int64_t frame_end = 0;  // inclusive
    Identity new_identity;
    int camera = 0;
    WorldPoint position;
    double magnitude = 0;  // jitter amplitude, meters
    std::uint64_t seed = 0;
};

inline std::vector<Detection> apply_corruptions(std::vector<Detection> rows,
                                                const std::vector<CorruptionOp>& ops,
                                                const CorridorGeometry& geometry) {
    for (const CorruptionOp& op : ops) {
        switch (op.kind) {
            case CorruptionOp::Kind::Fragment:
                for (Detection& d : rows)
                    if (d.identity == op.target_a && d.site.frame >= op.frame_begin)
                        d.identity = op.new_identity;
                break;
            case CorruptionOp::Kind::Merge: {
                std::set<Site> taken;
                for (const Detection& d : rows)
                    if (d.identity == op.target_a) taken.insert(d.site);
                // rows that would collide with an existing site keep their
                // old label as a leftover fragment
                for (Detection& d : rows)
                    if (d.identity == op.target_b && !taken.count(d.site))
                        d.identity = op.target_a;
                break;
            }
            case CorruptionOp::Kind::Swap:
                for (Detection& d : rows) {
                    if (d.site.frame < op.frame_begin || d.site.frame > op.frame_end)
                        continue;
                    if (d.identity == op.target_a)
                        d.identity = op.target_b;
                    else if (d.identity == op.target_b)
                        d.identity = op.target_a;
                }
                break;
            case CorruptionOp::Kind::Drop: {
                std::vector<Detection> kept;
                kept.reserve(rows.size());
                for (Detection& d : rows)
                    if (!(d.identity == op.target_a && d.site.frame >= op.frame_begin &&
                          d.site.frame <= op.frame_end))
                        kept.push_back(std::move(d));
                rows = std::move(kept);
                break;
            }
            case CorruptionOp::Kind::Spurious:
                for (std::int64_t f = op.frame_begin; f <= op.frame_end; ++f)
                    rows.push_back(
                        geometry.detection(op.camera, f, op.new_identity, op.position));
                break;
            case CorruptionOp::Kind::Jitter: {
                SplitMix64 noise(op.seed);
                for (Detection& d : rows) {
                    const double dx = (noise.uniform() * 2.0 - 1.0) * op.magnitude;
                    const double dy = (noise.uniform() * 2.0 - 1.0) * op.magnitude;
                    WorldPoint p{d.world->x + dx, d.world->y + dy};
                    d.world = p;
                    d.box = geometry.image_box(d.site.camera, p);
                }
                break;
            }
        }
    }
    return rows;
}

namespace detail {

// Identity-labelled segments laid head to tail starting at `first_frame`.
// The figures are image-plane constructions, so the rows carry boxes only.
inline std::vector<Detection> segment_rows(const CorridorGeometry& geometry, int camera,
                                           std::int64_t first_frame,
                                           const std::vector<std::pair<Identity, int>>& segments,
                                           double x0, double speed) {
    std::vector<Detection> rows;
    std::int64_t frame = first_frame;
    for (const auto& [id, len] : segments) {
        for (int k = 0; k < len; ++k, ++frame) {
            const double x = x0 + speed * static_cast<double>(frame - first_frame);
            Detection d = geometry.detection(camera, frame, id, WorldPoint{x, 1.0});
            d.world.reset();
            rows.push_back(std::move(d));
        }
    }
    return rows;
}

} // namespace detail

enum class Figure1Case { A, B, C };

// One 90-frame truth identity in a single camera; the tracker splits it
// into two computed identities. Case A: one switch at frame 60. Cases B and
// C: eight alternating fragments (seven switches), with the dominant
// identity covering 60 respectively 75 of the 90 frames. Tracker boxes
// coincide with the truth, so only identities differ.
inline Scenario make_figure1(Figure1Case which) {
    CorridorGeometry geometry{1, 100.0, 0.0};
    const double x0 = 2.0, speed = 0.5;
    const std::vector<Detection> truth =
        detail::segment_rows(geometry, 1, 1, {{"A", 90}}, x0, speed);

    std::vector<std::pair<Identity, int>> segments;
    switch (which) {
        case Figure1Case::A:
            segments = {{"1", 60}, {"2", 30}};
            break;
        case Figure1Case::B:
            segments = {{"1", 15}, {"2", 7}, {"1", 15}, {"2", 8},
                        {"1", 15}, {"2", 7}, {"1", 15}, {"2", 8}};
            break;
        case Figure1Case::C:
            segments = {{"1", 19}, {"2", 4}, {"1", 19}, {"2", 4},
                        {"1", 19}, {"2", 4}, {"1", 18}, {"2", 3}};
            break;
    }
    const std::vector<Detection> computed =
        detail::segment_rows(geometry, 1, 1, segments, x0, speed);
    return build_scenario(truth, computed, {CameraInfo{1}}, OverlapMode::iou(0.5));
}

enum class Figure2Case { A, B };

// Two cameras in sequence, thirty frames each, one truth identity crossing
// between them. Case A: the handover itself is correct but the last frame
// in camera 1 gets a spurious second identity. Case B: the handover is
// wrong, masked by a one-frame fragment of the first identity at the start
// of camera 2.
inline Scenario make_figure2(Figure2Case which) {
    CorridorGeometry geometry{2, 10.0, 0.0};
    std::vector<Detection> truth, computed;
    auto emit = [&](std::vector<Detection>& dst, Identity id, std::int64_t lo,
                    std::int64_t hi) {
        for (std::int64_t f = lo; f <= hi; ++f) {
            const double x = 0.5 + 0.65 * static_cast<double>(f - 1);
            const int camera = f <= 30 ? 1 : 2;
            Detection d = geometry.detection(camera, f, id, WorldPoint{x, 1.0});
            d.world.reset();
            dst.push_back(std::move(d));
        }
    };
    emit(truth, "A", 1, 60);
    if (which == Figure2Case::A) {
        emit(computed, "1", 1, 29);
        emit(computed, "2", 30, 30);
        emit(computed, "1", 31, 60);
    } else {
        emit(computed, "1", 1, 31);
        emit(computed, "2", 32, 60);
    }
    return build_scenario(truth, computed, {CameraInfo{1}, CameraInfo{2}},
                          OverlapMode::iou(0.5));
}

struct RandomScenarioParams {
    int cameras = 2;
    int identities = 6;
    int mean_length = 40;
    double overlap_fraction = 0.0;  // 0..1: how far views extend past their boundary
    double fragment_rate = 0;
    double merge_rate = 0;
    double swap_rate = 0;
    double drop_rate = 0;
    double spurious_rate = 0;
    double jitter = 0;  // meters
    OverlapMode mode = OverlapMode{OverlapMode::Kind::Iou, 0.5};
    std::uint64_t seed = 1;
};

struct SyntheticScenario {
    Scenario clean;      // computed side identical to the truth
    Scenario corrupted;  // computed side with the sampled errors applied
    std::vector<CorruptionOp> ops;
};

inline void validate(const RandomScenarioParams& p) {
    if (p.cameras < 1) throw ValidationError("random scenario needs at least one camera");
    if (p.identities < 1) throw ValidationError("random scenario needs at least one identity");
    if (p.mean_length < 2) throw ValidationError("mean trajectory length must be at least 2");
    if (!(p.overlap_fraction >= 0.0 && p.overlap_fraction < 1.0))
        throw ValidationError("overlap fraction must lie in [0,1)");
    for (double rate : {p.fragment_rate, p.merge_rate, p.swap_rate, p.drop_rate,
                        p.spurious_rate})
        if (!(rate >= 0.0 && rate <= 1.0))
            throw ValidationError("corruption rates must lie in [0,1]");
    if (p.jitter < 0.0) throw ValidationError("jitter must be non-negative");
}

// Ground-truth identities walk piecewise-linear paths along the corridor;
// the computed side starts as a relabelled copy and picks up errors drawn
// from the corruption rates. Identical (params, seed) pairs reproduce the
// same scenario byte for byte.
inline SyntheticScenario random_scenario(const RandomScenarioParams& p) {
    validate(p);
    SplitMix64 rng(p.seed);
    CorridorGeometry geometry{p.cameras, 10.0, p.overlap_fraction * 5.0};

    const std::int64_t horizon = std::max<std::int64_t>(3 * p.mean_length, 60);
    std::vector<Detection> truth_rows;
    struct Span {
        Identity truth_id, computed_id;
        std::int64_t first = 0, last = 0;
    };
    std::vector<Span> spans;

    for (int k = 1; k <= p.identities; ++k) {
        const Identity truth_id = "T" + std::to_string(k);
        const Identity computed_id = "C" + std::to_string(k);
        const std::int64_t start = rng.uniform_int(1, horizon);
        const std::int64_t length =
            std::max<std::int64_t>(2, p.mean_length / 2 + rng.uniform_int(0, p.mean_length));
        const double x0 = rng.uniform() * geometry.world_span();
        const double y0 = rng.uniform() * 3.0;
        const double speed = (rng.chance(0.5) ? 1.0 : -1.0) * (0.05 + rng.uniform() * 0.2);

        Span span{truth_id, computed_id, start, start};
        bool any = false;
        const double period = 2.0 * geometry.world_span();
        for (std::int64_t t = 0; t < length; ++t) {
            // piecewise-linear path bouncing off the corridor ends
            double x = std::fmod(x0 + speed * static_cast<double>(t), period);
            if (x < 0.0) x += period;
            if (x >= geometry.world_span()) x = period - x;
            const WorldPoint point{x, y0 + 0.005 * static_cast<double>(t)};
            const std::int64_t frame = start + t;
            for (int camera = 1; camera <= p.cameras; ++camera) {
                if (!geometry.sees(camera, x)) continue;
                truth_rows.push_back(geometry.detection(camera, frame, truth_id, point));
                span.last = frame;
                any = true;
            }
        }
        if (any) spans.push_back(std::move(span));
    }

    std::vector<Detection> computed_rows = truth_rows;
    std::unordered_map<std::string, std::string> relabel;
    for (const Span& span : spans) relabel.emplace(span.truth_id, span.computed_id);
    for (Detection& d : computed_rows) d.identity = relabel.at(d.identity);

    std::vector<CorruptionOp> ops;
    int fresh = p.identities;
    auto fresh_id = [&] { return "C" + std::to_string(++fresh); };

    for (const Span& span : spans) {
        if (span.last - span.first < 2) continue;
        if (rng.chance(p.fragment_rate)) {
            CorruptionOp op;
            op.kind = CorruptionOp::Kind::Fragment;
            op.target_a = span.computed_id;
            op.frame_begin = rng.uniform_int(span.first + 1, span.last);
            op.new_identity = fresh_id();
            ops.push_back(op);
        }
    }
    for (std::size_t i = 0; i + 1 < spans.size(); ++i) {
        if (rng.chance(p.merge_rate)) {
            CorruptionOp op;
            op.kind = CorruptionOp::Kind::Merge;
            op.target_a = spans[i].computed_id;
            op.target_b = spans[i + 1].computed_id;
            ops.push_back(op);
        }
    }
    for (std::size_t i = 0; i + 1 < spans.size(); ++i) {
        if (rng.chance(p.swap_rate)) {
            CorruptionOp op;
            op.kind = CorruptionOp::Kind::Swap;
            op.target_a = spans[i].computed_id;
            op.target_b = spans[i + 1].computed_id;
            op.frame_begin = rng.uniform_int(
                std::min(spans[i].first, spans[i + 1].first),
                std::max(spans[i].last, spans[i + 1].last));
            op.frame_end = std::max(spans[i].last, spans[i + 1].last);
            ops.push_back(op);
        }
    }
    for (const Span& span : spans) {
        if (rng.chance(p.drop_rate)) {
            const std::int64_t len = span.last - span.first + 1;
            const std::int64_t cut = std::max<std::int64_t>(1, len / 4);
            CorruptionOp op;
            op.kind = CorruptionOp::Kind::Drop;
            op.target_a = span.computed_id;
            op.frame_begin = span.first + rng.uniform_int(0, len - cut);
            op.frame_end = op.frame_begin + cut - 1;
            ops.push_back(op);
        }
    }
    for (std::size_t i = 0; i < spans.size(); ++i) {
        if (rng.chance(p.spurious_rate)) {
            CorruptionOp op;
            op.kind = CorruptionOp::Kind::Spurious;
            op.new_identity = fresh_id();
            op.camera = static_cast<int>(rng.uniform_int(1, p.cameras));
            op.frame_begin = rng.uniform_int(1, horizon);
            op.frame_end = op.frame_begin + rng.uniform_int(1, 7);
            const double lo = std::max(0.0, geometry.view_min(op.camera));
            const double hi = std::min(geometry.world_span(), geometry.view_max(op.camera));
            op.position = WorldPoint{lo + rng.uniform() * (hi - lo), rng.uniform() * 3.0};
            ops.push_back(op);
        }
    }
    if (p.jitter > 0.0) {
        CorruptionOp op;
        op.kind = CorruptionOp::Kind::Jitter;
        op.magnitude = p.jitter;
        op.seed = rng.next();
        ops.push_back(op);
    }

    std::vector<CameraInfo> cameras;
    for (int c = 1; c <= p.cameras; ++c) cameras.push_back(CameraInfo{c});

    SyntheticScenario out;
    out.ops = ops;
    out.clean = build_scenario(truth_rows, computed_rows, cameras, p.mode);
    out.corrupted = build_scenario(
        truth_rows, apply_corruptions(std::move(computed_rows), ops, geometry), cameras,
        p.mode);
    return out;
}

} // namespace mtmc
