#pragma once

#include "mtmc/assignment.hpp"
#include "mtmc/detail/parallel.hpp"
#include "mtmc/geometry.hpp"
#include "mtmc/scenario.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mtmc {

// Which mismatch count enters the MOTA error sum: fragmentations only, or
// fragmentations plus merges.
enum class MotaMismatches { Phi, Mu };

struct ClearObservation {
    Site site;
    std::optional<Identity> partner;
    double quality = 0;  // IoU of the match, or ground-plane distance

    bool matched() const { return partner.has_value(); }
};

// Per-frame matching outcome for every detection, grouped by identity and
// time-ordered, plus the aggregate detection tallies.
struct ClearHistory {
    std::map<Identity, std::vector<ClearObservation>> truth;
    std::map<Identity, std::vector<ClearObservation>> computed;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    double quality_sum = 0;  // over true-positive matches
};

namespace detail {

struct FrameSlot {
    std::vector<std::pair<std::size_t, const Detection*>> truth;
    std::vector<std::pair<std::size_t, const Detection*>> computed;
};

inline double match_cost(const Detection& t, const Detection& c, const OverlapMode& mode) {
    if (mode.kind == OverlapMode::Kind::Iou) return 1.0 - iou(*t.box, *c.box);
    const double dx = t.world->x - c.world->x;
    const double dy = t.world->y - c.world->y;
    return std::sqrt(dx * dx + dy * dy);
}

inline double match_quality(const Detection& t, const Detection& c, const OverlapMode& mode) {
    if (mode.kind == OverlapMode::Kind::Iou) return iou(*t.box, *c.box);
    return match_cost(t, c, mode);
}

// Sequential per-frame matcher for one camera.
inline ClearHistory clear_match_camera(const Scenario& s,
                                       const std::map<std::int64_t, FrameSlot>& frames) {
    ClearHistory h;
    const double unmatch_cost =
        s.mode.kind == OverlapMode::Kind::Iou ? 1.0 - s.mode.delta : s.mode.delta;

    std::map<std::size_t, std::size_t> current;  // truth index -> computed index
    for (const auto& [frame, slot] : frames) {
        std::map<std::size_t, const Detection*> truth_here, computed_here;
        for (const auto& [idx, det] : slot.truth) truth_here.emplace(idx, det);
        for (const auto& [idx, det] : slot.computed) computed_here.emplace(idx, det);

        std::vector<std::pair<std::size_t, std::size_t>> matches;
        for (auto it = current.begin(); it != current.end();) {
            auto t = truth_here.find(it->first);
            auto c = computed_here.find(it->second);
            if (t != truth_here.end() && c != computed_here.end() &&
                !is_miss(t->second, c->second, s.mode)) {
                matches.emplace_back(it->first, it->second);
                truth_here.erase(t);
                computed_here.erase(c);
                ++it;
            } else {
                it = current.erase(it);
            }
        }

        // Remaining detections: optimal gated assignment. The square layout
        // gives every node its own unmatch slot, so inadmissible pairs are
        // never forced.
        std::vector<std::pair<std::size_t, const Detection*>> ut(truth_here.begin(),
                                                                 truth_here.end());
        std::vector<std::pair<std::size_t, const Detection*>> uc(computed_here.begin(),
                                                                 computed_here.end());
        if (!ut.empty() && !uc.empty()) {
            const std::size_t nt = ut.size(), nc = uc.size(), n = nt + nc;
            const double forbidden = 2.0 * unmatch_cost * static_cast<double>(n + 1) + 1.0;
            CostMatrix<double> m(n, n, forbidden);
            for (std::size_t i = 0; i < nt; ++i)
                for (std::size_t j = 0; j < nc; ++j)
                    if (!is_miss(ut[i].second, uc[j].second, s.mode))
                        m.at(i, j) = match_cost(*ut[i].second, *uc[j].second, s.mode);
            for (std::size_t i = 0; i < nt; ++i) m.at(i, nc + i) = unmatch_cost;
            for (std::size_t j = 0; j < nc; ++j) m.at(nt + j, j) = unmatch_cost;
            for (std::size_t i = nt; i < n; ++i)
                for (std::size_t j = nc; j < n; ++j) m.at(i, j) = 0.0;

            const auto solution = solve_min_cost_assignment(m);
            for (std::size_t i = 0; i < nt; ++i) {
                const std::size_t j = solution.row_to_col[i];
                if (j < nc && !is_miss(ut[i].second, uc[j].second, s.mode)) {
                    matches.emplace_back(ut[i].first, uc[j].first);
                    current.emplace(ut[i].first, uc[j].first);
                }
            }
        }

        std::map<std::size_t, std::size_t> matched_t, matched_c;
        for (const auto& [ti, ci] : matches) {
            matched_t.emplace(ti, ci);
            matched_c.emplace(ci, ti);
        }
        for (const auto& [idx, det] : slot.truth) {
            ClearObservation obs{det->site, std::nullopt, 0.0};
            auto it = matched_t.find(idx);
            if (it != matched_t.end()) {
                const Detection* partner = nullptr;
                for (const auto& [cidx, cdet] : slot.computed)
                    if (cidx == it->second) partner = cdet;
                obs.partner = s.computed[it->second].identity;
                obs.quality = match_quality(*det, *partner, s.mode);
                ++h.tp;
                h.quality_sum += obs.quality;
            } else {
                ++h.fn;
            }
            h.truth[s.truth[idx].identity].push_back(obs);
        }
        for (const auto& [idx, det] : slot.computed) {
            ClearObservation obs{det->site, std::nullopt, 0.0};
            auto it = matched_c.find(idx);
            if (it != matched_c.end()) {
                const Detection* partner = nullptr;
                for (const auto& [tidx, tdet] : slot.truth)
                    if (tidx == it->second) partner = tdet;
                obs.partner = s.truth[it->second].identity;
                obs.quality = match_quality(*partner, *det, s.mode);
            } else {
                ++h.fp;
            }
            h.computed[s.computed[idx].identity].push_back(obs);
        }
    }
    return h;
}

} // namespace detail

// Event-based matching: each camera processed independently, frames in
// order. Matches surviving from the previous processed frame are preserved
// while both detections exist and still overlap; everything else goes
// through a fresh min-cost assignment gated at the overlap threshold.
inline ClearHistory clear_match(const Scenario& s) {
    std::map<int, std::map<std::int64_t, detail::FrameSlot>> by_camera;
    for (const CameraInfo& cam : s.cameras) by_camera[cam.id];
    for (std::size_t i = 0; i < s.truth.size(); ++i)
        for (const Detection& d : s.truth[i].detections)
            by_camera[d.site.camera][d.site.frame].truth.emplace_back(i, &d);
    for (std::size_t i = 0; i < s.computed.size(); ++i)
        for (const Detection& d : s.computed[i].detections)
            by_camera[d.site.camera][d.site.frame].computed.emplace_back(i, &d);

    std::vector<const std::map<std::int64_t, detail::FrameSlot>*> cameras;
    cameras.reserve(by_camera.size());
    for (const auto& [id, frames] : by_camera) cameras.push_back(&frames);

    std::vector<ClearHistory> partial(cameras.size());
    detail::parallel_for(cameras.size(),
                         [&](std::size_t i) { partial[i] = detail::clear_match_camera(s, *cameras[i]); });

    ClearHistory h;
    for (ClearHistory& part : partial) {
        h.tp += part.tp;
        h.fp += part.fp;
        h.fn += part.fn;
        h.quality_sum += part.quality_sum;
        for (auto& [id, obs] : part.truth) {
            auto& dst = h.truth[id];
            dst.insert(dst.end(), obs.begin(), obs.end());
        }
        for (auto& [id, obs] : part.computed) {
            auto& dst = h.computed[id];
            dst.insert(dst.end(), obs.begin(), obs.end());
        }
    }
    auto time_order = [](std::vector<ClearObservation>& obs) {
        std::sort(obs.begin(), obs.end(),
                  [](const ClearObservation& a, const ClearObservation& b) {
                      return a.site < b.site;
                  });
    };
    for (auto& [id, obs] : h.truth) time_order(obs);
    for (auto& [id, obs] : h.computed) time_order(obs);
    return h;
}

struct MismatchCounts {
    std::int64_t phi_w = 0;
    std::int64_t phi_h = 0;
    std::int64_t gamma_w = 0;
    std::int64_t gamma_h = 0;

    std::int64_t phi() const { return phi_w + phi_h; }
    std::int64_t gamma() const { return gamma_w + gamma_h; }
    std::int64_t mu() const { return phi() + gamma(); }
};

// Fragmentations: a truth identity's matched computed identity changes
// between consecutive matched observations. Merges are the mirror count on
// computed identities. The pair is a handover when the two observations
// come from different cameras, within-camera otherwise.
inline MismatchCounts count_mismatches(const ClearHistory& history) {
    MismatchCounts counts;
    auto scan = [](const std::map<Identity, std::vector<ClearObservation>>& side,
                   std::int64_t& within, std::int64_t& handover) {
        for (const auto& [id, observations] : side) {
            const ClearObservation* prev = nullptr;
            for (const ClearObservation& obs : observations) {
                if (!obs.matched()) continue;
                if (prev && *prev->partner != *obs.partner) {
                    if (prev->site.camera == obs.site.camera)
                        ++within;
                    else
                        ++handover;
                }
                prev = &obs;
            }
        }
    };
    scan(history.truth, counts.phi_w, counts.phi_h);
    scan(history.computed, counts.gamma_w, counts.gamma_h);
    return counts;
}

inline std::pair<double, double> mota_motp(const Scenario& s, const ClearHistory& history,
                                           const MismatchCounts& mismatches,
                                           MotaMismatches which = MotaMismatches::Phi) {
    const std::int64_t total = s.total_truth_length();
    if (total == 0)
        throw UndefinedMeasureError("MOTA is undefined with no true detections");
    const std::int64_t mm =
        which == MotaMismatches::Phi ? mismatches.phi() : mismatches.mu();
    const double mota =
        1.0 - static_cast<double>(history.fn + history.fp + mm) / static_cast<double>(total);

    double motp = 0.0;
    if (history.tp > 0) {
        const double mean = history.quality_sum / static_cast<double>(history.tp);
        motp = s.mode.kind == OverlapMode::Kind::Iou ? mean : 1.0 - mean / s.mode.delta;
    }
    return {mota, motp};
}

struct TrackCoverage {
    std::int64_t mt = 0;   // trajectories matched on at least 80% of their length
    std::int64_t ml = 0;   // matched on at most 20%
    std::int64_t frg = 0;  // interruptions of matched status
};

inline TrackCoverage mt_ml_frg(const Scenario& s, const ClearHistory& history) {
    TrackCoverage out;
    for (const Trajectory& tau : s.truth) {
        auto it = history.truth.find(tau.identity);
        std::int64_t matched = 0, runs = 0;
        bool in_run = false;
        if (it != history.truth.end()) {
            for (const ClearObservation& obs : it->second) {
                if (obs.matched()) {
                    ++matched;
                    if (!in_run) ++runs;
                    in_run = true;
                } else {
                    in_run = false;
                }
            }
        }
        const double ratio = static_cast<double>(matched) / static_cast<double>(tau.length());
        if (ratio >= 0.8) ++out.mt;
        if (ratio <= 0.2) ++out.ml;
        if (runs > 1) out.frg += runs - 1;
    }
    return out;
}

// Ground-truth transition counts for the MCTA normalizers: consecutive
// detections of one truth identity in the same camera (T^w) or across
// cameras (T^h).
struct TransitionCounts {
    std::int64_t within = 0;
    std::int64_t handover = 0;
};

inline TransitionCounts truth_transitions(const Scenario& s) {
    TransitionCounts t;
    for (const Trajectory& tau : s.truth) {
        for (std::size_t i = 1; i < tau.detections.size(); ++i) {
            if (tau.detections[i].site.camera == tau.detections[i - 1].site.camera)
                ++t.within;
            else
                ++t.handover;
        }
    }
    return t;
}

// MCTA: F1 times a within-camera mismatch term times a handover mismatch
// term. A term with a zero denominator is 1 (no opportunity for that error
// class); terms are floored at 0 to keep the product in [0,1].
inline double mcta(const Scenario& s, const ClearHistory& history,
                   const MismatchCounts& mismatches) {
    const std::int64_t p_den = history.tp + history.fp;
    const std::int64_t r_den = history.tp + history.fn;
    const double p = p_den > 0 ? static_cast<double>(history.tp) / p_den : 0.0;
    const double r = r_den > 0 ? static_cast<double>(history.tp) / r_den : 0.0;
    const double f1 = p + r > 0 ? 2.0 * p * r / (p + r) : 0.0;

    const TransitionCounts t = truth_transitions(s);
    const std::int64_t mw = mismatches.phi_w + mismatches.gamma_w;
    const std::int64_t mh = mismatches.phi_h + mismatches.gamma_h;
    const double within =
        t.within > 0 ? std::max(0.0, 1.0 - static_cast<double>(mw) / t.within) : 1.0;
    const double handover =
        t.handover > 0 ? std::max(0.0, 1.0 - static_cast<double>(mh) / t.handover) : 1.0;
    return f1 * within * handover;
}

struct EventScores {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    MismatchCounts mismatches;
    double mota = 0;
    double motp = 0;
    double precision = 0;
    double recall = 0;
    std::int64_t mt = 0;
    std::int64_t ml = 0;
    std::int64_t frg = 0;
    double mcta = 0;
};

inline EventScores evaluate_events(const Scenario& s,
                                   MotaMismatches which = MotaMismatches::Phi) {
    const ClearHistory history = clear_match(s);
    EventScores e;
    e.tp = history.tp;
    e.fp = history.fp;
    e.fn = history.fn;
    e.mismatches = count_mismatches(history);
    const auto [mota, motp] = mota_motp(s, history, e.mismatches, which);
    e.mota = mota;
    e.motp = motp;
    e.precision = e.tp + e.fp > 0 ? static_cast<double>(e.tp) / (e.tp + e.fp) : 0.0;
    e.recall = e.tp + e.fn > 0 ? static_cast<double>(e.tp) / (e.tp + e.fn) : 0.0;
    const TrackCoverage cover = mt_ml_frg(s, history);
    e.mt = cover.mt;
    e.ml = cover.ml;
    e.frg = cover.frg;
    e.mcta = mcta(s, history, e.mismatches);
    return e;
}

} // namespace mtmc
