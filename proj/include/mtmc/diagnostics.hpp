#pragma once

#include "mtmc/event_measures.hpp"
#include "mtmc/id_measures.hpp"
#include "mtmc/scenario.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace mtmc {

// Extra error incurred by cross-camera association: identity errors of the
// joint match minus the summed errors of the per-camera matches. The joint
// problem carries the cross-camera consistency constraint, so the
// difference is never negative.
struct HandoverDifficulty {
    std::int64_t e_multi = 0;
    std::int64_t e_single = 0;
    std::int64_t difference = 0;
    IdScores multi;
    IdScores single;
    double idp_delta = 0;
    double idr_delta = 0;
    double idf1_delta = 0;
    bool single_camera = false;  // difference is trivially 0
};

inline HandoverDifficulty handover_difficulty(const Scenario& s) {
    HandoverDifficulty d;
    const TruthToResultMatch multi = match_truth_to_result(s);
    d.multi = id_scores(multi);
    d.e_multi = multi.idfp + multi.idfn;

    std::int64_t idtp = 0, idfp = 0, idfn = 0;
    for (const CameraInfo& cam : s.cameras) {
        const TruthToResultMatch m = match_truth_to_result(restrict_to_camera(s, cam.id));
        idtp += m.idtp;
        idfp += m.idfp;
        idfn += m.idfn;
    }
    d.e_single = idfp + idfn;
    d.single.idtp = idtp;
    d.single.idfp = idfp;
    d.single.idfn = idfn;
    d.single.idp = idtp + idfp > 0 ? static_cast<double>(idtp) / (idtp + idfp) : 0.0;
    d.single.idr = idtp + idfn > 0 ? static_cast<double>(idtp) / (idtp + idfn) : 0.0;
    d.single.idf1 =
        2 * idtp + idfp + idfn > 0 ? 2.0 * idtp / (2.0 * idtp + idfp + idfn) : 0.0;

    d.difference = d.e_multi - d.e_single;
    d.idp_delta = d.single.idp - d.multi.idp;
    d.idr_delta = d.single.idr - d.multi.idr;
    d.idf1_delta = d.single.idf1 - d.multi.idf1;
    d.single_camera = s.cameras.size() <= 1;
    return d;
}

enum class HandoverClass {
    Clean = 0,
    FragButCorrect,
    MergeButCorrect,
    FragMissed,   // no event error declared, handover essentially wrong
    MergeMissed,  // the merge counterpart
    Incorrect,    // event error declared and the handover is wrong
};

inline const char* handover_class_name(HandoverClass c) {
    switch (c) {
        case HandoverClass::Clean: return "clean";
        case HandoverClass::FragButCorrect: return "frag-but-correct";
        case HandoverClass::MergeButCorrect: return "merge-but-correct";
        case HandoverClass::FragMissed: return "correct-but-frag-missed";
        case HandoverClass::MergeMissed: return "correct-but-merge-missed";
        case HandoverClass::Incorrect: return "incorrect";
    }
    return "?";
}

struct HandoverCase {
    Identity truth_identity;
    int camera_from = 0;
    int camera_to = 0;
    std::int64_t frame_from = 0;
    std::int64_t frame_to = 0;
    HandoverClass cls = HandoverClass::Clean;
    std::int64_t fragment_length = 0;  // offending fragment, in frames
};

struct HandoverReport {
    std::vector<HandoverCase> cases;
    std::array<std::int64_t, 6> histogram{};
    std::int64_t transitions = 0;

    std::int64_t count(HandoverClass c) const {
        return histogram[static_cast<std::size_t>(c)];
    }
};

namespace detail {

inline const ClearObservation* find_observation(const std::vector<ClearObservation>& obs,
                                                const Site& site) {
    auto it = std::lower_bound(obs.begin(), obs.end(), site,
                               [](const ClearObservation& o, const Site& s) {
                                   return o.site < s;
                               });
    if (it != obs.end() && it->site == site) return &*it;
    return nullptr;
}

// Length of the contiguous streak of observations matched to `partner`
// within camera `camera`, walking from `start` in the given direction.
inline std::int64_t matched_streak(const std::vector<ClearObservation>& obs,
                                   std::size_t start, int step, const Identity& partner,
                                   int camera) {
    std::int64_t n = 0;
    std::size_t i = start;
    for (;;) {
        const ClearObservation& o = obs[i];
        if (o.site.camera != camera || !o.matched() || *o.partner != partner) break;
        ++n;
        if (step < 0) {
            if (i == 0) break;
            --i;
        } else {
            ++i;
            if (i >= obs.size()) break;
        }
    }
    return n;
}

inline std::size_t observation_index(const std::vector<ClearObservation>& obs,
                                     const Site& site) {
    auto it = std::lower_bound(obs.begin(), obs.end(), site,
                               [](const ClearObservation& o, const Site& s) {
                                   return o.site < s;
                               });
    return static_cast<std::size_t>(it - obs.begin());
}

} // namespace detail

// Compares, for every ground-truth cross-camera transition, the event-based
// verdict (was a mismatch declared at the handover?) against the
// identity-based one (does the trajectory's matched identity dominate both
// camera segments adjacent to the transition?).
inline HandoverReport classify_handovers(const Scenario& s, const TruthToResultMatch& match,
                                         const ClearHistory& history) {
    std::map<Identity, const Trajectory*> computed_by_id;
    for (const Trajectory& t : s.computed) computed_by_id.emplace(t.identity, &t);

    HandoverReport report;
    for (const Trajectory& tau : s.truth) {
        const auto& dets = tau.detections;
        auto history_it = history.truth.find(tau.identity);
        const std::vector<ClearObservation>* timeline =
            history_it != history.truth.end() ? &history_it->second : nullptr;

        auto partner_match = match.gamma_m.find(tau.identity);
        const Trajectory* gamma_matched =
            partner_match != match.gamma_m.end() ? computed_by_id.at(partner_match->second)
                                                 : nullptr;

        for (std::size_t i = 1; i < dets.size(); ++i) {
            if (dets[i].site.camera == dets[i - 1].site.camera) continue;
            ++report.transitions;

            // Maximal same-camera runs around the transition.
            std::size_t a_begin = i - 1;
            while (a_begin > 0 && dets[a_begin - 1].site.camera == dets[i - 1].site.camera)
                --a_begin;
            std::size_t b_end = i;
            while (b_end + 1 < dets.size() &&
                   dets[b_end + 1].site.camera == dets[i].site.camera)
                ++b_end;

            auto covered_by_match = [&](std::size_t lo, std::size_t hi) {
                std::int64_t n = 0;
                if (gamma_matched == nullptr) return n;
                for (std::size_t k = lo; k <= hi; ++k)
                    if (!is_miss(&dets[k], gamma_matched->at_site(dets[k].site), s.mode))
                        ++n;
                return n;
            };
            const auto run_a_len = static_cast<std::int64_t>(i - a_begin);
            const auto run_b_len = static_cast<std::int64_t>(b_end - i + 1);
            const bool id_correct = gamma_matched != nullptr &&
                                    2 * covered_by_match(a_begin, i - 1) > run_a_len &&
                                    2 * covered_by_match(i, b_end) > run_b_len;

            const ClearObservation* prev_obs =
                timeline ? detail::find_observation(*timeline, dets[i - 1].site) : nullptr;
            const ClearObservation* next_obs =
                timeline ? detail::find_observation(*timeline, dets[i].site) : nullptr;
            std::optional<Identity> g1 =
                prev_obs && prev_obs->matched() ? prev_obs->partner : std::nullopt;
            std::optional<Identity> g2 =
                next_obs && next_obs->matched() ? next_obs->partner : std::nullopt;

            const bool frag_declared = g1 && g2 && *g1 != *g2;

            // Merge at the handover: the identity picking tau up was tied to
            // a different truth just before.
            bool merge_declared = false;
            const ClearObservation* g2_prev = nullptr;
            if (g2) {
                const auto& ctimeline = history.computed.at(*g2);
                std::size_t pos = detail::observation_index(ctimeline, dets[i].site);
                while (pos > 0) {
                    --pos;
                    if (ctimeline[pos].matched()) {
                        g2_prev = &ctimeline[pos];
                        break;
                    }
                }
                merge_declared = g2_prev != nullptr && *g2_prev->partner != tau.identity;
            }

            HandoverCase item;
            item.truth_identity = tau.identity;
            item.camera_from = dets[i - 1].site.camera;
            item.camera_to = dets[i].site.camera;
            item.frame_from = dets[i - 1].site.frame;
            item.frame_to = dets[i].site.frame;

            const Identity matched_id = gamma_matched ? gamma_matched->identity : Identity{};
            auto backward_run = [&](const Identity& id) {
                if (!timeline || !prev_obs) return std::int64_t{0};
                const std::size_t pos = detail::observation_index(*timeline, dets[i - 1].site);
                return detail::matched_streak(*timeline, pos, -1, id, item.camera_from);
            };
            auto forward_run = [&](const Identity& id) {
                if (!timeline || !next_obs) return std::int64_t{0};
                const std::size_t pos = detail::observation_index(*timeline, dets[i].site);
                return detail::matched_streak(*timeline, pos, +1, id, item.camera_to);
            };

            if (id_correct) {
                if (frag_declared) {
                    item.cls = HandoverClass::FragButCorrect;
                    if (*g1 != matched_id)
                        item.fragment_length = backward_run(*g1);
                    else if (*g2 != matched_id)
                        item.fragment_length = forward_run(*g2);
                    else
                        item.fragment_length =
                            std::min(backward_run(*g1), forward_run(*g2));
                } else if (merge_declared) {
                    item.cls = HandoverClass::MergeButCorrect;
                    const auto& ctimeline = history.computed.at(*g2);
                    const std::size_t pos =
                        detail::observation_index(ctimeline, g2_prev->site);
                    item.fragment_length = detail::matched_streak(
                        ctimeline, pos, -1, *g2_prev->partner, g2_prev->site.camera);
                } else {
                    item.cls = HandoverClass::Clean;
                }
            } else if (frag_declared || merge_declared) {
                item.cls = HandoverClass::Incorrect;
            } else if (g1 && g2 && *g1 == *g2) {
                // A single identity spuriously bridges the transition; the
                // side hosting the bulk of the bridge tells which error the
                // event scan missed.
                const std::int64_t back = backward_run(*g1);
                const std::int64_t forward = forward_run(*g2);
                item.cls = back >= forward ? HandoverClass::FragMissed
                                           : HandoverClass::MergeMissed;
                item.fragment_length = std::min(back, forward);
            } else {
                item.cls = HandoverClass::FragMissed;
            }

            ++report.histogram[static_cast<std::size_t>(item.cls)];
            report.cases.push_back(std::move(item));
        }
    }
    return report;
}

// One row of the per-camera summary table (camera = nullopt for the global
// multi-camera row). Mirrors the usual per-camera benchmark layout:
// detection errors and CLEAR scores, then the identity scores.
struct PerCameraRow {
    std::optional<int> camera;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    std::int64_t ids = 0;  // truth-side identity switches (fragmentations)
    std::int64_t frg = 0;
    double mota = 0;
    double motp = 0;
    std::int64_t gt = 0;
    std::int64_t mt = 0;
    std::int64_t ml = 0;
    double mcta = 0;
    IdScores id;
};

namespace detail {

inline PerCameraRow evaluate_row(const Scenario& s, MotaMismatches which) {
    PerCameraRow row;
    row.gt = static_cast<std::int64_t>(s.truth.size());
    row.id = id_scores(match_truth_to_result(s));

    const ClearHistory history = clear_match(s);
    const MismatchCounts mismatches = count_mismatches(history);
    row.fp = history.fp;
    row.fn = history.fn;
    row.ids = mismatches.phi();
    if (s.total_truth_length() > 0) {
        const auto [mota, motp] = mota_motp(s, history, mismatches, which);
        row.mota = mota;
        row.motp = motp;
    }
    const TrackCoverage cover = mt_ml_frg(s, history);
    row.mt = cover.mt;
    row.ml = cover.ml;
    row.frg = cover.frg;
    row.mcta = mcta(s, history, mismatches);
    return row;
}

} // namespace detail

// One row per camera evaluated in isolation, then the global row over the
// full scenario.
inline std::vector<PerCameraRow> per_camera_report(const Scenario& s,
                                                   MotaMismatches which = MotaMismatches::Phi) {
    std::vector<PerCameraRow> rows;
    rows.reserve(s.cameras.size() + 1);
    for (const CameraInfo& cam : s.cameras) {
        PerCameraRow row = detail::evaluate_row(restrict_to_camera(s, cam.id), which);
        row.camera = cam.id;
        rows.push_back(std::move(row));
    }
    rows.push_back(detail::evaluate_row(s, which));
    return rows;
}

} // namespace mtmc
