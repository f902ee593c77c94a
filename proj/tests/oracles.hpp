// Test-only reference implementations: exhaustive enumeration oracles and
// small randomized scenario generators. Deliberately naive and independent
// of the library's solver and merge-walk code paths.
#pragma once

#include "mtmc/mtmc.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <vector>

namespace oracles {

// Minimum assignment cost by trying all n! permutations.
template <typename Cost>
Cost brute_force_assignment(const mtmc::CostMatrix<Cost>& m) {
    std::vector<std::size_t> cols(m.rows);
    std::iota(cols.begin(), cols.end(), 0);
    Cost best = std::numeric_limits<Cost>::max();
    do {
        Cost total{};
        for (std::size_t r = 0; r < m.rows; ++r) total += m.at(r, cols[r]);
        best = std::min(best, total);
    } while (std::next_permutation(cols.begin(), cols.end()));
    return best;
}

// Pair cost recomputed the slow way: every site of each trajectory checked
// one by one with a linear scan of the partner.
inline std::int64_t slow_pair_cost(const mtmc::Trajectory& tau, const mtmc::Trajectory& gamma,
                                   const mtmc::OverlapMode& mode) {
    std::int64_t cost = 0;
    for (const mtmc::Detection& d : tau.detections) {
        const mtmc::Detection* partner = nullptr;
        for (const mtmc::Detection& g : gamma.detections)
            if (g.site == d.site) partner = &g;
        if (mtmc::is_miss(&d, partner, mode)) ++cost;
    }
    for (const mtmc::Detection& g : gamma.detections) {
        const mtmc::Detection* partner = nullptr;
        for (const mtmc::Detection& d : tau.detections)
            if (d.site == g.site) partner = &d;
        if (mtmc::is_miss(partner, &g, mode)) ++cost;
    }
    return cost;
}

// Minimum truth-to-result cost over every possible partial injection of
// truth trajectories into computed ones, unmatched trajectories paying
// their full length.
inline std::int64_t exhaustive_match_cost(const mtmc::Scenario& s) {
    const std::size_t nc = s.computed.size();
    std::vector<bool> used(nc, false);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();

    auto recurse = [&](auto&& self, std::size_t ti, std::int64_t acc) -> void {
        if (ti == s.truth.size()) {
            std::int64_t total = acc;
            for (std::size_t j = 0; j < nc; ++j)
                if (!used[j]) total += s.computed[j].length();
            best = std::min(best, total);
            return;
        }
        self(self, ti + 1, acc + s.truth[ti].length());  // unmatched truth
        for (std::size_t j = 0; j < nc; ++j) {
            if (used[j]) continue;
            used[j] = true;
            self(self, ti + 1, acc + slow_pair_cost(s.truth[ti], s.computed[j], s.mode));
            used[j] = false;
        }
    };
    recurse(recurse, 0, 0);
    return best;
}

// Random small scenario with varied spatial agreement: positions come from
// a coarse grid so pairs hit, graze, and miss the overlap threshold,
// including exact ties in ground mode.
inline mtmc::Scenario tiny_random_scenario(mtmc::SplitMix64& rng, int max_truth,
                                           int max_computed, int max_frames, int cameras,
                                           bool ground_mode = false) {
    const auto n_truth = static_cast<int>(rng.uniform_int(1, max_truth));
    const auto n_computed = static_cast<int>(rng.uniform_int(0, max_computed));

    auto make_rows = [&](int count, const char* prefix) {
        std::vector<mtmc::Detection> rows;
        std::set<std::pair<std::string, mtmc::Site>> seen;
        for (int k = 0; k < count; ++k) {
            const std::string id = prefix + std::to_string(k + 1);
            const auto start = rng.uniform_int(1, max_frames);
            const auto end = std::min<std::int64_t>(start + rng.uniform_int(0, max_frames - 1),
                                                    max_frames);
            for (std::int64_t f = start; f <= end; ++f) {
                if (rng.chance(0.25)) continue;  // holes
                const int cam = static_cast<int>(rng.uniform_int(1, cameras));
                const mtmc::Site site{cam, f};
                if (!seen.emplace(id, site).second) continue;
                const double slot = static_cast<double>(rng.uniform_int(0, 3));
                const double left = slot == 3 ? 30.0 : slot * 2.0 + (slot == 2 ? 4.0 : 0.0);
                mtmc::Detection d;
                d.site = site;
                d.identity = id;
                d.box = mtmc::Box{left, 0.0, 10.0, 10.0};
                // distances 0/1/4/... from slot 0: exercises the exact-tie case
                d.world = mtmc::WorldPoint{left * 0.5, 0.0};
                rows.push_back(std::move(d));
            }
        }
        return rows;
    };

    std::vector<mtmc::Detection> truth = make_rows(n_truth, "T");
    std::vector<mtmc::Detection> computed = make_rows(n_computed, "C");
    if (truth.empty()) {
        mtmc::Detection d;
        d.site = mtmc::Site{1, 1};
        d.identity = "T1";
        d.box = mtmc::Box{0, 0, 10, 10};
        d.world = mtmc::WorldPoint{0, 0};
        truth.push_back(d);
    }

    std::vector<mtmc::CameraInfo> cams;
    for (int c = 1; c <= cameras; ++c) cams.push_back(mtmc::CameraInfo{c});
    const mtmc::OverlapMode mode =
        ground_mode ? mtmc::OverlapMode::ground_plane(1.0) : mtmc::OverlapMode::iou(0.5);
    return mtmc::build_scenario(truth, computed, cams, mode);
}

// Rebuild the scenario with the two sides exchanged.
inline mtmc::Scenario swap_sides(const mtmc::Scenario& s) {
    auto [truth_rows, computed_rows] = mtmc::flatten_scenario(s);
    return mtmc::build_scenario(computed_rows, truth_rows, s.cameras, s.mode);
}

} // namespace oracles
