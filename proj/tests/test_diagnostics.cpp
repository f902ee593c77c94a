#include "mtmc/diagnostics.hpp"
#include "mtmc/synth.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace mtmc;

namespace {

Scenario perfect_tracker(const Scenario& s) {
    auto [truth_rows, computed_rows] = flatten_scenario(s);
    return build_scenario(truth_rows, truth_rows, s.cameras, s.mode);
}

Detection det(int camera, std::int64_t frame, const char* id, double left = 0.0) {
    Detection d;
    d.site = Site{camera, frame};
    d.identity = id;
    d.box = Box{left, 0.0, 10.0, 10.0};
    return d;
}

// Two identities tracked perfectly inside each camera but swapped across
// the blind spot.
Scenario blind_spot_swap() {
    std::vector<Detection> truth, computed;
    for (int f = 1; f <= 30; ++f) {
        truth.push_back(det(1, f, "A", 0.0));
        truth.push_back(det(1, f, "B", 40.0));
        computed.push_back(det(1, f, "1", 0.0));
        computed.push_back(det(1, f, "2", 40.0));
    }
    for (int f = 31; f <= 60; ++f) {
        truth.push_back(det(2, f, "A", 0.0));
        truth.push_back(det(2, f, "B", 40.0));
        computed.push_back(det(2, f, "1", 40.0));  // now on B
        computed.push_back(det(2, f, "2", 0.0));   // now on A
    }
    return build_scenario(truth, computed, {CameraInfo{1}, CameraInfo{2}},
                          OverlapMode::iou(0.5));
}

} // namespace

TEST_CASE("handover difficulty") {
    SECTION("single-camera scenario: difference zero, flagged") {
        const HandoverDifficulty d = handover_difficulty(make_figure1(Figure1Case::A));
        CHECK(d.difference == 0);
        CHECK(d.e_multi == d.e_single);
        CHECK(d.single_camera);
    }
    SECTION("perfect multi-camera tracker: difference zero") {
        const HandoverDifficulty d =
            handover_difficulty(perfect_tracker(make_figure2(Figure2Case::A)));
        CHECK(d.e_multi == 0);
        CHECK(d.difference == 0);
        CHECK_FALSE(d.single_camera);
    }
    SECTION("identities swapped across a blind spot") {
        const Scenario s = blind_spot_swap();
        const HandoverDifficulty d = handover_difficulty(s);
        CHECK(d.e_single == 0);
        CHECK(d.e_multi > 0);
        CHECK(d.e_multi == oracles::exhaustive_match_cost(s));
        CHECK(d.e_multi == 120);
        CHECK(d.idp_delta >= 0.0);
        CHECK(d.idr_delta >= 0.0);
        CHECK(d.idf1_delta >= 0.0);
    }
}

TEST_CASE("property: single-camera matching is never harder than multi-camera") {
    SplitMix64 rng(808);
    int nontrivial = 0;
    for (int trial = 0; trial < 60; ++trial) {
        const Scenario s = oracles::tiny_random_scenario(rng, 4, 4, 18, 3, trial % 2 == 0);
        const HandoverDifficulty d = handover_difficulty(s);
        CHECK(d.difference >= 0);
        CHECK(d.idp_delta >= -1e-12);
        CHECK(d.idr_delta >= -1e-12);
        CHECK(d.idf1_delta >= -1e-12);
        if (d.difference > 0) ++nontrivial;
    }
    CHECK(nontrivial > 0);
}

TEST_CASE("handover classification on the figure 2 constructions") {
    SECTION("case (a): fragmentation declared though the handover is correct") {
        const Scenario s = make_figure2(Figure2Case::A);
        const HandoverReport r =
            classify_handovers(s, match_truth_to_result(s), clear_match(s));
        REQUIRE(r.transitions == 1);
        REQUIRE(r.cases.size() == 1);
        CHECK(r.cases[0].cls == HandoverClass::FragButCorrect);
        CHECK(r.cases[0].fragment_length == 1);
        CHECK(r.cases[0].camera_from == 1);
        CHECK(r.cases[0].camera_to == 2);
        CHECK(r.count(HandoverClass::FragButCorrect) == 1);
    }
    SECTION("case (b): no event error though the handover is wrong") {
        const Scenario s = make_figure2(Figure2Case::B);
        const HandoverReport r =
            classify_handovers(s, match_truth_to_result(s), clear_match(s));
        REQUIRE(r.transitions == 1);
        REQUIRE(r.cases.size() == 1);
        CHECK(r.cases[0].cls == HandoverClass::FragMissed);
        CHECK(r.cases[0].fragment_length == 1);
    }
    SECTION("perfect tracker: all transitions clean") {
        const Scenario s = perfect_tracker(make_figure2(Figure2Case::A));
        const HandoverReport r =
            classify_handovers(s, match_truth_to_result(s), clear_match(s));
        REQUIRE(r.transitions == 1);
        CHECK(r.count(HandoverClass::Clean) == 1);
    }
}

TEST_CASE("handover merge declared though the handover is correct") {
    // Computed 1 follows A through both cameras but sits on B for the last
    // frame of camera 1.
    std::vector<Detection> truth, computed;
    for (int f = 1; f <= 30; ++f) truth.push_back(det(1, f, "A", 0.0));
    for (int f = 31; f <= 60; ++f) truth.push_back(det(2, f, "A", 0.0));
    for (int f = 25; f <= 30; ++f) truth.push_back(det(1, f, "B", 40.0));
    for (int f = 1; f <= 29; ++f) computed.push_back(det(1, f, "1", 0.0));
    computed.push_back(det(1, 30, "1", 40.0));  // jumps onto B
    for (int f = 31; f <= 60; ++f) computed.push_back(det(2, f, "1", 0.0));
    const Scenario s = build_scenario(truth, computed, {CameraInfo{1}, CameraInfo{2}},
                                      OverlapMode::iou(0.5));
    const HandoverReport r = classify_handovers(s, match_truth_to_result(s), clear_match(s));
    REQUIRE(r.transitions == 1);
    CHECK(r.cases[0].cls == HandoverClass::MergeButCorrect);
    CHECK(r.cases[0].fragment_length == 1);
}

TEST_CASE("property: histogram totals match the transition count") {
    SplitMix64 rng(4004);
    for (int trial = 0; trial < 30; ++trial) {
        RandomScenarioParams params;
        params.cameras = 3;
        params.identities = 6;
        params.mean_length = 30;
        params.fragment_rate = 0.4;
        params.drop_rate = 0.2;
        params.spurious_rate = 0.2;
        params.seed = 9000 + static_cast<std::uint64_t>(trial);
        const Scenario s = random_scenario(params).corrupted;
        const HandoverReport r =
            classify_handovers(s, match_truth_to_result(s), clear_match(s));
        std::int64_t total = 0;
        for (std::int64_t n : r.histogram) total += n;
        CHECK(total == r.transitions);
        CHECK(static_cast<std::size_t>(r.transitions) == r.cases.size());
    }
}

TEST_CASE("per-camera report") {
    SECTION("single-camera scenario: camera row equals the global row") {
        const auto rows = per_camera_report(make_figure1(Figure1Case::A));
        REQUIRE(rows.size() == 2);
        CHECK(rows[0].camera.has_value());
        CHECK_FALSE(rows[1].camera.has_value());
        CHECK(rows[0].id.idf1 == rows[1].id.idf1);
        CHECK(rows[0].mota == rows[1].mota);
        CHECK(rows[0].fp == rows[1].fp);
        CHECK(rows[0].ids == rows[1].ids);
    }
    SECTION("independent cameras: the global row is the sum of the parts") {
        std::vector<Detection> truth, computed;
        for (int f = 1; f <= 20; ++f) {
            truth.push_back(det(1, f, "A", 0.0));
            truth.push_back(det(2, f, "B", 0.0));
        }
        for (int f = 1; f <= 15; ++f) computed.push_back(det(1, f, "1", 0.0));
        for (int f = 6; f <= 20; ++f) computed.push_back(det(2, f, "2", 0.0));
        const Scenario s = build_scenario(truth, computed, {CameraInfo{1}, CameraInfo{2}},
                                          OverlapMode::iou(0.5));
        const auto rows = per_camera_report(s);
        REQUIRE(rows.size() == 3);
        const auto& global = rows[2];
        CHECK(global.id.idtp == rows[0].id.idtp + rows[1].id.idtp);
        CHECK(global.id.idfp == rows[0].id.idfp + rows[1].id.idfp);
        CHECK(global.id.idfn == rows[0].id.idfn + rows[1].id.idfn);
        CHECK(global.fp == rows[0].fp + rows[1].fp);
        CHECK(global.fn == rows[0].fn + rows[1].fn);
        CHECK(global.gt == 2);
    }
    SECTION("restricted scores dominate the global ones, never the reverse") {
        const Scenario s = blind_spot_swap();
        const auto rows = per_camera_report(s);
        const HandoverDifficulty d = handover_difficulty(s);
        CHECK(d.single.idp >= rows.back().id.idp);
        CHECK(d.single.idr >= rows.back().id.idr);
    }
    SECTION("a camera with no detections still gets a row") {
        std::vector<Detection> truth{det(1, 1, "A")};
        const Scenario s = build_scenario(truth, {}, {CameraInfo{1}, CameraInfo{2}},
                                          OverlapMode::iou(0.5));
        const auto rows = per_camera_report(s);
        REQUIRE(rows.size() == 3);
        CHECK(rows[1].gt == 0);
        CHECK(rows[1].mota == 0.0);
    }
}
