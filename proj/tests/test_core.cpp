#include "mtmc/scenario.hpp"
#include "mtmc/synth.hpp"

#include "oracles.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace mtmc;

namespace {

Detection det(int camera, std::int64_t frame, const char* id, double left = 0.0) {
    Detection d;
    d.site = Site{camera, frame};
    d.identity = id;
    d.box = Box{left, 0.0, 10.0, 10.0};
    d.world = WorldPoint{left * 0.5, 0.0};
    return d;
}

} // namespace

TEST_CASE("grouping collects rows of one identity into one trajectory") {
    const Scenario s = build_scenario({det(1, 3, "A"), det(1, 1, "A"), det(1, 2, "A")}, {},
                                      {CameraInfo{1}}, OverlapMode::iou(0.5));
    REQUIRE(s.truth.size() == 1);
    CHECK(s.truth[0].identity == "A");
    CHECK(s.truth[0].length() == 3);
    // sorted time-major
    CHECK(s.truth[0].detections[0].site.frame == 1);
    CHECK(s.truth[0].detections[2].site.frame == 3);
    CHECK(s.computed.empty());
}

TEST_CASE("figure 1(a) scenario has one truth and two computed trajectories") {
    const Scenario s = make_figure1(Figure1Case::A);
    REQUIRE(s.truth.size() == 1);
    REQUIRE(s.computed.size() == 2);
    CHECK(s.truth[0].length() == 90);
    CHECK(s.computed[0].identity == "1");
    CHECK(s.computed[0].length() == 60);
    CHECK(s.computed[1].identity == "2");
    CHECK(s.computed[1].length() == 30);
}

TEST_CASE("duplicate (side, identity, camera, frame) rows are rejected") {
    CHECK_THROWS_MATCHES(
        build_scenario({det(1, 5, "A"), det(1, 5, "A")}, {}, {CameraInfo{1}},
                       OverlapMode::iou(0.5)),
        ValidationError,
        Catch::Matchers::MessageMatches(
            Catch::Matchers::ContainsSubstring("duplicate detection") &&
            Catch::Matchers::ContainsSubstring("identity=A") &&
            Catch::Matchers::ContainsSubstring("frame=5")));
    // same site on opposite sides is fine
    CHECK_NOTHROW(build_scenario({det(1, 5, "A")}, {det(1, 5, "A")}, {CameraInfo{1}},
                                 OverlapMode::iou(0.5)));
}

TEST_CASE("unknown camera is rejected") {
    CHECK_THROWS_AS(build_scenario({det(7, 1, "A")}, {}, {CameraInfo{1}},
                                   OverlapMode::iou(0.5)),
                    ValidationError);
}

TEST_CASE("overlap-mode-required geometry is validated") {
    Detection no_box = det(1, 1, "A");
    no_box.box.reset();
    CHECK_THROWS_MATCHES(build_scenario({no_box}, {}, {CameraInfo{1}}, OverlapMode::iou(0.5)),
                         ValidationError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("first offender")));

    Detection no_world = det(1, 1, "A");
    no_world.world.reset();
    SECTION("ground mode without world or homography fails") {
        CHECK_THROWS_AS(build_scenario({no_world}, {}, {CameraInfo{1}},
                                       OverlapMode::ground_plane(1.0)),
                        ValidationError);
    }
    SECTION("ground mode derives the world point from box foot and homography") {
        CameraInfo cam{1};
        cam.homography = Homography{};  // identity: world equals image coordinates
        const Scenario s =
            build_scenario({no_world}, {}, {cam}, OverlapMode::ground_plane(1.0));
        REQUIRE(s.truth[0].detections[0].world.has_value());
        CHECK(s.truth[0].detections[0].world->x == 5.0);   // box bottom-center
        CHECK(s.truth[0].detections[0].world->y == 10.0);
    }
}

TEST_CASE("detections missing both box and world are invalid") {
    Detection d = det(1, 1, "A");
    d.box.reset();
    d.world.reset();
    CHECK_THROWS_AS(build_scenario({d}, {}, {CameraInfo{1}}, OverlapMode::iou(0.5)),
                    ValidationError);
}

TEST_CASE("camera frame offsets apply at ingestion") {
    CameraInfo cam{1};
    cam.frame_offset = 100;
    const Scenario s = build_scenario({det(1, 5, "A")}, {}, {cam}, OverlapMode::iou(0.5));
    CHECK(s.truth[0].detections[0].site.frame == 105);
}

TEST_CASE("restrict_to_camera") {
    SECTION("single-camera scenario restricts to itself") {
        const Scenario s = make_figure1(Figure1Case::A);
        CHECK(restrict_to_camera(s, 1) == s);
    }
    SECTION("identity spanning two cameras keeps only the requested one") {
        const Scenario s =
            build_scenario({det(1, 1, "A"), det(2, 2, "A")}, {},
                           {CameraInfo{1}, CameraInfo{2}}, OverlapMode::iou(0.5));
        const Scenario r = restrict_to_camera(s, 2);
        REQUIRE(r.truth.size() == 1);
        CHECK(r.truth[0].length() == 1);
        CHECK(r.truth[0].detections[0].site.camera == 2);
    }
    SECTION("camera with no detections yields an empty scenario") {
        const Scenario s = build_scenario({det(1, 1, "A")}, {},
                                          {CameraInfo{1}, CameraInfo{2}},
                                          OverlapMode::iou(0.5));
        const Scenario r = restrict_to_camera(s, 2);
        CHECK(r.truth.empty());
        CHECK(r.computed.empty());
    }
    SECTION("unknown camera is an error") {
        const Scenario s = make_figure1(Figure1Case::A);
        CHECK_THROWS_AS(restrict_to_camera(s, 9), ValidationError);
    }
}

TEST_CASE("timeline_stats") {
    SECTION("figure 1(a) has T = 90") {
        CHECK(timeline_stats(make_figure1(Figure1Case::A)).total_true_detections == 90);
    }
    SECTION("empty scenario has T = 0") {
        const Scenario s = build_scenario({}, {}, {CameraInfo{1}}, OverlapMode::iou(0.5));
        CHECK(timeline_stats(s).total_true_detections == 0);
    }
    SECTION("two cameras with 50 truth detections each give T = 100") {
        std::vector<Detection> rows;
        for (int f = 1; f <= 50; ++f) {
            rows.push_back(det(1, f, "A"));
            rows.push_back(det(2, f, "B"));
        }
        const Scenario s = build_scenario(rows, {}, {CameraInfo{1}, CameraInfo{2}},
                                          OverlapMode::iou(0.5));
        const TimelineStats stats = timeline_stats(s);
        CHECK(stats.total_true_detections == 100);
        REQUIRE(stats.cameras.size() == 2);
        CHECK(stats.cameras[0].truth_detections == 50);
        CHECK(stats.cameras[0].truth_identities == 1);
        CHECK(stats.cameras[0].frames_spanned == 50);
    }
}

TEST_CASE("property: flatten and rebuild reproduces the scenario") {
    SplitMix64 rng(20260810);
    for (int trial = 0; trial < 40; ++trial) {
        const Scenario s = oracles::tiny_random_scenario(rng, 4, 4, 20, 3);
        auto [truth_rows, computed_rows] = flatten_scenario(s);
        CHECK(build_scenario(truth_rows, computed_rows, s.cameras, s.mode) == s);
    }

    SECTION("round trip holds with nonzero frame offsets") {
        CameraInfo cam{1};
        cam.frame_offset = 7;
        const Scenario s = build_scenario({det(1, 1, "A"), det(1, 2, "A")}, {det(1, 1, "X")},
                                          {cam}, OverlapMode::iou(0.5));
        auto [truth_rows, computed_rows] = flatten_scenario(s);
        CHECK(truth_rows[0].site.frame == 1);  // offset undone
        CHECK(build_scenario(truth_rows, computed_rows, s.cameras, s.mode) == s);
    }
}

TEST_CASE("property: per-camera T sums to the scenario T") {
    SplitMix64 rng(77);
    for (int trial = 0; trial < 40; ++trial) {
        const Scenario s = oracles::tiny_random_scenario(rng, 5, 5, 25, 3);
        std::int64_t total = 0;
        for (const CameraInfo& cam : s.cameras)
            total += timeline_stats(restrict_to_camera(s, cam.id)).total_true_detections;
        CHECK(total == timeline_stats(s).total_true_detections);
    }
}
