// Command-line front end: evaluate tracker output against ground truth, or
// generate synthetic scenarios with known error structure.

#include "mtmc/mtmc.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace {

struct EvaluateArgs {
    std::string gt_path;
    std::string res_path;
    std::string mode = "iou";
    double delta = -1.0;  // default depends on mode
    std::string measures = "id,clear,mcta";
    bool per_camera = false;
    std::string homographies_dir;
    std::string json_path;
    std::string mapping_path;
    std::string mota_mismatches = "phi";
};

struct SynthArgs {
    std::string preset;
    std::uint64_t seed = 1;
    std::string out_dir;
    int cameras = 4;
    int identities = 12;
    int mean_length = 60;
    double overlap = 0.0;
    double fragment_rate = 0.3;
    double merge_rate = 0.1;
    double swap_rate = 0.1;
    double drop_rate = 0.2;
    double spurious_rate = 0.2;
    double jitter = 0.0;
    std::string mode = "iou";
    double delta = -1.0;
};

mtmc::OverlapMode make_mode(const std::string& mode, double delta) {
    if (mode == "iou") return mtmc::OverlapMode::iou(delta < 0 ? 0.5 : delta);
    if (mode == "ground") return mtmc::OverlapMode::ground_plane(delta < 0 ? 1.0 : delta);
    throw mtmc::ValidationError("unknown mode: " + mode);
}

std::set<std::string> split_measures(const std::string& csv) {
    std::set<std::string> out;
    std::string token;
    for (char c : csv + ",") {
        if (c == ',') {
            if (!token.empty()) out.insert(token);
            token.clear();
        } else {
            token += c;
        }
    }
    for (const std::string& m : out)
        if (m != "id" && m != "clear" && m != "mcta" && m != "diag")
            throw mtmc::ValidationError("unknown measure: " + m +
                                        " (expected id, clear, mcta or diag)");
    return out;
}

int run_evaluate(const EvaluateArgs& args) {
    const auto gt_rows = mtmc::parse_detections_file(args.gt_path);
    const auto res_rows = mtmc::parse_detections_file(args.res_path);
    const mtmc::OverlapMode mode = make_mode(args.mode, args.delta);

    std::map<int, mtmc::Homography> homographies;
    if (!args.homographies_dir.empty())
        homographies = mtmc::load_homographies_dir(args.homographies_dir);

    std::set<int> camera_ids;
    for (const auto& row : gt_rows) camera_ids.insert(row.camera);
    for (const auto& row : res_rows) camera_ids.insert(row.camera);
    std::vector<mtmc::CameraInfo> cameras;
    for (int id : camera_ids) {
        mtmc::CameraInfo cam{id};
        auto h = homographies.find(id);
        if (h != homographies.end()) cam.homography = h->second;
        cameras.push_back(std::move(cam));
    }

    const mtmc::Scenario scenario = mtmc::build_scenario(
        mtmc::to_detections(gt_rows), mtmc::to_detections(res_rows), cameras, mode);

    const auto measures = split_measures(args.measures);
    const mtmc::MotaMismatches which = args.mota_mismatches == "mu"
                                           ? mtmc::MotaMismatches::Mu
                                           : mtmc::MotaMismatches::Phi;
    if (args.mota_mismatches != "phi" && args.mota_mismatches != "mu")
        throw mtmc::ValidationError("--mota-mismatches must be phi or mu");

    mtmc::ReportDocument doc;
    doc.digest.gt_rows = static_cast<std::int64_t>(gt_rows.size());
    doc.digest.res_rows = static_cast<std::int64_t>(res_rows.size());
    doc.digest.cameras.assign(camera_ids.begin(), camera_ids.end());
    doc.digest.mode = args.mode;
    doc.digest.delta = mode.delta;

    std::optional<mtmc::TruthToResultMatch> match;
    if (measures.count("id") || measures.count("diag") || !args.mapping_path.empty())
        match = mtmc::match_truth_to_result(scenario);
    if (measures.count("id")) doc.id = mtmc::id_scores(*match);

    std::optional<mtmc::ClearHistory> history;
    if (measures.count("clear") || measures.count("mcta") || measures.count("diag"))
        history = mtmc::clear_match(scenario);
    if (measures.count("clear") || measures.count("mcta")) {
        mtmc::EventScores e;
        e.tp = history->tp;
        e.fp = history->fp;
        e.fn = history->fn;
        e.mismatches = mtmc::count_mismatches(*history);
        if (scenario.total_truth_length() > 0) {
            const auto [mota, motp] = mtmc::mota_motp(scenario, *history, e.mismatches, which);
            e.mota = mota;
            e.motp = motp;
        }
        e.precision = e.tp + e.fp > 0 ? static_cast<double>(e.tp) / (e.tp + e.fp) : 0.0;
        e.recall = e.tp + e.fn > 0 ? static_cast<double>(e.tp) / (e.tp + e.fn) : 0.0;
        const mtmc::TrackCoverage cover = mtmc::mt_ml_frg(scenario, *history);
        e.mt = cover.mt;
        e.ml = cover.ml;
        e.frg = cover.frg;
        e.mcta = mtmc::mcta(scenario, *history, e.mismatches);
        doc.event = e;
    }

    if (args.per_camera) {
        for (const mtmc::PerCameraRow& row : mtmc::per_camera_report(scenario, which)) {
            mtmc::ReportPerCameraRow r;
            r.camera = row.camera ? std::to_string(*row.camera) : "all";
            r.fp = row.fp;
            r.fn = row.fn;
            r.ids = row.ids;
            r.frg = row.frg;
            r.mota = row.mota;
            r.motp = row.motp;
            r.gt = row.gt;
            r.mt = row.mt;
            r.ml = row.ml;
            r.mcta = row.mcta;
            r.idp = row.id.idp;
            r.idr = row.id.idr;
            r.idf1 = row.id.idf1;
            doc.per_camera.push_back(std::move(r));
        }
    }

    if (measures.count("diag")) {
        const mtmc::HandoverDifficulty hd = mtmc::handover_difficulty(scenario);
        const mtmc::HandoverReport hr = mtmc::classify_handovers(scenario, *match, *history);
        mtmc::ReportHandover h;
        h.e_multi = hd.e_multi;
        h.e_single = hd.e_single;
        h.difference = hd.difference;
        h.idp_delta = hd.idp_delta;
        h.idr_delta = hd.idr_delta;
        h.idf1_delta = hd.idf1_delta;
        h.single_camera = hd.single_camera;
        h.transitions = hr.transitions;
        for (int c = 0; c < 6; ++c)
            h.cases.emplace(mtmc::handover_class_name(static_cast<mtmc::HandoverClass>(c)),
                            hr.histogram[c]);
        doc.handover = h;
    }

    mtmc::write_report_text(doc, std::cout);
    if (!args.json_path.empty()) mtmc::write_report(doc, args.json_path, "");
    if (!args.mapping_path.empty()) {
        std::ofstream out(args.mapping_path);
        if (!out) throw mtmc::IoError("cannot write mapping: " + args.mapping_path);
        mtmc::write_truth_to_result(*match, out);
    }
    return 0;
}

int run_synth(const SynthArgs& args) {
    mtmc::Scenario scenario;
    if (args.preset == "fig1a") {
        scenario = mtmc::make_figure1(mtmc::Figure1Case::A);
    } else if (args.preset == "fig1b") {
        scenario = mtmc::make_figure1(mtmc::Figure1Case::B);
    } else if (args.preset == "fig1c") {
        scenario = mtmc::make_figure1(mtmc::Figure1Case::C);
    } else if (args.preset == "fig2a") {
        scenario = mtmc::make_figure2(mtmc::Figure2Case::A);
    } else if (args.preset == "fig2b") {
        scenario = mtmc::make_figure2(mtmc::Figure2Case::B);
    } else if (args.preset == "random") {
        mtmc::RandomScenarioParams params;
        params.cameras = args.cameras;
        params.identities = args.identities;
        params.mean_length = args.mean_length;
        params.overlap_fraction = args.overlap;
        params.fragment_rate = args.fragment_rate;
        params.merge_rate = args.merge_rate;
        params.swap_rate = args.swap_rate;
        params.drop_rate = args.drop_rate;
        params.spurious_rate = args.spurious_rate;
        params.jitter = args.jitter;
        params.mode = make_mode(args.mode, args.delta);
        params.seed = args.seed;
        scenario = mtmc::random_scenario(params).corrupted;
    } else {
        throw mtmc::ValidationError("unknown preset: " + args.preset);
    }

    std::filesystem::create_directories(args.out_dir);
    const auto [truth_rows, computed_rows] = mtmc::flatten_scenario(scenario);
    auto write = [&](const std::string& name, const std::vector<mtmc::Detection>& rows) {
        const std::string path = args.out_dir + "/" + name;
        std::ofstream out(path);
        if (!out) throw mtmc::IoError("cannot write " + path);
        mtmc::write_detections(out, rows);
        if (!out) throw mtmc::IoError("error while writing " + path);
    };
    write("gt.csv", truth_rows);
    write("res.csv", computed_rows);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"identity-based and event-based evaluation of multi-camera tracker output"};
    app.require_subcommand(1);

    EvaluateArgs eval;
    CLI::App* evaluate = app.add_subcommand("evaluate", "score tracker output against ground truth");
    evaluate->add_option("--gt", eval.gt_path, "ground-truth detection CSV")->required();
    evaluate->add_option("--res", eval.res_path, "tracker result detection CSV")->required();
    evaluate->add_option("--mode", eval.mode, "overlap test: iou or ground")
        ->check(CLI::IsMember({"iou", "ground"}));
    evaluate->add_option("--delta", eval.delta,
                         "overlap threshold (default 0.5 for iou, 1.0 for ground)");
    evaluate->add_option("--measures", eval.measures,
                         "comma list of id, clear, mcta, diag (default id,clear,mcta)");
    evaluate->add_flag("--per-camera", eval.per_camera, "add one table row per camera");
    evaluate->add_option("--homographies", eval.homographies_dir,
                         "directory of camera<k>.txt homography files");
    evaluate->add_option("--json", eval.json_path, "write the JSON report here");
    evaluate->add_option("--mapping", eval.mapping_path, "write the truth-to-result pairs here");
    evaluate->add_option("--mota-mismatches", eval.mota_mismatches,
                         "mismatch count in MOTA: phi (default) or mu")
        ->check(CLI::IsMember({"phi", "mu"}));

    SynthArgs synth;
    CLI::App* synthesize = app.add_subcommand("synth", "generate synthetic gt.csv/res.csv pairs");
    synthesize->add_option("--preset", synth.preset,
                           "fig1a|fig1b|fig1c|fig2a|fig2b|random")->required();
    synthesize->add_option("--seed", synth.seed, "random preset seed");
    synthesize->add_option("--out", synth.out_dir, "output directory")->required();
    synthesize->add_option("--cameras", synth.cameras, "random: number of cameras");
    synthesize->add_option("--identities", synth.identities, "random: number of identities");
    synthesize->add_option("--mean-length", synth.mean_length, "random: mean trajectory length");
    synthesize->add_option("--overlap", synth.overlap, "random: camera overlap fraction [0,1)");
    synthesize->add_option("--fragment-rate", synth.fragment_rate, "random: fragmentation rate");
    synthesize->add_option("--merge-rate", synth.merge_rate, "random: merge rate");
    synthesize->add_option("--swap-rate", synth.swap_rate, "random: identity swap rate");
    synthesize->add_option("--drop-rate", synth.drop_rate, "random: detection drop rate");
    synthesize->add_option("--spurious-rate", synth.spurious_rate, "random: spurious track rate");
    synthesize->add_option("--jitter", synth.jitter, "random: box/world jitter in meters");
    synthesize->add_option("--mode", synth.mode, "random: overlap mode")
        ->check(CLI::IsMember({"iou", "ground"}));
    synthesize->add_option("--delta", synth.delta, "random: overlap threshold");

    try {
        app.parse(argc, argv);
        if (evaluate->parsed()) return run_evaluate(eval);
        return run_synth(synth);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const mtmc::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 2;
    } catch (const mtmc::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const mtmc::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
