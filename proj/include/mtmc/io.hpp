#pragma once

#include "mtmc/diagnostics.hpp"
#include "mtmc/event_measures.hpp"
#include "mtmc/geometry.hpp"
#include "mtmc/id_measures.hpp"
#include "mtmc/scenario.hpp"

#include <charconv>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace mtmc {

inline constexpr const char* kVersion = "0.1.0";

// Detection CSV: 9 comma-separated fields per line,
//   camera,frame,identity,bb_left,bb_top,bb_width,bb_height,world_x,world_y
// with -1 in all four box fields when the box is absent and -1e9 in the
// world fields when the ground-plane point is absent. An optional header
// line is recognized by a non-numeric first token.
struct DetectionRow {
    int camera = 0;
    std::int64_t frame = 0;
    Identity identity;
    double bb_left = -1, bb_top = -1, bb_width = -1, bb_height = -1;
    double world_x = -1e9, world_y = -1e9;
};

inline constexpr double kBoxSentinel = -1.0;
inline constexpr double kWorldSentinel = -1e9;

namespace detail {

inline bool parse_int(std::string_view text, std::int64_t& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

inline bool parse_double(std::string_view text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

inline std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(line.substr(start, i - start));
            start = i + 1;
        }
    }
    return fields;
}

inline void append_double(std::string& out, double v) {
    if (v == kWorldSentinel) {
        out += "-1000000000";
        return;
    }
    char buf[32];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    out.append(buf, r.ptr);
}

} // namespace detail

inline std::vector<DetectionRow> parse_detections(std::istream& in,
                                                  const std::string& origin = "<stream>") {
    std::vector<DetectionRow> rows;
    std::string line;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        const auto fields = detail::split_fields(line);
        if (line_no == 1) {
            std::int64_t probe;
            if (!detail::parse_int(fields[0], probe)) continue;  // header
        }
        if (fields.size() != 9)
            throw ParseError(origin + ":" + std::to_string(line_no) + ": expected 9 fields, got " +
                             std::to_string(fields.size()));

        DetectionRow row;
        std::int64_t camera;
        if (!detail::parse_int(fields[0], camera) ||
            camera < std::numeric_limits<int>::min() ||
            camera > std::numeric_limits<int>::max())
            throw ParseError(origin + ":" + std::to_string(line_no) + ": bad camera '" +
                             std::string(fields[0]) + "'");
        row.camera = static_cast<int>(camera);
        if (!detail::parse_int(fields[1], row.frame))
            throw ParseError(origin + ":" + std::to_string(line_no) + ": bad frame '" +
                             std::string(fields[1]) + "'");
        if (fields[2].empty())
            throw ParseError(origin + ":" + std::to_string(line_no) + ": empty identity");
        row.identity = std::string(fields[2]);

        double* numeric[6] = {&row.bb_left, &row.bb_top,   &row.bb_width,
                              &row.bb_height, &row.world_x, &row.world_y};
        for (int i = 0; i < 6; ++i) {
            if (!detail::parse_double(fields[3 + i], *numeric[i]))
                throw ParseError(origin + ":" + std::to_string(line_no) + ": bad number '" +
                                 std::string(fields[3 + i]) + "' in field " +
                                 std::to_string(4 + i));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline std::vector<DetectionRow> parse_detections_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open detections file: " + path);
    return parse_detections(in, path);
}

inline Detection to_detection(const DetectionRow& row) {
    Detection d;
    d.site = Site{row.camera, row.frame};
    d.identity = row.identity;
    const bool box_absent = row.bb_left == kBoxSentinel && row.bb_top == kBoxSentinel &&
                            row.bb_width == kBoxSentinel && row.bb_height == kBoxSentinel;
    if (!box_absent) d.box = Box{row.bb_left, row.bb_top, row.bb_width, row.bb_height};
    if (row.world_x != kWorldSentinel && row.world_y != kWorldSentinel)
        d.world = WorldPoint{row.world_x, row.world_y};
    return d;
}

inline std::vector<Detection> to_detections(const std::vector<DetectionRow>& rows) {
    std::vector<Detection> out;
    out.reserve(rows.size());
    for (const DetectionRow& row : rows) out.push_back(to_detection(row));
    return out;
}

inline DetectionRow to_row(const Detection& d) {
    if (d.identity.find_first_of(",\r\n") != std::string::npos)
        throw ValidationError("identity token not representable in CSV: " + d.identity);
    DetectionRow row;
    row.camera = d.site.camera;
    row.frame = d.site.frame;
    row.identity = d.identity;
    if (d.box) {
        row.bb_left = d.box->left;
        row.bb_top = d.box->top;
        row.bb_width = d.box->width;
        row.bb_height = d.box->height;
    }
    if (d.world) {
        row.world_x = d.world->x;
        row.world_y = d.world->y;
    }
    return row;
}

inline void write_detections(std::ostream& out, const std::vector<DetectionRow>& rows) {
    std::string buf;
    buf.reserve(64);
    for (const DetectionRow& row : rows) {
        buf.clear();
        buf += std::to_string(row.camera);
        buf += ',';
        buf += std::to_string(row.frame);
        buf += ',';
        buf += row.identity;
        for (double v : {row.bb_left, row.bb_top, row.bb_width, row.bb_height, row.world_x,
                         row.world_y}) {
            buf += ',';
            detail::append_double(buf, v);
        }
        buf += '\n';
        out << buf;
    }
}

inline void write_detections(std::ostream& out, const std::vector<Detection>& detections) {
    std::vector<DetectionRow> rows;
    rows.reserve(detections.size());
    for (const Detection& d : detections) rows.push_back(to_row(d));
    write_detections(out, rows);
}

// Homography files named camera<k>.txt, 9 whitespace-separated numbers each.
inline std::map<int, Homography> load_homographies_dir(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir);
    std::map<int, Homography> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() < 11 || name.rfind("camera", 0) != 0 ||
            name.substr(name.size() - 4) != ".txt")
            continue;
        std::int64_t id;
        if (!detail::parse_int(std::string_view(name).substr(6, name.size() - 10), id))
            continue;
        out.emplace(static_cast<int>(id), load_homography(entry.path().string()));
    }
    return out;
}

// --- report document ---------------------------------------------------

struct ReportDigest {
    std::int64_t gt_rows = 0;
    std::int64_t res_rows = 0;
    std::vector<int> cameras;
    std::string mode = "iou";
    double delta = 0.5;
};

struct ReportPerCameraRow {
    std::string camera;  // camera id, or "all" for the global row
    std::int64_t fp = 0, fn = 0, ids = 0, frg = 0;
    double mota = 0, motp = 0;
    std::int64_t gt = 0, mt = 0, ml = 0;
    double mcta = 0;
    double idp = 0, idr = 0, idf1 = 0;
};

struct ReportHandover {
    std::int64_t e_multi = 0, e_single = 0, difference = 0;
    double idp_delta = 0, idr_delta = 0, idf1_delta = 0;
    bool single_camera = false;
    std::int64_t transitions = 0;
    std::map<std::string, std::int64_t> cases;
};

// Everything one evaluation run produces. Scores carry four decimal places
// in both serializations; counts stay exact integers.
struct ReportDocument {
    std::string version = kVersion;
    ReportDigest digest;
    std::optional<IdScores> id;
    std::optional<EventScores> event;
    std::vector<ReportPerCameraRow> per_camera;
    std::optional<ReportHandover> handover;
};

namespace detail {

inline std::string fixed4(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

} // namespace detail

inline void write_report_json(const ReportDocument& doc, std::ostream& out) {
    auto num = [](double v) { return detail::fixed4(v); };
    out << "{\n";
    out << "  \"version\": \"" << doc.version << "\",\n";
    out << "  \"digest\": {\n";
    out << "    \"gt_rows\": " << doc.digest.gt_rows << ",\n";
    out << "    \"res_rows\": " << doc.digest.res_rows << ",\n";
    out << "    \"cameras\": [";
    for (std::size_t i = 0; i < doc.digest.cameras.size(); ++i)
        out << (i ? ", " : "") << doc.digest.cameras[i];
    out << "],\n";
    out << "    \"mode\": \"" << doc.digest.mode << "\",\n";
    out << "    \"delta\": " << num(doc.digest.delta) << "\n";
    out << "  }";

    if (doc.id) {
        const IdScores& s = *doc.id;
        out << ",\n  \"id\": {\n";
        out << "    \"idp\": " << num(s.idp) << ",\n";
        out << "    \"idr\": " << num(s.idr) << ",\n";
        out << "    \"idf1\": " << num(s.idf1) << ",\n";
        out << "    \"idtp\": " << s.idtp << ",\n";
        out << "    \"idfp\": " << s.idfp << ",\n";
        out << "    \"idfn\": " << s.idfn << "\n";
        out << "  }";
    }
    if (doc.event) {
        const EventScores& e = *doc.event;
        out << ",\n  \"event\": {\n";
        out << "    \"tp\": " << e.tp << ",\n";
        out << "    \"fp\": " << e.fp << ",\n";
        out << "    \"fn\": " << e.fn << ",\n";
        out << "    \"phi_w\": " << e.mismatches.phi_w << ",\n";
        out << "    \"phi_h\": " << e.mismatches.phi_h << ",\n";
        out << "    \"gamma_w\": " << e.mismatches.gamma_w << ",\n";
        out << "    \"gamma_h\": " << e.mismatches.gamma_h << ",\n";
        out << "    \"phi\": " << e.mismatches.phi() << ",\n";
        out << "    \"gamma\": " << e.mismatches.gamma() << ",\n";
        out << "    \"mismatches\": " << e.mismatches.mu() << ",\n";
        out << "    \"precision\": " << num(e.precision) << ",\n";
        out << "    \"recall\": " << num(e.recall) << ",\n";
        out << "    \"mota\": " << num(e.mota) << ",\n";
        out << "    \"motp\": " << num(e.motp) << ",\n";
        out << "    \"mt\": " << e.mt << ",\n";
        out << "    \"ml\": " << e.ml << ",\n";
        out << "    \"frg\": " << e.frg << ",\n";
        out << "    \"mcta\": " << num(e.mcta) << "\n";
        out << "  }";
    }
    if (!doc.per_camera.empty()) {
        out << ",\n  \"per_camera\": [\n";
        for (std::size_t i = 0; i < doc.per_camera.size(); ++i) {
            const ReportPerCameraRow& r = doc.per_camera[i];
            out << "    {\"camera\": \"" << r.camera << "\", \"fp\": " << r.fp
                << ", \"fn\": " << r.fn << ", \"ids\": " << r.ids << ", \"frg\": " << r.frg
                << ", \"mota\": " << num(r.mota) << ", \"motp\": " << num(r.motp)
                << ", \"gt\": " << r.gt << ", \"mt\": " << r.mt << ", \"ml\": " << r.ml
                << ", \"mcta\": " << num(r.mcta) << ", \"idp\": " << num(r.idp)
                << ", \"idr\": " << num(r.idr) << ", \"idf1\": " << num(r.idf1) << "}"
                << (i + 1 < doc.per_camera.size() ? "," : "") << "\n";
        }
        out << "  ]";
    }
    if (doc.handover) {
        const ReportHandover& h = *doc.handover;
        out << ",\n  \"handover\": {\n";
        out << "    \"e_multi\": " << h.e_multi << ",\n";
        out << "    \"e_single\": " << h.e_single << ",\n";
        out << "    \"difference\": " << h.difference << ",\n";
        out << "    \"idp_delta\": " << num(h.idp_delta) << ",\n";
        out << "    \"idr_delta\": " << num(h.idr_delta) << ",\n";
        out << "    \"idf1_delta\": " << num(h.idf1_delta) << ",\n";
        out << "    \"single_camera\": " << (h.single_camera ? "true" : "false") << ",\n";
        out << "    \"transitions\": " << h.transitions << ",\n";
        out << "    \"cases\": {";
        std::size_t i = 0;
        for (const auto& [name, count] : h.cases)
            out << (i++ ? ", " : "") << "\"" << name << "\": " << count;
        out << "}\n";
        out << "  }";
    }
    out << "\n}\n";
}

inline ReportDocument read_report_json(std::istream& in) {
    nlohmann::json j = nlohmann::json::parse(in);
    ReportDocument doc;
    doc.version = j.at("version").get<std::string>();
    const auto& dig = j.at("digest");
    doc.digest.gt_rows = dig.at("gt_rows").get<std::int64_t>();
    doc.digest.res_rows = dig.at("res_rows").get<std::int64_t>();
    doc.digest.cameras = dig.at("cameras").get<std::vector<int>>();
    doc.digest.mode = dig.at("mode").get<std::string>();
    doc.digest.delta = dig.at("delta").get<double>();
    if (j.contains("id")) {
        IdScores s;
        const auto& id = j.at("id");
        s.idp = id.at("idp").get<double>();
        s.idr = id.at("idr").get<double>();
        s.idf1 = id.at("idf1").get<double>();
        s.idtp = id.at("idtp").get<std::int64_t>();
        s.idfp = id.at("idfp").get<std::int64_t>();
        s.idfn = id.at("idfn").get<std::int64_t>();
        doc.id = s;
    }
    if (j.contains("event")) {
        EventScores e;
        const auto& ev = j.at("event");
        e.tp = ev.at("tp").get<std::int64_t>();
        e.fp = ev.at("fp").get<std::int64_t>();
        e.fn = ev.at("fn").get<std::int64_t>();
        e.mismatches.phi_w = ev.at("phi_w").get<std::int64_t>();
        e.mismatches.phi_h = ev.at("phi_h").get<std::int64_t>();
        e.mismatches.gamma_w = ev.at("gamma_w").get<std::int64_t>();
        e.mismatches.gamma_h = ev.at("gamma_h").get<std::int64_t>();
        e.precision = ev.at("precision").get<double>();
        e.recall = ev.at("recall").get<double>();
        e.mota = ev.at("mota").get<double>();
        e.motp = ev.at("motp").get<double>();
        e.mt = ev.at("mt").get<std::int64_t>();
        e.ml = ev.at("ml").get<std::int64_t>();
        e.frg = ev.at("frg").get<std::int64_t>();
        e.mcta = ev.at("mcta").get<double>();
        doc.event = e;
    }
    if (j.contains("per_camera")) {
        for (const auto& row : j.at("per_camera")) {
            ReportPerCameraRow r;
            r.camera = row.at("camera").get<std::string>();
            r.fp = row.at("fp").get<std::int64_t>();
            r.fn = row.at("fn").get<std::int64_t>();
            r.ids = row.at("ids").get<std::int64_t>();
            r.frg = row.at("frg").get<std::int64_t>();
            r.mota = row.at("mota").get<double>();
            r.motp = row.at("motp").get<double>();
            r.gt = row.at("gt").get<std::int64_t>();
            r.mt = row.at("mt").get<std::int64_t>();
            r.ml = row.at("ml").get<std::int64_t>();
            r.mcta = row.at("mcta").get<double>();
            r.idp = row.at("idp").get<double>();
            r.idr = row.at("idr").get<double>();
            r.idf1 = row.at("idf1").get<double>();
            doc.per_camera.push_back(std::move(r));
        }
    }
    if (j.contains("handover")) {
        ReportHandover h;
        const auto& ho = j.at("handover");
        h.e_multi = ho.at("e_multi").get<std::int64_t>();
        h.e_single = ho.at("e_single").get<std::int64_t>();
        h.difference = ho.at("difference").get<std::int64_t>();
        h.idp_delta = ho.at("idp_delta").get<double>();
        h.idr_delta = ho.at("idr_delta").get<double>();
        h.idf1_delta = ho.at("idf1_delta").get<double>();
        h.single_camera = ho.at("single_camera").get<bool>();
        h.transitions = ho.at("transitions").get<std::int64_t>();
        for (const auto& [name, count] : ho.at("cases").items())
            h.cases.emplace(name, count.get<std::int64_t>());
        doc.handover = h;
    }
    return doc;
}

inline void write_report_text(const ReportDocument& doc, std::ostream& out) {
    auto num = [](double v) { return detail::fixed4(v); };
    out << "mtmc-metrics " << doc.version << "\n";
    out << "gt rows: " << doc.digest.gt_rows << "  res rows: " << doc.digest.res_rows
        << "  cameras: " << doc.digest.cameras.size() << "  mode: " << doc.digest.mode
        << "  delta: " << num(doc.digest.delta) << "\n";
    if (doc.id) {
        const IdScores& s = *doc.id;
        out << "\nidentity measures\n";
        out << "  IDP " << num(s.idp) << "  IDR " << num(s.idr) << "  IDF1 " << num(s.idf1)
            << "  (IDTP " << s.idtp << "  IDFP " << s.idfp << "  IDFN " << s.idfn << ")\n";
    }
    if (doc.event) {
        const EventScores& e = *doc.event;
        out << "\nevent measures\n";
        out << "  TP " << e.tp << "  FP " << e.fp << "  FN " << e.fn << "  Phi "
            << e.mismatches.phi() << " (w " << e.mismatches.phi_w << ", h "
            << e.mismatches.phi_h << ")  Gamma " << e.mismatches.gamma() << " (w "
            << e.mismatches.gamma_w << ", h " << e.mismatches.gamma_h << ")\n";
        out << "  MOTA " << num(e.mota) << "  MOTP " << num(e.motp) << "  P "
            << num(e.precision) << "  R " << num(e.recall) << "  MCTA " << num(e.mcta)
            << "\n";
        out << "  MT " << e.mt << "  ML " << e.ml << "  FRG " << e.frg << "\n";
    }
    if (!doc.per_camera.empty()) {
        out << "\nper camera\n";
        char line[256];
        std::snprintf(line, sizeof(line), "  %6s %8s %8s %6s %6s %8s %8s %6s %5s %5s %8s %8s %8s\n",
                      "cam", "FP", "FN", "IDS", "FRG", "MOTA", "MOTP", "GT", "MT", "ML",
                      "IDP", "IDR", "IDF1");
        out << line;
        for (const ReportPerCameraRow& r : doc.per_camera) {
            std::snprintf(line, sizeof(line),
                          "  %6s %8lld %8lld %6lld %6lld %8.4f %8.4f %6lld %5lld %5lld %8.4f %8.4f %8.4f\n",
                          r.camera.c_str(), static_cast<long long>(r.fp),
                          static_cast<long long>(r.fn), static_cast<long long>(r.ids),
                          static_cast<long long>(r.frg), r.mota, r.motp,
                          static_cast<long long>(r.gt), static_cast<long long>(r.mt),
                          static_cast<long long>(r.ml), r.idp, r.idr, r.idf1);
            out << line;
        }
    }
    if (doc.handover) {
        const ReportHandover& h = *doc.handover;
        out << "\nhandover difficulty\n";
        out << "  E_multi " << h.e_multi << "  E_single " << h.e_single << "  difference "
            << h.difference;
        if (h.single_camera) out << "  (single camera: no cross-camera constraint)";
        out << "\n";
        out << "  IDP delta " << num(h.idp_delta) << "  IDR delta " << num(h.idr_delta)
            << "  IDF1 delta " << num(h.idf1_delta) << "\n";
        out << "  transitions " << h.transitions << "\n";
        for (const auto& [name, count] : h.cases)
            out << "    " << name << ": " << count << "\n";
    }
}

inline void write_report(const ReportDocument& doc, const std::string& json_path,
                         const std::string& text_path) {
    if (!json_path.empty()) {
        std::ofstream out(json_path);
        if (!out) throw IoError("cannot write report: " + json_path);
        write_report_json(doc, out);
        if (!out) throw IoError("error while writing report: " + json_path);
    }
    if (!text_path.empty()) {
        std::ofstream out(text_path);
        if (!out) throw IoError("cannot write report: " + text_path);
        write_report_text(doc, out);
        if (!out) throw IoError("error while writing report: " + text_path);
    }
}

} // namespace mtmc
