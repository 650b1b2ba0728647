// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string_view>

#include "textdet/boxcodec.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace textdet::cli {

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

void write_file(const fs::path& path, std::string_view content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + path.string());
}

std::string shortest(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) fields.push_back(line.substr(start, i - start));
    }
    return fields;
}

std::vector<std::vector<double>> parse_table(std::string_view content, std::size_t per_line,
                                             const char* what) {
    std::vector<std::vector<double>> rows;
    textdet::detail::for_each_line(content, [&](std::string_view line, std::size_t line_no) {
        const auto fields = split_ws(line);
        if (fields.size() != per_line) {
            throw ParseError(line_no, std::string(what) + " record needs " +
                                          std::to_string(per_line) + " values, got " +
                                          std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(per_line);
        for (const auto& f : fields) {
            const auto v = textdet::detail::parse_real(f);
            if (!v) throw ParseError(line_no, std::string(what) + ": malformed number");
            row.push_back(*v);
        }
        rows.push_back(std::move(row));
    });
    return rows;
}

std::vector<double> parse_csv_numbers(std::string_view spec, const char* what) {
    std::vector<double> values;
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t comma = spec.find(',', start);
        const std::string_view field =
            spec.substr(start, comma == std::string_view::npos ? comma : comma - start);
        const auto v = textdet::detail::parse_real(field);
        if (!v) throw std::invalid_argument(std::string(what) + ": malformed number list");
        values.push_back(*v);
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return values;
}

std::vector<std::pair<std::size_t, std::size_t>> parse_pooled_sizes(std::string_view spec) {
    std::vector<std::pair<std::size_t, std::size_t>> sizes;
    std::size_t start = 0;
    while (start <= spec.size()) {
        const std::size_t comma = spec.find(',', start);
        const std::string_view item =
            spec.substr(start, comma == std::string_view::npos ? comma : comma - start);
        const std::size_t x = item.find('x');
        if (x == std::string_view::npos) {
            throw std::invalid_argument("pooled sizes must look like 7x7,11x3,3x11");
        }
        const auto h = textdet::detail::parse_real(item.substr(0, x));
        const auto w = textdet::detail::parse_real(item.substr(x + 1));
        if (!h || !w || *h < 1.0 || *w < 1.0 || *h != std::floor(*h) || *w != std::floor(*w)) {
            throw std::invalid_argument("pooled sizes must be positive integers");
        }
        sizes.emplace_back(static_cast<std::size_t>(*h), static_cast<std::size_t>(*w));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    if (sizes.empty()) throw std::invalid_argument("pooled size list is empty");
    return sizes;
}

RotRect lift_proposal(const AABB& box) {
    return RotRect(Point2{box.min_x(), box.min_y()}, Point2{box.max_x(), box.min_y()}, box.h);
}

std::string angle_label(double angle) {
    if (angle == std::floor(angle) && std::abs(angle) < 1e6) {
        return std::to_string(static_cast<long long>(angle));
    }
    return shortest(angle);
}

// Sorted (pair key -> path) map of the regular files in a directory. The
// pairing key is the filename stem with a leading gt_ / res_ stripped, so
// ICDAR-style gt_img_1.txt pairs with res_img_1.txt or img_1.txt.
std::map<std::string, fs::path> stem_index(const fs::path& dir) {
    if (!fs::is_directory(dir)) {
        throw std::runtime_error("not a directory: " + dir.string());
    }
    std::map<std::string, fs::path> index;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string stem = entry.path().stem().string();
        for (std::string_view prefix : {"gt_", "res_"}) {
            if (stem.starts_with(prefix)) stem = stem.substr(prefix.size());
        }
        if (!index.emplace(stem, entry.path()).second) {
            throw std::runtime_error("duplicate stem '" + stem + "' in " + dir.string());
        }
    }
    return index;
}

json eval_row(const EvalResult& r) {
    return json{{"true_positives", r.true_positives},
                {"detections_counted", r.num_detections_counted},
                {"gts_counted", r.num_gt_counted},
                {"precision", r.precision},
                {"recall", r.recall},
                {"f_measure", r.f_measure}};
}

// ---- subcommand bodies --------------------------------------------------

int cmd_convert(const std::vector<std::string>& inputs, const std::string& out_dir,
                std::ostream& out, std::ostream& err) {
    for (const auto& input : inputs) {
        const fs::path in_path(input);
        std::vector<std::string> warnings;
        const auto entries = parse_gt_file(read_file(in_path), &warnings);
        for (const auto& w : warnings) err << in_path.filename().string() << ": " << w << "\n";
        const std::string body = write_training_boxes(entries);
        const fs::path out_path = fs::path(out_dir) / in_path.filename();
        write_file(out_path, body);
        const std::size_t kept = static_cast<std::size_t>(
            std::count(body.begin(), body.end(), '\n'));
        out << out_path.string() << ": " << kept << " of " << entries.size() << " entries\n";
    }
    return 0;
}

int cmd_postprocess(const std::string& proposals_path, const std::string& logits_path,
                    const std::string& deltas_path, const std::string& out_path,
                    const PostprocessConfig& cfg, DetectionFormat format,
                    const std::string& feature_map_path, const std::string& pooled_out_path,
                    std::ostream& out, std::ostream& err) {
    auto records = zip_head_records(parse_proposals(read_file(proposals_path)),
                                    parse_logits(read_file(logits_path)),
                                    parse_deltas(read_file(deltas_path)));
    const PostprocessResult result = run_postprocess(records, cfg);
    if (result.dropped_degenerate > 0) {
        err << "warning: dropped " << result.dropped_degenerate << " degenerate decode(s)\n";
    }
    write_file(out_path, write_detections(result.detections, format));

    if (!feature_map_path.empty()) {
        std::ifstream fm_in(feature_map_path, std::ios::binary);
        if (!fm_in) throw std::runtime_error("cannot read " + feature_map_path);
        const FeatureMap fm = read_feature_map(fm_in);
        std::string pooled;
        for (std::size_t i = 0; i < result.detections.size(); ++i) {
            const AABB& proposal = records[result.source_records[i]].proposal;
            const auto features = multi_pool_concat(fm, proposal, cfg.pooled_sizes);
            for (std::size_t k = 0; k < features.size(); ++k) {
                if (k > 0) pooled += ' ';
                pooled += shortest(features[k]);
            }
            pooled += '\n';
        }
        if (pooled_out_path.empty()) {
            throw std::invalid_argument("--pooled-out is required with --feature-map");
        }
        write_file(pooled_out_path, pooled);
    }
    out << "kept " << result.detections.size() << " of " << records.size() << " records\n";
    return 0;
}

int cmd_eval(const std::string& det_dir, const std::string& gt_dir, double match_iou,
             double dontcare_overlap, const std::string& out_path, std::ostream& out,
             std::ostream& /*err*/) {
    const auto dets_by_stem = stem_index(det_dir);
    const auto gts_by_stem = stem_index(gt_dir);

    std::set<std::string> keys;
    for (const auto& [k, _] : dets_by_stem) keys.insert(k);
    for (const auto& [k, _] : gts_by_stem) keys.insert(k);

    json images = json::array();
    EvalResult totals;
    for (const auto& key : keys) {
        std::vector<Detection> dets;
        if (const auto it = dets_by_stem.find(key); it != dets_by_stem.end()) {
            dets = parse_detections(read_file(it->second));
        }
        std::vector<GroundTruthEntry> gts;
        if (const auto it = gts_by_stem.find(key); it != gts_by_stem.end()) {
            gts = parse_gt_file(read_file(it->second));
        }
        const EvalResult r = evaluate(dets, gts, match_iou, dontcare_overlap);
        json row = eval_row(r);
        row["name"] = key;
        images.push_back(std::move(row));
        totals.true_positives += r.true_positives;
        totals.num_detections_counted += r.num_detections_counted;
        totals.num_gt_counted += r.num_gt_counted;
    }
    finalize_rates(totals);

    const json report{{"images", images}, {"totals", eval_row(totals)}};
    const std::string text = report.dump(2) + "\n";
    if (out_path.empty()) {
        out << text;
    } else {
        write_file(out_path, text);
    }
    return 0;
}

int cmd_augment(const std::string& gt_dir, const std::string& out_dir,
                const std::vector<double>& angles, double width, double height, std::ostream& out,
                std::ostream& /*err*/) {
    const auto gts_by_stem = stem_index(gt_dir);
    std::vector<fs::path> files;
    for (const auto& [_, path] : gts_by_stem) files.push_back(path);
    std::sort(files.begin(), files.end());

    std::size_t written = 0;
    for (double angle : angles) {
        const fs::path angle_dir = fs::path(out_dir) / ("angle_" + angle_label(angle));
        int canvas_w = 0;
        int canvas_h = 0;
        for (const auto& file : files) {
            const auto entries = parse_gt_file(read_file(file));
            const AugmentedLabels rotated = augment_rotate(entries, width, height, angle);
            write_file(angle_dir / file.filename(), write_gt_file(rotated.entries));
            canvas_w = rotated.width;
            canvas_h = rotated.height;
            ++written;
        }
        out << "angle " << angle_label(angle) << ": " << files.size() << " file(s), canvas "
            << canvas_w << "x" << canvas_h << "\n";
    }
    out << written << " file(s) written\n";
    return 0;
}

int cmd_render(const std::vector<std::string>& gt_files, const std::vector<std::string>& det_files,
               double width, double height, const std::string& out_path, std::ostream& out,
               std::ostream& /*err*/) {
    std::vector<GroundTruthEntry> gts;
    for (const auto& file : gt_files) {
        auto entries = parse_gt_file(read_file(file));
        gts.insert(gts.end(), entries.begin(), entries.end());
    }
    std::vector<Detection> dets;
    for (const auto& file : det_files) {
        auto parsed = parse_detections(read_file(file));
        dets.insert(dets.end(), parsed.begin(), parsed.end());
    }
    const std::string svg = render_svg(gts, dets, width, height);
    if (out_path.empty()) {
        out << svg;
    } else {
        write_file(out_path, svg);
    }
    return 0;
}

int cmd_iou(const std::string& box_a, const std::string& box_b, std::ostream& out) {
    const auto a = parse_csv_numbers(box_a, "box");
    const auto b = parse_csv_numbers(box_b, "box");

    const auto to_rect = [](const std::vector<double>& v) -> RotRect {
        if (v.size() == 5) {
            return RotRect(Point2{v[0], v[1]}, Point2{v[2], v[3]}, v[4]);
        }
        const std::array<Point2, 4> corners{Point2{v[0], v[1]}, Point2{v[2], v[3]},
                                            Point2{v[4], v[5]}, Point2{v[6], v[7]}};
        return min_area_rect(textdet::detail::repair_winding(corners, 1, nullptr));
    };

    double iou = 0.0;
    if (a.size() == 4 && b.size() == 4) {
        iou = aabb_iou(AABB(a[0], a[1], a[2], a[3]), AABB(b[0], b[1], b[2], b[3]));
    } else if ((a.size() == 5 || a.size() == 8) && (b.size() == 5 || b.size() == 8)) {
        iou = rotated_iou(to_rect(a), to_rect(b));
    } else {
        throw std::invalid_argument(
            "boxes must both be cx,cy,w,h (4), x1,y1,x2,y2,h (5) or a full quad (8)");
    }
    out << textdet::detail::format_fixed(iou, 9) << "\n";
    return 0;
}

// Multiple files (e.g. per-scale detection sets) are concatenated in the
// given order; printed indices run over the concatenation.
int cmd_nms(const std::vector<std::string>& files, NmsMode mode, double iou_thresh,
            std::ostream& out) {
    std::vector<Detection> dets;
    for (const auto& file : files) {
        auto parsed = parse_detections(read_file(file));
        dets.insert(dets.end(), parsed.begin(), parsed.end());
    }
    const auto kept = mode == NmsMode::inclined ? nms_inclined(dets, iou_thresh)
                                                : nms_axis_aligned(dets, iou_thresh);
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (i > 0) out << ' ';
        out << kept[i];
    }
    out << "\n";
    return 0;
}

}  // namespace

std::vector<AABB> parse_proposals(std::string_view content) {
    std::vector<AABB> proposals;
    for (const auto& row : parse_table(content, 4, "proposal")) {
        proposals.emplace_back(row[0], row[1], row[2], row[3]);
    }
    return proposals;
}

std::vector<std::pair<double, double>> parse_logits(std::string_view content) {
    std::vector<std::pair<double, double>> logits;
    for (const auto& row : parse_table(content, 2, "logit")) {
        logits.emplace_back(row[0], row[1]);
    }
    return logits;
}

std::vector<std::pair<AADeltas, InclinedDeltas>> parse_deltas(std::string_view content) {
    std::vector<std::pair<AADeltas, InclinedDeltas>> deltas;
    for (const auto& row : parse_table(content, 9, "delta")) {
        deltas.emplace_back(AADeltas(row[0], row[1], row[2], row[3]),
                            InclinedDeltas(row[4], row[5], row[6], row[7], row[8]));
    }
    return deltas;
}

std::vector<HeadRecord> zip_head_records(std::vector<AABB> proposals,
                                         std::vector<std::pair<double, double>> logits,
                                         std::vector<std::pair<AADeltas, InclinedDeltas>> deltas) {
    if (proposals.size() != logits.size() || proposals.size() != deltas.size()) {
        throw FixtureMismatch("record counts differ: " + std::to_string(proposals.size()) +
                              " proposal(s), " + std::to_string(logits.size()) + " logit(s), " +
                              std::to_string(deltas.size()) + " delta(s)");
    }
    std::vector<HeadRecord> records;
    records.reserve(proposals.size());
    for (std::size_t i = 0; i < proposals.size(); ++i) {
        records.push_back(HeadRecord{proposals[i], logits[i].first, logits[i].second,
                                     deltas[i].first, deltas[i].second});
    }
    return records;
}

PostprocessResult run_postprocess(std::span<const HeadRecord> records,
                                  const PostprocessConfig& cfg) {
    if (!(cfg.score_threshold >= 0.0 && cfg.score_threshold <= 1.0) ||
        !(cfg.nms_iou >= 0.0 && cfg.nms_iou <= 1.0)) {
        throw std::invalid_argument("postprocess thresholds must lie in [0,1]");
    }

    std::vector<Detection> candidates;
    std::vector<std::size_t> sources;
    PostprocessResult result;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const HeadRecord& rec = records[i];
        const ClassProb p = softmax2(rec.logit0, rec.logit1);
        if (p.p1 < cfg.score_threshold) continue;

        const AABB axis = decode_aabb(rec.proposal, rec.aabb_deltas);
        const InclinedDeltas& u = rec.inclined_deltas;
        const bool zero_deltas =
            u.ux1 == 0.0 && u.uy1 == 0.0 && u.ux2 == 0.0 && u.uy2 == 0.0 && u.uh == 0.0;
        try {
            const RotRect inclined =
                zero_deltas ? lift_proposal(rec.proposal) : decode_inclined(rec.proposal, u);
            candidates.emplace_back(inclined, axis, p.p1);
            sources.push_back(i);
        } catch (const DegenerateDecode&) {
            ++result.dropped_degenerate;
        }
    }

    const auto kept = cfg.nms_mode == NmsMode::inclined
                          ? nms_inclined(candidates, cfg.nms_iou)
                          : nms_axis_aligned(candidates, cfg.nms_iou);
    for (std::size_t k : kept) {
        result.detections.push_back(candidates[k]);
        result.source_records.push_back(sources[k]);
    }
    return result;
}

std::string render_svg(std::span<const GroundTruthEntry> gts, std::span<const Detection> dets,
                       double canvas_w, double canvas_h) {
    if (!(canvas_w > 0.0) || !(canvas_h > 0.0)) {
        throw std::invalid_argument("render canvas must be positive");
    }
    const std::string w = shortest(canvas_w);
    const std::string h = shortest(canvas_h);
    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + w + "\" height=\"" + h +
           "\" viewBox=\"0 0 " + w + " " + h + "\">\n";
    svg += "<style>.gt{fill:none;stroke:#1f9d3a;stroke-width:2}"
           ".det{fill:none;stroke:#d43d3d;stroke-width:2;stroke-dasharray:6 3}</style>\n";

    const auto polygon = [](const std::array<Point2, 4>& v, const char* cls) {
        std::string line = "<polygon class=\"";
        line += cls;
        line += "\" points=\"";
        for (std::size_t i = 0; i < 4; ++i) {
            if (i > 0) line += ' ';
            line += textdet::detail::format_fixed(v[i].x, 2);
            line += ',';
            line += textdet::detail::format_fixed(v[i].y, 2);
        }
        line += "\"/>\n";
        return line;
    };

    for (const auto& gt : gts) svg += polygon(gt.quad.vertices, "gt");
    for (const auto& det : dets) svg += polygon(det.inclined.corners(), "det");
    svg += "</svg>\n";
    return svg;
}

std::string write_training_boxes(std::span<const GroundTruthEntry> entries) {
    std::string out;
    for (const auto& entry : entries) {
        const auto boxes = make_training_boxes(entry);
        if (!boxes) continue;
        const RotRect& r = boxes->inclined;
        const AABB& a = boxes->axis_aligned;
        const std::array<double, 9> values{r.p1.x, r.p1.y, r.p2.x, r.p2.y, r.height,
                                           a.cx,   a.cy,   a.w,    a.h};
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i > 0) out += ',';
            out += textdet::detail::format_fixed(values[i], 6);
        }
        out += '\n';
    }
    return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rotated scene-text detection geometry and post-processing toolkit"};
    app.require_subcommand(1);

    // convert
    std::vector<std::string> convert_inputs;
    std::string convert_out_dir;
    auto* convert = app.add_subcommand("convert", "Ground-truth files to training-box files");
    convert->add_option("--out-dir", convert_out_dir, "Output directory")->required();
    convert->add_option("inputs", convert_inputs, "Ground-truth files")->required();

    // postprocess
    std::string pp_proposals, pp_logits, pp_deltas, pp_out, pp_mode = "inclined";
    std::string pp_format = "quad_score", pp_feature_map, pp_pooled_out, pp_sizes = "7x7,11x3,3x11";
    PostprocessConfig pp_cfg;
    auto* postprocess = app.add_subcommand("postprocess", "Decode network-head fixtures and NMS");
    postprocess->add_option("--proposals", pp_proposals, "Proposal fixture (cx cy w h per line)")
        ->required();
    postprocess->add_option("--logits", pp_logits, "Logit fixture (l0 l1 per line)")->required();
    postprocess->add_option("--deltas", pp_deltas, "Delta fixture (4+5 values per line)")
        ->required();
    postprocess->add_option("--out", pp_out, "Output detections file")->required();
    postprocess->add_option("--score-threshold", pp_cfg.score_threshold, "Keep score >= this");
    postprocess->add_option("--nms-iou", pp_cfg.nms_iou, "NMS IoU threshold");
    postprocess->add_option("--nms-mode", pp_mode, "inclined | axis_aligned");
    postprocess->add_option("--format", pp_format, "quad | quad_score");
    postprocess->add_option("--feature-map", pp_feature_map, "Feature-map fixture to pool over");
    postprocess->add_option("--pooled-out", pp_pooled_out, "Pooled-feature output file");
    postprocess->add_option("--pooled-sizes", pp_sizes, "e.g. 7x7,11x3,3x11");

    // eval
    std::string eval_det_dir, eval_gt_dir, eval_out;
    double eval_match_iou = 0.5, eval_dontcare = 0.5;
    auto* eval_cmd = app.add_subcommand("eval", "Precision/recall/F-measure over a corpus");
    eval_cmd->add_option("--det-dir", eval_det_dir, "Detections directory")->required();
    eval_cmd->add_option("--gt-dir", eval_gt_dir, "Ground-truth directory")->required();
    eval_cmd->add_option("--match-iou", eval_match_iou, "Match IoU threshold");
    eval_cmd->add_option("--dontcare-overlap", eval_dontcare, "Don't-care discard fraction");
    eval_cmd->add_option("--out", eval_out, "Report file (stdout when omitted)");

    // augment
    std::string aug_gt_dir, aug_out_dir;
    std::string aug_angles = "-90,-75,-60,-45,-30,-15,0,15,30,45,60,75,90";
    double aug_width = 1280.0, aug_height = 720.0;
    auto* augment = app.add_subcommand("augment", "Rotate label files onto expanded canvases");
    augment->add_option("--gt-dir", aug_gt_dir, "Ground-truth directory")->required();
    augment->add_option("--out-dir", aug_out_dir, "Output directory root")->required();
    augment->add_option("--angles", aug_angles, "Comma-separated degrees");
    augment->add_option("--width", aug_width, "Image width in pixels");
    augment->add_option("--height", aug_height, "Image height in pixels");

    // render
    std::vector<std::string> render_gts, render_dets;
    std::string render_out;
    double render_w = 1280.0, render_h = 720.0;
    auto* render = app.add_subcommand("render", "SVG overlay of boxes");
    render->add_option("--gt", render_gts, "Ground-truth file (repeatable)");
    render->add_option("--det", render_dets, "Detection file (repeatable)");
    render->add_option("--width", render_w, "Canvas width");
    render->add_option("--height", render_h, "Canvas height");
    render->add_option("--out", render_out, "Output SVG (stdout when omitted)");

    // iou
    std::string iou_a, iou_b;
    auto* iou = app.add_subcommand("iou", "IoU of two boxes given as comma-separated numbers");
    iou->add_option("a", iou_a, "First box: 4, 5 or 8 numbers")->required();
    iou->add_option("b", iou_b, "Second box: 4, 5 or 8 numbers")->required();

    // nms
    std::vector<std::string> nms_files;
    std::string nms_mode_name = "inclined";
    double nms_thresh = 0.3;
    auto* nms = app.add_subcommand("nms", "Print kept detection indices");
    nms->add_option("files", nms_files, "Detections file(s), concatenated in order")->required();
    nms->add_option("--mode", nms_mode_name, "inclined | axis_aligned");
    nms->add_option("--iou-thresh", nms_thresh, "Suppression threshold");

    std::vector<const char*> argv;
    argv.push_back("textdet");
    for (const auto& a : args) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err);
    }

    const auto parse_mode = [](const std::string& name) {
        if (name == "inclined") return NmsMode::inclined;
        if (name == "axis_aligned") return NmsMode::axis_aligned;
        throw std::invalid_argument("nms mode must be 'inclined' or 'axis_aligned'");
    };

    try {
        if (*convert) {
            return cmd_convert(convert_inputs, convert_out_dir, out, err);
        }
        if (*postprocess) {
            pp_cfg.nms_mode = parse_mode(pp_mode);
            pp_cfg.pooled_sizes = parse_pooled_sizes(pp_sizes);
            DetectionFormat format;
            if (pp_format == "quad") {
                format = DetectionFormat::quad;
            } else if (pp_format == "quad_score") {
                format = DetectionFormat::quad_score;
            } else {
                throw std::invalid_argument("format must be 'quad' or 'quad_score'");
            }
            return cmd_postprocess(pp_proposals, pp_logits, pp_deltas, pp_out, pp_cfg, format,
                                   pp_feature_map, pp_pooled_out, out, err);
        }
        if (*eval_cmd) {
            return cmd_eval(eval_det_dir, eval_gt_dir, eval_match_iou, eval_dontcare, eval_out,
                            out, err);
        }
        if (*augment) {
            const auto angles = parse_csv_numbers(aug_angles, "angles");
            return cmd_augment(aug_gt_dir, aug_out_dir, angles, aug_width, aug_height, out, err);
        }
        if (*render) {
            return cmd_render(render_gts, render_dets, render_w, render_h, render_out, out, err);
        }
        if (*iou) {
            return cmd_iou(iou_a, iou_b, out);
        }
        if (*nms) {
            return cmd_nms(nms_files, parse_mode(nms_mode_name), nms_thresh, out);
        }
    } catch (const ParseError& e) {
        err << "error: parse-error: " << e.what() << "\n";
        return 2;
    } catch (const FixtureMismatch& e) {
        err << "error: fixture-mismatch: " << e.what() << "\n";
        return 2;
    } catch (const DegenerateInput& e) {
        err << "error: degenerate-input: " << e.what() << "\n";
        return 2;
    } catch (const EmptyRoi& e) {
        err << "error: empty-roi: " << e.what() << "\n";
        return 2;
    } catch (const std::overflow_error& e) {
        err << "error: overflow: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: invalid-argument: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: runtime: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

}  // namespace textdet::cli
