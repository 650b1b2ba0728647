// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "textdet/boxcodec.hpp"
#include "textdet/eval.hpp"
#include "textdet/icdar_io.hpp"
#include "textdet/nms.hpp"
#include "textdet/roipool.hpp"

/// Command-line front end over the library: subcommands convert,
/// postprocess, eval, augment, render, iou and nms. All commands are
/// deterministic: identical inputs and flags produce byte-identical output.

namespace textdet::cli {

/// Fixture files that must line up record-for-record do not.
struct FixtureMismatch : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class NmsMode {
    inclined,
    axis_aligned,
};

struct PostprocessConfig {
    double score_threshold = 0.5;
    double nms_iou = 0.3;
    NmsMode nms_mode = NmsMode::inclined;
    std::vector<std::pair<std::size_t, std::size_t>> pooled_sizes{{7, 7}, {11, 3}, {3, 11}};
};

/// One record of the network-head fixture: a proposal box, two class
/// logits, and the 4+5 regression deltas predicted for it.
struct HeadRecord {
    AABB proposal;
    double logit0;
    double logit1;
    AADeltas aabb_deltas;
    InclinedDeltas inclined_deltas;
};

struct PostprocessResult {
    std::vector<Detection> detections;
    /// Original fixture record index per detection.
    std::vector<std::size_t> source_records;
    std::size_t dropped_degenerate = 0;
};

/// Fixture parsers; one whitespace-separated record per line.
std::vector<AABB> parse_proposals(std::string_view content);
std::vector<std::pair<double, double>> parse_logits(std::string_view content);
std::vector<std::pair<AADeltas, InclinedDeltas>> parse_deltas(std::string_view content);

/// Zips the three fixture files into records; throws FixtureMismatch when
/// the counts disagree.
std::vector<HeadRecord> zip_head_records(std::vector<AABB> proposals,
                                         std::vector<std::pair<double, double>> logits,
                                         std::vector<std::pair<AADeltas, InclinedDeltas>> deltas);

/// The post-network pipeline: softmax scoring, score-threshold filtering,
/// box decoding and NMS. Records whose inclined deltas are all zero decode
/// to the proposal box itself lifted to an axis-aligned rectangle (the
/// zero-delta convention); degenerate decodes are dropped and counted.
PostprocessResult run_postprocess(std::span<const HeadRecord> records,
                                  const PostprocessConfig& cfg);

/// SVG overlay of ground-truth and detection boxes on a blank canvas.
std::string render_svg(std::span<const GroundTruthEntry> gts, std::span<const Detection> dets,
                       double canvas_w, double canvas_h);

/// Serialized training boxes, one "x1,y1,x2,y2,h,cx,cy,w,h" line per kept
/// entry (6 decimals).
std::string write_training_boxes(std::span<const GroundTruthEntry> entries);

/// Entry point used by both main() and the tests. args excludes argv[0].
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace textdet::cli
