// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "textdet/geometry.hpp"

/// Anchor grid generation and ground-truth assignment for a region proposal
/// network over a strided feature grid.

namespace textdet {

/// Anchors per cell are |scales| x |ratios|; each anchor has area
/// (scale * base_size)^2 and aspect h/w = ratio.
struct AnchorConfig {
    std::vector<double> scales;
    std::vector<double> ratios{0.5, 1.0, 2.0};
    double base_size = 16.0;
    double stride = 16.0;
};

enum class AnchorLabel {
    positive,
    negative,
    ignore,
};

struct AnchorAssignment {
    AnchorLabel label = AnchorLabel::negative;
    std::optional<std::size_t> matched_gt;
    double max_iou = 0.0;
};

/// Anchors centered at ((j+0.5)*stride, (i+0.5)*stride), emitted row-major
/// over cells, scale-major then ratio within a cell.
inline std::vector<AABB> generate_anchors(const AnchorConfig& cfg, std::size_t grid_h,
                                          std::size_t grid_w) {
    if (cfg.scales.empty() || cfg.ratios.empty()) {
        throw std::invalid_argument("AnchorConfig scale/ratio lists must be non-empty");
    }
    for (double s : cfg.scales) {
        if (!(s > 0.0)) throw std::invalid_argument("anchor scales must be positive");
    }
    for (double r : cfg.ratios) {
        if (!(r > 0.0)) throw std::invalid_argument("anchor ratios must be positive");
    }
    if (!(cfg.base_size > 0.0) || !(cfg.stride > 0.0)) {
        throw std::invalid_argument("anchor base_size and stride must be positive");
    }
    if (grid_h == 0 || grid_w == 0) {
        throw std::invalid_argument("anchor grid dimensions must be positive");
    }

    std::vector<AABB> anchors;
    anchors.reserve(grid_h * grid_w * cfg.scales.size() * cfg.ratios.size());
    for (std::size_t i = 0; i < grid_h; ++i) {
        for (std::size_t j = 0; j < grid_w; ++j) {
            const double cx = (static_cast<double>(j) + 0.5) * cfg.stride;
            const double cy = (static_cast<double>(i) + 0.5) * cfg.stride;
            for (double scale : cfg.scales) {
                const double side = scale * cfg.base_size;
                for (double ratio : cfg.ratios) {
                    const double root = std::sqrt(ratio);
                    anchors.emplace_back(cx, cy, side / root, side * root);
                }
            }
        }
    }
    return anchors;
}

/// True when any part of the anchor lies outside [0, image_w] x [0, image_h].
/// Exposed as a predicate so callers choose between training-style filtering
/// and inference-style clipping.
inline bool crosses_boundary(const AABB& anchor, double image_w, double image_h) {
    return anchor.min_x() < 0.0 || anchor.min_y() < 0.0 || anchor.max_x() > image_w ||
           anchor.max_y() > image_h;
}

/// Labels every anchor positive / negative / ignore:
///   - positive when max IoU over gts >= pos_thresh, or when the anchor is
///     the argmax-IoU anchor of some gt (coverage rule; ties to the lowest
///     anchor index);
///   - negative when max IoU <= neg_thresh and not positive;
///   - ignore otherwise.
/// matched_gt is the anchor's own argmax gt (ties to the lowest gt index).
inline std::vector<AnchorAssignment> assign_anchors(std::span<const AABB> anchors,
                                                    std::span<const AABB> gts,
                                                    double pos_thresh = 0.7,
                                                    double neg_thresh = 0.3) {
    if (!(pos_thresh >= 0.0 && pos_thresh <= 1.0) || !(neg_thresh >= 0.0 && neg_thresh <= 1.0) ||
        pos_thresh < neg_thresh) {
        throw std::invalid_argument("assign_anchors thresholds must satisfy 0 <= neg <= pos <= 1");
    }

    std::vector<AnchorAssignment> out(anchors.size());
    if (gts.empty()) return out;  // all negative

    std::vector<double> gt_best(gts.size(), 0.0);
    std::vector<std::size_t> gt_argmax(gts.size(), 0);

    for (std::size_t a = 0; a < anchors.size(); ++a) {
        double best = 0.0;
        std::size_t best_gt = 0;
        for (std::size_t g = 0; g < gts.size(); ++g) {
            const double iou = aabb_iou(anchors[a], gts[g]);
            if (iou > best) {
                best = iou;
                best_gt = g;
            }
            if (iou > gt_best[g]) {
                gt_best[g] = iou;
                gt_argmax[g] = a;
            }
        }
        out[a].max_iou = best;
        if (best >= pos_thresh) {
            out[a].label = AnchorLabel::positive;
        } else if (best <= neg_thresh) {
            out[a].label = AnchorLabel::negative;
        } else {
            out[a].label = AnchorLabel::ignore;
        }
        if (best > 0.0) out[a].matched_gt = best_gt;
    }

    // Coverage: each overlapped gt claims its best anchor as positive.
    for (std::size_t g = 0; g < gts.size(); ++g) {
        if (gt_best[g] > 0.0) {
            auto& forced = out[gt_argmax[g]];
            forced.label = AnchorLabel::positive;
            if (!forced.matched_gt) forced.matched_gt = g;
        }
    }
    return out;
}

}  // namespace textdet
