// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "textdet/geometry.hpp"
#include "textdet/icdar_io.hpp"
#include "textdet/nms.hpp"

/// Detection evaluation: Precision / Recall / F-measure with don't-care
/// handling, greedy matching by score on polygon IoU.

namespace textdet {

struct EvalResult {
    std::size_t true_positives = 0;
    std::size_t num_detections_counted = 0;
    std::size_t num_gt_counted = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    /// One-to-one (detection index, gt index) pairs, original indices.
    std::vector<std::pair<std::size_t, std::size_t>> matches;
};

namespace detail {

inline double quad_iou(const Quad& a, const Quad& b) {
    const double inter = polygon_intersection_area(a, b);
    const double denom = a.area() + b.area() - inter;
    if (!(denom > 0.0)) return 0.0;
    return std::clamp(inter / denom, 0.0, 1.0);
}

}  // namespace detail

/// Computes precision / recall / f-measure from summed counts; zero
/// denominators yield zero by convention.
inline void finalize_rates(EvalResult& r) {
    r.precision = r.num_detections_counted == 0
                      ? 0.0
                      : static_cast<double>(r.true_positives) /
                            static_cast<double>(r.num_detections_counted);
    r.recall = r.num_gt_counted == 0 ? 0.0
                                     : static_cast<double>(r.true_positives) /
                                           static_cast<double>(r.num_gt_counted);
    r.f_measure = (r.precision + r.recall) == 0.0
                      ? 0.0
                      : 2.0 * r.precision * r.recall / (r.precision + r.recall);
}

/// Evaluation protocol:
///   1. detections overlapping a don't-care region by more than
///      dontcare_overlap of their own area are discarded entirely;
///   2. don't-care gts are excluded from the gt count;
///   3. remaining detections greedily match, in descending score order
///      (ties by lower index), the unmatched counted gt of maximal polygon
///      IoU when that IoU strictly exceeds match_iou.
inline EvalResult evaluate(std::span<const Detection> dets, std::span<const GroundTruthEntry> gts,
                           double match_iou = 0.5, double dontcare_overlap = 0.5) {
    if (!(match_iou >= 0.0 && match_iou <= 1.0) ||
        !(dontcare_overlap >= 0.0 && dontcare_overlap <= 1.0)) {
        throw std::invalid_argument("evaluate thresholds must lie in [0,1]");
    }

    EvalResult result;
    std::vector<std::size_t> counted_gts;
    std::vector<const Quad*> dontcare_quads;
    for (std::size_t g = 0; g < gts.size(); ++g) {
        if (gts[g].dont_care) {
            dontcare_quads.push_back(&gts[g].quad);
        } else {
            counted_gts.push_back(g);
        }
    }
    result.num_gt_counted = counted_gts.size();

    std::vector<Quad> det_quads;
    det_quads.reserve(dets.size());
    std::vector<bool> discarded(dets.size(), false);
    for (std::size_t i = 0; i < dets.size(); ++i) {
        det_quads.push_back(dets[i].inclined.to_quad());
        const double det_area = det_quads.back().area();
        for (const Quad* dc : dontcare_quads) {
            if (polygon_intersection_area(det_quads.back(), *dc) / det_area > dontcare_overlap) {
                discarded[i] = true;
                break;
            }
        }
        if (!discarded[i]) ++result.num_detections_counted;
    }

    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dets[a].score != dets[b].score) return dets[a].score > dets[b].score;
        return a < b;
    });

    std::vector<bool> gt_taken(gts.size(), false);
    for (std::size_t d : order) {
        if (discarded[d]) continue;
        double best_iou = 0.0;
        std::size_t best_gt = gts.size();
        for (std::size_t g : counted_gts) {
            if (gt_taken[g]) continue;
            const double iou = detail::quad_iou(det_quads[d], gts[g].quad);
            if (iou > best_iou) {
                best_iou = iou;
                best_gt = g;
            }
        }
        if (best_gt != gts.size() && best_iou > match_iou) {
            gt_taken[best_gt] = true;
            result.matches.emplace_back(d, best_gt);
        }
    }

    result.true_positives = result.matches.size();
    finalize_rates(result);
    return result;
}

}  // namespace textdet
