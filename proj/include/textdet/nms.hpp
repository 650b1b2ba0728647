// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "textdet/geometry.hpp"

/// Greedy non-maximum suppression over scored detections, in an axis-aligned
/// variant and an inclined variant that overlaps on rotated IoU.

namespace textdet {

/// One detection candidate: the inclined box, its associated axis-aligned
/// box, and a confidence score. The two geometries are not cross-checked
/// here -- fixtures may be inconsistent; use axis_aligned_consistent to flag.
struct Detection {
    RotRect inclined;
    AABB axis_aligned;
    double score;

    Detection(RotRect inclined_, AABB axis_aligned_, double score_)
        : inclined(inclined_), axis_aligned(axis_aligned_), score(score_) {
        if (!(score >= 0.0 && score <= 1.0)) {
            throw std::invalid_argument("Detection score must lie in [0,1]");
        }
    }
};

/// Flags detections whose axis-aligned box strays from the inclined box's
/// extent by more than tol pixels on any side.
inline bool axis_aligned_consistent(const Detection& d, double tol = 1.0) {
    const AABB hull = enclosing_aabb(d.inclined);
    return std::abs(hull.cx - d.axis_aligned.cx) <= tol &&
           std::abs(hull.cy - d.axis_aligned.cy) <= tol &&
           std::abs(hull.w - d.axis_aligned.w) <= tol &&
           std::abs(hull.h - d.axis_aligned.h) <= tol;
}

namespace detail {

// Greedy pass shared by both variants: visit by descending score (ties by
// lower original index), keep unless IoU with a kept detection strictly
// exceeds the threshold. Returns kept original indices in keep order.
template <typename IouFn>
std::vector<std::size_t> greedy_nms(std::span<const Detection> dets, double iou_thresh,
                                    IouFn&& iou) {
    if (!(iou_thresh >= 0.0 && iou_thresh <= 1.0)) {
        throw std::invalid_argument("NMS IoU threshold must lie in [0,1]");
    }
    std::vector<std::size_t> order(dets.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (dets[a].score != dets[b].score) return dets[a].score > dets[b].score;
        return a < b;
    });

    std::vector<std::size_t> kept;
    for (std::size_t candidate : order) {
        bool suppressed = false;
        for (std::size_t k : kept) {
            if (iou(dets[candidate], dets[k]) > iou_thresh) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(candidate);
    }
    return kept;
}

}  // namespace detail

inline std::vector<std::size_t> nms_axis_aligned(std::span<const Detection> dets,
                                                 double iou_thresh) {
    return detail::greedy_nms(dets, iou_thresh, [](const Detection& a, const Detection& b) {
        return aabb_iou(a.axis_aligned, b.axis_aligned);
    });
}

inline std::vector<std::size_t> nms_inclined(std::span<const Detection> dets, double iou_thresh) {
    return detail::greedy_nms(dets, iou_thresh, [](const Detection& a, const Detection& b) {
        return rotated_iou(a.inclined, b.inclined);
    });
}

}  // namespace textdet
