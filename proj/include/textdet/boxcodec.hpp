// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <stdexcept>

#include "textdet/geometry.hpp"

/// Regression target encoding/decoding for axis-aligned and inclined boxes,
/// plus the multi-task detection loss. Both encodings are relative to a
/// single proposal box: centers shift scale-invariantly, sizes shift in log
/// space.

namespace textdet {

/// A prediction decoded to an unusable rectangle; callers drop it.
struct DegenerateDecode : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Log loss hit a hard-zero probability, which signals malformed fixture
/// input rather than a numerics issue.
struct InfiniteLoss : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Axis-aligned deltas (vx, vy, vw, vh): proposal-relative center shift and
/// log-space size shift. Same shape for targets and predictions.
struct AADeltas {
    double vx;
    double vy;
    double vw;
    double vh;

    AADeltas(double vx_, double vy_, double vw_, double vh_) : vx(vx_), vy(vy_), vw(vw_), vh(vh_) {
        detail::require_finite(vx, "AADeltas.vx");
        detail::require_finite(vy, "AADeltas.vy");
        detail::require_finite(vw, "AADeltas.vw");
        detail::require_finite(vh, "AADeltas.vh");
    }
};

/// Inclined deltas (ux1, uy1, ux2, uy2, uh): the first two rectangle corners
/// encoded like (vx, vy), the height like vh.
struct InclinedDeltas {
    double ux1;
    double uy1;
    double ux2;
    double uy2;
    double uh;

    InclinedDeltas(double ux1_, double uy1_, double ux2_, double uy2_, double uh_)
        : ux1(ux1_), uy1(uy1_), ux2(ux2_), uy2(uy2_), uh(uh_) {
        detail::require_finite(ux1, "InclinedDeltas.ux1");
        detail::require_finite(uy1, "InclinedDeltas.uy1");
        detail::require_finite(ux2, "InclinedDeltas.ux2");
        detail::require_finite(uy2, "InclinedDeltas.uy2");
        detail::require_finite(uh, "InclinedDeltas.uh");
    }
};

/// Two-class probability (background, text); sums to 1.
struct ClassProb {
    double p0;
    double p1;

    ClassProb(double p0_, double p1_) : p0(p0_), p1(p1_) {
        if (!(p0 >= 0.0 && p0 <= 1.0) || !(p1 >= 0.0 && p1 <= 1.0)) {
            throw std::invalid_argument("ClassProb entries must lie in [0,1]");
        }
        if (std::abs(p0 + p1 - 1.0) > 1e-12) {
            throw std::invalid_argument("ClassProb must sum to 1");
        }
    }
};

enum class ClassLabel : int {
    background = 0,
    text = 1,
};

/// Balancing weights for the two regression terms. Default (1, 1).
struct LossWeights {
    double lambda1 = 1.0;
    double lambda2 = 1.0;

    LossWeights() = default;
    LossWeights(double l1, double l2) : lambda1(l1), lambda2(l2) {
        if (!(lambda1 >= 0.0) || !(lambda2 >= 0.0)) {
            throw std::invalid_argument("LossWeights must be non-negative");
        }
    }
};

inline AADeltas encode_aabb(const AABB& proposal, const AABB& gt) {
    return AADeltas((gt.cx - proposal.cx) / proposal.w, (gt.cy - proposal.cy) / proposal.h,
                    std::log(gt.w / proposal.w), std::log(gt.h / proposal.h));
}

/// Inverse of encode_aabb. Rejects absurd log-size deltas (> 50) so corrupt
/// fixture data fails loudly instead of producing astronomical boxes.
inline AABB decode_aabb(const AABB& proposal, const AADeltas& d) {
    if (d.vw > 50.0 || d.vh > 50.0) {
        throw std::overflow_error("decode_aabb: log-size delta exceeds 50");
    }
    return AABB(proposal.cx + d.vx * proposal.w, proposal.cy + d.vy * proposal.h,
                proposal.w * std::exp(d.vw), proposal.h * std::exp(d.vh));
}

/// Point order of gt matters and is preserved: the caller decides between
/// canonical and label order.
inline InclinedDeltas encode_inclined(const AABB& proposal, const RotRect& gt) {
    return InclinedDeltas((gt.p1.x - proposal.cx) / proposal.w, (gt.p1.y - proposal.cy) / proposal.h,
                          (gt.p2.x - proposal.cx) / proposal.w, (gt.p2.y - proposal.cy) / proposal.h,
                          std::log(gt.height / proposal.h));
}

/// Inverse of encode_inclined. Throws DegenerateDecode when the decoded
/// rectangle cannot exist (coincident corner points or unusable height).
inline RotRect decode_inclined(const AABB& proposal, const InclinedDeltas& d) {
    const Point2 p1{proposal.cx + d.ux1 * proposal.w, proposal.cy + d.uy1 * proposal.h};
    const Point2 p2{proposal.cx + d.ux2 * proposal.w, proposal.cy + d.uy2 * proposal.h};
    const double height = proposal.h * std::exp(d.uh);
    if (!(norm(p2 - p1) > kDegenerateEps) || !(height > kDegenerateEps) ||
        !std::isfinite(height)) {
        throw DegenerateDecode("decode_inclined: degenerate rectangle");
    }
    return RotRect(p1, p2, height);
}

/// Piecewise robust loss: quadratic inside |x| < 1, linear outside.
inline double smooth_l1(double x) {
    const double ax = std::abs(x);
    return ax < 1.0 ? 0.5 * x * x : ax - 0.5;
}

inline double reg_loss(const AADeltas& pred, const AADeltas& target) {
    return smooth_l1(pred.vx - target.vx) + smooth_l1(pred.vy - target.vy) +
           smooth_l1(pred.vw - target.vw) + smooth_l1(pred.vh - target.vh);
}

inline double reg_loss(const InclinedDeltas& pred, const InclinedDeltas& target) {
    return smooth_l1(pred.ux1 - target.ux1) + smooth_l1(pred.uy1 - target.uy1) +
           smooth_l1(pred.ux2 - target.ux2) + smooth_l1(pred.uy2 - target.uy2) +
           smooth_l1(pred.uh - target.uh);
}

/// Numerically stable two-way softmax.
inline ClassProb softmax2(double logit0, double logit1) {
    detail::require_finite(logit0, "softmax2 logit0");
    detail::require_finite(logit1, "softmax2 logit1");
    const double m = std::max(logit0, logit1);
    const double e0 = std::exp(logit0 - m);
    const double e1 = std::exp(logit1 - m);
    return ClassProb(e0 / (e0 + e1), e1 / (e0 + e1));
}

/// Log loss for the true class.
inline double cls_loss(const ClassProb& p, ClassLabel t) {
    const double pt = (t == ClassLabel::text) ? p.p1 : p.p0;
    if (pt == 0.0) {
        throw InfiniteLoss("cls_loss: true-class probability is zero");
    }
    return -std::log(pt);
}

/// Per-proposal total: classification loss plus, for text proposals only,
/// the weighted axis-aligned and inclined regression losses. Background
/// proposals return the classification loss exactly.
inline double multitask_loss(const ClassProb& p, ClassLabel t, const AADeltas& v_pred,
                             const AADeltas& v_target, const InclinedDeltas& u_pred,
                             const InclinedDeltas& u_target, const LossWeights& weights = {}) {
    const double cls = cls_loss(p, t);
    if (t == ClassLabel::background) return cls;
    return cls + weights.lambda1 * reg_loss(v_pred, v_target) +
           weights.lambda2 * reg_loss(u_pred, u_target);
}

}  // namespace textdet
