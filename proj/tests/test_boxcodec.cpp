// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "textdet/boxcodec.hpp"

using namespace textdet;

TEST_CASE("encode_aabb matches the stated parameterization") {
    const AABB proposal(10, 10, 20, 10);
    const AADeltas zero = encode_aabb(proposal, proposal);
    CHECK(zero.vx == 0.0);
    CHECK(zero.vy == 0.0);
    CHECK(zero.vw == 0.0);
    CHECK(zero.vh == 0.0);

    const AADeltas d = encode_aabb(proposal, AABB(14, 12, 40, 10));
    CHECK(d.vx == Catch::Approx(0.2));
    CHECK(d.vy == Catch::Approx(0.2));
    CHECK(d.vw == Catch::Approx(std::log(2.0)));
    CHECK(d.vh == Catch::Approx(0.0).margin(1e-15));
}

TEST_CASE("decode_aabb inverts encode_aabb") {
    const AABB proposal(10, 10, 20, 10);
    const AABB same = decode_aabb(proposal, AADeltas(0, 0, 0, 0));
    CHECK(same.cx == proposal.cx);
    CHECK(same.cy == proposal.cy);
    CHECK(same.w == proposal.w);
    CHECK(same.h == proposal.h);

    const AABB gt = decode_aabb(proposal, AADeltas(0.2, 0.2, std::log(2.0), 0.0));
    CHECK(gt.cx == Catch::Approx(14.0));
    CHECK(gt.cy == Catch::Approx(12.0));
    CHECK(gt.w == Catch::Approx(40.0));
    CHECK(gt.h == Catch::Approx(10.0));

    CHECK_THROWS_AS(decode_aabb(proposal, AADeltas(0, 0, 50.5, 0)), std::overflow_error);
    CHECK_THROWS_AS(decode_aabb(proposal, AADeltas(0, 0, 0, 51.0)), std::overflow_error);
}

TEST_CASE("aabb round-trip and decoded invariants hold on random pairs") {
    std::mt19937_64 rng(8101);
    for (int i = 0; i < 2000; ++i) {
        const AABB proposal = oracle::random_aabb(rng);
        const AABB gt = oracle::random_aabb(rng);
        const AABB back = decode_aabb(proposal, encode_aabb(proposal, gt));
        CHECK(std::abs(back.cx - gt.cx) <= 1e-9);
        CHECK(std::abs(back.cy - gt.cy) <= 1e-9);
        CHECK(std::abs(back.w - gt.w) <= 1e-9);
        CHECK(std::abs(back.h - gt.h) <= 1e-9);

        const AADeltas random_d(oracle::uniform(rng, -2, 2), oracle::uniform(rng, -2, 2),
                                oracle::uniform(rng, -2, 2), oracle::uniform(rng, -2, 2));
        const AABB decoded = decode_aabb(proposal, random_d);
        CHECK(decoded.w > 0.0);
        CHECK(decoded.h > 0.0);
    }
}

TEST_CASE("encode_aabb is invariant under common translation and scaling") {
    std::mt19937_64 rng(8102);
    for (int i = 0; i < 500; ++i) {
        const AABB p = oracle::random_aabb(rng);
        const AABB g = oracle::random_aabb(rng);
        const AADeltas base = encode_aabb(p, g);

        const double tx = oracle::uniform(rng, -50, 50);
        const double ty = oracle::uniform(rng, -50, 50);
        const AADeltas shifted = encode_aabb(AABB(p.cx + tx, p.cy + ty, p.w, p.h),
                                             AABB(g.cx + tx, g.cy + ty, g.w, g.h));
        CHECK(std::abs(shifted.vx - base.vx) <= 1e-12);
        CHECK(std::abs(shifted.vy - base.vy) <= 1e-12);
        CHECK(shifted.vw == base.vw);
        CHECK(shifted.vh == base.vh);

        const double s = oracle::uniform(rng, 0.1, 10.0);
        const AADeltas scaled = encode_aabb(AABB(p.cx * s, p.cy * s, p.w * s, p.h * s),
                                            AABB(g.cx * s, g.cy * s, g.w * s, g.h * s));
        CHECK(std::abs(scaled.vx - base.vx) <= 1e-12);
        CHECK(std::abs(scaled.vy - base.vy) <= 1e-12);
        CHECK(std::abs(scaled.vw - base.vw) <= 1e-12);
        CHECK(std::abs(scaled.vh - base.vh) <= 1e-12);
    }
}

TEST_CASE("encode_inclined matches the stated parameterization") {
    const AABB proposal(0, 0, 2, 2);
    const double s = std::sqrt(2.0);
    const InclinedDeltas d = encode_inclined(proposal, RotRect(Point2{0, -1}, Point2{1, 0}, s));
    CHECK(d.ux1 == 0.0);
    CHECK(d.uy1 == -0.5);
    CHECK(d.ux2 == 0.5);
    CHECK(d.uy2 == 0.0);
    CHECK(d.uh == Catch::Approx(std::log(s / 2.0)));

    // the proposal itself lifted: p1 = top-left, p2 = top-right
    const InclinedDeltas lift = encode_inclined(proposal, RotRect(Point2{-1, -1}, Point2{1, -1}, 2));
    CHECK(lift.ux1 == -0.5);
    CHECK(lift.uy1 == -0.5);
    CHECK(lift.ux2 == 0.5);
    CHECK(lift.uy2 == -0.5);
    CHECK(lift.uh == 0.0);
}

TEST_CASE("decode_inclined inverts encode_inclined") {
    const AABB proposal(0, 0, 2, 2);
    const RotRect rect = decode_inclined(proposal, InclinedDeltas(-0.5, -0.5, 0.5, -0.5, 0.0));
    CHECK(rect.p1.x == Catch::Approx(-1.0));
    CHECK(rect.p1.y == Catch::Approx(-1.0));
    CHECK(rect.p2.x == Catch::Approx(1.0));
    CHECK(rect.p2.y == Catch::Approx(-1.0));
    CHECK(rect.height == Catch::Approx(2.0));

    CHECK_THROWS_AS(decode_inclined(proposal, InclinedDeltas(0.1, 0.1, 0.1, 0.1, 0.0)),
                    DegenerateDecode);

    std::mt19937_64 rng(8103);
    for (int i = 0; i < 2000; ++i) {
        const AABB p = oracle::random_aabb(rng);
        const RotRect gt = oracle::random_rotrect(rng);
        const RotRect back = decode_inclined(p, encode_inclined(p, gt));
        CHECK(std::abs(back.p1.x - gt.p1.x) <= 1e-9);
        CHECK(std::abs(back.p1.y - gt.p1.y) <= 1e-9);
        CHECK(std::abs(back.p2.x - gt.p2.x) <= 1e-9);
        CHECK(std::abs(back.p2.y - gt.p2.y) <= 1e-9);
        CHECK(std::abs(back.height - gt.height) <= 1e-9);
    }
}

TEST_CASE("smooth_l1 branch values and continuity") {
    CHECK(smooth_l1(0.0) == 0.0);
    CHECK(smooth_l1(0.5) == 0.125);
    CHECK(smooth_l1(2.0) == 1.5);
    CHECK(smooth_l1(-2.0) == 1.5);
    // both branches give 0.5 at the kink
    CHECK(smooth_l1(1.0) == 0.5);
    CHECK(smooth_l1(std::nextafter(1.0, 0.0)) == Catch::Approx(0.5).margin(1e-12));
    // even and non-negative
    std::mt19937_64 rng(8104);
    for (int i = 0; i < 1000; ++i) {
        const double x = oracle::uniform(rng, -5, 5);
        CHECK(smooth_l1(x) == smooth_l1(-x));
        CHECK(smooth_l1(x) >= 0.0);
    }
}

TEST_CASE("smooth_l1 derivative matches central finite differences") {
    const double step = 1e-6;
    for (double x = -3.0; x <= 3.0; x += 0.01) {
        if (std::abs(std::abs(x) - 1.0) < 1e-3) continue;  // skip the kinks
        const double fd = (smooth_l1(x + step) - smooth_l1(x - step)) / (2.0 * step);
        const double analytic = std::abs(x) < 1.0 ? x : (x > 0 ? 1.0 : -1.0);
        CHECK(std::abs(fd - analytic) <= 1e-4);
    }
}

TEST_CASE("reg_loss sums per-component smooth L1") {
    const AADeltas a(1, 2, 3, 4);
    CHECK(reg_loss(a, a) == 0.0);
    CHECK(reg_loss(AADeltas(0.5, 0, 0, 0), AADeltas(0, 0, 0, 0)) == 0.125);

    std::mt19937_64 rng(8105);
    for (int i = 0; i < 500; ++i) {
        const InclinedDeltas p(oracle::uniform(rng, -3, 3), oracle::uniform(rng, -3, 3),
                               oracle::uniform(rng, -3, 3), oracle::uniform(rng, -3, 3),
                               oracle::uniform(rng, -3, 3));
        const InclinedDeltas t(oracle::uniform(rng, -3, 3), oracle::uniform(rng, -3, 3),
                               oracle::uniform(rng, -3, 3), oracle::uniform(rng, -3, 3),
                               oracle::uniform(rng, -3, 3));
        const double expected = smooth_l1(p.ux1 - t.ux1) + smooth_l1(p.uy1 - t.uy1) +
                                smooth_l1(p.ux2 - t.ux2) + smooth_l1(p.uy2 - t.uy2) +
                                smooth_l1(p.uh - t.uh);
        CHECK(reg_loss(p, t) == Catch::Approx(expected).margin(1e-15));
        CHECK(reg_loss(p, t) >= 0.0);
    }
}

TEST_CASE("softmax2 analytic values and stability") {
    const ClassProb even = softmax2(0.0, 0.0);
    CHECK(even.p0 == 0.5);
    CHECK(even.p1 == 0.5);

    const ClassProb skew = softmax2(0.0, std::log(3.0));
    CHECK(skew.p0 == Catch::Approx(0.25));
    CHECK(skew.p1 == Catch::Approx(0.75));

    const ClassProb huge = softmax2(1000.0, 1000.0);
    CHECK(huge.p0 == 0.5);
    CHECK(huge.p1 == 0.5);

    const ClassProb lopsided = softmax2(-1000.0, 1000.0);
    CHECK(lopsided.p1 == Catch::Approx(1.0));
}

TEST_CASE("cls_loss is the log loss of the true class") {
    CHECK(cls_loss(ClassProb(0.0, 1.0), ClassLabel::text) == 0.0);
    CHECK(cls_loss(ClassProb(0.5, 0.5), ClassLabel::text) == Catch::Approx(std::log(2.0)));
    CHECK(cls_loss(ClassProb(0.5, 0.5), ClassLabel::background) == Catch::Approx(std::log(2.0)));
    CHECK(cls_loss(ClassProb(0.25, 0.75), ClassLabel::background) ==
          Catch::Approx(std::log(4.0)));
    CHECK_THROWS_AS(cls_loss(ClassProb(0.0, 1.0), ClassLabel::background), InfiniteLoss);

    std::mt19937_64 rng(8106);
    for (int i = 0; i < 200; ++i) {
        const double p1 = oracle::uniform(rng, 0.01, 0.99);
        const double loss = cls_loss(ClassProb(1.0 - p1, p1), ClassLabel::text);
        CHECK(loss >= 0.0);
        if (p1 < 1.0) CHECK(loss > 0.0);
    }
}

TEST_CASE("multitask_loss gates regression on the text label") {
    const ClassProb p(0.3, 0.7);
    const AADeltas v_pred(0.5, 0, 0, 0), v_tgt(0, 0, 0, 0);
    const InclinedDeltas u_pred(2, 0, 0, 0, 0), u_tgt(0, 0, 0, 0, 0);

    // background: classification loss exactly, regressions ignored
    const double bg = multitask_loss(p, ClassLabel::background, v_pred, v_tgt, u_pred, u_tgt);
    REQUIRE(bg == cls_loss(p, ClassLabel::background));

    // perfect text prediction: zero total
    CHECK(multitask_loss(ClassProb(0, 1), ClassLabel::text, v_tgt, v_tgt, u_tgt, u_tgt) == 0.0);

    // known component values sum
    const double expected = cls_loss(p, ClassLabel::text) + 0.125 + 1.5;
    CHECK(multitask_loss(p, ClassLabel::text, v_pred, v_tgt, u_pred, u_tgt) ==
          Catch::Approx(expected).margin(1e-15));

    // weighted
    const double weighted =
        multitask_loss(p, ClassLabel::text, v_pred, v_tgt, u_pred, u_tgt, LossWeights(2.0, 3.0));
    CHECK(weighted == Catch::Approx(cls_loss(p, ClassLabel::text) + 2.0 * 0.125 + 3.0 * 1.5));

    // monotone in each weight when regression losses are positive
    double prev = 0.0;
    for (double l1 = 0.0; l1 <= 3.0; l1 += 0.5) {
        const double total =
            multitask_loss(p, ClassLabel::text, v_pred, v_tgt, u_pred, u_tgt, LossWeights(l1, 1));
        CHECK(total >= prev);
        prev = total;
    }
}

TEST_CASE("delta and probability types validate their fields") {
    CHECK_THROWS_AS(AADeltas(std::nan(""), 0, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(InclinedDeltas(0, 0, 0, 0, std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
    CHECK_THROWS_AS(ClassProb(0.5, 0.6), std::invalid_argument);
    CHECK_THROWS_AS(ClassProb(-0.1, 1.1), std::invalid_argument);
    CHECK_THROWS_AS(LossWeights(-1.0, 0.0), std::invalid_argument);
}
