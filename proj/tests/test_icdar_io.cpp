// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "textdet/eval.hpp"
#include "textdet/icdar_io.hpp"

using namespace textdet;

namespace {

std::string read_fixture(const std::string& name) {
    std::ifstream in(std::string(TEXTDET_FIXTURE_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in);
    std::ostringstream buf;
    buf << in.rdbuf();
    return std::move(buf).str();
}

bool approx_point(Point2 a, Point2 b, double tol) {
    return std::abs(a.x - b.x) <= tol && std::abs(a.y - b.y) <= tol;
}

}  // namespace

TEST_CASE("parse_gt_file reads a plain quad line") {
    const auto entries = parse_gt_file("0,0,10,0,10,4,0,4,hello");
    REQUIRE(entries.size() == 1);
    CHECK(approx_point(entries[0].quad.vertices[0], Point2{0, 0}, 0));
    CHECK(approx_point(entries[0].quad.vertices[2], Point2{10, 4}, 0));
    CHECK(entries[0].transcription == "hello");
    CHECK_FALSE(entries[0].dont_care);
}

TEST_CASE("parse_gt_file flags ### as don't-care") {
    const auto entries = parse_gt_file("0,0,10,0,10,4,0,4,###");
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].dont_care);
}

TEST_CASE("parse_gt_file reports malformed lines by number") {
    try {
        parse_gt_file("0,0,10,0,10,4,0,4,ok\n1,2,3,4,5,6,7,oops\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    CHECK_THROWS_AS(parse_gt_file("0,0,10,zero,10,4,0,4,x"), ParseError);
    // zero-area quad
    CHECK_THROWS_AS(parse_gt_file("0,0,1,0,2,0,3,0,flat"), ParseError);
}

TEST_CASE("parse_gt_file handles BOM, CRLF and blank lines") {
    const std::string content = "\xEF\xBB\xBF"
                                "0,0,10,0,10,4,0,4,first\r\n"
                                "\r\n"
                                "20,0,30,0,30,4,20,4,second\r\n";
    const auto entries = parse_gt_file(content);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].transcription == "first");
    CHECK(entries[1].transcription == "second");
}

TEST_CASE("parse_gt_file keeps commas inside transcriptions") {
    const auto entries = parse_gt_file("0,0,10,0,10,4,0,4,one, two, three");
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].transcription == "one, two, three");
}

TEST_CASE("parse_gt_file repairs counter-clockwise quads with a warning") {
    std::vector<std::string> warnings;
    const auto entries = parse_gt_file("20,80,80,80,80,60,20,60,NOPE", &warnings);
    REQUIRE(entries.size() == 1);
    CHECK(entries[0].quad.area() > 0.0);
    // first labeled point survives the repair
    CHECK(approx_point(entries[0].quad.vertices[0], Point2{20, 80}, 0));
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("line 1") != std::string::npos);
}

TEST_CASE("parse_gt_file accepts the ICDAR 2013 rectangle format") {
    const auto entries = parse_gt_file(read_fixture("icdar/ic13_sample_gt.txt"));
    REQUIRE(entries.size() == 3);
    CHECK(entries[0].transcription == "Tiredness");
    CHECK(approx_point(entries[0].quad.vertices[0], Point2{38, 43}, 0));
    CHECK(approx_point(entries[0].quad.vertices[2], Point2{920, 215}, 0));
    CHECK(entries[2].transcription == "A, B");
    // lifted quad is clockwise
    for (const auto& e : entries) CHECK(e.quad.area() > 0.0);
}

TEST_CASE("the committed ICDAR 2015 sample parses to the expected entries") {
    std::vector<std::string> warnings;
    const auto entries = parse_gt_file(read_fixture("icdar/ic15_sample_gt.txt"), &warnings);
    REQUIRE(entries.size() == 5);
    CHECK(entries[0].transcription == "Genaxis Theatre");
    CHECK(entries[1].dont_care);
    CHECK(entries[2].transcription == "mall, the 2nd");
    CHECK(entries[3].transcription == "NOPE");
    CHECK(entries[4].transcription == "a");
    REQUIRE(warnings.size() == 1);  // the reversed quad on line 4
    CHECK(warnings[0].find("line 4") != std::string::npos);
}

TEST_CASE("write_detections emits integer quads") {
    const RotRect rect(Point2{0, 0}, Point2{10, 0}, 4.0);
    const std::vector<Detection> dets{Detection(rect, enclosing_aabb(rect), 0.875)};
    CHECK(write_detections(dets, DetectionFormat::quad) == "0,0,10,0,10,4,0,4\n");
    CHECK(write_detections(dets, DetectionFormat::quad_score) == "0,0,10,0,10,4,0,4,0.875000\n");
    CHECK(write_detections({}, DetectionFormat::quad).empty());
}

TEST_CASE("parse_detections mirrors write_detections") {
    const auto dets = parse_detections("0,0,10,0,10,4,0,4\n0,10,10,10,10,14,0,14,0.25\n");
    REQUIRE(dets.size() == 2);
    CHECK(dets[0].score == 1.0);  // default when absent
    CHECK(dets[1].score == 0.25);
    CHECK(dets[0].axis_aligned.w == Catch::Approx(10.0));
    CHECK(dets[0].axis_aligned.h == Catch::Approx(4.0));

    CHECK_THROWS_AS(parse_detections("1,2,3\n"), ParseError);
    CHECK_THROWS_AS(parse_detections("0,0,10,0,10,4,0,4,0.5,9\n"), ParseError);
    CHECK_THROWS_AS(parse_detections("0,0,10,0,10,4,0,4,1.5\n"), ParseError);
}

TEST_CASE("detection files round-trip geometry within rounding") {
    // Random rectangles whose corners are integral: every Pythagorean
    // orientation keeps the written file lossless, so the round trip must
    // stay inside the +-0.5 px integer-rounding bound.
    std::mt19937_64 rng(8501);
    const auto dets = oracle::random_integer_detections(rng, 60);
    const auto parsed = parse_detections(write_detections(dets, DetectionFormat::quad_score));
    REQUIRE(parsed.size() == dets.size());
    for (std::size_t i = 0; i < dets.size(); ++i) {
        const auto original = dets[i].inclined.corners();
        const auto back = parsed[i].inclined.corners();
        for (const Point2& v : original) {
            bool close = false;
            for (const Point2& w : back) {
                if (std::abs(v.x - w.x) <= 0.5 && std::abs(v.y - w.y) <= 0.5) {
                    close = true;
                    break;
                }
            }
            CHECK(close);
        }
        CHECK(parsed[i].score == Catch::Approx(dets[i].score).margin(1e-6));
    }
}

TEST_CASE("writing arbitrary rectangles rounds each coordinate by at most half") {
    // For non-integral corners the written quad is the rounding of the true
    // corners; parsing re-fits a minimum-area rectangle around it, which can
    // add slack beyond the rounding itself, so the parsed box is only
    // checked for enclosure and closeness.
    std::mt19937_64 rng(8502);
    for (int i = 0; i < 100; ++i) {
        // word-sized boxes; +-0.5 rounding on a 10px side still leaves
        // (w-1.5)(h-1.5)/((w+1.5)(h+1.5)) > 0.6 of IoU in the worst case
        const double w = oracle::uniform(rng, 10, 120);
        const double h = oracle::uniform(rng, 10, 40);
        const double deg = oracle::uniform(rng, 0, 360);
        const auto [c, s] = rotation_cos_sin(deg);
        const Point2 u{c, s};
        const Point2 n{-s, c};
        const Point2 center{oracle::uniform(rng, -150, 150), oracle::uniform(rng, -150, 150)};
        const Point2 p1 = center - u * (0.5 * w) - n * (0.5 * h);
        const RotRect r(p1, p1 + u * w, h);
        const std::vector<Detection> dets{Detection(r, enclosing_aabb(r), 0.5)};
        const std::string text = write_detections(dets, DetectionFormat::quad);
        const auto fields = [&] {
            std::vector<double> v;
            std::size_t start = 0;
            while (start < text.size()) {
                std::size_t end = text.find_first_of(",\n", start);
                v.push_back(std::stod(text.substr(start, end - start)));
                start = end + 1;
            }
            return v;
        }();
        REQUIRE(fields.size() == 8);
        const auto corners = r.corners();
        for (std::size_t k = 0; k < 4; ++k) {
            CHECK(std::abs(fields[2 * k] - corners[k].x) <= 0.5);
            CHECK(std::abs(fields[2 * k + 1] - corners[k].y) <= 0.5);
        }
        const auto parsed = parse_detections(text);
        REQUIRE(parsed.size() == 1);
        CHECK(rotated_iou(parsed[0].inclined, r) > 0.6);
    }
}

TEST_CASE("make_training_boxes filters don't-care and single characters") {
    const Quad q(Point2{0, 0}, Point2{10, 0}, Point2{10, 4}, Point2{0, 4});
    CHECK_FALSE(make_training_boxes(GroundTruthEntry(q, "###")).has_value());
    CHECK_FALSE(make_training_boxes(GroundTruthEntry(q, "a")).has_value());
    CHECK_FALSE(make_training_boxes(GroundTruthEntry(q, "")).has_value());

    const auto boxes = make_training_boxes(GroundTruthEntry(q, "ab"));
    REQUIRE(boxes.has_value());
    CHECK(approx_point(boxes->inclined.p1, Point2{0, 0}, 1e-9));
    CHECK(approx_point(boxes->inclined.p2, Point2{10, 0}, 1e-9));
    CHECK(boxes->inclined.height == Catch::Approx(4.0).margin(1e-9));
    CHECK(boxes->axis_aligned.cx == Catch::Approx(5.0));
    CHECK(boxes->axis_aligned.cy == Catch::Approx(2.0));
}

TEST_CASE("make_training_boxes anchors p1 at the labeled first point") {
    // rectangle rotated 40 degrees, labeled starting from what lands at the
    // rectangle's third corner
    const Quad base(Point2{0, 0}, Point2{12, 0}, Point2{12, 5}, Point2{0, 5});
    const Quad rotated = rotate_quad(base, 40.0, Point2{6, 2.5});
    const Quad relabeled(rotated.vertices[2], rotated.vertices[3], rotated.vertices[0],
                         rotated.vertices[1]);
    const auto boxes = make_training_boxes(GroundTruthEntry(relabeled, "word"));
    REQUIRE(boxes.has_value());
    CHECK(approx_point(boxes->inclined.p1, relabeled.vertices[0], 1e-6));
    CHECK(approx_point(boxes->inclined.p2, relabeled.vertices[1], 1e-6));
}

TEST_CASE("make_training_boxes keeps the axis-aligned box consistent") {
    std::mt19937_64 rng(8502);
    for (int i = 0; i < 200; ++i) {
        const Quad q = oracle::random_convex_quad(rng);
        const auto boxes = make_training_boxes(GroundTruthEntry(q, "word"));
        REQUIRE(boxes.has_value());
        const AABB expected = enclosing_aabb(boxes->inclined);
        CHECK(std::abs(boxes->axis_aligned.cx - expected.cx) <= 1e-9);
        CHECK(std::abs(boxes->axis_aligned.cy - expected.cy) <= 1e-9);
        CHECK(std::abs(boxes->axis_aligned.w - expected.w) <= 1e-9);
        CHECK(std::abs(boxes->axis_aligned.h - expected.h) <= 1e-9);
    }
}

TEST_CASE("make_training_boxes counts UTF-8 code points, not bytes") {
    const Quad q(Point2{0, 0}, Point2{10, 0}, Point2{10, 4}, Point2{0, 4});
    CHECK_FALSE(make_training_boxes(GroundTruthEntry(q, "\xC3\xA9")).has_value());  // one char
    CHECK(make_training_boxes(GroundTruthEntry(q, "\xC3\xA9t")).has_value());       // two chars
}

TEST_CASE("augment_rotate at angle zero is the identity") {
    const auto entries = parse_gt_file("100,100,200,100,200,140,100,140,word");
    const AugmentedLabels out = augment_rotate(entries, 1280, 720, 0.0);
    CHECK(out.width == 1280);
    CHECK(out.height == 720);
    REQUIRE(out.entries.size() == 1);
    for (std::size_t i = 0; i < 4; ++i) {
        REQUIRE(out.entries[0].quad.vertices[i].x == entries[0].quad.vertices[i].x);
        REQUIRE(out.entries[0].quad.vertices[i].y == entries[0].quad.vertices[i].y);
    }
}

TEST_CASE("augment_rotate swaps the canvas at 90 degrees") {
    const auto entries = parse_gt_file("0,0,100,0,100,40,0,40,corner");
    const AugmentedLabels out = augment_rotate(entries, 720, 1280, 90.0);
    CHECK(out.width == 1280);
    CHECK(out.height == 720);
    REQUIRE(out.entries.size() == 1);
    // (0,0) -> rotates to the top-right corner of the new canvas
    CHECK(approx_point(out.entries[0].quad.vertices[0], Point2{1280, 0}, 1e-9));
    // area is preserved
    CHECK(out.entries[0].quad.area() == Catch::Approx(entries[0].quad.area()).epsilon(1e-9));
}

TEST_CASE("augment_rotate round-trips through +30/-30 up to a translation") {
    const auto entries = parse_gt_file(read_fixture("icdar/ic15_sample_gt.txt"));
    const AugmentedLabels once = augment_rotate(entries, 1280, 720, 30.0);
    const AugmentedLabels back =
        augment_rotate(once.entries, once.width, once.height, -30.0);
    REQUIRE(back.entries.size() == entries.size());

    // the composition is a pure translation; estimate it from one vertex
    const Point2 offset = back.entries[0].quad.vertices[0] - entries[0].quad.vertices[0];
    for (std::size_t e = 0; e < entries.size(); ++e) {
        CHECK(back.entries[e].dont_care == entries[e].dont_care);
        CHECK(back.entries[e].transcription == entries[e].transcription);
        for (std::size_t i = 0; i < 4; ++i) {
            const Point2 expected = entries[e].quad.vertices[i] + offset;
            CHECK(approx_point(back.entries[e].quad.vertices[i], expected, 1e-6));
        }
    }
}

TEST_CASE("augment_rotate preserves count, flags and areas at every paper angle") {
    const auto entries = parse_gt_file(read_fixture("icdar/ic15_sample_gt.txt"));
    for (double angle : {-90.0, -75.0, -60.0, -45.0, -30.0, -15.0, 0.0, 15.0, 30.0, 45.0, 60.0,
                         75.0, 90.0}) {
        const AugmentedLabels out = augment_rotate(entries, 1280, 720, angle);
        REQUIRE(out.entries.size() == entries.size());
        for (std::size_t e = 0; e < entries.size(); ++e) {
            CHECK(out.entries[e].dont_care == entries[e].dont_care);
            CHECK(out.entries[e].quad.area() ==
                  Catch::Approx(entries[e].quad.area()).epsilon(1e-6));
        }
    }
}

TEST_CASE("write_gt_file round-trips parsed geometry") {
    const auto entries = parse_gt_file(read_fixture("icdar/ic15_sample_gt.txt"));
    const auto rotated = augment_rotate(entries, 1280, 720, 15.0);
    const auto back = parse_gt_file(write_gt_file(rotated.entries));
    REQUIRE(back.size() == rotated.entries.size());
    for (std::size_t e = 0; e < back.size(); ++e) {
        CHECK(back[e].transcription == rotated.entries[e].transcription);
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(approx_point(back[e].quad.vertices[i], rotated.entries[e].quad.vertices[i],
                               5e-7));
        }
    }
}
