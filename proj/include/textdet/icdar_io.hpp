// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "textdet/geometry.hpp"
#include "textdet/nms.hpp"

/// ICDAR 2013/2015 ground-truth and detection file I/O, training geometry
/// generation, and rotation augmentation of labels.
///
/// Ground-truth line formats accepted:
///   ICDAR 2015: x1,y1,x2,y2,x3,y3,x4,y4,transcription   (quad, clockwise)
///   ICDAR 2013: xmin, ymin, xmax, ymax, "transcription"  (axis-aligned,
///               transcription must be quoted)
/// UTF-8 with optional BOM; LF or CRLF line endings. The transcription may
/// itself contain commas; only the leading coordinate commas split fields.
///
/// Detection line format: x1,y1,...,y4[,score] with integer coordinates.

namespace textdet {

/// Malformed input line; the message names the 1-based line number.
struct ParseError : std::runtime_error {
    std::size_t line;

    ParseError(std::size_t line_, const std::string& message)
        : std::runtime_error("line " + std::to_string(line_) + ": " + message), line(line_) {}
};

struct GroundTruthEntry {
    Quad quad;
    std::string transcription;
    bool dont_care;

    GroundTruthEntry(Quad q, std::string text)
        : quad(q), transcription(std::move(text)), dont_care(transcription == "###") {}
};

/// Ground-truth geometry pair for one labeled word: the minimum-area
/// inclined rectangle and its axis-aligned extent.
struct TrainingBoxes {
    RotRect inclined;
    AABB axis_aligned;
};

enum class DetectionFormat {
    quad,
    quad_score,
};

struct AugmentedLabels {
    std::vector<GroundTruthEntry> entries;
    int width;
    int height;
};

namespace detail {

inline std::string_view strip_bom(std::string_view text) {
    if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);
    return text;
}

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

inline std::optional<double> parse_real(std::string_view field) {
    field = trim(field);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    if (field.empty()) return std::nullopt;
    double value = 0.0;
    const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
    if (res.ec != std::errc() || res.ptr != field.data() + field.size()) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;
    return value;
}

// Splits off at most `count` comma-separated fields; the remainder after the
// last consumed comma is returned untouched (it may contain more commas).
inline bool split_leading_fields(std::string_view line, std::size_t count,
                                 std::vector<std::string_view>& fields,
                                 std::string_view& remainder) {
    fields.clear();
    std::size_t start = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) return false;
        fields.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    remainder = line.substr(start);
    return true;
}

inline std::string format_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

inline std::size_t utf8_length(std::string_view s) {
    std::size_t n = 0;
    for (unsigned char c : s) {
        if ((c & 0xC0) != 0x80) ++n;
    }
    return n;
}

// Builds a clockwise Quad from parsed corners, reversing counter-clockwise
// input (the first vertex stays first so the label's reading-order point
// survives the repair).
inline Quad repair_winding(const std::array<Point2, 4>& v, std::size_t line_no,
                           std::vector<std::string>* warnings) {
    const double s = signed_area(v);
    if (s < 0.0) {
        if (warnings) {
            warnings->push_back("line " + std::to_string(line_no) +
                                ": counter-clockwise quad reversed to clockwise");
        }
        return Quad(v[0], v[3], v[2], v[1]);
    }
    if (s == 0.0) {
        throw ParseError(line_no, "degenerate quad with zero area");
    }
    return Quad(v[0], v[1], v[2], v[3]);
}

template <typename Fn>
void for_each_line(std::string_view content, Fn&& fn) {
    content = strip_bom(content);
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= content.size()) {
        const std::size_t eol = content.find('\n', pos);
        const std::size_t end = (eol == std::string_view::npos) ? content.size() : eol;
        ++line_no;
        const std::string_view line = trim(content.substr(pos, end - pos));
        if (!line.empty()) fn(line, line_no);
        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }
}

}  // namespace detail

/// Parses a ground-truth file. Counter-clockwise quads are repaired with a
/// warning (appended to *warnings when given). Malformed lines raise
/// ParseError naming the line.
inline std::vector<GroundTruthEntry> parse_gt_file(std::string_view content,
                                                   std::vector<std::string>* warnings = nullptr) {
    std::vector<GroundTruthEntry> entries;
    std::vector<std::string_view> fields;
    std::string_view rest;

    detail::for_each_line(content, [&](std::string_view line, std::size_t line_no) {
        // ICDAR 2015: eight leading numeric fields.
        if (detail::split_leading_fields(line, 8, fields, rest)) {
            std::array<double, 8> c{};
            bool numeric = true;
            for (std::size_t i = 0; i < 8; ++i) {
                const auto v = detail::parse_real(fields[i]);
                if (!v) {
                    numeric = false;
                    break;
                }
                c[i] = *v;
            }
            if (numeric) {
                const std::array<Point2, 4> corners{Point2{c[0], c[1]}, Point2{c[2], c[3]},
                                                    Point2{c[4], c[5]}, Point2{c[6], c[7]}};
                try {
                    Quad quad = detail::repair_winding(corners, line_no, warnings);
                    entries.emplace_back(quad, std::string(detail::trim(rest)));
                } catch (const ParseError&) {
                    throw;
                } catch (const std::invalid_argument& e) {
                    throw ParseError(line_no, e.what());
                }
                return;
            }
        }
        // ICDAR 2013: four numeric fields then a (usually quoted) transcription.
        if (detail::split_leading_fields(line, 4, fields, rest)) {
            std::array<double, 4> c{};
            bool numeric = true;
            for (std::size_t i = 0; i < 4; ++i) {
                const auto v = detail::parse_real(fields[i]);
                if (!v) {
                    numeric = false;
                    break;
                }
                c[i] = *v;
            }
            std::string_view text = detail::trim(rest);
            const bool quoted = text.size() >= 2 && text.front() == '"' && text.back() == '"';
            if (numeric && quoted) {
                if (!(c[2] > c[0]) || !(c[3] > c[1])) {
                    throw ParseError(line_no, "rectangle must satisfy xmin < xmax, ymin < ymax");
                }
                Quad quad(Point2{c[0], c[1]}, Point2{c[2], c[1]}, Point2{c[2], c[3]},
                          Point2{c[0], c[3]});
                entries.emplace_back(quad, std::string(text.substr(1, text.size() - 2)));
                return;
            }
        }
        throw ParseError(line_no, "expected 8 quad coordinates or 4 rectangle coordinates");
    });
    return entries;
}

/// Writes entries back as ICDAR 2015 lines with real-valued coordinates
/// (6 decimals), so rotated labels survive a round trip.
inline std::string write_gt_file(std::span<const GroundTruthEntry> entries) {
    std::string out;
    for (const auto& e : entries) {
        for (const Point2& v : e.quad.vertices) {
            out += detail::format_fixed(v.x, 6);
            out += ',';
            out += detail::format_fixed(v.y, 6);
            out += ',';
        }
        out += e.transcription;
        out += '\n';
    }
    return out;
}

/// One line per detection: the inclined box's corners rounded to integers,
/// optionally followed by the score (6 decimals).
inline std::string write_detections(std::span<const Detection> dets, DetectionFormat format) {
    std::string out;
    for (const auto& d : dets) {
        const auto v = d.inclined.corners();
        for (std::size_t i = 0; i < 4; ++i) {
            if (i > 0) out += ',';
            out += std::to_string(std::llround(v[i].x));
            out += ',';
            out += std::to_string(std::llround(v[i].y));
        }
        if (format == DetectionFormat::quad_score) {
            out += ',';
            out += detail::format_fixed(d.score, 6);
        }
        out += '\n';
    }
    return out;
}

/// Mirror of write_detections. The score defaults to 1 when absent; inclined
/// geometry is recovered as the parsed quad's minimum-area rectangle and the
/// axis-aligned box as its extent.
inline std::vector<Detection> parse_detections(std::string_view content) {
    std::vector<Detection> dets;
    detail::for_each_line(content, [&](std::string_view line, std::size_t line_no) {
        std::vector<double> values;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string_view field =
                line.substr(start, comma == std::string_view::npos ? comma : comma - start);
            const auto v = detail::parse_real(field);
            if (!v) throw ParseError(line_no, "malformed number in detection record");
            values.push_back(*v);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (values.size() != 8 && values.size() != 9) {
            throw ParseError(line_no, "detection record needs 8 coordinates and an optional score");
        }
        const std::array<Point2, 4> corners{
            Point2{values[0], values[1]}, Point2{values[2], values[3]},
            Point2{values[4], values[5]}, Point2{values[6], values[7]}};
        try {
            const Quad quad = detail::repair_winding(corners, line_no, nullptr);
            const RotRect inclined = min_area_rect(quad);
            const double score = values.size() == 9 ? values[8] : 1.0;
            dets.emplace_back(inclined, enclosing_aabb(inclined), score);
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(line_no, e.what());
        }
    });
    return dets;
}

/// Training geometry for one entry, or nullopt when the entry is excluded
/// from training (don't-care, or a transcription of at most one character).
/// The rectangle's first point is re-anchored to the vertex nearest the
/// label's first point; equidistant ties keep the geometric canonical form.
inline std::optional<TrainingBoxes> make_training_boxes(const GroundTruthEntry& e) {
    if (e.dont_care || detail::utf8_length(e.transcription) <= 1) return std::nullopt;

    RotRect rect = min_area_rect(e.quad);
    const Point2 labeled_first = e.quad.vertices[0];
    const auto v = rect.corners();
    std::array<double, 4> d{};
    for (std::size_t i = 0; i < 4; ++i) d[i] = distance_sq(v[i], labeled_first);
    std::size_t best = 0;
    for (std::size_t i = 1; i < 4; ++i) {
        if (d[i] < d[best]) best = i;
    }
    const bool ambiguous =
        std::count_if(d.begin(), d.end(), [&](double x) { return x == d[best]; }) > 1;
    if (best != 0 && !ambiguous) {
        rect = RotRect(v[best], v[(best + 1) % 4], norm(v[(best + 3) % 4] - v[best]));
    }
    return TrainingBoxes{rect, enclosing_aabb(rect)};
}

/// Rotates labels as if the image were rotated about its center by
/// angle_deg (clockwise positive) onto an expanded canvas whose top-left is
/// the rotated image's extent minimum. Transcriptions and don't-care flags
/// carry over; an exact zero rotation returns the input untouched.
inline AugmentedLabels augment_rotate(std::span<const GroundTruthEntry> entries, double image_w,
                                      double image_h, double angle_deg) {
    if (!(image_w > 0.0) || !(image_h > 0.0)) {
        throw std::invalid_argument("augment_rotate image size must be positive");
    }
    const auto [c, s] = rotation_cos_sin(angle_deg);
    const int new_w = static_cast<int>(std::ceil(std::abs(c) * image_w + std::abs(s) * image_h));
    const int new_h = static_cast<int>(std::ceil(std::abs(s) * image_w + std::abs(c) * image_h));

    if (c == 1.0 && s == 0.0) {
        return AugmentedLabels{{entries.begin(), entries.end()}, new_w, new_h};
    }

    const Point2 center{image_w * 0.5, image_h * 0.5};
    const auto map = [&](Point2 p) {
        const Point2 d = p - center;
        return Point2{center.x + c * d.x - s * d.y, center.y + s * d.x + c * d.y};
    };

    const std::array<Point2, 4> image_corners{Point2{0, 0}, Point2{image_w, 0},
                                              Point2{image_w, image_h}, Point2{0, image_h}};
    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    for (const Point2& corner : image_corners) {
        const Point2 r = map(corner);
        min_x = std::min(min_x, r.x);
        min_y = std::min(min_y, r.y);
    }
    const Point2 shift{-min_x, -min_y};

    AugmentedLabels out{{}, new_w, new_h};
    out.entries.reserve(entries.size());
    for (const auto& e : entries) {
        const auto& q = e.quad.vertices;
        Quad rotated(map(q[0]) + shift, map(q[1]) + shift, map(q[2]) + shift, map(q[3]) + shift);
        out.entries.emplace_back(rotated, e.transcription);
    }
    return out;
}

}  // namespace textdet
