// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

/// Core 2-D types and geometric primitives for rotated text boxes.
///
/// Coordinate convention throughout: screen coordinates, x grows right and
/// y grows DOWN. "Clockwise" means clockwise as seen on screen, which is
/// a positive signed area under the shoelace formula used here.

namespace textdet {

/// Degeneracy tolerance in pixels. Far below pixel precision, well above
/// double rounding.
inline constexpr double kDegenerateEps = 1e-9;

/// Input geometry has no usable extent (e.g. all points collinear).
struct DegenerateInput : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

inline void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be finite");
    }
}

}  // namespace detail

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    Point2(double px, double py) : x(px), y(py) {
        detail::require_finite(x, "Point2.x");
        detail::require_finite(y, "Point2.y");
    }

    Point2 operator+(Point2 o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(Point2 o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double k) const { return {x * k, y * k}; }
};

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double distance_sq(Point2 a, Point2 b) {
    const Point2 d = a - b;
    return d.x * d.x + d.y * d.y;
}

/// Shoelace signed area; positive for clockwise-on-screen vertex order.
inline double signed_area(std::span<const Point2> poly) {
    double s = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point2& p = poly[i];
        const Point2& q = poly[(i + 1) % n];
        s += p.x * q.y - q.x * p.y;
    }
    return 0.5 * s;
}

namespace detail {

// Proper crossing only: segments whose interiors intersect.
inline bool segments_properly_cross(Point2 a, Point2 b, Point2 c, Point2 d) {
    const double d1 = cross(b - a, c - a);
    const double d2 = cross(b - a, d - a);
    const double d3 = cross(d - c, a - c);
    const double d4 = cross(d - c, b - c);
    return ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0)) &&
           ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0));
}

}  // namespace detail

/// Four-point simple polygon, vertices clockwise on screen.
struct Quad {
    std::array<Point2, 4> vertices;

    Quad(Point2 a, Point2 b, Point2 c, Point2 d) : vertices{a, b, c, d} { validate(); }
    explicit Quad(const std::array<Point2, 4>& v) : vertices(v) { validate(); }

    /// Positive by construction.
    double area() const { return signed_area(vertices); }

private:
    void validate() const {
        if (!(signed_area(vertices) > 0.0)) {
            throw std::invalid_argument("Quad vertices must run clockwise (positive signed area)");
        }
        if (detail::segments_properly_cross(vertices[0], vertices[1], vertices[2], vertices[3]) ||
            detail::segments_properly_cross(vertices[1], vertices[2], vertices[3], vertices[0])) {
            throw std::invalid_argument("Quad must be a simple polygon");
        }
    }
};

/// Axis-aligned box stored as center plus size.
struct AABB {
    double cx;
    double cy;
    double w;
    double h;

    AABB(double cx_, double cy_, double w_, double h_) : cx(cx_), cy(cy_), w(w_), h(h_) {
        detail::require_finite(cx, "AABB.cx");
        detail::require_finite(cy, "AABB.cy");
        detail::require_finite(w, "AABB.w");
        detail::require_finite(h, "AABB.h");
        if (!(w > 0.0) || !(h > 0.0)) {
            throw std::invalid_argument("AABB width and height must be positive");
        }
    }

    double min_x() const { return cx - 0.5 * w; }
    double max_x() const { return cx + 0.5 * w; }
    double min_y() const { return cy - 0.5 * h; }
    double max_y() const { return cy + 0.5 * h; }
    double area() const { return w * h; }
};

/// Inclined rectangle: first edge p1->p2 plus perpendicular height.
/// The remaining corners hang off the clockwise normal of p1->p2, so the
/// derived (p1, p2, p3, p4) is a clockwise Quad.
struct RotRect {
    Point2 p1;
    Point2 p2;
    double height;

    RotRect(Point2 a, Point2 b, double h) : p1(a), p2(b), height(h) {
        detail::require_finite(height, "RotRect.height");
        if (!(norm(p2 - p1) > kDegenerateEps)) {
            throw std::invalid_argument("RotRect first edge is degenerate");
        }
        if (!(height > kDegenerateEps)) {
            throw std::invalid_argument("RotRect height is degenerate");
        }
    }

    double width() const { return norm(p2 - p1); }

    std::array<Point2, 4> corners() const {
        const Point2 e = p2 - p1;
        const double len = norm(e);
        const Point2 u{e.x / len, e.y / len};
        const Point2 n{-u.y, u.x};  // clockwise normal under y-down
        return {p1, p2, p2 + n * height, p1 + n * height};
    }

    Quad to_quad() const {
        const auto c = corners();
        return Quad(c[0], c[1], c[2], c[3]);
    }
};

/// cos/sin of a screen-clockwise rotation. Exact at multiples of 90 degrees
/// so right-angle label rotations permute coordinates bit-cleanly.
inline std::pair<double, double> rotation_cos_sin(double angle_deg) {
    double m = std::fmod(angle_deg, 360.0);
    if (m < 0.0) m += 360.0;
    if (m == 0.0) return {1.0, 0.0};
    if (m == 90.0) return {0.0, 1.0};
    if (m == 180.0) return {-1.0, 0.0};
    if (m == 270.0) return {0.0, -1.0};
    const double rad = angle_deg * std::numbers::pi / 180.0;
    return {std::cos(rad), std::sin(rad)};
}

/// Rotates p about center; positive angles turn clockwise on screen.
inline Point2 rotate_point(Point2 p, double angle_deg, Point2 center) {
    const auto [c, s] = rotation_cos_sin(angle_deg);
    const Point2 d = p - center;
    return {center.x + c * d.x - s * d.y, center.y + s * d.x + c * d.y};
}

/// Vertex order is preserved; clockwise order is rotation-invariant.
inline Quad rotate_quad(const Quad& q, double angle_deg, Point2 center) {
    return Quad(rotate_point(q.vertices[0], angle_deg, center),
                rotate_point(q.vertices[1], angle_deg, center),
                rotate_point(q.vertices[2], angle_deg, center),
                rotate_point(q.vertices[3], angle_deg, center));
}

/// Convex hull in clockwise screen order (positive signed area). Collinear
/// points are dropped; a fully collinear input yields fewer than 3 points.
inline std::vector<Point2> convex_hull(std::vector<Point2> pts) {
    std::sort(pts.begin(), pts.end(), [](Point2 a, Point2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const std::size_t n = pts.size();
    if (n < 3) return pts;

    std::vector<Point2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    const std::size_t lower_end = k + 1;
    for (std::size_t i = n - 1; i-- > 0;) {
        while (k >= lower_end && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

/// Picks the representation whose p1 has minimal y (ties: minimal x).
/// Returns the input unchanged when already canonical, so the map is
/// idempotent down to the bit level.
inline RotRect canonicalize(const RotRect& r) {
    const auto v = r.corners();
    std::size_t best = 0;
    for (std::size_t i = 1; i < 4; ++i) {
        if (v[i].y < v[best].y || (v[i].y == v[best].y && v[i].x < v[best].x)) best = i;
    }
    if (best == 0) return r;
    return RotRect(v[best], v[(best + 1) % 4], norm(v[(best + 3) % 4] - v[best]));
}

/// Minimum-area rectangle enclosing the quad, by rotating calipers over the
/// convex hull: some optimal rectangle shares an edge direction with a hull
/// edge, so scanning hull edges is exact. Non-convex quads are hulled
/// silently. The result is canonical.
inline RotRect min_area_rect(const Quad& q) {
    const auto hull = convex_hull({q.vertices.begin(), q.vertices.end()});
    const std::size_t n = hull.size();
    if (n < 3) {
        throw DegenerateInput("min_area_rect: hull is collinear");
    }

    double best_area = std::numeric_limits<double>::infinity();
    Point2 best_origin, best_u, best_n;
    double best_a0 = 0, best_a1 = 0, best_b0 = 0, best_b1 = 0;

    for (std::size_t i = 0; i < n; ++i) {
        const Point2 e = hull[(i + 1) % n] - hull[i];
        const double len = norm(e);
        if (!(len > kDegenerateEps)) continue;
        const Point2 u{e.x / len, e.y / len};
        const Point2 nn{-u.y, u.x};

        double a0 = 0, a1 = 0, b0 = 0, b1 = 0;
        bool first = true;
        for (const Point2& p : hull) {
            const Point2 d = p - hull[i];
            const double a = dot(d, u);
            const double b = dot(d, nn);
            if (first) {
                a0 = a1 = a;
                b0 = b1 = b;
                first = false;
            } else {
                a0 = std::min(a0, a);
                a1 = std::max(a1, a);
                b0 = std::min(b0, b);
                b1 = std::max(b1, b);
            }
        }
        const double area = (a1 - a0) * (b1 - b0);
        if (area < best_area) {
            best_area = area;
            best_origin = hull[i];
            best_u = u;
            best_n = nn;
            best_a0 = a0;
            best_a1 = a1;
            best_b0 = b0;
            best_b1 = b1;
        }
    }

    if (!(best_a1 - best_a0 > kDegenerateEps) || !(best_b1 - best_b0 > kDegenerateEps)) {
        throw DegenerateInput("min_area_rect: degenerate extent");
    }
    const Point2 c0 = best_origin + best_u * best_a0 + best_n * best_b0;
    const Point2 c1 = best_origin + best_u * best_a1 + best_n * best_b0;
    return canonicalize(RotRect(c0, c1, best_b1 - best_b0));
}

/// Axis-aligned extent of the four derived vertices.
inline AABB enclosing_aabb(const RotRect& r) {
    const auto v = r.corners();
    double xmin = v[0].x, xmax = v[0].x, ymin = v[0].y, ymax = v[0].y;
    for (std::size_t i = 1; i < 4; ++i) {
        xmin = std::min(xmin, v[i].x);
        xmax = std::max(xmax, v[i].x);
        ymin = std::min(ymin, v[i].y);
        ymax = std::max(ymax, v[i].y);
    }
    return AABB(0.5 * (xmin + xmax), 0.5 * (ymin + ymax), xmax - xmin, ymax - ymin);
}

namespace detail {

inline Point2 clip_edge_intersection(Point2 s, Point2 p, double side_s, double side_p) {
    const double t = side_s / (side_s - side_p);
    return s + (p - s) * t;
}

inline bool lex_less(const std::array<Point2, 4>& a, const std::array<Point2, 4>& b) {
    for (std::size_t i = 0; i < 4; ++i) {
        if (a[i].x != b[i].x) return a[i].x < b[i].x;
        if (a[i].y != b[i].y) return a[i].y < b[i].y;
    }
    return false;
}

}  // namespace detail

/// Area of the intersection of two convex quads: Sutherland-Hodgman clipping
/// of a against each half-plane of b, then the shoelace area of the result.
/// Disjoint inputs return 0.
inline double polygon_intersection_area(const Quad& a, const Quad& b) {
    std::vector<Point2> out(a.vertices.begin(), a.vertices.end());
    std::vector<Point2> in;
    for (std::size_t e = 0; e < 4 && !out.empty(); ++e) {
        const Point2 e1 = b.vertices[e];
        const Point2 dir = b.vertices[(e + 1) % 4] - e1;
        in.swap(out);
        out.clear();
        const std::size_t n = in.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point2 s = in[(i + n - 1) % n];
            const Point2 p = in[i];
            const double side_s = cross(dir, s - e1);  // >= 0 is inside for clockwise quads
            const double side_p = cross(dir, p - e1);
            if (side_p >= 0.0) {
                if (side_s < 0.0) {
                    out.push_back(detail::clip_edge_intersection(s, p, side_s, side_p));
                }
                out.push_back(p);
            } else if (side_s >= 0.0) {
                out.push_back(detail::clip_edge_intersection(s, p, side_s, side_p));
            }
        }
    }
    if (out.size() < 3) return 0.0;
    return std::max(0.0, signed_area(out));
}

/// IoU of two inclined rectangles via convex clipping. The clip order is
/// fixed by a lexicographic key, so the result is bitwise symmetric in its
/// arguments.
inline double rotated_iou(const RotRect& a, const RotRect& b) {
    const Quad qa = a.to_quad();
    const Quad qb = b.to_quad();
    const double area_a = signed_area(qa.vertices);
    const double area_b = signed_area(qb.vertices);
    const bool swapped = detail::lex_less(qb.vertices, qa.vertices);
    const double inter =
        swapped ? polygon_intersection_area(qb, qa) : polygon_intersection_area(qa, qb);
    const double denom = area_a + area_b - inter;
    if (!(denom > 0.0)) return 0.0;
    return std::clamp(inter / denom, 0.0, 1.0);
}

/// Standard axis-aligned IoU.
inline double aabb_iou(const AABB& a, const AABB& b) {
    const double iw = std::min(a.max_x(), b.max_x()) - std::max(a.min_x(), b.min_x());
    const double ih = std::min(a.max_y(), b.max_y()) - std::max(a.min_y(), b.min_y());
    if (iw <= 0.0 || ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    return std::clamp(inter / (a.area() + b.area() - inter), 0.0, 1.0);
}

}  // namespace textdet
