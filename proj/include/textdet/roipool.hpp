// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "textdet/geometry.hpp"

/// Quantized ROI max pooling over feature maps (Fast R-CNN style bins, no
/// bilinear alignment) and multi-size pooled-feature concatenation.

namespace textdet {

/// The roi projects to zero area on the feature grid.
struct EmptyRoi : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Dense feature map, channel-major then row-major. stride is image pixels
/// per feature cell.
struct FeatureMap {
    std::size_t channels;
    std::size_t height;
    std::size_t width;
    double stride;
    std::vector<double> data;

    FeatureMap(std::size_t c, std::size_t h, std::size_t w, double stride_,
               std::vector<double> values)
        : channels(c), height(h), width(w), stride(stride_), data(std::move(values)) {
        if (!(stride > 0.0)) throw std::invalid_argument("FeatureMap stride must be positive");
        if (data.size() != channels * height * width) {
            throw std::invalid_argument("FeatureMap data length must be channels*height*width");
        }
    }

    double at(std::size_t c, std::size_t y, std::size_t x) const {
        return data[(c * height + y) * width + x];
    }
};

struct PooledFeatures {
    std::size_t channels;
    std::size_t pooled_h;
    std::size_t pooled_w;
    std::vector<double> data;

    double at(std::size_t c, std::size_t i, std::size_t j) const {
        return data[(c * pooled_h + i) * pooled_w + j];
    }
};

namespace detail {

struct GridSpan {
    std::int64_t x0, x1, y0, y1;  // half-open cell ranges
};

// Image-space roi to feature cells: min coordinates floor, max ceil, then
// clamp to the map. Throws when nothing of the roi lands on the map.
inline GridSpan project_roi(const FeatureMap& fm, const AABB& roi) {
    const double inv = 1.0 / fm.stride;
    const auto x0 = static_cast<std::int64_t>(std::floor(roi.min_x() * inv));
    const auto x1 = static_cast<std::int64_t>(std::ceil(roi.max_x() * inv));
    const auto y0 = static_cast<std::int64_t>(std::floor(roi.min_y() * inv));
    const auto y1 = static_cast<std::int64_t>(std::ceil(roi.max_y() * inv));
    const auto w = static_cast<std::int64_t>(fm.width);
    const auto h = static_cast<std::int64_t>(fm.height);
    if (x1 <= 0 || y1 <= 0 || x0 >= w || y0 >= h) {
        throw EmptyRoi("roi projects to zero area on the feature map");
    }
    GridSpan g{std::max<std::int64_t>(x0, 0), std::min(x1, w), std::max<std::int64_t>(y0, 0),
               std::min(y1, h)};
    if (g.x1 <= g.x0 || g.y1 <= g.y0) {
        throw EmptyRoi("roi projects to zero area on the feature map");
    }
    return g;
}

}  // namespace detail

/// Max-pools the roi into a pooled_h x pooled_w grid per channel. Bin (i,j)
/// covers cell rows [floor(i*H/ph), ceil((i+1)*H/ph)) of the projected roi,
/// columns likewise; an empty bin yields 0.
inline PooledFeatures roi_pool(const FeatureMap& fm, const AABB& roi, std::size_t pooled_h,
                               std::size_t pooled_w) {
    if (pooled_h == 0 || pooled_w == 0) {
        throw std::invalid_argument("pooled size must be positive");
    }
    const auto g = detail::project_roi(fm, roi);
    const std::int64_t roi_h = g.y1 - g.y0;
    const std::int64_t roi_w = g.x1 - g.x0;
    const auto ph = static_cast<std::int64_t>(pooled_h);
    const auto pw = static_cast<std::int64_t>(pooled_w);

    PooledFeatures out{fm.channels, pooled_h, pooled_w,
                       std::vector<double>(fm.channels * pooled_h * pooled_w, 0.0)};
    std::size_t idx = 0;
    for (std::size_t c = 0; c < fm.channels; ++c) {
        for (std::int64_t i = 0; i < ph; ++i) {
            const std::int64_t r0 = g.y0 + (i * roi_h) / ph;
            const std::int64_t r1 = std::min(g.y1, g.y0 + ((i + 1) * roi_h + ph - 1) / ph);
            for (std::int64_t j = 0; j < pw; ++j) {
                const std::int64_t c0 = g.x0 + (j * roi_w) / pw;
                const std::int64_t c1 = std::min(g.x1, g.x0 + ((j + 1) * roi_w + pw - 1) / pw);
                double value = 0.0;
                if (r1 > r0 && c1 > c0) {
                    value = fm.at(c, static_cast<std::size_t>(r0), static_cast<std::size_t>(c0));
                    for (std::int64_t y = r0; y < r1; ++y) {
                        for (std::int64_t x = c0; x < c1; ++x) {
                            value = std::max(value, fm.at(c, static_cast<std::size_t>(y),
                                                          static_cast<std::size_t>(x)));
                        }
                    }
                }
                out.data[idx++] = value;
            }
        }
    }
    return out;
}

/// Pools the roi at every requested size and concatenates the flattened
/// blocks in the given order.
inline std::vector<double> multi_pool_concat(
    const FeatureMap& fm, const AABB& roi,
    std::span<const std::pair<std::size_t, std::size_t>> sizes) {
    std::vector<double> out;
    for (const auto& [h, w] : sizes) {
        const PooledFeatures pooled = roi_pool(fm, roi, h, w);
        out.insert(out.end(), pooled.data.begin(), pooled.data.end());
    }
    return out;
}

/// Feature-map fixture format: a header line "channels height width stride"
/// followed by channels*height*width whitespace-separated values in
/// channel-major, row-major order.
inline FeatureMap read_feature_map(std::istream& in) {
    std::size_t c = 0, h = 0, w = 0;
    double stride = 0.0;
    if (!(in >> c >> h >> w >> stride)) {
        throw std::invalid_argument("feature map header must be: channels height width stride");
    }
    std::vector<double> data(c * h * w);
    for (double& v : data) {
        if (!(in >> v)) {
            throw std::invalid_argument("feature map data is shorter than the header promises");
        }
    }
    return FeatureMap(c, h, w, stride, std::move(data));
}

inline void write_feature_map(const FeatureMap& fm, std::ostream& out) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), fm.stride);
    out << fm.channels << ' ' << fm.height << ' ' << fm.width << ' ';
    out.write(buf, res.ptr - buf);
    out.put('\n');
    for (std::size_t c = 0; c < fm.channels; ++c) {
        for (std::size_t y = 0; y < fm.height; ++y) {
            for (std::size_t x = 0; x < fm.width; ++x) {
                res = std::to_chars(buf, buf + sizeof(buf), fm.at(c, y, x));
                out.write(buf, res.ptr - buf);
                out.put(x + 1 == fm.width ? '\n' : ' ');
            }
        }
    }
}

}  // namespace textdet
