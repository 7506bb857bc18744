#pragma once

// Closed random contours ("squiggles").
//
// Control points sit at sorted random angles around the frame center with
// radii drawn from radius_range. A periodic cardinal spline (Catmull-Rom at
// tension 0) through them is sampled densely, rejected if it self-intersects,
// leaves the frame, or folds back within min_clearance of itself, then
// rasterized as an 8-connected 1-px contour and dilated to stroke_width.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <json.hpp>

#include "relkit/error.hpp"
#include "relkit/image.hpp"
#include "relkit/objectgen/transforms.hpp"
#include "relkit/seed_stream.hpp"
#include "relkit/types.hpp"

namespace relkit {

struct SquiggleSpec {
    int control_point_count = 10;
    double radius_min = 10.0;
    double radius_max = 26.0;
    double tension = 0.0;       ///< 0 = Catmull-Rom; 1 = straight polygon
    int stroke_width = 3;
    double min_clearance = 0.0; ///< 0 = stroke_width + 2
    int max_attempts = 100;

    void validate() const {
        if (control_point_count < 4) throw ConfigError("squiggle: control_point_count must be >= 4");
        if (!(radius_min > 0 && radius_min <= radius_max && radius_max <= 30))
            throw ConfigError("squiggle: radius range must satisfy 0 < min <= max <= 30");
        if (!(tension >= 0.0 && tension <= 1.0)) throw ConfigError("squiggle: tension must lie in [0, 1]");
        if (stroke_width < 1) throw ConfigError("squiggle: stroke_width must be >= 1");
        if (min_clearance < 0) throw ConfigError("squiggle: min_clearance must be >= 0");
        if (max_attempts < 1) throw ConfigError("squiggle: max_attempts must be >= 1");
    }

    double effective_clearance() const noexcept {
        return min_clearance > 0 ? min_clearance : static_cast<double>(stroke_width) + 2.0;
    }
};

inline void to_json(nlohmann::json& j, const SquiggleSpec& s) {
    j = {{"control_point_count", s.control_point_count},
         {"radius_range", {s.radius_min, s.radius_max}},
         {"smoothing", s.tension},
         {"stroke_width", s.stroke_width},
         {"min_clearance", s.min_clearance},
         {"max_attempts", s.max_attempts}};
}

inline void from_json(const nlohmann::json& j, SquiggleSpec& s) {
    s = SquiggleSpec{};
    if (j.contains("control_point_count")) s.control_point_count = j.at("control_point_count").get<int>();
    if (j.contains("radius_range")) {
        const auto& r = j.at("radius_range");
        if (!r.is_array() || r.size() != 2) throw ConfigError("squiggle: radius_range must be [min, max]");
        s.radius_min = r[0].get<double>();
        s.radius_max = r[1].get<double>();
    }
    if (j.contains("smoothing")) s.tension = j.at("smoothing").get<double>();
    if (j.contains("stroke_width")) s.stroke_width = j.at("stroke_width").get<int>();
    if (j.contains("min_clearance")) s.min_clearance = j.at("min_clearance").get<double>();
    if (j.contains("max_attempts")) s.max_attempts = j.at("max_attempts").get<int>();
}

struct Vec2 {
    double x = 0;
    double y = 0;
};

/// Accepted curve geometry, exposed for inspection and testing.
struct SquiggleTrace {
    std::vector<Vec2> control_points;
    std::vector<Vec2> polyline; ///< closed; last point connects back to the first
    int attempts = 0;
};

namespace detail {

inline double cross(Vec2 o, Vec2 a, Vec2 b) noexcept { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); }

inline bool segments_intersect(Vec2 p1, Vec2 p2, Vec2 q1, Vec2 q2) noexcept {
    const double d1 = cross(q1, q2, p1);
    const double d2 = cross(q1, q2, p2);
    const double d3 = cross(p1, p2, q1);
    const double d4 = cross(p1, p2, q2);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
    auto on_segment = [](Vec2 a, Vec2 b, Vec2 p) {
        return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
               p.y <= std::max(a.y, b.y);
    };
    if (d1 == 0 && on_segment(q1, q2, p1)) return true;
    if (d2 == 0 && on_segment(q1, q2, p2)) return true;
    if (d3 == 0 && on_segment(p1, p2, q1)) return true;
    if (d4 == 0 && on_segment(p1, p2, q2)) return true;
    return false;
}

inline std::vector<Vec2> sample_closed_spline(const std::vector<Vec2>& pts, double tension) {
    const std::size_t n = pts.size();
    const double s = (1.0 - tension) / 2.0;
    std::vector<Vec2> out;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 p0 = pts[(i + n - 1) % n];
        const Vec2 p1 = pts[i];
        const Vec2 p2 = pts[(i + 1) % n];
        const Vec2 p3 = pts[(i + 2) % n];
        const Vec2 m1{s * (p2.x - p0.x), s * (p2.y - p0.y)};
        const Vec2 m2{s * (p3.x - p1.x), s * (p3.y - p1.y)};
        const double chord = std::hypot(p2.x - p1.x, p2.y - p1.y);
        const int steps = std::max(8, static_cast<int>(std::ceil(chord * 4.0)));
        for (int k = 0; k < steps; ++k) {
            const double t = static_cast<double>(k) / steps;
            const double t2 = t * t;
            const double t3 = t2 * t;
            const double h00 = 2 * t3 - 3 * t2 + 1;
            const double h10 = t3 - 2 * t2 + t;
            const double h01 = -2 * t3 + 3 * t2;
            const double h11 = t3 - t2;
            out.push_back({h00 * p1.x + h10 * m1.x + h01 * p2.x + h11 * m2.x,
                           h00 * p1.y + h10 * m1.y + h01 * p2.y + h11 * m2.y});
        }
    }
    return out;
}

inline bool closed_polyline_is_simple(const std::vector<Vec2>& poly) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a1 = poly[i];
        const Vec2 a2 = poly[(i + 1) % n];
        for (std::size_t j = i + 2; j < n; ++j) {
            if (i == 0 && j == n - 1) continue; // shares the closing vertex
            if (segments_intersect(a1, a2, poly[j], poly[(j + 1) % n])) return false;
        }
    }
    return true;
}

/// Points farther apart along the curve than `3 * clearance` must be at
/// least `clearance` apart in the plane.
inline bool has_clearance(const std::vector<Vec2>& poly, double clearance) {
    const std::size_t n = poly.size();
    std::vector<double> arc(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2 a = poly[i];
        const Vec2 b = poly[(i + 1) % n];
        arc[i + 1] = arc[i] + std::hypot(b.x - a.x, b.y - a.y);
    }
    const double total = arc[n];
    const double window = 3.0 * clearance;
    const double c2 = clearance * clearance;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double along = arc[j] - arc[i];
            if (std::min(along, total - along) <= window) continue;
            const double dx = poly[i].x - poly[j].x;
            const double dy = poly[i].y - poly[j].y;
            if (dx * dx + dy * dy < c2) return false;
        }
    return true;
}

inline void draw_line(Mask& m, Point a, Point b) {
    int dx = std::abs(b.x - a.x);
    int dy = -std::abs(b.y - a.y);
    const int sx = a.x < b.x ? 1 : -1;
    const int sy = a.y < b.y ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        if (a.x >= 0 && a.y >= 0 && a.x < m.width() && a.y < m.height()) m.set(a.x, a.y, true);
        if (a == b) break;
        const int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            a.x += sx;
        }
        if (e2 <= dx) {
            err += dx;
            a.y += sy;
        }
    }
}

/// Number of 4-connected background regions, the area outside the frame included.
inline int background_regions(const Mask& fg) {
    const int w = fg.width() + 2;
    const int h = fg.height() + 2;
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * h, 0);
    auto open = [&](int x, int y) { return !fg.at_or(x - 1, y - 1, false); };
    std::vector<Point> stack;
    int regions = 0;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (!open(x, y) || seen[static_cast<std::size_t>(y) * w + x]) continue;
            ++regions;
            seen[static_cast<std::size_t>(y) * w + x] = 1;
            stack.push_back({x, y});
            while (!stack.empty()) {
                const Point p = stack.back();
                stack.pop_back();
                for (const Point d : {Point{1, 0}, Point{-1, 0}, Point{0, 1}, Point{0, -1}}) {
                    const int nx = p.x + d.x;
                    const int ny = p.y + d.y;
                    if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
                    auto& s = seen[static_cast<std::size_t>(ny) * w + nx];
                    if (s || !open(nx, ny)) continue;
                    s = 1;
                    stack.push_back({nx, ny});
                }
            }
        }
    return regions;
}

} // namespace detail

/// 1-px 8-connected raster of a closed polyline.
inline Mask rasterize_closed(const std::vector<Vec2>& poly, int size = kObjectSize) {
    Mask m(size, size);
    auto to_px = [](Vec2 p) { return Point{static_cast<int>(std::floor(p.x)), static_cast<int>(std::floor(p.y))}; };
    for (std::size_t i = 0; i < poly.size(); ++i)
        detail::draw_line(m, to_px(poly[i]), to_px(poly[(i + 1) % poly.size()]));
    return m;
}

inline Mask stroke_mask(const std::vector<Vec2>& poly, int stroke_width) {
    Mask m = rasterize_closed(poly);
    for (int i = 0; i < dilation_passes(stroke_width); ++i) m = dilate_once(m);
    return m;
}

/// Samples control points and a spline until all acceptance tests pass.
inline SquiggleTrace trace_squiggle(const SquiggleSpec& spec, SeedStream& stream) {
    spec.validate();
    const double center = kObjectSize / 2.0;
    const int margin = dilation_passes(spec.stroke_width);
    const double lo = margin;
    const double hi = kObjectSize - margin;
    const double clearance = spec.effective_clearance();

    for (int attempt = 1; attempt <= spec.max_attempts; ++attempt) {
        std::vector<double> angles(static_cast<std::size_t>(spec.control_point_count));
        for (auto& a : angles) a = stream.uniform(0.0, 2.0 * std::numbers::pi);
        std::sort(angles.begin(), angles.end());
        SquiggleTrace trace;
        for (double a : angles) {
            const double r = stream.uniform(spec.radius_min, spec.radius_max);
            trace.control_points.push_back({center + r * std::cos(a), center + r * std::sin(a)});
        }
        trace.polyline = detail::sample_closed_spline(trace.control_points, spec.tension);
        const bool inside = std::all_of(trace.polyline.begin(), trace.polyline.end(), [&](Vec2 p) {
            return p.x >= lo && p.x < hi && p.y >= lo && p.y < hi;
        });
        if (!inside) continue;
        if (!detail::closed_polyline_is_simple(trace.polyline)) continue;
        if (!detail::has_clearance(trace.polyline, clearance)) continue;
        // the thickened stroke must not pinch off extra pockets of background
        if (detail::background_regions(stroke_mask(trace.polyline, spec.stroke_width)) != 2) continue;
        trace.attempts = attempt;
        return trace;
    }
    throw GenerationError("squiggle: " + std::to_string(spec.max_attempts) +
                          " consecutive candidate curves were rejected");
}

inline ObjectImage gen_squiggle(const SquiggleSpec& spec, SeedStream& stream, std::string object_id = "squiggle") {
    const SquiggleTrace trace = trace_squiggle(spec, stream);
    const Mask m = stroke_mask(trace.polyline, spec.stroke_width);
    ObjectImage obj{std::move(object_id), Image(kObjectSize, kObjectSize), ObjectSource::squiggle, std::nullopt};
    for (int y = 0; y < kObjectSize; ++y)
        for (int x = 0; x < kObjectSize; ++x)
            if (m.at(x, y)) obj.pixels.set(x, y, kBlack);
    return obj;
}

} // namespace relkit
