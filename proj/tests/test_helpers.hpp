#pragma once

#include "inkfrag/geometry.hpp"
#include "inkfrag/rng.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace testutil {

using inkfrag::RawPoint;
using inkfrag::RawStroke;
using inkfrag::Vec2;

// Points on a circle of radius r at a fixed angular step. step > 0 walks the
// tangent angle upward (anticlockwise in the numeric plane).
inline std::vector<Vec2> circle_points(double r, double angle_step, std::size_t n,
                                       double phase = 0.0, Vec2 center = {0, 0}) {
    std::vector<Vec2> pts;
    pts.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = phase + angle_step * static_cast<double>(i);
        pts.push_back({center.x + r * std::cos(a), center.y + r * std::sin(a)});
    }
    return pts;
}

inline RawStroke stroke_from(const std::vector<Vec2>& pts, std::string id = "t") {
    RawStroke s;
    s.id = std::move(id);
    for (const Vec2& p : pts) s.points.push_back({p.x, p.y, std::nullopt});
    return s;
}

// Dense straight polyline from a to b.
inline RawStroke line_stroke(Vec2 a, Vec2 b, std::size_t n, std::string id = "line") {
    std::vector<Vec2> pts;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / static_cast<double>(n - 1);
        pts.push_back({a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t});
    }
    return stroke_from(pts, std::move(id));
}

} // namespace testutil
