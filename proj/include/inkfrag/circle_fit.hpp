#pragma once

#include "inkfrag/geometry.hpp"

#include <optional>
#include <span>

namespace inkfrag {

// Cosmetic fits used for rendering annotations; the fragmentation method
// itself never consumes them.

struct CircleFit {
    Vec2 center;
    double radius = 0.0;
    double rms_error = 0.0;
};

// Kasa algebraic least-squares circle fit. Returns nullopt for fewer than
// 3 points or a degenerate (near-collinear) system.
std::optional<CircleFit> fit_circle_kasa(std::span<const Vec2> points);

struct LineFit {
    Vec2 point;     // centroid
    Vec2 direction; // unit
    double rms_error = 0.0;
};

// Total-least-squares line through the points (principal direction).
std::optional<LineFit> fit_line(std::span<const Vec2> points);

} // namespace inkfrag
