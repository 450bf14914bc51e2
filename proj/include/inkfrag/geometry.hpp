#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace inkfrag {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(Vec2 o) const { return x * o.x + y * o.y; }
    double cross(Vec2 o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

inline double distance(Vec2 a, Vec2 b) { return (a - b).norm(); }

// One device sample. Timestamp is optional milliseconds.
struct RawPoint {
    double x = 0.0;
    double y = 0.0;
    std::optional<double> t;

    Vec2 pos() const { return {x, y}; }
};

// A pen-down..pen-up point sequence. Consecutive duplicates are removed on
// ingest (make_raw_stroke); zero-length segments break direction features.
struct RawStroke {
    std::string id;
    std::vector<RawPoint> points;

    std::size_t size() const { return points.size(); }
};

// Builds a stroke from raw samples, dropping consecutive duplicate points.
// Throws DegenerateStroke if fewer than 2 distinct points remain and
// ParseError on non-finite coordinates or decreasing timestamps.
RawStroke make_raw_stroke(std::string id, std::vector<RawPoint> points);

// Total polyline length of the stroke.
double polyline_length(const RawStroke& stroke);

// Equidistant re-parameterization of a stroke. Spacing is measured along
// the raw polyline; the final gap may be shorter (endpoint retention rule).
struct ResampledStroke {
    std::vector<Vec2> points;
    double step_d = 0.0;
    // Raw index nearest (by arc length) to each resampled point.
    std::vector<std::size_t> origin_index;

    std::size_t size() const { return points.size(); }
};

struct ResampleConfig {
    double min_primitive_fraction = 0.08;
    int min_obs_per_primitive = 5;
    double d_min_abs = 0.5;
    double d_max_abs = 1e30;
};

// Walks the raw polyline by arc length, emitting a point every step_d units
// (linear interpolation between raw points). The first raw point is always
// emitted; the last raw point is appended if it lies farther than step_d/2
// beyond the last emitted point. Throws DegenerateStroke when the polyline
// is shorter than one step.
ResampledStroke resample(const RawStroke& stroke, double step_d);

// d = (min_primitive_fraction * L) / min_obs_per_primitive, clamped to
// [d_min_abs, d_max_abs]. The fraction is a practical stand-in for choosing
// the step from stroke-length statistics; both knobs are config-exposed.
double choose_resample_step(const RawStroke& stroke, const ResampleConfig& config);

// Unsigned distance from points[index] to the chord joining the points
// half_window before and after it (indices clamped to the stroke ends).
// Returns 0 when the chord endpoints coincide.
double raw_curvature(const RawStroke& stroke, std::size_t index, std::size_t half_window);

} // namespace inkfrag
