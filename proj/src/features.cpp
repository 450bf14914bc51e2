#include "inkfrag/features.hpp"

#include "inkfrag/error.hpp"

#include <algorithm>
#include <cmath>

namespace inkfrag {

namespace {

std::size_t clamp_index(std::ptrdiff_t i, std::size_t n) {
    if (i < 0) return 0;
    if (i >= static_cast<std::ptrdiff_t>(n)) return n - 1;
    return static_cast<std::size_t>(i);
}

} // namespace

bool direction_features(std::span<const Vec2> points, std::size_t i, double& f1, double& f2) {
    const std::size_t n = points.size();
    const Vec2 a = points[clamp_index(static_cast<std::ptrdiff_t>(i) - 1, n)];
    const Vec2 b = points[clamp_index(static_cast<std::ptrdiff_t>(i) + 1, n)];
    const Vec2 chord = b - a;
    const double len = chord.norm();
    if (len < 1e-12) return false;
    f1 = chord.x / len;
    f2 = chord.y / len;
    return true;
}

double curvature_feature(std::span<const Vec2> points, std::size_t i, double step_d,
                         const FeatureConfig& config) {
    const std::size_t n = points.size();
    const Vec2 a = points[clamp_index(static_cast<std::ptrdiff_t>(i) - 2, n)];
    const Vec2 b = points[clamp_index(static_cast<std::ptrdiff_t>(i) + 2, n)];
    const Vec2 chord = b - a;
    const double len = chord.norm();
    if (len < 1e-12) return 0.0;
    double h = chord.cross(points[i] - a) / len; // signed perpendicular distance
    if (config.flip_curvature_sign) h = -h;
    return std::clamp(h, -2.0 * step_d, 2.0 * step_d);
}

double direction_change(std::span<const Vec2> points, std::size_t i) {
    const std::size_t n = points.size();
    const Vec2 prev = points[clamp_index(static_cast<std::ptrdiff_t>(i) - 1, n)];
    const Vec2 next = points[clamp_index(static_cast<std::ptrdiff_t>(i) + 1, n)];
    const Vec2 c1 = points[i] - prev;
    const Vec2 c2 = next - points[i];
    if (c1.norm() < 1e-12 || c2.norm() < 1e-12) return 0.0;
    // pi minus the interior vertex angle = the turn between consecutive
    // chords; atan2 keeps full precision near collinear points
    return std::atan2(std::abs(c1.cross(c2)), c1.dot(c2));
}

ObservationSeq extract_observations(const ResampledStroke& rs, const FeatureConfig& config) {
    if (rs.points.size() < 5) {
        throw TooShort("extract_observations: need at least 5 resampled points, got " +
                       std::to_string(rs.points.size()));
    }
    ObservationSeq seq;
    seq.step_d = rs.step_d;
    seq.observations.resize(rs.points.size());
    const std::span<const Vec2> pts(rs.points);
    for (std::size_t i = 0; i < rs.points.size(); ++i) {
        Observation& o = seq.observations[i];
        if (!direction_features(pts, i, o.f1, o.f2)) {
            o.degenerate = true;
            if (i > 0) {
                o.f1 = seq.observations[i - 1].f1;
                o.f2 = seq.observations[i - 1].f2;
            } else {
                o.f1 = 1.0;
                o.f2 = 0.0;
            }
        }
        o.f3 = curvature_feature(pts, i, rs.step_d, config);
        o.f4 = direction_change(pts, i);
    }
    return seq;
}

} // namespace inkfrag
