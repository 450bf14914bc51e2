#include "inkfrag/geometry.hpp"

#include "inkfrag/error.hpp"

#include <algorithm>
#include <cmath>

namespace inkfrag {

RawStroke make_raw_stroke(std::string id, std::vector<RawPoint> points) {
    RawStroke stroke;
    stroke.id = std::move(id);
    stroke.points.reserve(points.size());
    double last_t = -std::numeric_limits<double>::infinity();
    for (const RawPoint& p : points) {
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
            throw ParseError("stroke '" + stroke.id + "': non-finite coordinate");
        }
        if (p.t) {
            if (!std::isfinite(*p.t) || *p.t < last_t) {
                throw ParseError("stroke '" + stroke.id + "': timestamps must be non-decreasing");
            }
            last_t = *p.t;
        }
        if (!stroke.points.empty()) {
            const RawPoint& prev = stroke.points.back();
            if (prev.x == p.x && prev.y == p.y) continue; // drop duplicate
        }
        stroke.points.push_back(p);
    }
    if (stroke.points.size() < 2) {
        throw DegenerateStroke("stroke '" + stroke.id + "': fewer than 2 distinct points");
    }
    return stroke;
}

double polyline_length(const RawStroke& stroke) {
    double len = 0.0;
    for (std::size_t i = 1; i < stroke.points.size(); ++i) {
        len += distance(stroke.points[i - 1].pos(), stroke.points[i].pos());
    }
    return len;
}

ResampledStroke resample(const RawStroke& stroke, double step_d) {
    if (!(step_d > 0.0)) {
        throw InvalidParams("resample: step_d must be positive");
    }
    const std::vector<RawPoint>& pts = stroke.points;
    const double total = polyline_length(stroke);
    if (total < step_d) {
        throw DegenerateStroke("stroke '" + stroke.id + "': polyline length " +
                               std::to_string(total) + " shorter than step " +
                               std::to_string(step_d));
    }

    // Cumulative arc length up to each raw point.
    std::vector<double> cum(pts.size(), 0.0);
    for (std::size_t i = 1; i < pts.size(); ++i) {
        cum[i] = cum[i - 1] + distance(pts[i - 1].pos(), pts[i].pos());
    }
    auto nearest_raw = [&](double s) -> std::size_t {
        auto it = std::lower_bound(cum.begin(), cum.end(), s);
        if (it == cum.begin()) return 0;
        if (it == cum.end()) return cum.size() - 1;
        const std::size_t hi = static_cast<std::size_t>(it - cum.begin());
        return (s - cum[hi - 1] <= cum[hi] - s) ? hi - 1 : hi;
    };

    ResampledStroke out;
    out.step_d = step_d;
    out.points.push_back(pts[0].pos());
    out.origin_index.push_back(0);

    // Walk forward emitting the first polyline point exactly step_d away from
    // the last emitted point, so consecutive spacing is step_d on any input
    // (raw jitter does not inflate the effective step).
    Vec2 cur = pts[0].pos();
    std::size_t seg = 0;
    double t0 = 0.0; // progress within segment [seg, seg+1]
    while (seg + 1 < pts.size()) {
        const Vec2 a = pts[seg].pos();
        const Vec2 b = pts[seg + 1].pos();
        if (distance(b, cur) < step_d) {
            ++seg;
            t0 = 0.0;
            continue;
        }
        // First crossing of the circle |p - cur| = step_d within [t0, 1].
        const Vec2 dir = b - a;
        const Vec2 rel = a - cur;
        const double qa = dir.dot(dir);
        const double qb = 2.0 * rel.dot(dir);
        const double qc = rel.dot(rel) - step_d * step_d;
        const double disc = qb * qb - 4.0 * qa * qc;
        double t = 1.0;
        if (disc >= 0.0 && qa > 0.0) {
            const double root = std::sqrt(disc);
            const double t1 = (-qb - root) / (2.0 * qa);
            const double t2 = (-qb + root) / (2.0 * qa);
            if (t1 >= t0 - 1e-12 && t1 <= 1.0) {
                t = t1;
            } else {
                t = std::clamp(t2, t0, 1.0);
            }
        }
        cur = a + dir * t;
        t0 = t;
        out.points.push_back(cur);
        out.origin_index.push_back(nearest_raw(cum[seg] + t * (cum[seg + 1] - cum[seg])));
    }

    // Keep the stroke endpoint when the leftover tail is long enough.
    if (distance(pts.back().pos(), out.points.back()) > step_d / 2.0) {
        out.points.push_back(pts.back().pos());
        out.origin_index.push_back(pts.size() - 1);
    }
    return out;
}

double choose_resample_step(const RawStroke& stroke, const ResampleConfig& config) {
    if (config.min_obs_per_primitive <= 0 || !(config.min_primitive_fraction > 0.0)) {
        throw InvalidParams("choose_resample_step: fraction and min_obs must be positive");
    }
    const double len = polyline_length(stroke);
    const double d = (config.min_primitive_fraction * len) /
                     static_cast<double>(config.min_obs_per_primitive);
    return std::clamp(d, config.d_min_abs, config.d_max_abs);
}

double raw_curvature(const RawStroke& stroke, std::size_t index, std::size_t half_window) {
    const std::size_t n = stroke.points.size();
    if (n == 0 || index >= n) return 0.0;
    const std::size_t lo = index >= half_window ? index - half_window : 0;
    const std::size_t hi = std::min(index + half_window, n - 1);
    const Vec2 a = stroke.points[lo].pos();
    const Vec2 b = stroke.points[hi].pos();
    const Vec2 chord = b - a;
    const double len = chord.norm();
    if (len < 1e-12) return 0.0;
    return std::abs(chord.cross(stroke.points[index].pos() - a)) / len;
}

} // namespace inkfrag
