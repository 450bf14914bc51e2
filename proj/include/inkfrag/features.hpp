#pragma once

#include "inkfrag/geometry.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace inkfrag {

// Per-point geometry features:
//   f1, f2  cos/sin of the chord p[i-1]->p[i+1] (tangent direction)
//   f3      signed distance from p[i] to the chord p[i-2]->p[i+2], positive
//           for a clockwise local turn, clamped to +-2*step_d
//   f4      direction change: pi minus the interior angle at p[i], in [0, pi]
struct Observation {
    double f1 = 1.0;
    double f2 = 0.0;
    double f3 = 0.0;
    double f4 = 0.0;
    bool degenerate = false; // direction was substituted from the previous point
};

struct ObservationSeq {
    std::vector<Observation> observations;
    double step_d = 0.0;

    std::size_t size() const { return observations.size(); }
    const Observation& operator[](std::size_t i) const { return observations[i]; }
};

struct FeatureConfig {
    // Flips the sign of f3. The default matches tablet data; paired with the
    // matching flag in ModelParams so feature signs and arc-state adjacency
    // always flip together.
    bool flip_curvature_sign = false;
};

// f1/f2 of the chord through the window neighbors of index i (indices clamped
// to the point range). Returns false on a degenerate chord (pen retrace);
// the caller substitutes the previous direction.
bool direction_features(std::span<const Vec2> points, std::size_t i, double& f1, double& f2);

// Signed chord distance (see Observation::f3). Zero on a degenerate chord.
double curvature_feature(std::span<const Vec2> points, std::size_t i, double step_d,
                         const FeatureConfig& config = {});

// Turning angle at index i, in [0, pi]. Zero on a degenerate chord.
double direction_change(std::span<const Vec2> points, std::size_t i);

// One observation per resampled point; boundary windows use edge-replicated
// indices so the sequence length equals the point count. Throws TooShort when
// the stroke has fewer than 5 points (the feature window).
ObservationSeq extract_observations(const ResampledStroke& rs, const FeatureConfig& config = {});

} // namespace inkfrag
