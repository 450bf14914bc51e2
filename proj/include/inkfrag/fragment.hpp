#pragma once

#include "inkfrag/features.hpp"
#include "inkfrag/geometry.hpp"
#include "inkfrag/hmm.hpp"
#include "inkfrag/model.hpp"

#include <cstddef>
#include <string>
#include <vector>

namespace inkfrag {

struct PrimitiveKind {
    enum class Type { Line, ArcCW, ArcCCW };

    Type type = Type::Line;
    int direction = -1; // 0..7 for lines, -1 for arcs

    bool operator==(const PrimitiveKind&) const = default;

    static PrimitiveKind line(int dir) { return {Type::Line, dir}; }
    static PrimitiveKind arc_cw() { return {Type::ArcCW, -1}; }
    static PrimitiveKind arc_ccw() { return {Type::ArcCCW, -1}; }
};

std::string kind_to_string(const PrimitiveKind& kind);

struct Segment {
    PrimitiveKind kind;
    std::size_t raw_start = 0;
    std::size_t raw_end = 0;
    std::size_t rs_begin = 0; // resampled index interval, inclusive
    std::size_t rs_end = 0;
};

// Diagnostics for one emitted segment point (refinement audit trail).
struct SegmentPointInfo {
    std::size_t raw_index = 0;     // final, refined
    std::size_t candidate_raw = 0; // before curvature refinement
    std::size_t rs_index = 0;      // candidate observation index
};

struct Fragmentation {
    std::vector<Segment> segments;
    std::vector<std::size_t> segment_points; // interior raw indices
    std::vector<SegmentPointInfo> diagnostics;
    StatePath path;
    double step_d = 0.0;
    double decode_ms = 0.0;
};

struct FragConfig {
    int min_run = 3;          // primitive runs shorter than this are absorbed
    int max_boundary_run = 3; // same-kind runs merge across boundaries up to this
    double refine_window_factor = 1.5; // refine window = this * step_d of raw spacing
    double refine_min_gain = 0.12; // curvature rise (units of step_d) a nearby
                                   // peak needs before the candidate moves
    ResampleConfig resample;
    FeatureConfig features;
};

// Resample, extract features, decode, post-process. The model is re-pinned to
// the stroke's chosen step so curvature pdfs stay in units of d.
Fragmentation fragment(const RawStroke& stroke, const HmmModel& model,
                       const FragConfig& config = {});

// Path -> typed segments with refined segment points:
//  - boundary states (connectors, line corners) split primitive runs
//  - same-kind runs merge across short boundary runs
//  - short primitive runs are absorbed into the nearest longer primitive run
//  - each surviving boundary yields one segment point at the boundary run's
//    curvature-weighted midpoint, refined to the nearby raw-curvature maximum
Fragmentation segments_from_path(const StatePath& path, const ResampledStroke& rs,
                                 const RawStroke& raw, const FragConfig& config = {});

} // namespace inkfrag
