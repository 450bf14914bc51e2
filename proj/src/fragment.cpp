#include "inkfrag/fragment.hpp"

#include "inkfrag/error.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <optional>
#include <span>

namespace inkfrag {

namespace {

// Run label: either a primitive kind or a junction (boundary) stretch.
struct RunLabel {
    bool boundary = false;
    PrimitiveKind kind;

    bool operator==(const RunLabel&) const = default;
};

RunLabel classify_state(int state) {
    if (state < 8) return {false, PrimitiveKind::arc_ccw()};
    if (state < 16) return {false, PrimitiveKind::arc_cw()};
    if (state < 24) return {false, PrimitiveKind::line(state - 16)};
    return {true, {}};
}

struct Run {
    RunLabel label;
    std::size_t begin = 0; // observation span, inclusive
    std::size_t end = 0;

    std::size_t length() const { return end - begin + 1; }
};

std::vector<Run> collapse(const std::vector<RunLabel>& labels) {
    std::vector<Run> runs;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!runs.empty() && runs.back().label == labels[i]) {
            runs.back().end = i;
        } else {
            runs.push_back({labels[i], i, i});
        }
    }
    return runs;
}

std::size_t count_primitive_runs(const std::vector<Run>& runs) {
    std::size_t n = 0;
    for (const Run& r : runs) {
        if (!r.label.boundary) ++n;
    }
    return n;
}

// Nearest primitive run on one side of index k, or nullopt.
std::optional<std::size_t> nearest_primitive(const std::vector<Run>& runs, std::size_t k,
                                             int step) {
    for (std::ptrdiff_t i = static_cast<std::ptrdiff_t>(k) + step;
         i >= 0 && i < static_cast<std::ptrdiff_t>(runs.size()); i += step) {
        if (!runs[static_cast<std::size_t>(i)].label.boundary) {
            return static_cast<std::size_t>(i);
        }
    }
    return std::nullopt;
}

double median_raw_spacing(const RawStroke& raw) {
    std::vector<double> gaps;
    gaps.reserve(raw.points.size());
    for (std::size_t i = 1; i < raw.points.size(); ++i) {
        gaps.push_back(distance(raw.points[i - 1].pos(), raw.points[i].pos()));
    }
    if (gaps.empty()) return 1.0;
    std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
    return gaps[gaps.size() / 2];
}

} // namespace

std::string kind_to_string(const PrimitiveKind& kind) {
    switch (kind.type) {
        case PrimitiveKind::Type::Line: return "line";
        case PrimitiveKind::Type::ArcCW: return "arc_cw";
        case PrimitiveKind::Type::ArcCCW: return "arc_ccw";
    }
    return "?";
}

Fragmentation segments_from_path(const StatePath& path, const ResampledStroke& rs,
                                 const RawStroke& raw, const FragConfig& config) {
    if (path.states.size() != rs.points.size()) {
        throw LengthMismatch("segments_from_path: path length != resampled length");
    }
    const std::size_t n_obs = path.states.size();
    const std::size_t raw_len = raw.points.size();

    std::vector<RunLabel> labels(n_obs);
    for (std::size_t i = 0; i < n_obs; ++i) labels[i] = classify_state(path.states[i]);
    std::vector<Run> runs = collapse(labels);

    // Absorb primitive runs shorter than min_run into the nearest longer
    // primitive neighbor (decoder flicker, not real primitives).
    const auto min_run = static_cast<std::size_t>(std::max(config.min_run, 1));
    while (count_primitive_runs(runs) > 1) {
        std::size_t victim = runs.size();
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (runs[i].label.boundary || runs[i].length() >= min_run) continue;
            if (victim == runs.size() || runs[i].length() < runs[victim].length()) victim = i;
        }
        if (victim == runs.size()) break;

        const auto left = nearest_primitive(runs, victim, -1);
        const auto right = nearest_primitive(runs, victim, +1);
        std::optional<std::size_t> into;
        if (left && right) {
            into = runs[*left].length() >= runs[*right].length() ? left : right;
        } else {
            into = left ? left : right;
        }
        // Relabel the victim and any junction runs between it and the
        // absorber, so the collapse below always merges them (the run count
        // strictly decreases and the loop terminates).
        const std::size_t span_begin =
            *into < victim ? runs[*into].end + 1 : runs[victim].begin;
        const std::size_t span_end =
            *into < victim ? runs[victim].end : runs[*into].begin - 1;
        for (std::size_t i = span_begin; i <= span_end; ++i) {
            labels[i] = runs[*into].label;
        }
        runs = collapse(labels);
    }

    // Group primitive runs, merging same-kind runs across short boundary runs.
    // Leading/trailing boundary runs attach to the nearest group: the stroke
    // ends are implicit segment points and never reported.
    struct Group {
        PrimitiveKind kind;
        std::size_t begin = 0;
        std::size_t end = 0;
    };
    struct BoundaryMark {
        std::size_t begin = 0; // boundary-run span; begin > end encodes a
        std::size_t end = 0;   // direct kind transition at `begin`
        bool direct = false;
    };
    std::vector<Group> groups;
    std::vector<BoundaryMark> marks; // one between consecutive groups

    std::optional<Run> pending_boundary;
    for (const Run& r : runs) {
        if (r.label.boundary) {
            if (pending_boundary) {
                pending_boundary->end = r.end; // only via absorption edge cases
            } else {
                pending_boundary = r;
            }
            continue;
        }
        if (groups.empty()) {
            groups.push_back({r.label.kind, pending_boundary ? pending_boundary->begin : r.begin,
                              r.end});
            pending_boundary.reset();
            continue;
        }
        Group& cur = groups.back();
        const bool same_kind = cur.kind == r.label.kind;
        const bool short_boundary =
            !pending_boundary ||
            pending_boundary->length() <= static_cast<std::size_t>(config.max_boundary_run);
        if (same_kind && short_boundary) {
            cur.end = r.end;
        } else if (pending_boundary) {
            marks.push_back({pending_boundary->begin, pending_boundary->end, false});
            groups.push_back({r.label.kind, r.begin, r.end});
        } else {
            marks.push_back({r.begin, 0, true});
            groups.push_back({r.label.kind, r.begin, r.end});
        }
        pending_boundary.reset();
    }
    if (pending_boundary && !groups.empty()) {
        groups.back().end = pending_boundary->end;
    }

    Fragmentation out;
    out.path = path;
    out.step_d = rs.step_d;

    if (groups.empty()) {
        // No primitive states at all; cannot happen via decoding (initial
        // probability is confined to basic states) but handled for safety.
        out.segments.push_back({PrimitiveKind::line(0), 0, raw_len - 1, 0, n_obs - 1});
        return out;
    }

    // Candidate observation index per boundary: curvature-weighted midpoint
    // of the boundary run, or the transition index for direct switches.
    const std::span<const Vec2> pts(rs.points);
    std::vector<std::size_t> cand_obs;
    cand_obs.reserve(marks.size());
    for (const BoundaryMark& m : marks) {
        if (m.direct) {
            cand_obs.push_back(m.begin);
            continue;
        }
        double wsum = 0.0;
        double isum = 0.0;
        for (std::size_t i = m.begin; i <= m.end; ++i) {
            const double w = std::abs(curvature_feature(pts, i, rs.step_d, config.features));
            wsum += w;
            isum += w * static_cast<double>(i);
        }
        const double mid = wsum > 1e-12 ? isum / wsum
                                        : (static_cast<double>(m.begin + m.end)) / 2.0;
        cand_obs.push_back(static_cast<std::size_t>(std::llround(mid)));
    }

    // Refine each candidate to the raw point of maximum curvature nearby.
    // A flat neighborhood (smooth junction) keeps the candidate: snapping to
    // the maximum of near-constant curvature would chase jitter.
    const double spacing = median_raw_spacing(raw);
    const auto window = static_cast<std::size_t>(
        std::max<double>(1.0, std::ceil(config.refine_window_factor * rs.step_d / spacing)));
    std::vector<std::size_t> points;
    std::vector<SegmentPointInfo> diags;
    for (std::size_t k = 0; k < cand_obs.size(); ++k) {
        const std::size_t cand_raw =
            std::clamp<std::size_t>(rs.origin_index[cand_obs[k]], 1, raw_len - 2);
        const std::size_t lo = std::max<std::size_t>(1, cand_raw > window ? cand_raw - window : 1);
        const std::size_t hi = std::min(raw_len - 2, cand_raw + window);
        std::size_t best = cand_raw;
        double best_curv = raw_curvature(raw, cand_raw, window) +
                           config.refine_min_gain * rs.step_d;
        for (std::size_t j = lo; j <= hi; ++j) {
            const double c = raw_curvature(raw, j, window);
            if (c > best_curv) {
                best_curv = c;
                best = j;
            }
        }
        points.push_back(best);
        diags.push_back({best, cand_raw, cand_obs[k]});
    }

    // Enforce strictly increasing interior segment points; a collision drops
    // the later point and glues its neighbors.
    std::vector<bool> keep(points.size(), true);
    std::size_t prev = 0;
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (points[k] <= prev) {
            if (prev + 1 <= raw_len - 2 && (k + 1 >= points.size() || prev + 1 < points[k + 1])) {
                points[k] = prev + 1;
            } else {
                keep[k] = false;
                continue;
            }
        }
        if (points[k] > raw_len - 2) {
            keep[k] = false;
            continue;
        }
        prev = points[k];
    }

    // Assemble segments; dropped points merge adjacent groups (longer wins).
    std::vector<Group> final_groups;
    std::vector<std::size_t> final_points;
    std::vector<SegmentPointInfo> final_diags;
    final_groups.push_back(groups[0]);
    for (std::size_t k = 0; k < points.size(); ++k) {
        if (keep[k]) {
            final_points.push_back(points[k]);
            final_diags.push_back(diags[k]);
            final_groups.push_back(groups[k + 1]);
        } else {
            Group& a = final_groups.back();
            const Group& b = groups[k + 1];
            if (b.end - b.begin > a.end - a.begin) a.kind = b.kind;
            a.end = b.end;
        }
    }

    // Dominant-direction typing for line groups (absorbed observations keep
    // their original states out of the vote).
    for (Group& grp : final_groups) {
        if (grp.kind.type != PrimitiveKind::Type::Line) continue;
        std::array<int, 8> votes{};
        for (std::size_t i = grp.begin; i <= grp.end; ++i) {
            const int s = path.states[i];
            if (s >= 16 && s < 24) ++votes[static_cast<std::size_t>(s - 16)];
        }
        int best_dir = grp.kind.direction;
        int best_votes = 0;
        for (int d = 0; d < 8; ++d) {
            if (votes[static_cast<std::size_t>(d)] > best_votes) {
                best_votes = votes[static_cast<std::size_t>(d)];
                best_dir = d;
            }
        }
        grp.kind.direction = best_dir;
    }

    std::size_t raw_cursor = 0;
    for (std::size_t g = 0; g < final_groups.size(); ++g) {
        Segment seg;
        seg.kind = final_groups[g].kind;
        seg.raw_start = raw_cursor;
        seg.raw_end = g < final_points.size() ? final_points[g] : raw_len - 1;
        seg.rs_begin = final_groups[g].begin;
        seg.rs_end = final_groups[g].end;
        out.segments.push_back(seg);
        raw_cursor = seg.raw_end;
    }
    out.segment_points = std::move(final_points);
    out.diagnostics = std::move(final_diags);
    return out;
}

Fragmentation fragment(const RawStroke& stroke, const HmmModel& model,
                       const FragConfig& config) {
    const double d = choose_resample_step(stroke, config.resample);
    const ResampledStroke rs = resample(stroke, d);
    const ObservationSeq obs = extract_observations(rs, config.features);
    const HmmModel pinned = model.with_step(d);

    const auto t0 = std::chrono::steady_clock::now();
    StatePath path = viterbi(pinned.graph, obs.size(), [&](int s, std::size_t t) {
        return emission_log_likelihood(pinned, s, obs[t]);
    });
    const auto t1 = std::chrono::steady_clock::now();

    Fragmentation frag = segments_from_path(path, rs, stroke, config);
    frag.decode_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return frag;
}

} // namespace inkfrag
