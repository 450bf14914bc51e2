#pragma once

#include "inkfrag/fragment.hpp"
#include "inkfrag/geometry.hpp"

#include <array>
#include <string>
#include <vector>

namespace inkfrag {

struct SvgOptions {
    double cell_size = 200.0;       // px per grid cell
    double margin_frac = 0.08;      // padding inside each cell
    double point_radius_frac = 0.018; // segment-point marker, relative to cell
    // One hue per line direction plus the two arc orientations.
    std::array<std::string, 8> line_colors = {"#1f77b4", "#2ca02c", "#9467bd", "#8c564b",
                                              "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    std::string arc_cw_color = "#d62728";
    std::string arc_ccw_color = "#ff7f0e";
    std::string point_color = "#000000";
};

// Grid sheet of fragmented strokes: one polyline path per segment, colored by
// primitive kind, with small circles at segment points. Fitted primitive
// parameters go into <title> annotations only.
std::string render_svg_sheet(const std::vector<RawStroke>& strokes,
                             const std::vector<Fragmentation>& fragmentations,
                             const SvgOptions& options = {});

} // namespace inkfrag
