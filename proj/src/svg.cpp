#include "inkfrag/svg.hpp"

#include "inkfrag/circle_fit.hpp"
#include "inkfrag/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace inkfrag {

namespace {

struct CellTransform {
    double scale = 1.0;
    Vec2 offset;

    Vec2 apply(Vec2 p) const { return {p.x * scale + offset.x, p.y * scale + offset.y}; }
};

CellTransform fit_to_cell(const RawStroke& stroke, double x0, double y0, double cell,
                          double margin) {
    double min_x = 1e300, min_y = 1e300, max_x = -1e300, max_y = -1e300;
    for (const RawPoint& p : stroke.points) {
        min_x = std::min(min_x, p.x);
        min_y = std::min(min_y, p.y);
        max_x = std::max(max_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    const double span = std::max({max_x - min_x, max_y - min_y, 1e-9});
    const double usable = cell * (1.0 - 2.0 * margin);
    CellTransform t;
    t.scale = usable / span;
    const double w = (max_x - min_x) * t.scale;
    const double h = (max_y - min_y) * t.scale;
    t.offset = {x0 + (cell - w) / 2.0 - min_x * t.scale,
                y0 + (cell - h) / 2.0 - min_y * t.scale};
    return t;
}

std::string segment_title(const RawStroke& stroke, const Segment& seg) {
    std::vector<Vec2> pts;
    for (std::size_t i = seg.raw_start; i <= seg.raw_end; ++i) {
        pts.push_back(stroke.points[i].pos());
    }
    std::ostringstream os;
    os << kind_to_string(seg.kind);
    if (seg.kind.type == PrimitiveKind::Type::Line) {
        os << " dir " << seg.kind.direction;
        if (auto fit = fit_line(pts)) {
            os << ", rms " << fit->rms_error;
        }
    } else if (auto fit = fit_circle_kasa(pts)) {
        os << " r~" << fit->radius << ", rms " << fit->rms_error;
    }
    return os.str();
}

const std::string& segment_color(const Segment& seg, const SvgOptions& opt) {
    switch (seg.kind.type) {
        case PrimitiveKind::Type::ArcCW: return opt.arc_cw_color;
        case PrimitiveKind::Type::ArcCCW: return opt.arc_ccw_color;
        case PrimitiveKind::Type::Line: break;
    }
    const int dir = std::clamp(seg.kind.direction, 0, 7);
    return opt.line_colors[static_cast<std::size_t>(dir)];
}

} // namespace

std::string render_svg_sheet(const std::vector<RawStroke>& strokes,
                             const std::vector<Fragmentation>& fragmentations,
                             const SvgOptions& opt) {
    if (strokes.size() != fragmentations.size()) {
        throw LengthMismatch("render_svg_sheet: strokes and fragmentations differ in count");
    }
    const std::size_t n = strokes.size();
    const std::size_t cols = std::max<std::size_t>(1, static_cast<std::size_t>(
                                                          std::ceil(std::sqrt(double(n)))));
    const std::size_t rows = n == 0 ? 1 : (n + cols - 1) / cols;
    const double cell = opt.cell_size;

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\""
       << cols * cell << "\" height=\"" << rows * cell << "\" viewBox=\"0 0 " << cols * cell
       << " " << rows * cell << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";

    for (std::size_t k = 0; k < n; ++k) {
        const RawStroke& stroke = strokes[k];
        const Fragmentation& frag = fragmentations[k];
        const double x0 = static_cast<double>(k % cols) * cell;
        const double y0 = static_cast<double>(k / cols) * cell;
        const CellTransform t = fit_to_cell(stroke, x0, y0, cell, opt.margin_frac);

        os << "<g id=\"" << stroke.id << "\">\n";
        for (const Segment& seg : frag.segments) {
            os << "<path fill=\"none\" stroke=\"" << segment_color(seg, opt)
               << "\" stroke-width=\"1.5\" d=\"";
            for (std::size_t i = seg.raw_start; i <= seg.raw_end; ++i) {
                const Vec2 p = t.apply(stroke.points[i].pos());
                os << (i == seg.raw_start ? 'M' : 'L') << p.x << ' ' << p.y << ' ';
            }
            os << "\"><title>" << segment_title(stroke, seg) << "</title></path>\n";
        }
        for (std::size_t idx : frag.segment_points) {
            const Vec2 p = t.apply(stroke.points[idx].pos());
            os << "<circle cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\""
               << cell * opt.point_radius_frac << "\" fill=\"" << opt.point_color << "\"/>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace inkfrag
