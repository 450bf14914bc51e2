#include "inkfrag/synth.hpp"

#include "inkfrag/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace inkfrag {

namespace {

int heading_to_direction(double heading) {
    const double sector = heading / (M_PI / 4.0);
    const int k = static_cast<int>(std::llround(sector));
    return ((k % 8) + 8) % 8;
}

struct Tracer {
    std::vector<Vec2> points;
    std::vector<double> arc_pos; // cumulative arc length per point
    std::vector<std::size_t> junctions;
    Vec2 pos;
    double heading = 0.0;
    double s_total = 0.0;
    double spacing = 0.1;

    void emit(Vec2 p, double s) {
        points.push_back(p);
        arc_pos.push_back(s);
    }

    void trace_line(const LineSpec& line) {
        heading = line.heading;
        const Vec2 dir{std::cos(heading), std::sin(heading)};
        const int n = std::max(1, static_cast<int>(std::ceil(line.length / spacing)));
        const double step = line.length / n;
        for (int i = 1; i <= n; ++i) {
            emit(pos + dir * (step * i), s_total + step * i);
        }
        pos = points.back();
        s_total += line.length;
    }

    void trace_arc(const ArcSpec& arc) {
        if (arc.has_heading) heading = arc.start_heading;
        const double sgn = arc.sweep >= 0.0 ? 1.0 : -1.0;
        const double len = arc.radius * std::abs(arc.sweep);
        const int n = std::max(1, static_cast<int>(std::ceil(len / spacing)));
        const double step = len / n;
        const Vec2 p0 = pos;
        const double th0 = heading;
        for (int i = 1; i <= n; ++i) {
            const double s = step * i;
            const double th = th0 + sgn * s / arc.radius;
            const Vec2 p{p0.x + arc.radius / sgn * (std::sin(th) - std::sin(th0)),
                         p0.y + arc.radius / sgn * (std::cos(th0) - std::cos(th))};
            emit(p, s_total + s);
        }
        heading = th0 + arc.sweep;
        pos = points.back();
        s_total += len;
    }
};

std::string describe(const ShapeSpec& spec) {
    std::ostringstream os;
    os << spec.name << "@" << spec.start_heading << ":";
    bool first = true;
    for (const PrimSpec& p : spec.prims) {
        if (!first) os << ",";
        first = false;
        if (const auto* line = std::get_if<LineSpec>(&p)) {
            os << "line(" << line->length << "," << line->heading << ")";
        } else {
            const auto& arc = std::get<ArcSpec>(p);
            os << "arc(" << arc.radius << "," << arc.sweep;
            if (arc.has_heading) os << "," << arc.start_heading;
            os << ")";
        }
    }
    return os.str();
}

} // namespace

std::pair<RawStroke, GroundTruth> generate(const ShapeSpec& spec, const NoiseSpec& noise,
                                           double raw_spacing) {
    if (spec.prims.empty()) throw InvalidSpec("generate: empty primitive list");
    if (!(raw_spacing > 0.0)) throw InvalidSpec("generate: raw spacing must be positive");
    for (const PrimSpec& p : spec.prims) {
        if (const auto* line = std::get_if<LineSpec>(&p)) {
            if (!(line->length > 0.0)) throw InvalidSpec("generate: line length must be positive");
        } else {
            const auto& arc = std::get<ArcSpec>(p);
            if (!(arc.radius > 0.0) || arc.sweep == 0.0 ||
                std::abs(arc.sweep) > 2.0 * M_PI + 1e-9) {
                throw InvalidSpec("generate: arc radius must be positive, |sweep| in (0, 2pi]");
            }
        }
    }

    Tracer tracer;
    tracer.spacing = raw_spacing;
    tracer.pos = spec.start;
    tracer.heading = spec.start_heading;
    tracer.emit(spec.start, 0.0);

    GroundTruth truth;
    truth.generator_spec = describe(spec);
    for (std::size_t k = 0; k < spec.prims.size(); ++k) {
        if (const auto* line = std::get_if<LineSpec>(&spec.prims[k])) {
            truth.primitives.push_back(PrimitiveKind::line(heading_to_direction(line->heading)));
            tracer.trace_line(*line);
        } else {
            const auto& arc = std::get<ArcSpec>(spec.prims[k]);
            truth.primitives.push_back(arc.sweep > 0.0 ? PrimitiveKind::arc_ccw()
                                                       : PrimitiveKind::arc_cw());
            tracer.trace_arc(arc);
        }
        if (k + 1 < spec.prims.size()) {
            truth.true_segment_points.push_back(tracer.points.size() - 1);
        }
    }

    // Seeded noise: tremor sinusoid perpendicular to the path plus isotropic
    // per-point jitter, both in units of the reference resample step.
    if (noise.jitter_sigma > 0.0 || noise.wobble_amp > 0.0) {
        Rng rng(noise.seed);
        const double phase = rng.uniform(0.0, 2.0 * M_PI);
        const double sigma = noise.jitter_sigma * noise.step_d_ref;
        const double amp = noise.wobble_amp * noise.step_d_ref;
        for (std::size_t i = 0; i < tracer.points.size(); ++i) {
            Vec2& p = tracer.points[i];
            if (amp > 0.0 && noise.wobble_wavelength > 0.0) {
                const std::size_t j = std::min(i + 1, tracer.points.size() - 1);
                const std::size_t h = j > 0 ? j - 1 : 0;
                Vec2 t = tracer.points[j] - tracer.points[h];
                const double tn = t.norm();
                if (tn > 1e-12) {
                    const Vec2 n{-t.y / tn, t.x / tn};
                    const double w =
                        amp * std::sin(2.0 * M_PI * tracer.arc_pos[i] / noise.wobble_wavelength +
                                       phase);
                    p = p + n * w;
                }
            }
            if (sigma > 0.0) {
                p.x += sigma * rng.normal();
                p.y += sigma * rng.normal();
            }
        }
    }

    RawStroke stroke;
    stroke.id = spec.name;
    stroke.points.reserve(tracer.points.size());
    for (const Vec2& p : tracer.points) stroke.points.push_back({p.x, p.y, std::nullopt});
    return {std::move(stroke), std::move(truth)};
}

std::vector<std::string> known_families() {
    return {"line", "ell", "zigzag", "square", "star", "circle",
            "arc",  "scurve", "jcurve", "two",  "ucurve", "dee"};
}

ShapeSpec random_shape(const std::string& family, double d, Rng& rng) {
    ShapeSpec spec;
    spec.name = family;
    const double h0 = rng.uniform(0.0, 2.0 * M_PI);

    auto turn_angle = [&](double lo_deg, double hi_deg) {
        const double mag = rng.uniform(lo_deg, hi_deg) * M_PI / 180.0;
        return rng.coin() ? mag : -mag;
    };

    if (family == "line") {
        spec.prims.push_back(LineSpec{rng.uniform(20.0, 60.0) * d, h0});
    } else if (family == "ell") {
        const double turn = turn_angle(45.0, 135.0);
        spec.prims.push_back(LineSpec{rng.uniform(12.0, 25.0) * d, h0});
        spec.prims.push_back(LineSpec{rng.uniform(12.0, 25.0) * d, h0 + turn});
    } else if (family == "zigzag") {
        const int legs = rng.uniform_int(4, 6);
        double h = h0;
        double sign = rng.coin() ? 1.0 : -1.0;
        spec.prims.push_back(LineSpec{rng.uniform(8.0, 20.0) * d, h});
        for (int i = 1; i < legs; ++i) {
            h += sign * rng.uniform(45.0, 135.0) * M_PI / 180.0;
            sign = -sign;
            spec.prims.push_back(LineSpec{rng.uniform(8.0, 20.0) * d, h});
        }
    } else if (family == "square") {
        const double side = rng.uniform(10.0, 22.0) * d;
        const double sign = rng.coin() ? 1.0 : -1.0;
        for (int i = 0; i < 4; ++i) {
            spec.prims.push_back(LineSpec{side, h0 + sign * i * M_PI / 2.0});
        }
    } else if (family == "star") {
        const double turn = 144.0 * M_PI / 180.0 * (rng.coin() ? 1.0 : -1.0);
        for (int i = 0; i < 5; ++i) {
            spec.prims.push_back(LineSpec{rng.uniform(14.0, 25.0) * d, h0 + i * turn});
        }
    } else if (family == "circle") {
        const double r = rng.uniform(12.0, 26.0) * d;
        const double sweep = rng.coin() ? 2.0 * M_PI : -2.0 * M_PI;
        spec.start_heading = h0;
        spec.prims.push_back(ArcSpec{r, sweep});
    } else if (family == "arc") {
        const double r = rng.uniform(12.0, 28.0) * d;
        const double sweep = rng.uniform(0.5 * M_PI, 1.5 * M_PI) * (rng.coin() ? 1.0 : -1.0);
        spec.start_heading = h0;
        spec.prims.push_back(ArcSpec{r, sweep});
    } else if (family == "scurve") {
        const double sign = rng.coin() ? 1.0 : -1.0;
        spec.start_heading = h0;
        spec.prims.push_back(
            ArcSpec{rng.uniform(12.0, 15.0) * d, sign * rng.uniform(0.8 * M_PI, 1.1 * M_PI)});
        spec.prims.push_back(
            ArcSpec{rng.uniform(12.0, 15.0) * d, -sign * rng.uniform(0.8 * M_PI, 1.1 * M_PI)});
    } else if (family == "jcurve") {
        const double r = rng.uniform(14.0, 26.0) * d;
        const double sweep = rng.uniform(0.7 * M_PI, 1.2 * M_PI) * (rng.coin() ? 1.0 : -1.0);
        spec.start_heading = h0;
        spec.prims.push_back(ArcSpec{r, sweep});
    } else if (family == "two") {
        const double sweep = -rng.uniform(0.8 * M_PI, 1.0 * M_PI);
        spec.start_heading = h0;
        spec.prims.push_back(ArcSpec{rng.uniform(12.0, 16.0) * d, sweep});
        const double h1 = h0 + sweep + turn_angle(50.0, 90.0);
        spec.prims.push_back(LineSpec{rng.uniform(10.0, 18.0) * d, h1});
        spec.prims.push_back(LineSpec{rng.uniform(9.0, 16.0) * d, h1 + turn_angle(75.0, 105.0)});
    } else if (family == "ucurve") {
        // Hand-drawn stem-arc-stem compounds land slightly off tangent; the
        // junction corners keep the true segment points locally evidenced.
        const double sign = rng.coin() ? 1.0 : -1.0;
        const double j1 = sign * rng.uniform(30.0, 50.0) * M_PI / 180.0;
        const double j2 = sign * rng.uniform(30.0, 50.0) * M_PI / 180.0;
        const double sweep = sign * rng.uniform(0.75 * M_PI, 0.95 * M_PI);
        spec.prims.push_back(LineSpec{rng.uniform(10.0, 20.0) * d, h0});
        ArcSpec bend{rng.uniform(12.0, 16.0) * d, sweep};
        bend.has_heading = true;
        bend.start_heading = h0 + j1;
        spec.prims.push_back(bend);
        spec.prims.push_back(LineSpec{rng.uniform(10.0, 20.0) * d, h0 + j1 + sweep + j2});
    } else if (family == "dee") {
        const double r = rng.uniform(12.0, 16.0) * d;
        spec.prims.push_back(LineSpec{2.0 * r, h0});
        ArcSpec cap{r, -M_PI};
        cap.has_heading = true;
        cap.start_heading = h0 - M_PI / 2.0;
        spec.prims.push_back(cap);
    } else {
        throw InvalidSpec("unknown shape family '" + family + "'");
    }
    return spec;
}

CorpusSpec default_corpus_recipe(double jitter_sigma, std::uint64_t seed) {
    CorpusSpec spec;
    spec.jitter_sigma = jitter_sigma;
    spec.raw_spacing = 0.25;
    spec.step_d = 1.0;
    spec.master_seed = seed;
    for (const std::string& family : known_families()) {
        spec.families.push_back({family, 50});
    }
    return spec;
}

std::vector<CorpusEntry> corpus(const CorpusSpec& spec) {
    std::vector<CorpusEntry> out;
    for (std::size_t f = 0; f < spec.families.size(); ++f) {
        const FamilySpec& fam = spec.families[f];
        if (fam.count < 0) throw InvalidSpec("corpus: negative family count");
        for (int i = 0; i < fam.count; ++i) {
            const std::uint64_t stroke_seed =
                mix_seed(spec.master_seed, f * 1000003ull + static_cast<std::uint64_t>(i));
            Rng shape_rng(mix_seed(stroke_seed, 1));
            ShapeSpec shape = random_shape(fam.family, spec.step_d, shape_rng);

            NoiseSpec noise;
            noise.jitter_sigma = spec.jitter_sigma;
            noise.wobble_amp = spec.wobble_amp;
            noise.step_d_ref = spec.step_d;
            noise.seed = mix_seed(stroke_seed, 2);

            auto [stroke, truth] = generate(shape, noise, spec.raw_spacing * spec.step_d);
            char idbuf[64];
            std::snprintf(idbuf, sizeof idbuf, "%s-%03d", fam.family.c_str(), i);
            stroke.id = idbuf;
            out.push_back({std::move(stroke), std::move(truth), fam.family});
        }
    }
    return out;
}

FragConfig corpus_frag_config(const CorpusSpec& spec) {
    FragConfig config;
    config.resample.d_min_abs = spec.step_d;
    config.resample.d_max_abs = spec.step_d;
    return config;
}

} // namespace inkfrag
