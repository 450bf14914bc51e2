#include "inkfrag/stroke_io.hpp"

#include "inkfrag/error.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace inkfrag {

using nlohmann::json;

std::vector<RawStroke> strokes_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("strokes") || !doc["strokes"].is_array()) {
        throw ParseError("stroke file: expected top-level object with a \"strokes\" array");
    }
    std::vector<RawStroke> out;
    for (const json& s : doc["strokes"]) {
        if (!s.is_object() || !s.contains("id") || !s.contains("points")) {
            throw ParseError("stroke file: each stroke needs \"id\" and \"points\"");
        }
        const std::string id = s["id"].get<std::string>();
        if (!s["points"].is_array()) {
            throw ParseError("stroke '" + id + "': \"points\" must be an array");
        }
        std::vector<RawPoint> pts;
        for (const json& p : s["points"]) {
            if (!p.is_array() || p.size() < 2 || p.size() > 3 || !p[0].is_number() ||
                !p[1].is_number()) {
                throw ParseError("stroke '" + id + "': points are [x, y] or [x, y, t]");
            }
            RawPoint rp;
            rp.x = p[0].get<double>();
            rp.y = p[1].get<double>();
            if (p.size() == 3) {
                if (!p[2].is_number()) {
                    throw ParseError("stroke '" + id + "': timestamp must be a number");
                }
                rp.t = p[2].get<double>();
            }
            pts.push_back(rp);
        }
        out.push_back(make_raw_stroke(id, std::move(pts)));
    }
    return out;
}

json strokes_to_json(const std::vector<RawStroke>& strokes) {
    json arr = json::array();
    for (const RawStroke& s : strokes) {
        json pts = json::array();
        for (const RawPoint& p : s.points) {
            if (p.t) {
                pts.push_back({p.x, p.y, *p.t});
            } else {
                pts.push_back({p.x, p.y});
            }
        }
        arr.push_back({{"id", s.id}, {"points", std::move(pts)}});
    }
    return json{{"strokes", std::move(arr)}};
}

PrimitiveKind kind_from_string(const std::string& s, int direction) {
    if (s == "line") return PrimitiveKind::line(direction);
    if (s == "arc_cw") return PrimitiveKind::arc_cw();
    if (s == "arc_ccw") return PrimitiveKind::arc_ccw();
    throw ParseError("unknown primitive kind '" + s + "'");
}

std::vector<TruthEntry> truths_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("truths") || !doc["truths"].is_array()) {
        throw ParseError("truth file: expected top-level object with a \"truths\" array");
    }
    std::vector<TruthEntry> out;
    for (const json& t : doc["truths"]) {
        TruthEntry e;
        e.id = t.at("id").get<std::string>();
        for (const json& idx : t.at("true_segment_points")) {
            e.true_segment_points.push_back(idx.get<std::size_t>());
        }
        for (const json& k : t.at("primitives")) {
            e.primitives.push_back(kind_from_string(k.get<std::string>()));
        }
        out.push_back(std::move(e));
    }
    return out;
}

json truths_to_json(const std::vector<CorpusEntry>& entries) {
    json arr = json::array();
    for (const CorpusEntry& e : entries) {
        json prims = json::array();
        for (const PrimitiveKind& k : e.truth.primitives) prims.push_back(kind_to_string(k));
        arr.push_back({{"id", e.stroke.id},
                       {"family", e.family},
                       {"true_segment_points", e.truth.true_segment_points},
                       {"primitives", std::move(prims)},
                       {"generator_spec", e.truth.generator_spec}});
    }
    return json{{"truths", std::move(arr)}};
}

bool FragmentationRecord::operator==(const FragmentationRecord& o) const {
    if (id != o.id || segment_points != o.segment_points ||
        segments.size() != o.segments.size()) {
        return false;
    }
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (!(segments[i].kind == o.segments[i].kind) ||
            segments[i].raw_start != o.segments[i].raw_start ||
            segments[i].raw_end != o.segments[i].raw_end) {
            return false;
        }
    }
    return true;
}

json fragmentations_to_json(const std::vector<FragmentationRecord>& records) {
    json arr = json::array();
    for (const FragmentationRecord& r : records) {
        json segs = json::array();
        for (const Segment& s : r.segments) {
            json seg{{"kind", kind_to_string(s.kind)},
                     {"raw_start", s.raw_start},
                     {"raw_end", s.raw_end}};
            if (s.kind.type == PrimitiveKind::Type::Line) {
                seg["direction"] = s.kind.direction;
            } else {
                seg["direction"] = nullptr;
            }
            segs.push_back(std::move(seg));
        }
        arr.push_back({{"id", r.id},
                       {"segment_points", r.segment_points},
                       {"segments", std::move(segs)}});
    }
    return json{{"fragmentations", std::move(arr)}};
}

std::vector<FragmentationRecord> fragmentations_from_json(const json& doc) {
    if (!doc.is_object() || !doc.contains("fragmentations")) {
        throw ParseError("fragmentation file: expected a \"fragmentations\" array");
    }
    std::vector<FragmentationRecord> out;
    for (const json& r : doc["fragmentations"]) {
        FragmentationRecord rec;
        rec.id = r.at("id").get<std::string>();
        for (const json& p : r.at("segment_points")) {
            rec.segment_points.push_back(p.get<std::size_t>());
        }
        for (const json& s : r.at("segments")) {
            Segment seg;
            const int dir = s["direction"].is_null() ? -1 : s["direction"].get<int>();
            seg.kind = kind_from_string(s.at("kind").get<std::string>(), dir);
            seg.raw_start = s.at("raw_start").get<std::size_t>();
            seg.raw_end = s.at("raw_end").get<std::size_t>();
            rec.segments.push_back(seg);
        }
        out.push_back(std::move(rec));
    }
    return out;
}

namespace {

json rates_to_json(const Rates& r) {
    return json{{"false_positive_rate", r.false_positive},
                {"false_negative_rate", r.false_negative},
                {"total_predictions", r.total_predictions},
                {"total_truths", r.total_truths},
                {"total_matched", r.total_matched}};
}

} // namespace

json report_to_json(const EvalReport& report) {
    json per_family = json::object();
    for (const auto& [family, rates] : report.per_family) {
        per_family[family] = rates_to_json(rates);
    }
    json records = json::array();
    for (const StrokeRecord& r : report.records) {
        records.push_back({{"id", r.id},
                           {"family", r.family},
                           {"n_predicted", r.n_predicted},
                           {"n_true", r.n_true},
                           {"n_matched", r.n_matched},
                           {"decode_ms", r.decode_ms},
                           {"kinds_match", r.kinds_match}});
    }
    return json{{"rates", rates_to_json(report.rates)},
                {"timing", {{"mean_decode_ms", report.mean_decode_ms},
                            {"max_decode_ms", report.max_decode_ms}}},
                {"kind_accuracy", report.kind_accuracy},
                {"per_family", std::move(per_family)},
                {"strokes", std::move(records)}};
}

std::string report_to_csv(const EvalReport& report) {
    std::ostringstream os;
    os << "id,family,n_predicted,n_true,n_matched,decode_ms,kinds_match\n";
    for (const StrokeRecord& r : report.records) {
        os << r.id << ',' << r.family << ',' << r.n_predicted << ',' << r.n_true << ','
           << r.n_matched << ',' << r.decode_ms << ',' << (r.kinds_match ? 1 : 0) << '\n';
    }
    return os.str();
}

std::string report_to_table(const EvalReport& report) {
    std::ostringstream os;
    char line[160];
    os << "family            FP%     FN%   pred  true  match\n";
    for (const auto& [family, r] : report.per_family) {
        std::snprintf(line, sizeof line, "%-14s %6.2f  %6.2f  %5zu %5zu  %5zu\n",
                      family.c_str(), 100.0 * r.false_positive, 100.0 * r.false_negative,
                      r.total_predictions, r.total_truths, r.total_matched);
        os << line;
    }
    const Rates& r = report.rates;
    std::snprintf(line, sizeof line, "%-14s %6.2f  %6.2f  %5zu %5zu  %5zu\n", "TOTAL",
                  100.0 * r.false_positive, 100.0 * r.false_negative, r.total_predictions,
                  r.total_truths, r.total_matched);
    os << line;
    std::snprintf(line, sizeof line, "decode ms/stroke: mean %.3f  max %.3f\n",
                  report.mean_decode_ms, report.max_decode_ms);
    os << line;
    std::snprintf(line, sizeof line, "kind accuracy: %.1f%%\n", 100.0 * report.kind_accuracy);
    os << line;
    return os.str();
}

namespace {

struct PdfJsonVisitor {
    json operator()(const GaussPdf& p) const {
        return json{{"type", "gauss"}, {"center", p.center}, {"sigma_lo", p.sigma_lo},
                    {"sigma_hi", p.sigma_hi}, {"floor", p.floor}};
    }
    json operator()(const BandPdf& p) const {
        return json{{"type", "band"}, {"lo", p.lo}, {"hi", p.hi}, {"tail_lo", p.tail_lo},
                    {"tail_hi", p.tail_hi}, {"noise_level", p.noise_level},
                    {"noise_lo", p.noise_lo}, {"noise_hi", p.noise_hi}, {"floor", p.floor}};
    }
    json operator()(const AbsBandPdf& p) const {
        return json{{"type", "abs_band"}, {"lo", p.lo}, {"hi", p.hi}, {"tail", p.tail},
                    {"floor", p.floor}};
    }
    json operator()(const LineCurvPdf& p) const {
        return json{{"type", "line_curv"}, {"sigma", p.sigma}, {"boost_at", p.boost_at},
                    {"boost", p.boost}, {"noise_level", p.noise_level}, {"floor", p.floor}};
    }
    json operator()(const UniformPdf& p) const {
        return json{{"type", "uniform"}, {"level", p.level}};
    }
    json operator()(const DirMixturePdf& p) const {
        return json{{"type", "dir_mixture"},
                    {"a", json{{"center", p.a.center}, {"sigma_lo", p.a.sigma_lo},
                               {"sigma_hi", p.a.sigma_hi}}},
                    {"b", json{{"center", p.b.center}, {"sigma_lo", p.b.sigma_lo},
                               {"sigma_hi", p.b.sigma_hi}}},
                    {"floor", p.floor}};
    }
};

} // namespace

json model_to_json(const HmmModel& model) {
    json states = json::array();
    for (const StateId& s : model.states) {
        json st{{"index", s.index}, {"name", state_name(s)}};
        if (s.kind == StateKind::LineCorner) {
            st["from_dir"] = s.dir_a;
            st["to_dir"] = s.dir_b;
        } else if (s.kind != StateKind::Connector1 && s.kind != StateKind::Connector2) {
            st["direction"] = s.dir_a;
        }
        json pdfs = json::array();
        for (const FeaturePdf& pdf : model.emissions.per_state[s.index]) {
            pdfs.push_back(std::visit(PdfJsonVisitor{}, pdf));
        }
        st["pdfs"] = std::move(pdfs);
        states.push_back(std::move(st));
    }

    json initial = json::array();
    for (int s = 0; s < model.graph.num_states; ++s) {
        const double lp = model.graph.initial_logp[s];
        if (!is_log_zero(lp)) {
            initial.push_back({{"state", s}, {"p", std::exp(lp)}});
        }
    }
    json edges = json::array();
    for (const TransitionGraph::Edge& e : model.graph.edges) {
        edges.push_back({{"from", e.from}, {"to", e.to}, {"p", std::exp(e.logp)}});
    }
    return json{{"kind", model.structured ? "structured" : "ergodic"},
                {"num_states", model.graph.num_states},
                {"step_d", model.step_d},
                {"states", std::move(states)},
                {"initial", std::move(initial)},
                {"transitions", std::move(edges)}};
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
    return doc;
}

void save_json_file(const std::string& path, const json& doc) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << doc.dump(1) << '\n';
}

void save_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

} // namespace inkfrag
