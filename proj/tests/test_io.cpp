#include "inkfrag/circle_fit.hpp"
#include "inkfrag/config.hpp"
#include "inkfrag/error.hpp"
#include "inkfrag/fragment.hpp"
#include "inkfrag/stroke_io.hpp"
#include "inkfrag/svg.hpp"
#include "inkfrag/synth.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <stack>

using namespace inkfrag;
using nlohmann::json;

TEST_CASE("stroke JSON round trip with optional timestamps") {
    json doc = json::parse(R"({"strokes": [
        {"id": "a", "points": [[0, 0], [1, 0.5], [2, 1]]},
        {"id": "b", "points": [[0, 0, 10], [3, 4, 20]]}
    ]})");
    auto strokes = strokes_from_json(doc);
    REQUIRE(strokes.size() == 2);
    CHECK(strokes[0].size() == 3);
    CHECK(strokes[1].points[1].t == 20.0);

    json back = strokes_to_json(strokes);
    auto again = strokes_from_json(back);
    CHECK(again[1].points[1].x == 3.0);
    CHECK(again[1].points[1].t == 20.0);
}

TEST_CASE("stroke JSON rejects malformed documents") {
    CHECK_THROWS_AS(strokes_from_json(json::parse("{}")), ParseError);
    CHECK_THROWS_AS(strokes_from_json(json::parse(R"({"strokes": [{"id": "x"}]})")), ParseError);
    CHECK_THROWS_AS(
        strokes_from_json(json::parse(R"({"strokes": [{"id": "x", "points": [[1]]}]})")),
        ParseError);
}

TEST_CASE("fragmentation records round trip and compare equal") {
    FragmentationRecord rec;
    rec.id = "s1";
    rec.segment_points = {14, 33};
    Segment a;
    a.kind = PrimitiveKind::line(3);
    a.raw_start = 0;
    a.raw_end = 14;
    Segment b;
    b.kind = PrimitiveKind::arc_cw();
    b.raw_start = 14;
    b.raw_end = 33;
    Segment c;
    c.kind = PrimitiveKind::arc_ccw();
    c.raw_start = 33;
    c.raw_end = 50;
    rec.segments = {a, b, c};

    json doc = fragmentations_to_json({rec});
    auto parsed = fragmentations_from_json(doc);
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0] == rec);
    // kind strings are the wire contract
    CHECK(doc["fragmentations"][0]["segments"][0]["kind"] == "line");
    CHECK(doc["fragmentations"][0]["segments"][0]["direction"] == 3);
    CHECK(doc["fragmentations"][0]["segments"][1]["kind"] == "arc_cw");
    CHECK(doc["fragmentations"][0]["segments"][1]["direction"].is_null());
}

TEST_CASE("truth sidecar round trip") {
    CorpusSpec spec = default_corpus_recipe();
    spec.families = {{"ell", 2}};
    auto entries = corpus(spec);
    json doc = truths_to_json(entries);
    auto parsed = truths_from_json(doc);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].true_segment_points == entries[0].truth.true_segment_points);
    REQUIRE(parsed[0].primitives.size() == entries[0].truth.primitives.size());
    for (std::size_t i = 0; i < parsed[0].primitives.size(); ++i) {
        CHECK(parsed[0].primitives[i].type == entries[0].truth.primitives[i].type);
    }
}

TEST_CASE("model dump: schema and totals") {
    HmmModel m = build_structured_model(1.0);
    json doc = model_to_json(m);
    CHECK(doc["num_states"] == 82);
    CHECK(doc["kind"] == "structured");
    CHECK(doc["states"].size() == 82);
    CHECK(doc["transitions"].size() == m.graph.edges.size());
    CHECK(doc["initial"].size() == 24);
    // every state carries four pdfs
    for (const json& st : doc["states"]) {
        CHECK(st["pdfs"].size() == 4);
    }
}

namespace {

// minimal XML well-formedness scan: tags balance, attributes quoted
bool xml_well_formed(const std::string& text) {
    std::stack<std::string> open;
    std::size_t i = 0;
    if (text.rfind("<?xml", 0) == 0) i = text.find("?>") + 2;
    while (i < text.size()) {
        if (text[i] != '<') {
            ++i;
            continue;
        }
        const std::size_t end = text.find('>', i);
        if (end == std::string::npos) return false;
        std::string tag = text.substr(i + 1, end - i - 1);
        i = end + 1;
        if (tag.empty()) return false;
        if (tag[0] == '/') {
            const std::string name = tag.substr(1);
            if (open.empty() || open.top() != name) return false;
            open.pop();
        } else if (tag.back() != '/') {
            const std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
            open.push(name);
        }
    }
    return open.empty();
}

} // namespace

TEST_CASE("svg sheet: well-formed, one path per segment, circles at points") {
    CorpusSpec spec = default_corpus_recipe(0.0);
    spec.families = {{"ell", 3}, {"scurve", 2}};
    auto entries = corpus(spec);
    HmmModel model = build_structured_model(1.0);
    FragConfig cfg = corpus_frag_config(spec);

    std::vector<RawStroke> strokes;
    std::vector<Fragmentation> frags;
    std::size_t n_segments = 0, n_points = 0;
    for (const auto& e : entries) {
        Fragmentation f = fragment(e.stroke, model, cfg);
        n_segments += f.segments.size();
        n_points += f.segment_points.size();
        strokes.push_back(e.stroke);
        frags.push_back(std::move(f));
    }
    const std::string svg = render_svg_sheet(strokes, frags);
    CHECK(xml_well_formed(svg));

    std::size_t paths = 0, circles = 0, pos = 0;
    while ((pos = svg.find("<path", pos)) != std::string::npos) {
        ++paths;
        ++pos;
    }
    pos = 0;
    while ((pos = svg.find("<circle", pos)) != std::string::npos) {
        ++circles;
        ++pos;
    }
    CHECK(paths == n_segments);
    CHECK(circles == n_points);
}

TEST_CASE("config: parse, apply, reject unknown keys") {
    const std::string text = R"(
# comment line
model.arc_self = 0.5
frag.min_run = 4
eval.tolerance_factor = 3.0
features.flip_handedness = true
)";
    RunConfig cfg;
    apply_config(cfg, parse_flat_config(text));
    CHECK(cfg.model.arc_self == doctest::Approx(0.5));
    CHECK(cfg.frag.min_run == 4);
    CHECK(cfg.eval.tolerance_factor == doctest::Approx(3.0));
    CHECK(cfg.model.flip_handedness);
    CHECK(cfg.frag.features.flip_curvature_sign); // kept in lockstep

    CHECK_THROWS_AS(apply_config(cfg, {{"model.bogus_knob", "1"}}), ParseError);
    CHECK_THROWS_AS(apply_config(cfg, {{"model.arc_self", "fast"}}), ParseError);
    CHECK_THROWS_AS(parse_flat_config("just words\n"), ParseError);
}

TEST_CASE("config: full key table round trips") {
    RunConfig cfg;
    cfg.model.h_corner = 0.77;
    cfg.frag.max_boundary_run = 9;
    auto kv = config_to_map(cfg);
    RunConfig other;
    apply_config(other, kv);
    CHECK(other.model.h_corner == doctest::Approx(0.77));
    CHECK(other.frag.max_boundary_run == 9);
    CHECK(config_to_map(other) == kv);
}

TEST_CASE("circle fit: recovers analytic circles; line fit recovers direction") {
    auto pts = testutil::circle_points(7.5, 0.13, 40, 0.3, {4.0, -2.0});
    auto fit = fit_circle_kasa(pts);
    REQUIRE(fit.has_value());
    CHECK(fit->radius == doctest::Approx(7.5).epsilon(1e-9));
    CHECK(fit->center.x == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(fit->center.y == doctest::Approx(-2.0).epsilon(1e-8));
    CHECK(fit->rms_error < 1e-9);

    std::vector<Vec2> collinear;
    for (int i = 0; i < 10; ++i) collinear.push_back({i * 0.6, i * 0.8});
    CHECK_FALSE(fit_circle_kasa(collinear).has_value());
    auto lf = fit_line(collinear);
    REQUIRE(lf.has_value());
    CHECK(std::abs(lf->direction.x * 0.8 - lf->direction.y * 0.6) < 1e-12);
    CHECK(lf->rms_error < 1e-12);
}
