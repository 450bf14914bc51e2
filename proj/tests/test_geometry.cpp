#include "inkfrag/error.hpp"
#include "inkfrag/geometry.hpp"
#include "inkfrag/rng.hpp"
#include "inkfrag/synth.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace inkfrag;
using testutil::circle_points;
using testutil::stroke_from;

TEST_CASE("make_raw_stroke drops consecutive duplicates and validates input") {
    RawStroke s = make_raw_stroke("a", {{0, 0, {}}, {0, 0, {}}, {1, 0, {}}, {1, 0, {}}, {2, 0, {}}});
    CHECK(s.points.size() == 3);

    CHECK_THROWS_AS(make_raw_stroke("b", {{0, 0, {}}, {0, 0, {}}}), DegenerateStroke);
    CHECK_THROWS_AS(make_raw_stroke("c", {{0, 0, 5.0}, {1, 0, 4.0}}), ParseError);
    CHECK_THROWS_AS(
        make_raw_stroke("d", {{0, 0, {}}, {std::numeric_limits<double>::quiet_NaN(), 0, {}}}),
        ParseError);
}

TEST_CASE("resample: straight segment at exact multiples") {
    RawStroke s = make_raw_stroke("seg", {{0, 0, {}}, {10, 0, {}}});
    ResampledStroke rs = resample(s, 1.0);
    REQUIRE(rs.points.size() == 11);
    for (std::size_t i = 0; i < rs.points.size(); ++i) {
        CHECK(rs.points[i].x == doctest::Approx(static_cast<double>(i)).epsilon(1e-12));
        CHECK(rs.points[i].y == 0.0);
    }
    for (std::size_t i = 1; i < rs.points.size(); ++i) {
        CHECK(distance(rs.points[i - 1], rs.points[i]) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(rs.origin_index.front() == 0);
    CHECK(rs.origin_index.back() == 1);
}

TEST_CASE("resample: step longer than the stroke is degenerate") {
    RawStroke s = make_raw_stroke("short", {{0, 0, {}}, {3, 4, {}}});
    CHECK_THROWS_AS(resample(s, 6.0), DegenerateStroke);
    CHECK_NOTHROW(resample(s, 5.0));
}

TEST_CASE("resample: unit circle traced by 1000 raw points") {
    RawStroke s = stroke_from(circle_points(1.0, 2.0 * M_PI / 1000.0, 1001), "circle");
    ResampledStroke rs = resample(s, 0.1);
    CHECK(rs.points.size() >= 62);
    CHECK(rs.points.size() <= 65);
    for (const Vec2& p : rs.points) {
        CHECK(std::abs(p.norm() - 1.0) < 1e-3);
    }
    // consecutive spacing equals the step (exact except the final gap)
    for (std::size_t i = 1; i + 1 < rs.points.size(); ++i) {
        CHECK(distance(rs.points[i - 1], rs.points[i]) == doctest::Approx(0.1).epsilon(1e-6));
    }
}

TEST_CASE("resample: endpoint retention rule") {
    // tail of 0.6 > d/2 -> endpoint appended
    RawStroke a = make_raw_stroke("a", {{0, 0, {}}, {2.6, 0, {}}});
    ResampledStroke ra = resample(a, 1.0);
    CHECK(ra.points.size() == 4);
    CHECK(ra.points.back().x == doctest::Approx(2.6));

    // tail of 0.4 <= d/2 -> dropped
    RawStroke b = make_raw_stroke("b", {{0, 0, {}}, {2.4, 0, {}}});
    ResampledStroke rb = resample(b, 1.0);
    CHECK(rb.points.size() == 3);
    CHECK(rb.points.back().x == doctest::Approx(2.0));
}

TEST_CASE("resample: idempotent on an already equidistant polyline") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<Vec2> pts{{0, 0}};
        double h = rng.uniform(0, 2 * M_PI);
        for (int i = 0; i < 25; ++i) {
            h += rng.uniform(-0.3, 0.3);
            pts.push_back({pts.back().x + std::cos(h), pts.back().y + std::sin(h)});
        }
        RawStroke s = stroke_from(pts, "eq");
        ResampledStroke rs = resample(s, 1.0);
        REQUIRE(rs.points.size() == pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            CHECK(distance(rs.points[i], pts[i]) < 1e-6);
        }
    }
}

TEST_CASE("resample: points lie on the raw polyline; origin_index non-decreasing") {
    Rng rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<Vec2> pts{{0, 0}};
        double h = rng.uniform(0, 2 * M_PI);
        for (int i = 0; i < 200; ++i) {
            h += rng.uniform(-0.2, 0.2);
            pts.push_back({pts.back().x + 0.3 * std::cos(h), pts.back().y + 0.3 * std::sin(h)});
        }
        RawStroke s = stroke_from(pts, "w");
        const double len = polyline_length(s);
        ResampledStroke rs = resample(s, 1.0);

        auto dist_to_polyline = [&](Vec2 q) {
            double best = 1e300;
            for (std::size_t i = 1; i < pts.size(); ++i) {
                const Vec2 a = pts[i - 1];
                const Vec2 d = pts[i] - a;
                const double t = std::clamp((q - a).dot(d) / d.dot(d), 0.0, 1.0);
                best = std::min(best, distance(q, a + d * t));
            }
            return best;
        };
        for (const Vec2& p : rs.points) {
            CHECK(dist_to_polyline(p) <= 1e-9 * len);
        }
        CHECK(rs.points.front().x == pts.front().x);
        CHECK(rs.points.front().y == pts.front().y);
        for (std::size_t i = 1; i < rs.origin_index.size(); ++i) {
            CHECK(rs.origin_index[i] >= rs.origin_index[i - 1]);
        }
        // arc-length bookkeeping: emitted gaps cannot overshoot the raw length
        CHECK(static_cast<double>(rs.points.size() - 1) * rs.step_d <= len + rs.step_d);
    }
}

TEST_CASE("choose_resample_step: formula and clamps") {
    RawStroke s = make_raw_stroke("l", {{0, 0, {}}, {100, 0, {}}});
    ResampleConfig cfg;
    cfg.min_primitive_fraction = 0.10;
    cfg.min_obs_per_primitive = 5;
    cfg.d_min_abs = 0.5;
    cfg.d_max_abs = 1e30;
    CHECK(choose_resample_step(s, cfg) == doctest::Approx(2.0));

    cfg.min_primitive_fraction = 0.01; // 100*0.01/5 = 0.2 -> clamped up
    CHECK(choose_resample_step(s, cfg) == doctest::Approx(0.5));

    cfg.min_primitive_fraction = 0.5; // 10.0 -> clamp down
    cfg.d_max_abs = 4.0;
    CHECK(choose_resample_step(s, cfg) == doctest::Approx(4.0));
}

TEST_CASE("choose_resample_step: monotone in stroke length") {
    ResampleConfig cfg;
    cfg.d_min_abs = 1e-9;
    Rng rng(13);
    for (int i = 0; i < 50; ++i) {
        const double l1 = rng.uniform(1.0, 500.0);
        const double l2 = l1 + rng.uniform(0.0, 500.0);
        RawStroke a = make_raw_stroke("a", {{0, 0, {}}, {l1, 0, {}}});
        RawStroke b = make_raw_stroke("b", {{0, 0, {}}, {l2, 0, {}}});
        CHECK(choose_resample_step(a, cfg) <= choose_resample_step(b, cfg) + 1e-12);
    }
}

TEST_CASE("choose_resample_step: primitives at the size floor get enough observations") {
    // every primitive of length >= fraction*L gets >= min_obs resampled points
    Rng rng(14);
    ResampleConfig cfg; // defaults: fraction 0.08, min_obs 5
    cfg.d_min_abs = 1e-9;
    for (int trial = 0; trial < 20; ++trial) {
        ShapeSpec spec;
        spec.name = "poly";
        double h = rng.uniform(0, 2 * M_PI);
        const int legs = rng.uniform_int(2, 4);
        for (int i = 0; i < legs; ++i) {
            spec.prims.push_back(LineSpec{rng.uniform(5.0, 40.0), h});
            h += rng.uniform(0.8, 2.0);
        }
        auto [stroke, truth] = generate(spec, {}, 0.05);
        const double len = polyline_length(stroke);
        const double d = choose_resample_step(stroke, cfg);
        ResampledStroke rs = resample(stroke, d);

        std::vector<std::size_t> bounds = truth.true_segment_points;
        bounds.push_back(stroke.points.size() - 1);
        std::size_t start = 0;
        std::size_t prim = 0;
        for (std::size_t end : bounds) {
            const auto* line = std::get_if<LineSpec>(&spec.prims[prim]);
            REQUIRE(line != nullptr);
            if (line->length >= cfg.min_primitive_fraction * len) {
                int count = 0;
                for (std::size_t oi : rs.origin_index) {
                    if (oi >= start && oi <= end) ++count;
                }
                CHECK(count >= cfg.min_obs_per_primitive);
            }
            start = end;
            ++prim;
        }
    }
}

TEST_CASE("raw_curvature: collinear, corner, endpoint") {
    RawStroke line = testutil::line_stroke({0, 0}, {10, 0}, 21);
    for (std::size_t i = 0; i < line.points.size(); ++i) {
        CHECK(raw_curvature(line, i, 3) == doctest::Approx(0.0));
    }

    // right-angle corner with legs of length w: distance to the chord is w/sqrt(2)
    const double w = 2.0;
    RawStroke corner = make_raw_stroke("c", {{-w, 0, {}}, {0, 0, {}}, {0, w, {}}});
    CHECK(raw_curvature(corner, 1, 1) == doctest::Approx(w / std::sqrt(2.0)).epsilon(1e-12));

    CHECK(raw_curvature(corner, 0, 1) == doctest::Approx(0.0)); // chord endpoint is the point
    // coincident chord endpoints (retrace): defined as zero
    RawStroke tiny = make_raw_stroke("t", {{0, 0, {}}, {1, 1, {}}, {0, 0, {}}});
    CHECK(raw_curvature(tiny, 1, 1) == 0.0);
}
