#pragma once

#include "inkfrag/features.hpp"
#include "inkfrag/hmm.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace inkfrag {

// ---------------------------------------------------------------------------
// State catalogue
//
// 82 emitting states, densely indexed:
//   0..7    arc sectors, anticlockwise family (tangent sector ascends)
//   8..15   arc sectors, clockwise family (tangent sector descends)
//   16..23  line directions
//   24, 25  connectors (uniform emission, junction filler)
//   26..81  line-corner states, one per ordered direction pair (i, j), i != j
// ---------------------------------------------------------------------------

enum class StateKind : std::uint8_t { ArcCCW, ArcCW, Line, Connector1, Connector2, LineCorner };

struct StateId {
    int index = 0;
    StateKind kind = StateKind::Line;
    int dir_a = 0; // sector / line direction / corner from-direction
    int dir_b = 0; // corner to-direction; unused otherwise
};

inline constexpr int kNumSectors = 8;
inline constexpr int kNumBasicStates = 24;
inline constexpr int kConnector1 = 24;
inline constexpr int kConnector2 = 25;
inline constexpr int kNumStates = 82;

inline int arc_ccw_index(int sector) { return sector; }
inline int arc_cw_index(int sector) { return kNumSectors + sector; }
inline int line_index(int dir) { return 2 * kNumSectors + dir; }
inline int line_corner_index(int from_dir, int to_dir) {
    return 26 + from_dir * 7 + (to_dir < from_dir ? to_dir : to_dir - 1);
}

std::vector<StateId> state_catalogue();
std::string state_name(const StateId& s);

// ---------------------------------------------------------------------------
// Emission pdfs
//
// Shapes are max-normalized (flat tops and gaussian peaks at 1) plus a small
// floor so every log-density is finite. The decoder only compares states at
// fixed observations, so cross-state calibration -- not unit area -- is what
// the parameter choices control. f3 shapes are parameterized in units of the
// resampling step d.
// ---------------------------------------------------------------------------

// Two-half Gaussian: sigma_lo left of center, sigma_hi right of center.
struct GaussPdf {
    double center = 0.0;
    double sigma_lo = 1.0;
    double sigma_hi = 1.0;
    double floor = 0.0;
};

// Flat top of height 1 on [lo, hi] with Gaussian tails outside. The density
// never drops under noise_level on [noise_lo, noise_hi] (jitter tolerance on
// the zero side of the band; the far wrong side stays a cliff).
struct BandPdf {
    double lo = 0.0;
    double hi = 1.0;
    double tail_lo = 1.0; // sigma below lo
    double tail_hi = 1.0; // sigma above hi
    double noise_level = 0.0;
    double noise_lo = 0.0;
    double noise_hi = 0.0;
    double noise_tail = 1.0; // sigma of the plateau shoulder outside [noise_lo, noise_hi]
    double floor = 0.0;
};

// Flat top where lo <= |x| <= hi (the high-curvature corner band).
struct AbsBandPdf {
    double lo = 0.0;
    double hi = 1.0;
    double tail = 1.0;
    double floor = 0.0;
};

// Line-curvature shape: Gaussian around 0 with two plateaus. Below boost_at
// the density never drops under `noise_level` (jitter keeps line curvature
// wandering off the Gaussian core); beyond boost_at it is raised to `boost`,
// where corner points on line strokes land.
struct LineCurvPdf {
    double sigma = 1.0;
    double boost_at = 0.5;
    double boost = 0.1;
    double noise_level = 0.0;
    double floor = 0.0;
};

struct UniformPdf {
    double level = 1.0;
};

// Equal-weight mixture of two direction shapes (line-corner states).
struct DirMixturePdf {
    GaussPdf a;
    GaussPdf b;
    double floor = 0.0;
};

using FeaturePdf = std::variant<GaussPdf, BandPdf, AbsBandPdf, LineCurvPdf, UniformPdf, DirMixturePdf>;

double pdf_density(const FeaturePdf& pdf, double x);

// Four per-feature pdfs per state: f1, f2, f4 evaluated directly, f3 in
// units of the resampling step.
struct EmissionParams {
    std::vector<std::array<FeaturePdf, 4>> per_state;
};

// ---------------------------------------------------------------------------
// Model parameters (all config-exposed)
// ---------------------------------------------------------------------------

struct ModelParams {
    // Transition weights; each state's outgoing weights are normalized to 1.
    double arc_self = 0.475;
    double arc_adjacent = 0.475;
    double arc_exit = 0.05;          // arc state -> Connector1
    double line_self = 0.80;
    double line_exit = 0.05;         // line state -> Connector1
    double line_corner_total = 0.15; // split over the 7 corner exits
    double corner_self = 0.30;
    double corner_advance = 0.70;    // corner -> target line
    double conn1_to_conn2 = 0.30;
    double conn1_exit_total = 0.70;  // split over the 24 basic states
    double ergodic_self = 0.50;      // baseline self mass; rest split evenly

    // Emission shape knobs.
    double line_curv_halfband = 0.125; // lines stay within +-d/8 (2 sigma)
    double curv_noise_floor = 0.35;    // f3 plateau inside the corner threshold
                                       // for lines and arcs both; absorbs jitter
                                       // excursions without rewarding either side
    double radius_band_lo = 10.0;      // arc radius band, in resample steps
    double radius_band_hi = 50.0;
    double band_tail_frac = 0.25;      // outer tail sigma, fraction of band width
    double band_inner_tail = 0.02;     // curvature-band tail toward zero, units of d
    double band_wrong_side = 0.08;     // plateau reach past zero into the wrong
                                       // sign before it decays, units of d
    double band_cliff_tail = 0.05;     // sigma of the plateau decay, units of d
    double h_corner = 0.5;             // corner-curvature threshold, units of d
    double corner_boost = 0.10;        // line f3 plateau beyond h_corner
    double line_dirchange_2sigma = 0.05; // line f4: 2 sigma in radians
    double dirchange_plateau = 0.0;    // f4 level (lines and arcs alike) under
                                       // jitter-driven direction-change noise
    double dirchange_floor = 1.00;     // f4 floor for lines and arcs: direction
                                       // change saturates under hand jitter, so
                                       // out-of-band f4 stays near-neutral
    double corner_dirchange_sigma = M_PI / 16.0;
    double pdf_floor = 1e-3;
    double connector_density_scale = 0.6; // scales the uniform connector product

    // Flips arc-family adjacency; must match FeatureConfig::flip_curvature_sign.
    bool flip_handedness = false;
};

// ---------------------------------------------------------------------------
// The model
// ---------------------------------------------------------------------------

struct HmmModel {
    std::vector<StateId> states;
    TransitionGraph graph;
    EmissionParams emissions;
    double step_d = 1.0; // device units per resample step for f3 evaluation
    bool structured = true;
    ModelParams params;

    int num_states() const { return graph.num_states; }

    // Same model re-pinned to a different resample step (pdfs are in units
    // of d, so only the f3 normalization changes).
    HmmModel with_step(double new_step_d) const {
        HmmModel copy = *this;
        copy.step_d = new_step_d;
        return copy;
    }
};

// Full 82-state topology (arc chains, line fan with corner states, two
// connectors). Throws InvalidParams when any weight is non-positive.
HmmModel build_structured_model(double step_d, const ModelParams& params = {});

// 24 basic states, every state connected to every state; same emission pdfs
// as the structured model's basic states.
HmmModel build_ergodic_baseline(double step_d, const ModelParams& params = {});

// The hand-set emission tables for all 82 states.
EmissionParams default_emissions(const ModelParams& params = {});

// Sum over the four per-feature log densities (independent features); always
// finite thanks to the pdf floors.
double emission_log_likelihood(const HmmModel& model, int state_index, const Observation& obs);

// Sagitta of the +-2-step chord window on a circle of the given radius
// (radius in resample steps, result in resample steps).
double window_sagitta(double radius_in_steps);

} // namespace inkfrag
