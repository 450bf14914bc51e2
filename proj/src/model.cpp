#include "inkfrag/model.hpp"

#include "inkfrag/error.hpp"

#include <cmath>

namespace inkfrag {

namespace {

double gauss_half(double x, double center, double sigma_lo, double sigma_hi) {
    const double dx = x - center;
    const double sigma = dx < 0.0 ? sigma_lo : sigma_hi;
    const double z = dx / sigma;
    return std::exp(-0.5 * z * z);
}

struct DensityVisitor {
    double x;

    double operator()(const GaussPdf& p) const {
        return p.floor + gauss_half(x, p.center, p.sigma_lo, p.sigma_hi);
    }
    double operator()(const BandPdf& p) const {
        double core;
        if (x < p.lo) {
            const double z = (p.lo - x) / p.tail_lo;
            core = std::exp(-0.5 * z * z);
        } else if (x > p.hi) {
            const double z = (x - p.hi) / p.tail_hi;
            core = std::exp(-0.5 * z * z);
        } else {
            core = 1.0;
        }
        if (p.noise_level > 0.0) {
            double plateau = p.noise_level;
            if (x < p.noise_lo) {
                const double z = (p.noise_lo - x) / p.noise_tail;
                plateau *= std::exp(-0.5 * z * z);
            } else if (x > p.noise_hi) {
                const double z = (x - p.noise_hi) / p.noise_tail;
                plateau *= std::exp(-0.5 * z * z);
            }
            core = std::max(core, plateau);
        }
        return p.floor + core;
    }
    double operator()(const AbsBandPdf& p) const {
        const double a = std::abs(x);
        double core;
        if (a < p.lo) {
            const double z = (p.lo - a) / p.tail;
            core = std::exp(-0.5 * z * z);
        } else if (a > p.hi) {
            const double z = (a - p.hi) / p.tail;
            core = std::exp(-0.5 * z * z);
        } else {
            core = 1.0;
        }
        return p.floor + core;
    }
    double operator()(const LineCurvPdf& p) const {
        const double z = x / p.sigma;
        double core = std::exp(-0.5 * z * z);
        if (std::abs(x) >= p.boost_at) {
            core = std::max(core, p.boost);
        } else {
            core = std::max(core, p.noise_level);
        }
        return p.floor + core;
    }
    double operator()(const UniformPdf& p) const { return p.level; }
    double operator()(const DirMixturePdf& p) const {
        return p.floor + 0.5 * gauss_half(x, p.a.center, p.a.sigma_lo, p.a.sigma_hi) +
               0.5 * gauss_half(x, p.b.center, p.b.sigma_lo, p.b.sigma_hi);
    }
};

// Direction pdf over a cos or sin feature value: the density at both sector
// boundary angles equals exp(-2) of the peak (boundary at 2 sigma). Where the
// trig extremum lies inside the sector both boundaries fall on the same side
// and the missing side mirrors the other.
GaussPdf direction_pdf(int sector, bool use_sin, double floor) {
    const double theta_c = sector * (M_PI / 4.0);
    auto g = [&](double a) { return use_sin ? std::sin(a) : std::cos(a); };
    const double c = g(theta_c);
    const double b1 = g(theta_c - M_PI / 8.0);
    const double b2 = g(theta_c + M_PI / 8.0);

    double below = std::min(b1, b2);
    double above = std::max(b1, b2);
    double sigma_lo = below < c ? (c - below) / 2.0 : -1.0;
    double sigma_hi = above > c ? (above - c) / 2.0 : -1.0;
    if (sigma_lo <= 0.0) sigma_lo = sigma_hi;
    if (sigma_hi <= 0.0) sigma_hi = sigma_lo;
    return GaussPdf{c, sigma_lo, sigma_hi, floor};
}

void validate_positive(double w, const char* name) {
    if (!(w > 0.0)) {
        throw InvalidParams(std::string("ModelParams: ") + name + " must be positive");
    }
}

void add_normalized(TransitionGraph& g, int from, const std::vector<std::pair<int, double>>& out) {
    double sum = 0.0;
    for (const auto& [to, w] : out) {
        if (!(w > 0.0)) throw InvalidParams("transition weight must be positive");
        sum += w;
    }
    for (const auto& [to, w] : out) {
        g.edges.push_back({from, to, std::log(w / sum)});
    }
}

} // namespace

double window_sagitta(double radius_in_steps) {
    return radius_in_steps * (1.0 - std::cos(2.0 / radius_in_steps));
}

double pdf_density(const FeaturePdf& pdf, double x) {
    return std::visit(DensityVisitor{x}, pdf);
}

std::vector<StateId> state_catalogue() {
    std::vector<StateId> states;
    states.reserve(kNumStates);
    for (int k = 0; k < kNumSectors; ++k) {
        states.push_back({arc_ccw_index(k), StateKind::ArcCCW, k, 0});
    }
    for (int k = 0; k < kNumSectors; ++k) {
        states.push_back({arc_cw_index(k), StateKind::ArcCW, k, 0});
    }
    for (int k = 0; k < kNumSectors; ++k) {
        states.push_back({line_index(k), StateKind::Line, k, 0});
    }
    states.push_back({kConnector1, StateKind::Connector1, 0, 0});
    states.push_back({kConnector2, StateKind::Connector2, 0, 0});
    for (int i = 0; i < kNumSectors; ++i) {
        for (int j = 0; j < kNumSectors; ++j) {
            if (i == j) continue;
            states.push_back({line_corner_index(i, j), StateKind::LineCorner, i, j});
        }
    }
    return states;
}

std::string state_name(const StateId& s) {
    switch (s.kind) {
        case StateKind::ArcCCW: return "arc_ccw" + std::to_string(s.dir_a);
        case StateKind::ArcCW: return "arc_cw" + std::to_string(s.dir_a);
        case StateKind::Line: return "line" + std::to_string(s.dir_a);
        case StateKind::Connector1: return "connector1";
        case StateKind::Connector2: return "connector2";
        case StateKind::LineCorner:
            return "corner" + std::to_string(s.dir_a) + "_" + std::to_string(s.dir_b);
    }
    return "?";
}

EmissionParams default_emissions(const ModelParams& params) {
    const double floor = params.pdf_floor;

    std::array<GaussPdf, kNumSectors> dir_cos;
    std::array<GaussPdf, kNumSectors> dir_sin;
    for (int k = 0; k < kNumSectors; ++k) {
        dir_cos[k] = direction_pdf(k, false, floor);
        dir_sin[k] = direction_pdf(k, true, floor);
    }

    // Curvature bands from the radius limits: an arc of radius R steps has
    // window sagitta R*(1-cos(2/R)) steps, so the band covers the radii the
    // model is meant to tell apart from lines. The tail toward zero is wider
    // than the outer one: jitter pushes large-radius curvature through zero,
    // while beyond-band magnitudes mean corners.
    const double band_hi = window_sagitta(params.radius_band_lo);
    const double band_lo = window_sagitta(params.radius_band_hi);
    const double outer_tail = params.band_tail_frac * (band_hi - band_lo);
    const double inner_tail = params.band_inner_tail;
    const BandPdf func1{band_lo, band_hi, inner_tail, outer_tail,
                        params.curv_noise_floor, -params.band_wrong_side,
                        band_hi + params.band_wrong_side,
                        params.band_cliff_tail, floor}; // cw: positive h
    const BandPdf func2{-band_hi, -band_lo, outer_tail, inner_tail,
                        params.curv_noise_floor, -band_hi - params.band_wrong_side,
                        params.band_wrong_side, params.band_cliff_tail, floor}; // ccw: mirror
    const LineCurvPdf func3{params.line_curv_halfband / 2.0, params.h_corner,
                            params.corner_boost, params.curv_noise_floor, floor};

    // Direction-change band from the same radius limits: the turn between
    // consecutive unit-step chords on a circle of radius R steps.
    const double f4_lo = 2.0 * std::asin(1.0 / (2.0 * params.radius_band_hi));
    const double f4_hi = 2.0 * std::asin(1.0 / (2.0 * params.radius_band_lo));
    const double f4_tail = params.band_tail_frac * (f4_hi - f4_lo);
    // Direction change saturates under hand jitter, so both f4 shapes sit on
    // the same plateau and only discriminate near their clean ranges.
    const BandPdf arc_f4{f4_lo, f4_hi, f4_tail, f4_tail, params.dirchange_plateau,
                         -1.0, 4.0, 1.0, params.dirchange_floor};
    const LineCurvPdf line_f4{params.line_dirchange_2sigma / 2.0, 4.0, 0.0,
                              params.dirchange_plateau, params.dirchange_floor};

    const double cu = std::pow(params.connector_density_scale, 0.25);
    const std::array<FeaturePdf, 4> connector = {
        FeaturePdf{UniformPdf{0.5 * cu}},
        FeaturePdf{UniformPdf{0.5 * cu}},
        FeaturePdf{UniformPdf{0.25 * cu}},       // f3 box is [-2d, 2d], in units of d
        FeaturePdf{UniformPdf{cu / M_PI}},
    };

    EmissionParams out;
    out.per_state.resize(kNumStates);
    for (int k = 0; k < kNumSectors; ++k) {
        out.per_state[arc_ccw_index(k)] = {FeaturePdf{dir_cos[k]}, FeaturePdf{dir_sin[k]},
                                           FeaturePdf{func2}, FeaturePdf{arc_f4}};
        out.per_state[arc_cw_index(k)] = {FeaturePdf{dir_cos[k]}, FeaturePdf{dir_sin[k]},
                                          FeaturePdf{func1}, FeaturePdf{arc_f4}};
        out.per_state[line_index(k)] = {FeaturePdf{dir_cos[k]}, FeaturePdf{dir_sin[k]},
                                        FeaturePdf{func3}, FeaturePdf{line_f4}};
    }
    out.per_state[kConnector1] = connector;
    out.per_state[kConnector2] = connector;

    const AbsBandPdf corner_f3{params.h_corner, 2.0, params.band_tail_frac * params.h_corner,
                               floor};

    for (int i = 0; i < kNumSectors; ++i) {
        for (int j = 0; j < kNumSectors; ++j) {
            if (i == j) continue;
            const int diff = std::abs(i - j);
            const double turn = std::min(diff, 8 - diff) * (M_PI / 4.0);
            const GaussPdf corner_f4{turn, params.corner_dirchange_sigma,
                                     params.corner_dirchange_sigma, floor};
            out.per_state[line_corner_index(i, j)] = {
                FeaturePdf{DirMixturePdf{dir_cos[i], dir_cos[j], floor}},
                FeaturePdf{DirMixturePdf{dir_sin[i], dir_sin[j], floor}},
                FeaturePdf{corner_f3},
                FeaturePdf{corner_f4},
            };
        }
    }
    return out;
}

HmmModel build_structured_model(double step_d, const ModelParams& params) {
    validate_positive(step_d, "step_d");
    validate_positive(params.arc_self, "arc_self");
    validate_positive(params.arc_adjacent, "arc_adjacent");
    validate_positive(params.arc_exit, "arc_exit");
    validate_positive(params.line_self, "line_self");
    validate_positive(params.line_exit, "line_exit");
    validate_positive(params.line_corner_total, "line_corner_total");
    validate_positive(params.corner_self, "corner_self");
    validate_positive(params.corner_advance, "corner_advance");
    validate_positive(params.conn1_to_conn2, "conn1_to_conn2");
    validate_positive(params.conn1_exit_total, "conn1_exit_total");
    validate_positive(params.pdf_floor, "pdf_floor");

    HmmModel model;
    model.states = state_catalogue();
    model.step_d = step_d;
    model.structured = true;
    model.params = params;
    model.emissions = default_emissions(params);

    TransitionGraph& g = model.graph;
    g.num_states = kNumStates;
    g.initial_logp.assign(kNumStates, kLogZero);
    const double init = std::log(1.0 / kNumBasicStates);
    for (int s = 0; s < kNumBasicStates; ++s) g.initial_logp[s] = init;

    // Arc chains: sector advances with the drawing orientation.
    const int ccw_step = params.flip_handedness ? 7 : 1; // +1 mod 8 by default
    const int cw_step = params.flip_handedness ? 1 : 7;  // -1 mod 8 by default
    for (int k = 0; k < kNumSectors; ++k) {
        add_normalized(g, arc_ccw_index(k),
                       {{arc_ccw_index(k), params.arc_self},
                        {arc_ccw_index((k + ccw_step) % 8), params.arc_adjacent},
                        {kConnector1, params.arc_exit}});
        add_normalized(g, arc_cw_index(k),
                       {{arc_cw_index(k), params.arc_self},
                        {arc_cw_index((k + cw_step) % 8), params.arc_adjacent},
                        {kConnector1, params.arc_exit}});
    }

    // Line fan: self, connector exit, and one corner state per other direction.
    for (int i = 0; i < kNumSectors; ++i) {
        std::vector<std::pair<int, double>> out;
        out.emplace_back(line_index(i), params.line_self);
        out.emplace_back(kConnector1, params.line_exit);
        for (int j = 0; j < kNumSectors; ++j) {
            if (i == j) continue;
            out.emplace_back(line_corner_index(i, j), params.line_corner_total / 7.0);
        }
        add_normalized(g, line_index(i), out);
    }

    // Corner states absorb resampling blur then hand over to the target line.
    for (int i = 0; i < kNumSectors; ++i) {
        for (int j = 0; j < kNumSectors; ++j) {
            if (i == j) continue;
            add_normalized(g, line_corner_index(i, j),
                           {{line_corner_index(i, j), params.corner_self},
                            {line_index(j), params.corner_advance}});
        }
    }

    // Connectors: no self-loops, so a junction run is at most 2 observations.
    {
        std::vector<std::pair<int, double>> out;
        out.emplace_back(kConnector2, params.conn1_to_conn2);
        for (int s = 0; s < kNumBasicStates; ++s) {
            out.emplace_back(s, params.conn1_exit_total / kNumBasicStates);
        }
        add_normalized(g, kConnector1, out);
    }
    {
        std::vector<std::pair<int, double>> out;
        for (int s = 0; s < kNumBasicStates; ++s) out.emplace_back(s, 1.0);
        add_normalized(g, kConnector2, out);
    }

    g.finalize();
    return model;
}

HmmModel build_ergodic_baseline(double step_d, const ModelParams& params) {
    validate_positive(step_d, "step_d");
    if (!(params.ergodic_self > 0.0) || !(params.ergodic_self < 1.0)) {
        throw InvalidParams("ModelParams: ergodic_self must be in (0, 1)");
    }

    HmmModel model;
    model.states = state_catalogue();
    model.states.resize(kNumBasicStates);
    model.step_d = step_d;
    model.structured = false;
    model.params = params;

    EmissionParams full = default_emissions(params);
    model.emissions.per_state.assign(full.per_state.begin(),
                                     full.per_state.begin() + kNumBasicStates);

    TransitionGraph& g = model.graph;
    g.num_states = kNumBasicStates;
    g.initial_logp.assign(kNumBasicStates, std::log(1.0 / kNumBasicStates));
    const double other = (1.0 - params.ergodic_self) / (kNumBasicStates - 1);
    for (int i = 0; i < kNumBasicStates; ++i) {
        std::vector<std::pair<int, double>> out;
        for (int j = 0; j < kNumBasicStates; ++j) {
            out.emplace_back(j, i == j ? params.ergodic_self : other);
        }
        add_normalized(g, i, out);
    }
    g.finalize();
    return model;
}

double emission_log_likelihood(const HmmModel& model, int state_index, const Observation& obs) {
    const std::array<FeaturePdf, 4>& pdfs = model.emissions.per_state[state_index];
    const double h = obs.f3 / model.step_d;
    return std::log(pdf_density(pdfs[0], obs.f1)) + std::log(pdf_density(pdfs[1], obs.f2)) +
           std::log(pdf_density(pdfs[2], h)) + std::log(pdf_density(pdfs[3], obs.f4));
}

} // namespace inkfrag
