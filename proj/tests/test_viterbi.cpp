#include "inkfrag/error.hpp"
#include "inkfrag/hmm.hpp"
#include "inkfrag/model.hpp"
#include "inkfrag/rng.hpp"

#include "test_helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace inkfrag;

namespace {

// Exhaustive best path by scoring every state assignment with
// path_log_score; ties resolved like the decoder (prefer the lower state
// scanning from the back).
template <typename EmissionFn>
StatePath brute_force(const TransitionGraph& g, std::size_t t_len, EmissionFn&& emit) {
    std::vector<int> assign(t_len, 0);
    StatePath best;
    best.log_score = kLogZero;
    bool done = false;
    auto better_tiebreak = [&](const std::vector<int>& cand) {
        for (std::size_t i = t_len; i-- > 0;) {
            if (cand[i] != best.states[i]) return cand[i] < best.states[i];
        }
        return false;
    };
    while (!done) {
        const double s = path_log_score(g, t_len, emit, assign);
        if (!is_log_zero(s)) {
            if (s > best.log_score ||
                (s == best.log_score && !best.states.empty() && better_tiebreak(assign))) {
                best.log_score = s;
                best.states = assign;
            }
        }
        for (std::size_t i = 0;; ++i) {
            if (i == t_len) {
                done = true;
                break;
            }
            if (++assign[i] < g.num_states) break;
            assign[i] = 0;
        }
    }
    return best;
}

struct RandomHmm {
    TransitionGraph graph;
    std::vector<std::vector<double>> emission_logp; // [t][state]
};

RandomHmm random_hmm(Rng& rng, int max_states, std::size_t max_obs) {
    RandomHmm h;
    const int n = rng.uniform_int(2, max_states);
    const std::size_t t_len = static_cast<std::size_t>(rng.uniform_int(1, (int)max_obs));
    h.graph.num_states = n;
    h.graph.initial_logp.resize(n);
    double sum = 0.0;
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
        w[i] = rng.uniform(0.05, 1.0);
        sum += w[i];
    }
    for (int i = 0; i < n; ++i) h.graph.initial_logp[i] = std::log(w[i] / sum);
    for (int i = 0; i < n; ++i) {
        std::vector<double> out(n, 0.0);
        double osum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (rng.uniform() < 0.75) {
                out[j] = rng.uniform(0.05, 1.0);
                osum += out[j];
            }
        }
        if (osum == 0.0) {
            out[rng.uniform_int(0, n - 1)] = 1.0;
            osum = 1.0;
        }
        for (int j = 0; j < n; ++j) {
            if (out[j] > 0.0) h.graph.edges.push_back({i, j, std::log(out[j] / osum)});
        }
    }
    h.graph.finalize();
    h.emission_logp.resize(t_len);
    for (auto& row : h.emission_logp) {
        row.resize(n);
        for (double& v : row) v = std::log(rng.uniform(0.01, 1.0));
    }
    return h;
}

} // namespace

TEST_CASE("viterbi: textbook 2-state example decodes exactly") {
    TransitionGraph g;
    g.num_states = 2; // A=0, B=1
    g.initial_logp = {std::log(0.6), std::log(0.4)};
    g.edges = {{0, 0, std::log(0.7)},
               {0, 1, std::log(0.3)},
               {1, 0, std::log(0.4)},
               {1, 1, std::log(0.6)}};
    g.finalize();
    // discrete emissions: b_A = {o0: 0.9, o1: 0.1}, b_B = {o0: 0.2, o1: 0.8}
    const double bA[2] = {0.9, 0.1};
    const double bB[2] = {0.2, 0.8};
    const int obs[3] = {0, 1, 1};
    auto emit = [&](int s, std::size_t t) {
        return std::log(s == 0 ? bA[obs[t]] : bB[obs[t]]);
    };
    StatePath p = viterbi(g, 3, emit);
    REQUIRE(p.states == std::vector<int>{0, 1, 1});
    CHECK(std::exp(p.log_score) == doctest::Approx(0.062208).epsilon(1e-12));

    StatePath bf = brute_force(g, 3, emit);
    CHECK(bf.states == p.states);
    CHECK(bf.log_score == doctest::Approx(p.log_score).epsilon(1e-15));
}

TEST_CASE("viterbi: single observation reduces to argmax of initial + emission") {
    TransitionGraph g;
    g.num_states = 3;
    g.initial_logp = {std::log(0.2), std::log(0.5), std::log(0.3)};
    g.edges = {{0, 0, 0.0}, {1, 1, 0.0}, {2, 2, 0.0}};
    g.finalize();
    auto emit = [](int s, std::size_t) { return s == 2 ? 0.0 : -3.0; };
    StatePath p = viterbi(g, 1, emit);
    CHECK(p.states == std::vector<int>{2});
    CHECK(p.log_score == doctest::Approx(std::log(0.3)).epsilon(1e-12));
}

TEST_CASE("viterbi: errors") {
    TransitionGraph g;
    g.num_states = 2;
    g.initial_logp = {std::log(0.5), std::log(0.5)};
    g.edges = {{0, 1, 0.0}, {1, 0, 0.0}};
    g.finalize();
    auto emit = [](int, std::size_t) { return 0.0; };
    CHECK_THROWS_AS(viterbi(g, 0, emit), EmptyObservations);
    std::vector<int> path{0, 1};
    CHECK_THROWS_AS(path_log_score(g, 3, emit, path), LengthMismatch);
}

TEST_CASE("path_log_score: missing transitions hit the sentinel") {
    TransitionGraph g;
    g.num_states = 2;
    g.initial_logp = {std::log(0.5), std::log(0.5)};
    g.edges = {{0, 0, 0.0}, {1, 1, 0.0}}; // no cross edges
    g.finalize();
    auto emit = [](int, std::size_t) { return -1.0; };
    std::vector<int> cross{0, 1};
    CHECK(is_log_zero(path_log_score(g, 2, emit, cross)));
    std::vector<int> stay{0, 0};
    CHECK_FALSE(is_log_zero(path_log_score(g, 2, emit, stay)));
}

TEST_CASE("viterbi: brute-force equivalence over seeded random models") {
    Rng rng(314159);
    for (int trial = 0; trial < 300; ++trial) {
        RandomHmm h = random_hmm(rng, 5, 6);
        auto emit = [&](int s, std::size_t t) { return h.emission_logp[t][s]; };
        const std::size_t t_len = h.emission_logp.size();
        StatePath p = viterbi(h.graph, t_len, emit);
        StatePath bf = brute_force(h.graph, t_len, emit);
        REQUIRE(std::abs(p.log_score - bf.log_score) < 1e-9);
        REQUIRE(p.states == bf.states);
        // score recomputability
        CHECK(path_log_score(h.graph, t_len, emit, p.states) ==
              doctest::Approx(p.log_score).epsilon(1e-15));
    }
}

TEST_CASE("viterbi: determinism and constant emission shift") {
    Rng rng(42);
    RandomHmm h = random_hmm(rng, 6, 8);
    const std::size_t t_len = h.emission_logp.size();
    auto emit = [&](int s, std::size_t t) { return h.emission_logp[t][s]; };
    StatePath p1 = viterbi(h.graph, t_len, emit);
    StatePath p2 = viterbi(h.graph, t_len, emit);
    CHECK(p1.states == p2.states);
    CHECK(p1.log_score == p2.log_score);

    const double c = 1.7;
    auto shifted = [&](int s, std::size_t t) { return h.emission_logp[t][s] + c; };
    StatePath p3 = viterbi(h.graph, t_len, shifted);
    CHECK(p3.states == p1.states);
    CHECK(p3.log_score ==
          doctest::Approx(p1.log_score + c * static_cast<double>(t_len)).epsilon(1e-9));
}

TEST_CASE("viterbi: straight stroke under the structured model stays in one line state") {
    HmmModel model = build_structured_model(1.0);
    std::vector<Observation> obs(11);
    for (auto& o : obs) o = {1.0, 0.0, 0.0, 0.0, false};
    auto emit = [&](int s, std::size_t t) {
        return emission_log_likelihood(model, s, obs[t]);
    };
    StatePath p = viterbi(model.graph, obs.size(), emit);
    for (int s : p.states) CHECK(s == line_index(0));

    // cross-check against brute force on a 4-state slice of the same problem:
    // Line(0), LineCorner(0,1), Line(1), Connector1 with renumbered edges
    const int slice[4] = {line_index(0), line_corner_index(0, 1), line_index(1), kConnector1};
    TransitionGraph g;
    g.num_states = 4;
    g.initial_logp = {std::log(0.5), kLogZero, std::log(0.5), kLogZero};
    auto edge = [&](int a, int b) {
        const double w = model.graph.edge_logp(slice[a], slice[b]);
        if (!is_log_zero(w)) g.edges.push_back({a, b, w});
    };
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) edge(a, b);
    }
    g.finalize();
    auto slice_emit = [&](int s, std::size_t t) {
        return emission_log_likelihood(model, slice[s], obs[t]);
    };
    StatePath ps = viterbi(g, 6, slice_emit);
    StatePath bf = brute_force(g, 6, slice_emit);
    CHECK(ps.states == bf.states);
    CHECK(ps.log_score == doctest::Approx(bf.log_score).epsilon(1e-12));
    for (int s : ps.states) CHECK(s == 0); // Line(0) in slice numbering
}
