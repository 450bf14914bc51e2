#pragma once

#include "inkfrag/error.hpp"

#include <algorithm>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace inkfrag {

// Finite sentinel for log(0); avoids NaN from -inf arithmetic while staying
// far below any reachable score.
inline constexpr double kLogZero = -1e30;

inline bool is_log_zero(double x) { return x <= kLogZero / 2.0; }

// Sparse-transition HMM skeleton: initial distribution plus an edge list.
// Emissions are supplied by the caller per (state, t), which keeps the
// decoder independent of the observation domain.
struct TransitionGraph {
    struct Edge {
        int from = 0;
        int to = 0;
        double logp = 0.0;
    };

    int num_states = 0;
    std::vector<double> initial_logp;
    std::vector<Edge> edges;

    // Sorts edges by (to, from) and rejects duplicates. Must be called before
    // decoding; model builders do this for you.
    void finalize() {
        std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
            return a.to != b.to ? a.to < b.to : a.from < b.from;
        });
        for (std::size_t i = 1; i < edges.size(); ++i) {
            if (edges[i].from == edges[i - 1].from && edges[i].to == edges[i - 1].to) {
                throw InvalidParams("TransitionGraph: duplicate edge");
            }
        }
    }

    // Log-probability of edge from->to, or kLogZero when absent.
    double edge_logp(int from, int to) const {
        const Edge key{from, to, 0.0};
        auto it = std::lower_bound(edges.begin(), edges.end(), key,
                                   [](const Edge& a, const Edge& b) {
                                       return a.to != b.to ? a.to < b.to : a.from < b.from;
                                   });
        if (it != edges.end() && it->from == from && it->to == to) return it->logp;
        return kLogZero;
    }
};

struct StatePath {
    std::vector<int> states;
    double log_score = kLogZero;
};

// Per-step decode diagnostics: the winning state and its score margin over
// the runner-up (for the CLI debug dump).
struct DecodeStep {
    int state = -1;
    double margin = 0.0;
};

namespace detail {

inline void record_step(std::vector<DecodeStep>* trace, const std::vector<double>& delta) {
    if (!trace) return;
    DecodeStep step;
    double second = kLogZero;
    for (int j = 0; j < static_cast<int>(delta.size()); ++j) {
        if (step.state < 0 || delta[j] > delta[step.state]) {
            if (step.state >= 0) second = delta[step.state];
            step.state = j;
        } else if (delta[j] > second) {
            second = delta[j];
        }
    }
    step.margin = delta[step.state] - second;
    trace->push_back(step);
}

template <typename EmissionFn>
StatePath viterbi_impl(const TransitionGraph& g, std::size_t num_obs, EmissionFn&& emit,
                       std::vector<DecodeStep>* trace) {
    if (num_obs == 0) throw EmptyObservations("viterbi: empty observation sequence");
    const int n = g.num_states;
    if (n <= 0 || static_cast<int>(g.initial_logp.size()) != n) {
        throw InvalidParams("viterbi: malformed transition graph");
    }

    std::vector<double> delta(n), next(n);
    std::vector<int> backptr(static_cast<std::size_t>(n) * num_obs, -1);

    for (int j = 0; j < n; ++j) {
        delta[j] = is_log_zero(g.initial_logp[j]) ? kLogZero
                                                  : g.initial_logp[j] + emit(j, std::size_t{0});
    }
    record_step(trace, delta);

    for (std::size_t t = 1; t < num_obs; ++t) {
        std::fill(next.begin(), next.end(), kLogZero);
        int* bp = backptr.data() + static_cast<std::size_t>(n) * t;
        // Edges are sorted by (to, from); with a strict '>' the lowest
        // predecessor index wins ties deterministically.
        for (const TransitionGraph::Edge& e : g.edges) {
            if (is_log_zero(delta[e.from])) continue;
            const double cand = delta[e.from] + e.logp;
            if (cand > next[e.to]) {
                next[e.to] = cand;
                bp[e.to] = e.from;
            }
        }
        for (int j = 0; j < n; ++j) {
            if (!is_log_zero(next[j])) next[j] += emit(j, t);
        }
        delta.swap(next);
        record_step(trace, delta);
    }

    int best = 0;
    for (int j = 1; j < n; ++j) {
        if (delta[j] > delta[best]) best = j;
    }

    StatePath path;
    path.log_score = delta[best];
    path.states.resize(num_obs);
    path.states[num_obs - 1] = best;
    for (std::size_t t = num_obs - 1; t > 0; --t) {
        const int prev = backptr[static_cast<std::size_t>(g.num_states) * t +
                                 static_cast<std::size_t>(path.states[t])];
        path.states[t - 1] = prev >= 0 ? prev : path.states[t];
    }
    return path;
}

} // namespace detail

// Exact max-a-posteriori decode in log space. Cost O(E*T) over the sparse
// edge list. Ties prefer the lower predecessor state index.
template <typename EmissionFn>
StatePath viterbi(const TransitionGraph& g, std::size_t num_obs, EmissionFn&& emit) {
    return detail::viterbi_impl(g, num_obs, emit, nullptr);
}

template <typename EmissionFn>
StatePath viterbi_traced(const TransitionGraph& g, std::size_t num_obs, EmissionFn&& emit,
                         std::vector<DecodeStep>& trace) {
    trace.clear();
    return detail::viterbi_impl(g, num_obs, emit, &trace);
}

// Exact log joint score of a given path; kLogZero when the path uses an
// absent transition or an impossible initial state. Accumulates in the same
// order as the decoder so the winning path recomputes bit-identically.
template <typename EmissionFn>
double path_log_score(const TransitionGraph& g, std::size_t num_obs, EmissionFn&& emit,
                      std::span<const int> path) {
    if (path.size() != num_obs) {
        throw LengthMismatch("path_log_score: path length != observation count");
    }
    if (num_obs == 0) throw EmptyObservations("path_log_score: empty observation sequence");
    if (is_log_zero(g.initial_logp[static_cast<std::size_t>(path[0])])) return kLogZero;
    double s = g.initial_logp[static_cast<std::size_t>(path[0])] + emit(path[0], std::size_t{0});
    for (std::size_t t = 1; t < num_obs; ++t) {
        const double a = g.edge_logp(path[t - 1], path[t]);
        if (is_log_zero(a)) return kLogZero;
        s = (s + a) + emit(path[t], t);
    }
    return s;
}

} // namespace inkfrag
