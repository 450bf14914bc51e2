#pragma once

#include "inkfrag/fragment.hpp"
#include "inkfrag/synth.hpp"

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace inkfrag {

// One-to-one segment-point matching for a single stroke.
struct MatchResult {
    std::vector<std::pair<std::size_t, std::size_t>> pairs; // (predicted, truth)
    std::vector<std::size_t> unmatched_predictions;
    std::vector<std::size_t> unmatched_truths;
    double tolerance = 0.0;

    std::size_t num_predictions() const {
        return pairs.size() + unmatched_predictions.size();
    }
    std::size_t num_truths() const { return pairs.size() + unmatched_truths.size(); }
};

// Greedy nearest-first one-to-one matching by Euclidean distance between the
// referenced raw points; pairs beyond the tolerance stay unmatched. Stroke
// endpoints are never counted on either side.
MatchResult match_points(const std::vector<std::size_t>& predicted,
                         const std::vector<std::size_t>& truth, const RawStroke& raw,
                         double tolerance);

// Corpus-level rates, micro-averaged:
//   false_positive = unmatched predictions / all predictions
//   false_negative = unmatched truths / all truths
// Zero when the corresponding denominator is zero.
struct Rates {
    double false_positive = 0.0;
    double false_negative = 0.0;
    std::size_t total_predictions = 0;
    std::size_t total_truths = 0;
    std::size_t total_matched = 0;
};

Rates score(const std::vector<MatchResult>& results);

struct StrokeRecord {
    std::string id;
    std::string family;
    std::size_t n_predicted = 0;
    std::size_t n_true = 0;
    std::size_t n_matched = 0;
    double decode_ms = 0.0;
    bool kinds_match = false; // diagnostic; the rates ignore primitive kinds
};

struct EvalReport {
    Rates rates;
    double mean_decode_ms = 0.0;
    double max_decode_ms = 0.0;
    double kind_accuracy = 0.0; // strokes whose kind sequence equals truth
    std::vector<StrokeRecord> records;
    std::map<std::string, Rates> per_family;
};

struct EvalConfig {
    double tolerance_factor = 2.5; // matching tolerance = factor * step_d
};

// Runs the pipeline over a corpus and scores it against ground truth.
EvalReport evaluate_corpus(const std::vector<CorpusEntry>& entries, const HmmModel& model,
                           const FragConfig& frag_config, const EvalConfig& eval_config = {});

struct ComparisonReport {
    EvalReport structured;
    EvalReport baseline;
};

// Identical corpus through both models and paired reports.
ComparisonReport compare_models(const std::vector<CorpusEntry>& entries,
                                const HmmModel& structured, const HmmModel& baseline,
                                const FragConfig& frag_config,
                                const EvalConfig& eval_config = {});

} // namespace inkfrag
