#include "inkfrag/eval.hpp"

#include <algorithm>
#include <cmath>

namespace inkfrag {

MatchResult match_points(const std::vector<std::size_t>& predicted,
                         const std::vector<std::size_t>& truth, const RawStroke& raw,
                         double tolerance) {
    const std::size_t last = raw.points.empty() ? 0 : raw.points.size() - 1;
    auto interior = [&](std::size_t idx) { return idx > 0 && idx < last; };

    std::vector<std::size_t> preds;
    std::vector<std::size_t> truths;
    for (std::size_t p : predicted) {
        if (interior(p)) preds.push_back(p);
    }
    for (std::size_t t : truth) {
        if (interior(t)) truths.push_back(t);
    }

    struct Cand {
        double dist;
        std::size_t pi;
        std::size_t ti;
    };
    std::vector<Cand> cands;
    for (std::size_t pi = 0; pi < preds.size(); ++pi) {
        for (std::size_t ti = 0; ti < truths.size(); ++ti) {
            const double dist =
                distance(raw.points[preds[pi]].pos(), raw.points[truths[ti]].pos());
            if (dist <= tolerance) cands.push_back({dist, pi, ti});
        }
    }
    std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
        if (a.dist != b.dist) return a.dist < b.dist;
        if (a.pi != b.pi) return a.pi < b.pi;
        return a.ti < b.ti;
    });

    MatchResult out;
    out.tolerance = tolerance;
    std::vector<bool> p_used(preds.size(), false);
    std::vector<bool> t_used(truths.size(), false);
    for (const Cand& c : cands) {
        if (p_used[c.pi] || t_used[c.ti]) continue;
        p_used[c.pi] = true;
        t_used[c.ti] = true;
        out.pairs.emplace_back(preds[c.pi], truths[c.ti]);
    }
    for (std::size_t pi = 0; pi < preds.size(); ++pi) {
        if (!p_used[pi]) out.unmatched_predictions.push_back(preds[pi]);
    }
    for (std::size_t ti = 0; ti < truths.size(); ++ti) {
        if (!t_used[ti]) out.unmatched_truths.push_back(truths[ti]);
    }
    return out;
}

Rates score(const std::vector<MatchResult>& results) {
    Rates r;
    std::size_t false_pred = 0;
    std::size_t missed = 0;
    for (const MatchResult& m : results) {
        r.total_predictions += m.num_predictions();
        r.total_truths += m.num_truths();
        r.total_matched += m.pairs.size();
        false_pred += m.unmatched_predictions.size();
        missed += m.unmatched_truths.size();
    }
    r.false_positive = r.total_predictions > 0
                           ? static_cast<double>(false_pred) /
                                 static_cast<double>(r.total_predictions)
                           : 0.0;
    r.false_negative =
        r.total_truths > 0 ? static_cast<double>(missed) / static_cast<double>(r.total_truths)
                           : 0.0;
    return r;
}

namespace {

bool kinds_equal(const std::vector<Segment>& segments,
                 const std::vector<PrimitiveKind>& truth) {
    if (segments.size() != truth.size()) return false;
    for (std::size_t i = 0; i < segments.size(); ++i) {
        if (segments[i].kind.type != truth[i].type) return false;
    }
    return true;
}

} // namespace

EvalReport evaluate_corpus(const std::vector<CorpusEntry>& entries, const HmmModel& model,
                           const FragConfig& frag_config, const EvalConfig& eval_config) {
    EvalReport report;
    std::vector<MatchResult> all;
    std::map<std::string, std::vector<MatchResult>> by_family;
    double ms_sum = 0.0;
    std::size_t kind_hits = 0;

    for (const CorpusEntry& entry : entries) {
        const Fragmentation frag = fragment(entry.stroke, model, frag_config);
        const double tolerance = eval_config.tolerance_factor * frag.step_d;
        MatchResult m = match_points(frag.segment_points, entry.truth.true_segment_points,
                                     entry.stroke, tolerance);

        StrokeRecord rec;
        rec.id = entry.stroke.id;
        rec.family = entry.family;
        rec.n_predicted = m.num_predictions();
        rec.n_true = m.num_truths();
        rec.n_matched = m.pairs.size();
        rec.decode_ms = frag.decode_ms;
        rec.kinds_match = kinds_equal(frag.segments, entry.truth.primitives);
        if (rec.kinds_match) ++kind_hits;

        ms_sum += frag.decode_ms;
        report.max_decode_ms = std::max(report.max_decode_ms, frag.decode_ms);
        report.records.push_back(std::move(rec));
        by_family[entry.family].push_back(m);
        all.push_back(std::move(m));
    }

    report.rates = score(all);
    for (auto& [family, results] : by_family) {
        report.per_family[family] = score(results);
    }
    if (!entries.empty()) {
        report.mean_decode_ms = ms_sum / static_cast<double>(entries.size());
        report.kind_accuracy =
            static_cast<double>(kind_hits) / static_cast<double>(entries.size());
    }
    return report;
}

ComparisonReport compare_models(const std::vector<CorpusEntry>& entries,
                                const HmmModel& structured, const HmmModel& baseline,
                                const FragConfig& frag_config, const EvalConfig& eval_config) {
    ComparisonReport cmp;
    cmp.structured = evaluate_corpus(entries, structured, frag_config, eval_config);
    cmp.baseline = evaluate_corpus(entries, baseline, frag_config, eval_config);
    return cmp;
}

} // namespace inkfrag
