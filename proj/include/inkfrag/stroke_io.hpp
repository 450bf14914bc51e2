#pragma once

#include "inkfrag/eval.hpp"
#include "inkfrag/fragment.hpp"
#include "inkfrag/geometry.hpp"
#include "inkfrag/model.hpp"
#include "inkfrag/synth.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace inkfrag {

// Stroke file: { "strokes": [ { "id": str, "points": [[x,y] or [x,y,t], ...] } ] }
std::vector<RawStroke> strokes_from_json(const nlohmann::json& doc);
nlohmann::json strokes_to_json(const std::vector<RawStroke>& strokes);

// Ground-truth sidecar: { "truths": [ { "id", "true_segment_points", "primitives" } ] }
struct TruthEntry {
    std::string id;
    std::vector<std::size_t> true_segment_points;
    std::vector<PrimitiveKind> primitives;
};
std::vector<TruthEntry> truths_from_json(const nlohmann::json& doc);
nlohmann::json truths_to_json(const std::vector<CorpusEntry>& entries);

// Fragmentation results: { "fragmentations": [ { "id", "segment_points",
// "segments": [{kind, direction, raw_start, raw_end}] } ] }
struct FragmentationRecord {
    std::string id;
    std::vector<std::size_t> segment_points;
    std::vector<Segment> segments;

    bool operator==(const FragmentationRecord& o) const;
};
nlohmann::json fragmentations_to_json(const std::vector<FragmentationRecord>& records);
std::vector<FragmentationRecord> fragmentations_from_json(const nlohmann::json& doc);

nlohmann::json report_to_json(const EvalReport& report);
std::string report_to_csv(const EvalReport& report);
std::string report_to_table(const EvalReport& report);

// Full state/transition/pdf tables for inspection and golden tests.
nlohmann::json model_to_json(const HmmModel& model);

// Parses a kind string ("line" / "arc_cw" / "arc_ccw").
PrimitiveKind kind_from_string(const std::string& s, int direction = -1);

nlohmann::json load_json_file(const std::string& path);
void save_json_file(const std::string& path, const nlohmann::json& doc);
void save_text_file(const std::string& path, const std::string& text);

} // namespace inkfrag
