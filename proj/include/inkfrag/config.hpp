#pragma once

#include "inkfrag/eval.hpp"
#include "inkfrag/fragment.hpp"
#include "inkfrag/model.hpp"

#include <cstdint>
#include <map>
#include <string>

namespace inkfrag {

// All pipeline knobs in one place. Parseable from a flat key=value config
// file; unknown keys are rejected.
struct RunConfig {
    ModelParams model;
    FragConfig frag;
    EvalConfig eval;
    std::uint64_t seed = 1;

    // Keeps the feature-side handedness flag in lockstep with the model's.
    void set_handedness(bool flip) {
        model.flip_handedness = flip;
        frag.features.flip_curvature_sign = flip;
    }
};

// key=value lines, '#' comments, blank lines ignored.
std::map<std::string, std::string> parse_flat_config(const std::string& text);

// Applies parsed keys onto the config; throws ParseError on unknown keys or
// unparseable values.
void apply_config(RunConfig& config, const std::map<std::string, std::string>& kv);

RunConfig load_run_config(const std::string& path);

// The full key table with current values (for --help and round-trips).
std::map<std::string, std::string> config_to_map(const RunConfig& config);

} // namespace inkfrag
