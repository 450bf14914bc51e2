#pragma once

#include "inkfrag/fragment.hpp"
#include "inkfrag/geometry.hpp"
#include "inkfrag/rng.hpp"

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace inkfrag {

// Turtle-style primitive recipe. A line at a heading different from the
// current one starts with a corner; an arc without an explicit heading
// continues tangentially.
struct LineSpec {
    double length = 1.0;
    double heading = 0.0; // absolute radians
};

struct ArcSpec {
    double radius = 1.0;
    double sweep = M_PI / 2.0; // signed; positive advances the tangent angle
    bool has_heading = false;  // when true, start_heading overrides tangency
    double start_heading = 0.0;
};

using PrimSpec = std::variant<LineSpec, ArcSpec>;

struct ShapeSpec {
    std::string name;
    Vec2 start{0.0, 0.0};
    double start_heading = 0.0;
    std::vector<PrimSpec> prims;
};

struct NoiseSpec {
    double jitter_sigma = 0.0;     // isotropic Gaussian per raw point, units of step_d
    double wobble_amp = 0.0;       // hand-tremor sinusoid, units of step_d
    double wobble_wavelength = 20.0; // along-path wavelength, device units
    double step_d_ref = 1.0;       // the resample step the fractions refer to
    std::uint64_t seed = 0;
};

struct GroundTruth {
    std::vector<std::size_t> true_segment_points; // interior raw indices
    std::vector<PrimitiveKind> primitives;        // one per recipe primitive
    std::string generator_spec;                   // reproduction recipe
};

// Traces the shape at the given raw spacing (each primitive junction is
// emitted exactly), applies seeded noise, and returns exact ground truth.
// Throws InvalidSpec on non-positive lengths/radii or an empty recipe.
std::pair<RawStroke, GroundTruth> generate(const ShapeSpec& spec, const NoiseSpec& noise,
                                           double raw_spacing);

struct FamilySpec {
    std::string family; // one of the built-in family names
    int count = 0;
};

struct CorpusSpec {
    std::vector<FamilySpec> families;
    double jitter_sigma = 0.0;
    double wobble_amp = 0.0;
    double raw_spacing = 0.25;
    double step_d = 1.0; // shapes are sized in units of this step
    std::uint64_t master_seed = 1;
};

// The 12-family, 50-per-family acceptance recipe (600 strokes) at the given
// jitter level. Shape parameters stay inside the model's radius band.
CorpusSpec default_corpus_recipe(double jitter_sigma = 0.1, std::uint64_t seed = 20240601);

std::vector<std::string> known_families();

struct CorpusEntry {
    RawStroke stroke;
    GroundTruth truth;
    std::string family;
};

// Deterministic: equal specs produce bit-identical corpora.
std::vector<CorpusEntry> corpus(const CorpusSpec& spec);

// Draws one random shape of the family with the given parameter stream.
ShapeSpec random_shape(const std::string& family, double step_d, Rng& rng);

// Fragmentation config matching a corpus: the resample step is pinned to the
// step the shapes were sized against.
FragConfig corpus_frag_config(const CorpusSpec& spec);

} // namespace inkfrag
