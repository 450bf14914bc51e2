#include "inkfrag/config.hpp"
#include "inkfrag/error.hpp"
#include "inkfrag/eval.hpp"
#include "inkfrag/fragment.hpp"
#include "inkfrag/stroke_io.hpp"
#include "inkfrag/svg.hpp"
#include "inkfrag/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <map>
#include <optional>
#include <sstream>

using nlohmann::json;

namespace {

using namespace inkfrag;

constexpr int kExitParse = 1;
constexpr int kExitDegenerate = 2;

struct CommonOpts {
    std::string config_path;
    std::string model_choice = "structured";
    std::vector<std::string> overrides; // key=value
    std::optional<std::uint64_t> seed;
};

RunConfig resolve_config(const CommonOpts& opts) {
    RunConfig config;
    if (!opts.config_path.empty()) config = load_run_config(opts.config_path);
    std::map<std::string, std::string> kv;
    for (const std::string& kvs : opts.overrides) {
        const auto eq = kvs.find('=');
        if (eq == std::string::npos) throw ParseError("--set expects key=value, got " + kvs);
        kv[kvs.substr(0, eq)] = kvs.substr(eq + 1);
    }
    apply_config(config, kv);
    if (opts.seed) config.seed = *opts.seed;
    return config;
}

HmmModel build_model(const std::string& choice, const RunConfig& config) {
    if (choice == "structured") return build_structured_model(1.0, config.model);
    if (choice == "ergodic") return build_ergodic_baseline(1.0, config.model);
    throw ParseError("--model must be 'structured' or 'ergodic'");
}

std::string observations_csv(const RawStroke& stroke, const FragConfig& config) {
    const double d = choose_resample_step(stroke, config.resample);
    const ObservationSeq obs = extract_observations(resample(stroke, d), config.features);
    std::ostringstream os;
    os << "i,f1,f2,f3,f4\n";
    for (std::size_t i = 0; i < obs.size(); ++i) {
        os << i << ',' << obs[i].f1 << ',' << obs[i].f2 << ',' << obs[i].f3 << ','
           << obs[i].f4 << '\n';
    }
    return os.str();
}

int cmd_fragment(const CommonOpts& common, const std::string& input_path,
                 const std::string& output_path, const std::string& svg_path,
                 const std::string& debug_obs_path, const std::string& debug_path_path) {
    const RunConfig config = resolve_config(common);
    const HmmModel model = build_model(common.model_choice, config);

    std::vector<RawStroke> strokes;
    try {
        strokes = strokes_from_json(load_json_file(input_path));
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const DegenerateStroke& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    }

    std::vector<FragmentationRecord> records;
    std::vector<Fragmentation> frags;
    std::ostringstream debug_obs;
    std::ostringstream debug_steps;
    debug_steps << "stroke,t,state,margin\n";
    for (const RawStroke& stroke : strokes) {
        try {
            Fragmentation frag = fragment(stroke, model, config.frag);
            if (!debug_path_path.empty()) {
                const double d = choose_resample_step(stroke, config.frag.resample);
                const ObservationSeq obs =
                    extract_observations(resample(stroke, d), config.frag.features);
                const HmmModel pinned = model.with_step(d);
                std::vector<DecodeStep> trace;
                viterbi_traced(pinned.graph, obs.size(), [&](int s, std::size_t t) {
                    return emission_log_likelihood(pinned, s, obs[t]);
                }, trace);
                for (std::size_t t = 0; t < trace.size(); ++t) {
                    debug_steps << stroke.id << ',' << t << ',' << trace[t].state << ','
                                << trace[t].margin << '\n';
                }
            }
            if (!debug_obs_path.empty()) {
                debug_obs << "# " << stroke.id << '\n'
                          << observations_csv(stroke, config.frag);
            }
            records.push_back({stroke.id, frag.segment_points, frag.segments});
            frags.push_back(std::move(frag));
        } catch (const DegenerateStroke& e) {
            std::cerr << "error: degenerate stroke '" << stroke.id << "': " << e.what() << '\n';
            return kExitDegenerate;
        } catch (const TooShort& e) {
            std::cerr << "error: degenerate stroke '" << stroke.id << "': " << e.what() << '\n';
            return kExitDegenerate;
        }
    }

    save_json_file(output_path, fragmentations_to_json(records));
    if (!svg_path.empty()) save_text_file(svg_path, render_svg_sheet(strokes, frags));
    if (!debug_obs_path.empty()) save_text_file(debug_obs_path, debug_obs.str());
    if (!debug_path_path.empty()) save_text_file(debug_path_path, debug_steps.str());
    std::cout << "fragmented " << strokes.size() << " stroke(s) -> " << output_path << '\n';
    return 0;
}

CorpusSpec recipe_from_json(const json& doc) {
    CorpusSpec spec = default_corpus_recipe();
    spec.families.clear();
    if (doc.contains("seed")) spec.master_seed = doc["seed"].get<std::uint64_t>();
    if (doc.contains("jitter_sigma")) spec.jitter_sigma = doc["jitter_sigma"].get<double>();
    if (doc.contains("wobble_amp")) spec.wobble_amp = doc["wobble_amp"].get<double>();
    if (doc.contains("raw_spacing")) spec.raw_spacing = doc["raw_spacing"].get<double>();
    if (doc.contains("step_d")) spec.step_d = doc["step_d"].get<double>();
    if (!doc.contains("families")) {
        spec.families = default_corpus_recipe(spec.jitter_sigma, spec.master_seed).families;
        return spec;
    }
    const auto known = known_families();
    for (const json& f : doc["families"]) {
        FamilySpec fam;
        fam.family = f.at("family").get<std::string>();
        fam.count = f.at("count").get<int>();
        if (std::find(known.begin(), known.end(), fam.family) == known.end()) {
            throw InvalidSpec("unknown shape family '" + fam.family + "'");
        }
        spec.families.push_back(fam);
    }
    return spec;
}

int cmd_gen(const CommonOpts& common, const std::string& recipe_path,
            const std::string& corpus_path, const std::string& truth_path) {
    CorpusSpec spec;
    try {
        if (recipe_path.empty()) {
            spec = default_corpus_recipe();
        } else {
            spec = recipe_from_json(load_json_file(recipe_path));
        }
        if (common.seed) spec.master_seed = *common.seed;
        const std::vector<CorpusEntry> entries = corpus(spec);
        std::vector<RawStroke> strokes;
        strokes.reserve(entries.size());
        for (const CorpusEntry& e : entries) strokes.push_back(e.stroke);
        save_json_file(corpus_path, strokes_to_json(strokes));
        save_json_file(truth_path, truths_to_json(entries));
        std::cout << "generated " << entries.size() << " stroke(s) -> " << corpus_path << '\n';
        return 0;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
}

int cmd_eval(const CommonOpts& common, const std::string& corpus_path,
             const std::string& truth_path, const std::string& report_path,
             const std::string& csv_path, bool compare, double pinned_step) {
    const RunConfig config = resolve_config(common);

    std::vector<RawStroke> strokes;
    std::vector<TruthEntry> truths;
    try {
        strokes = strokes_from_json(load_json_file(corpus_path));
        truths = truths_from_json(load_json_file(truth_path));
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
    if (strokes.size() != truths.size()) {
        std::cerr << "error: corpus has " << strokes.size() << " strokes but truth file has "
                  << truths.size() << '\n';
        return kExitParse;
    }

    std::vector<CorpusEntry> entries;
    for (std::size_t i = 0; i < strokes.size(); ++i) {
        if (strokes[i].id != truths[i].id) {
            std::cerr << "error: id mismatch at entry " << i << ": stroke '" << strokes[i].id
                      << "' vs truth '" << truths[i].id << "'\n";
            return kExitParse;
        }
        CorpusEntry e;
        e.stroke = strokes[i];
        e.truth.true_segment_points = truths[i].true_segment_points;
        e.truth.primitives = truths[i].primitives;
        const auto dash = strokes[i].id.find('-');
        e.family = dash == std::string::npos ? "all" : strokes[i].id.substr(0, dash);
        entries.push_back(std::move(e));
    }

    FragConfig frag_config = config.frag;
    if (pinned_step > 0.0) {
        frag_config.resample.d_min_abs = pinned_step;
        frag_config.resample.d_max_abs = pinned_step;
    }

    const HmmModel structured = build_structured_model(1.0, config.model);
    if (compare) {
        const HmmModel baseline = build_ergodic_baseline(1.0, config.model);
        const ComparisonReport cmp =
            compare_models(entries, structured, baseline, frag_config, config.eval);
        std::cout << "== structured ==\n" << report_to_table(cmp.structured);
        std::cout << "== ergodic baseline ==\n" << report_to_table(cmp.baseline);
        json doc{{"structured", report_to_json(cmp.structured)},
                 {"baseline", report_to_json(cmp.baseline)}};
        if (!report_path.empty()) save_json_file(report_path, doc);
        if (!csv_path.empty()) save_text_file(csv_path, report_to_csv(cmp.structured));
    } else {
        const HmmModel model = build_model(common.model_choice, config);
        const EvalReport report = evaluate_corpus(entries, model, frag_config, config.eval);
        std::cout << report_to_table(report);
        if (!report_path.empty()) save_json_file(report_path, report_to_json(report));
        if (!csv_path.empty()) save_text_file(csv_path, report_to_csv(report));
    }
    return 0;
}

int cmd_dump_model(const CommonOpts& common, const std::string& output_path) {
    const RunConfig config = resolve_config(common);
    const HmmModel model = build_model(common.model_choice, config);
    const json doc = model_to_json(model);
    if (output_path.empty()) {
        std::cout << doc.dump(1) << '\n';
    } else {
        save_json_file(output_path, doc);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fragcli: segment ink strokes into lines and circular arcs"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand

    CommonOpts common;
    app.add_option("--config", common.config_path, "flat key=value config file")
        ->expected(1);
    app.add_option("--model", common.model_choice, "structured | ergodic")
        ->expected(1);
    app.add_option("--set", common.overrides, "override a config key (key=value)");
    std::uint64_t seed_value = 0;
    auto* seed_opt = app.add_option("--seed", seed_value, "seed override");

    auto* frag = app.add_subcommand("fragment", "fragment strokes from a JSON file");
    std::string in_path, out_path = "fragmentation.json", svg_path, dbg_obs, dbg_path;
    frag->add_option("--input", in_path, "stroke JSON file")->required();
    frag->add_option("--output", out_path, "fragmentation JSON output");
    frag->add_option("--svg", svg_path, "annotated SVG sheet output");
    frag->add_option("--debug-observations", dbg_obs, "feature CSV dump");
    frag->add_option("--debug-path", dbg_path, "per-step decode CSV dump");

    auto* gen = app.add_subcommand("gen", "generate a synthetic corpus with ground truth");
    std::string recipe_path, corpus_path = "corpus.json", truth_path = "truth.json";
    gen->add_option("--recipe", recipe_path, "corpus recipe JSON (default: built-in)");
    gen->add_option("--output", corpus_path, "corpus stroke JSON output");
    gen->add_option("--truth", truth_path, "ground-truth JSON output");

    auto* eval = app.add_subcommand("eval", "score fragmentations against ground truth");
    std::string ev_corpus, ev_truth, ev_report, ev_csv;
    bool ev_compare = false;
    double ev_step = 0.0;
    eval->add_option("--corpus", ev_corpus, "corpus stroke JSON")->required();
    eval->add_option("--truth", ev_truth, "ground-truth JSON")->required();
    eval->add_option("--report", ev_report, "report JSON output");
    eval->add_option("--csv", ev_csv, "per-stroke CSV output");
    eval->add_option("--pin-step", ev_step, "pin the resample step (corpus step_d)");
    eval->add_flag("--compare", ev_compare, "run structured and ergodic models");

    auto* dump = app.add_subcommand("dump-model", "emit state/transition/pdf tables as JSON");
    std::string dump_path;
    dump->add_option("--output", dump_path, "output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);
    if (!seed_opt->empty()) common.seed = seed_value;

    try {
        if (app.got_subcommand(frag)) {
            return cmd_fragment(common, in_path, out_path, svg_path, dbg_obs, dbg_path);
        }
        if (app.got_subcommand(gen)) {
            return cmd_gen(common, recipe_path, corpus_path, truth_path);
        }
        if (app.got_subcommand(eval)) {
            return cmd_eval(common, ev_corpus, ev_truth, ev_report, ev_csv, ev_compare, ev_step);
        }
        if (app.got_subcommand(dump)) {
            return cmd_dump_model(common, dump_path);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    } catch (const DegenerateStroke& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitDegenerate;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitParse;
    }
    return 0;
}
