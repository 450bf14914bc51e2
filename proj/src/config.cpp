#include "inkfrag/config.hpp"

#include "inkfrag/error.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <vector>

namespace inkfrag {

namespace {

struct Knob {
    std::string key;
    std::function<std::string(const RunConfig&)> get;
    std::function<void(RunConfig&, const std::string&)> set;
};

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParseError("config: bad numeric value for '" + key + "': " + value);
    }
}

int parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ParseError("config: bad integer value for '" + key + "': " + value);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ParseError("config: bad boolean value for '" + key + "': " + value);
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

std::vector<Knob> knob_table() {
    std::vector<Knob> knobs;
    auto dbl = [&](std::string key, auto member) {
        knobs.push_back({key, [member](const RunConfig& c) { return fmt(std::invoke(member, c)); },
                         [member, key](RunConfig& c, const std::string& v) {
                             std::invoke(member, c) = parse_double(key, v);
                         }});
    };
    auto intk = [&](std::string key, auto member) {
        knobs.push_back(
            {key,
             [member](const RunConfig& c) { return std::to_string(std::invoke(member, c)); },
             [member, key](RunConfig& c, const std::string& v) {
                 std::invoke(member, c) = parse_int(key, v);
             }});
    };

    dbl("resample.min_primitive_fraction",
        [](auto& c) -> auto& { return c.frag.resample.min_primitive_fraction; });
    intk("resample.min_obs_per_primitive",
         [](auto& c) -> auto& { return c.frag.resample.min_obs_per_primitive; });
    dbl("resample.d_min_abs", [](auto& c) -> auto& { return c.frag.resample.d_min_abs; });
    dbl("resample.d_max_abs", [](auto& c) -> auto& { return c.frag.resample.d_max_abs; });

    dbl("model.arc_self", [](auto& c) -> auto& { return c.model.arc_self; });
    dbl("model.arc_adjacent", [](auto& c) -> auto& { return c.model.arc_adjacent; });
    dbl("model.arc_exit", [](auto& c) -> auto& { return c.model.arc_exit; });
    dbl("model.line_self", [](auto& c) -> auto& { return c.model.line_self; });
    dbl("model.line_exit", [](auto& c) -> auto& { return c.model.line_exit; });
    dbl("model.line_corner_total", [](auto& c) -> auto& { return c.model.line_corner_total; });
    dbl("model.corner_self", [](auto& c) -> auto& { return c.model.corner_self; });
    dbl("model.corner_advance", [](auto& c) -> auto& { return c.model.corner_advance; });
    dbl("model.conn1_to_conn2", [](auto& c) -> auto& { return c.model.conn1_to_conn2; });
    dbl("model.conn1_exit_total", [](auto& c) -> auto& { return c.model.conn1_exit_total; });
    dbl("model.ergodic_self", [](auto& c) -> auto& { return c.model.ergodic_self; });

    dbl("model.line_curv_halfband", [](auto& c) -> auto& { return c.model.line_curv_halfband; });
    dbl("model.curv_noise_floor", [](auto& c) -> auto& { return c.model.curv_noise_floor; });
    dbl("model.radius_band_lo", [](auto& c) -> auto& { return c.model.radius_band_lo; });
    dbl("model.radius_band_hi", [](auto& c) -> auto& { return c.model.radius_band_hi; });
    dbl("model.band_tail_frac", [](auto& c) -> auto& { return c.model.band_tail_frac; });
    dbl("model.band_inner_tail", [](auto& c) -> auto& { return c.model.band_inner_tail; });
    dbl("model.band_wrong_side", [](auto& c) -> auto& { return c.model.band_wrong_side; });
    dbl("model.band_cliff_tail", [](auto& c) -> auto& { return c.model.band_cliff_tail; });
    dbl("model.dirchange_floor", [](auto& c) -> auto& { return c.model.dirchange_floor; });
    dbl("model.h_corner", [](auto& c) -> auto& { return c.model.h_corner; });
    dbl("model.corner_boost", [](auto& c) -> auto& { return c.model.corner_boost; });
    dbl("model.line_dirchange_2sigma",
        [](auto& c) -> auto& { return c.model.line_dirchange_2sigma; });
    dbl("model.dirchange_plateau",
        [](auto& c) -> auto& { return c.model.dirchange_plateau; });
    dbl("model.corner_dirchange_sigma",
        [](auto& c) -> auto& { return c.model.corner_dirchange_sigma; });
    dbl("model.pdf_floor", [](auto& c) -> auto& { return c.model.pdf_floor; });
    dbl("model.connector_density_scale",
        [](auto& c) -> auto& { return c.model.connector_density_scale; });

    intk("frag.min_run", [](auto& c) -> auto& { return c.frag.min_run; });
    intk("frag.max_boundary_run", [](auto& c) -> auto& { return c.frag.max_boundary_run; });
    dbl("frag.refine_window_factor",
        [](auto& c) -> auto& { return c.frag.refine_window_factor; });
    dbl("frag.refine_min_gain", [](auto& c) -> auto& { return c.frag.refine_min_gain; });

    dbl("eval.tolerance_factor", [](auto& c) -> auto& { return c.eval.tolerance_factor; });

    knobs.push_back({"features.flip_handedness",
                     [](const RunConfig& c) {
                         return c.model.flip_handedness ? std::string("true")
                                                        : std::string("false");
                     },
                     [](RunConfig& c, const std::string& v) {
                         c.set_handedness(parse_bool("features.flip_handedness", v));
                     }});
    knobs.push_back({"seed", [](const RunConfig& c) { return std::to_string(c.seed); },
                     [](RunConfig& c, const std::string& v) {
                         c.seed = static_cast<std::uint64_t>(
                             std::stoull(v));
                     }});
    return knobs;
}

} // namespace

std::map<std::string, std::string> parse_flat_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config line " + std::to_string(lineno) + ": expected key=value");
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ParseError("config line " + std::to_string(lineno) + ": empty key");
        }
        kv[key] = value;
    }
    return kv;
}

void apply_config(RunConfig& config, const std::map<std::string, std::string>& kv) {
    const std::vector<Knob> knobs = knob_table();
    for (const auto& [key, value] : kv) {
        bool found = false;
        for (const Knob& k : knobs) {
            if (k.key == key) {
                k.set(config, value);
                found = true;
                break;
            }
        }
        if (!found) throw ParseError("config: unknown key '" + key + "'");
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    RunConfig config;
    apply_config(config, parse_flat_config(buf.str()));
    return config;
}

std::map<std::string, std::string> config_to_map(const RunConfig& config) {
    std::map<std::string, std::string> out;
    for (const Knob& k : knob_table()) out[k.key] = k.get(config);
    return out;
}

} // namespace inkfrag
