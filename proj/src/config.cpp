#include "lgmd/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "lgmd/error.hpp"

namespace lgmd {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size())
            throw Error(Error::Kind::parse, key + ": trailing characters in '" + value + "'");
        if (!std::isfinite(v)) throw Error(Error::Kind::parse, key + ": not finite");
        return v;
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) {
        throw Error(Error::Kind::parse, key + ": cannot parse '" + value + "' as a number");
    }
}

int parse_integer(const std::string& key, const std::string& value) {
    double v = parse_number(key, value);
    double rounded = std::nearbyint(v);
    if (rounded != v)
        throw Error(Error::Kind::parse, key + ": expected an integer, got '" + value + "'");
    return static_cast<int>(rounded);
}

struct ParamField {
    const char* key;
    std::function<void(ModelParams&, const std::string&)> set;
    std::function<double(const ModelParams&)> get;
};

const std::vector<ParamField>& param_fields() {
    static const std::vector<ParamField> fields = {
        {"n_p",
         [](ModelParams& p, const std::string& v) { p.persistence_depth = parse_integer("n_p", v); },
         [](const ModelParams& p) { return double(p.persistence_depth); }},
        {"u", [](ModelParams& p, const std::string& v) { p.persistence_steepness = parse_number("u", v); },
         [](const ModelParams& p) { return p.persistence_steepness; }},
        {"tau1", [](ModelParams& p, const std::string& v) { p.ffi_tau_ms = parse_number("tau1", v); },
         [](const ModelParams& p) { return p.ffi_tau_ms; }},
        {"tau2_min",
         [](ModelParams& p, const std::string& v) { p.excitation_tau_min_ms = parse_number("tau2_min", v); },
         [](const ModelParams& p) { return p.excitation_tau_min_ms; }},
        {"tau2_max",
         [](ModelParams& p, const std::string& v) { p.excitation_tau_max_ms = parse_number("tau2_max", v); },
         [](const ModelParams& p) { return p.excitation_tau_max_ms; }},
        {"theta1", [](ModelParams& p, const std::string& v) { p.theta_on = parse_number("theta1", v); },
         [](const ModelParams& p) { return p.theta_on; }},
        {"theta2", [](ModelParams& p, const std::string& v) { p.theta_off = parse_number("theta2", v); },
         [](const ModelParams& p) { return p.theta_off; }},
        {"theta3", [](ModelParams& p, const std::string& v) { p.theta_product = parse_number("theta3", v); },
         [](const ModelParams& p) { return p.theta_product; }},
        {"tau_g_base",
         [](ModelParams& p, const std::string& v) { p.group_tau_base_ms = parse_number("tau_g_base", v); },
         [](const ModelParams& p) { return p.group_tau_base_ms; }},
        {"T_f", [](ModelParams& p, const std::string& v) { p.ffi_threshold = parse_number("T_f", v); },
         [](const ModelParams& p) { return p.ffi_threshold; }},
        {"sigma1", [](ModelParams& p, const std::string& v) { p.bias_floor = parse_number("sigma1", v); },
         [](const ModelParams& p) { return p.bias_floor; }},
        {"sigma2", [](ModelParams& p, const std::string& v) { p.latency_floor = parse_number("sigma2", v); },
         [](const ModelParams& p) { return p.latency_floor; }},
        {"sigma3", [](ModelParams& p, const std::string& v) { p.pool_scale = parse_number("sigma3", v); },
         [](const ModelParams& p) { return p.pool_scale; }},
        {"sigma4", [](ModelParams& p, const std::string& v) { p.spike_scale = parse_number("sigma4", v); },
         [](const ModelParams& p) { return p.spike_scale; }},
        {"T_sp", [](ModelParams& p, const std::string& v) { p.spike_threshold = parse_number("T_sp", v); },
         [](const ModelParams& p) { return p.spike_threshold; }},
        {"N_ts", [](ModelParams& p, const std::string& v) { p.spike_window = parse_integer("N_ts", v); },
         [](const ModelParams& p) { return double(p.spike_window); }},
        {"T_sf", [](ModelParams& p, const std::string& v) { p.alert_threshold_hz = parse_number("T_sf", v); },
         [](const ModelParams& p) { return p.alert_threshold_hz; }},
        {"tau_i", [](ModelParams& p, const std::string& v) { p.frame_interval_ms = parse_number("tau_i", v); },
         [](const ModelParams& p) { return p.frame_interval_ms; }},
        {"delta_c", [](ModelParams& p, const std::string& v) { p.group_offset = parse_number("delta_c", v); },
         [](const ModelParams& p) { return p.group_offset; }},
        {"c_w", [](ModelParams& p, const std::string& v) { p.group_weight = parse_number("c_w", v); },
         [](const ModelParams& p) { return p.group_weight; }},
        {"c_de", [](ModelParams& p, const std::string& v) { p.group_decay = parse_number("c_de", v); },
         [](const ModelParams& p) { return p.group_decay; }},
        {"t_de", [](ModelParams& p, const std::string& v) { p.group_threshold = parse_number("t_de", v); },
         [](const ModelParams& p) { return p.group_threshold; }},
        {"alpha_sfa", [](ModelParams& p, const std::string& v) { p.sfa_decay = parse_number("alpha_sfa", v); },
         [](const ModelParams& p) { return p.sfa_decay; }},
    };
    return fields;
}

} // namespace

std::map<std::string, std::string> parse_key_values(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw Error(Error::Kind::parse,
                        "line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw Error(Error::Kind::parse, "line " + std::to_string(line_no) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Error::Kind::io, path + ": cannot open");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_key_values(buffer.str());
}

void apply_param(ModelParams& params, const std::string& key, const std::string& value) {
    for (const ParamField& field : param_fields()) {
        if (key == field.key) {
            field.set(params, value);
            return;
        }
    }
    throw Error(Error::Kind::parse, "unknown parameter key: " + key);
}

double get_param(const ModelParams& params, const std::string& key) {
    for (const ParamField& field : param_fields())
        if (key == field.key) return field.get(params);
    throw Error(Error::Kind::parse, "unknown parameter key: " + key);
}

ModelParams params_from_key_values(const std::map<std::string, std::string>& kv) {
    ModelParams params;
    for (const auto& [key, value] : kv) apply_param(params, key, value);
    require_valid(params);
    return params;
}

ModelParams load_params(const std::string& path) {
    return params_from_key_values(read_key_value_file(path));
}

const std::vector<std::string>& param_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const ParamField& field : param_fields()) k.push_back(field.key);
        return k;
    }();
    return keys;
}

std::string params_to_text(const ModelParams& params) {
    std::ostringstream out;
    out.precision(17);
    for (const ParamField& field : param_fields())
        out << field.key << " = " << field.get(params) << "\n";
    return out.str();
}

void write_stimulus_metadata(const std::string& path, const StimulusSequence& sequence) {
    std::ofstream out(path);
    if (!out) throw Error(Error::Kind::io, path + ": cannot open for writing");
    const StimulusSpec& spec = sequence.spec;
    out << "kind = " << to_string(spec.kind) << "\n";
    out << "fps = " << spec.fps << "\n";
    out << "collision_frame = " << sequence.collision_frame << "\n";
    out << "frames = " << sequence.frames.size() << "\n";
    out << "width = " << spec.width << "\n";
    out << "height = " << spec.height << "\n";
    out << "duration_s = " << spec.duration_s << "\n";
    out << "spatial_frequency = " << spec.spatial_frequency << "\n";
    out << "temporal_frequency = " << spec.temporal_frequency << "\n";
    out << "background_sf_per_m = " << spec.background_sf_per_m << "\n";
    out << "background_level = " << spec.background_level << "\n";
    out << "polarity = " << (spec.light_object ? "light" : "dark") << "\n";
    out << "object_speed_mps = " << spec.object_speed_mps << "\n";
    out << "object_size_m = " << spec.object_size_m << "\n";
    out << "initial_distance_m = " << spec.initial_distance_m << "\n";
    out << "shift_speed_px = " << spec.shift_speed_px << "\n";
    out << "pixels_per_meter = " << spec.pixels_per_meter << "\n";
    out << "focal_px = " << spec.focal_px << "\n";
    out << "seed = " << spec.seed << "\n";
    if (!spec.background_path.empty()) out << "background = " << spec.background_path << "\n";
    if (!out) throw Error(Error::Kind::io, path + ": write failed");
}

StimulusMetadata read_stimulus_metadata(const std::string& path) {
    StimulusMetadata meta;
    for (const auto& [key, value] : read_key_value_file(path)) {
        if (key == "fps")
            meta.fps = parse_number(key, value);
        else if (key == "collision_frame")
            meta.collision_frame = static_cast<std::int64_t>(parse_number(key, value));
        else if (key == "kind")
            meta.kind = value;
        else
            meta.extra[key] = value;
    }
    return meta;
}

} // namespace lgmd
