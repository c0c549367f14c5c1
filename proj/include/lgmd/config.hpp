#pragma once

#include <map>
#include <string>
#include <vector>

#include "lgmd/params.hpp"
#include "lgmd/stimuli.hpp"

namespace lgmd {

// Flat "key = value" text with '#' comments.
std::map<std::string, std::string> parse_key_values(const std::string& text);
std::map<std::string, std::string> read_key_value_file(const std::string& path);

// Model configuration. Unspecified keys keep their defaults; unknown keys
// and out-of-range values are rejected. Accepted keys:
//   n_p u tau1 tau2_min tau2_max theta1 theta2 theta3 tau_g_base
//   T_f sigma1 sigma2 sigma3 sigma4 T_sp N_ts T_sf tau_i
//   delta_c c_w c_de t_de alpha_sfa
ModelParams params_from_key_values(const std::map<std::string, std::string>& kv);
ModelParams load_params(const std::string& path);

// Applies one "key = value" assignment to existing params.
void apply_param(ModelParams& params, const std::string& key, const std::string& value);
double get_param(const ModelParams& params, const std::string& key);

// Serialises every key; load_params(params_to_text(p)) reproduces p.
std::string params_to_text(const ModelParams& params);
const std::vector<std::string>& param_keys();

// Stimulus metadata sidecar (metadata.txt next to the frames): records fps,
// collision_frame, kind and the spec parameters.
void write_stimulus_metadata(const std::string& path, const StimulusSequence& sequence);

struct StimulusMetadata {
    double fps = 0.0;                  // 0 when absent
    std::int64_t collision_frame = -1;
    std::string kind;
    std::map<std::string, std::string> extra;
};

StimulusMetadata read_stimulus_metadata(const std::string& path);

} // namespace lgmd
