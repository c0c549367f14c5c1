#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lgmd/model.hpp"
#include "lgmd/params.hpp"
#include "lgmd/stimuli.hpp"

namespace harness {

enum class Expectation {
    silent,                  // zero spikes over the whole course
    alert_before_collision,  // collision flag strictly before the truth frame
    alert_sustained,         // a long alert run ending in the final stretch
    brief_onset_only,        // alerts, if any, confined to the opening frames
    ordering,                // stimulus peak rate strictly above stimulus_b's
};

Expectation expectation_from_string(const std::string& name);
const char* to_string(Expectation e);

struct ExperimentSpec {
    std::string name;
    lgmd::StimulusSpec stimulus;
    std::optional<lgmd::StimulusSpec> stimulus_b;  // ordering only
    lgmd::ModelParams params;
    Expectation expectation = Expectation::silent;

    double max_potential = 1.0;         // silent: membrane potential ceiling
    int sustain_frames = 10;            // alert_sustained: required consecutive alerts
    double sustain_tail_fraction = 0.8; // ... ending at or after this time fraction
    double onset_fraction = 0.25;       // brief_onset_only: alerts before this fraction
};

struct ExperimentResult {
    std::string name;
    Expectation expectation = Expectation::silent;
    bool pass = false;
    bool errored = false;
    std::string detail;

    std::int64_t frames = 0;
    std::int64_t collision_frame = -1;
    std::int64_t first_alert_frame = -1;
    std::int64_t total_spikes = 0;
    double peak_spike_rate_hz = 0.0;
    double peak_potential = 0.0;
    double peak_spike_rate_b_hz = 0.0;  // ordering only
};

// Renders the stimulus, runs the model over it and evaluates the
// expectation. Render or run failures mark the result errored.
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Flat "key = value" form of an experiment: expectation keys at the top
// level, stimulus fields under "stim." (and "stim_b." for ordering),
// parameter overrides under "param.".
ExperimentSpec parse_experiment(const std::map<std::string, std::string>& kv);
ExperimentSpec parse_experiment_text(const std::string& text);

// One CSV row per result, fixed header.
void write_suite_report(const std::string& path, const std::vector<ExperimentResult>& results);

} // namespace harness
