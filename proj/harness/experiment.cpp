#include "experiment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "lgmd/config.hpp"
#include "lgmd/error.hpp"

namespace harness {

namespace {

struct RunTrace {
    std::vector<lgmd::FrameReport> reports;
    std::int64_t collision_frame = -1;
};

RunTrace run_stimulus(const lgmd::StimulusSpec& stimulus, const lgmd::ModelParams& params) {
    const lgmd::StimulusSequence seq = lgmd::render(stimulus);
    lgmd::ModelParams run_params = params;
    run_params.frame_interval_ms = 1000.0 / seq.fps;
    lgmd::Model model(run_params, stimulus.width, stimulus.height);
    RunTrace trace;
    trace.collision_frame = seq.collision_frame;
    trace.reports.reserve(seq.frames.size());
    for (const lgmd::Frame& frame : seq.frames) trace.reports.push_back(model.process(frame));
    return trace;
}

double peak_rate(const std::vector<lgmd::FrameReport>& reports) {
    double peak = 0.0;
    for (const auto& r : reports) peak = std::max(peak, r.spike_rate_hz);
    return peak;
}

// Longest run of consecutive alert frames whose last index is >= tail_start.
bool sustained_alert(const std::vector<lgmd::FrameReport>& reports, int needed,
                     std::int64_t tail_start) {
    int streak = 0;
    for (const auto& r : reports) {
        streak = r.collision ? streak + 1 : 0;
        if (streak >= needed && r.frame_index >= tail_start) return true;
    }
    return false;
}

void set_stimulus_field(lgmd::StimulusSpec& s, const std::string& key, const std::string& value) {
    auto number = [&] { return std::stod(value); };
    if (key == "kind")
        s.kind = lgmd::stimulus_kind_from_string(value);
    else if (key == "width")
        s.width = static_cast<int>(number());
    else if (key == "height")
        s.height = static_cast<int>(number());
    else if (key == "fps")
        s.fps = number();
    else if (key == "duration")
        s.duration_s = number();
    else if (key == "sf")
        s.spatial_frequency = number();
    else if (key == "tf")
        s.temporal_frequency = number();
    else if (key == "sf_background")
        s.background_sf_per_m = number();
    else if (key == "background_level")
        s.background_level = number();
    else if (key == "polarity")
        s.light_object = value == "light";
    else if (key == "speed")
        s.object_speed_mps = number();
    else if (key == "object_size")
        s.object_size_m = number();
    else if (key == "distance")
        s.initial_distance_m = number();
    else if (key == "shift_speed")
        s.shift_speed_px = number();
    else if (key == "pixels_per_meter")
        s.pixels_per_meter = number();
    else if (key == "focal_px")
        s.focal_px = number();
    else if (key == "background")
        s.background_path = value;
    else if (key == "seed")
        s.seed = static_cast<std::uint64_t>(std::stoull(value));
    else
        throw lgmd::Error(lgmd::Error::Kind::parse, "unknown stimulus key: " + key);
}

} // namespace

Expectation expectation_from_string(const std::string& name) {
    if (name == "silent") return Expectation::silent;
    if (name == "alert_before_collision") return Expectation::alert_before_collision;
    if (name == "alert_sustained") return Expectation::alert_sustained;
    if (name == "brief_onset_only") return Expectation::brief_onset_only;
    if (name == "ordering") return Expectation::ordering;
    throw lgmd::Error(lgmd::Error::Kind::parse, "unknown expectation: " + name);
}

const char* to_string(Expectation e) {
    switch (e) {
    case Expectation::silent: return "silent";
    case Expectation::alert_before_collision: return "alert_before_collision";
    case Expectation::alert_sustained: return "alert_sustained";
    case Expectation::brief_onset_only: return "brief_onset_only";
    case Expectation::ordering: return "ordering";
    }
    return "unknown";
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
    ExperimentResult result;
    result.name = spec.name;
    result.expectation = spec.expectation;
    try {
        const RunTrace trace = run_stimulus(spec.stimulus, spec.params);
        const auto& reports = trace.reports;
        result.frames = static_cast<std::int64_t>(reports.size());
        result.collision_frame = trace.collision_frame;
        result.peak_spike_rate_hz = peak_rate(reports);
        for (const auto& r : reports) {
            result.total_spikes += r.spikes;
            result.peak_potential = std::max(result.peak_potential, r.potential);
            if (r.collision && result.first_alert_frame < 0)
                result.first_alert_frame = r.frame_index;
        }

        std::ostringstream detail;
        switch (spec.expectation) {
        case Expectation::silent:
            result.pass = result.total_spikes == 0 &&
                          result.peak_potential < spec.max_potential;
            detail << "spikes=" << result.total_spikes
                   << " peak_K=" << result.peak_potential;
            break;
        case Expectation::alert_before_collision:
            result.pass = result.first_alert_frame >= 0 && result.collision_frame >= 0 &&
                          result.first_alert_frame < result.collision_frame;
            detail << "first_alert=" << result.first_alert_frame
                   << " collision=" << result.collision_frame;
            break;
        case Expectation::alert_sustained: {
            const auto tail_start = static_cast<std::int64_t>(
                std::ceil(spec.sustain_tail_fraction * (result.frames - 1)));
            result.pass = sustained_alert(reports, spec.sustain_frames, tail_start);
            detail << "needed " << spec.sustain_frames << " consecutive alerts ending at frame >= "
                   << tail_start;
            break;
        }
        case Expectation::brief_onset_only: {
            const auto limit =
                static_cast<std::int64_t>(spec.onset_fraction * result.frames);
            result.pass = true;
            for (const auto& r : reports)
                if (r.collision && r.frame_index >= limit) result.pass = false;
            detail << "alerts allowed before frame " << limit;
            break;
        }
        case Expectation::ordering: {
            if (!spec.stimulus_b)
                throw lgmd::Error(lgmd::Error::Kind::argument,
                                  spec.name + ": ordering needs a second stimulus");
            const RunTrace other = run_stimulus(*spec.stimulus_b, spec.params);
            result.peak_spike_rate_b_hz = peak_rate(other.reports);
            result.pass = result.peak_spike_rate_hz > result.peak_spike_rate_b_hz;
            detail << "peak_a=" << result.peak_spike_rate_hz
                   << " peak_b=" << result.peak_spike_rate_b_hz;
            break;
        }
        }
        result.detail = detail.str();
    } catch (const std::exception& e) {
        result.errored = true;
        result.pass = false;
        result.detail = e.what();
    }
    return result;
}

ExperimentSpec parse_experiment(const std::map<std::string, std::string>& kv) {
    ExperimentSpec spec;
    // per-kind defaults first so the remaining stimulus keys override them
    auto stim_kind = kv.find("stim.kind");
    if (stim_kind != kv.end())
        spec.stimulus = lgmd::default_spec(lgmd::stimulus_kind_from_string(stim_kind->second));

    bool has_b = false;
    for (const auto& [key, value] : kv) {
        if (key == "name")
            spec.name = value;
        else if (key == "expectation")
            spec.expectation = expectation_from_string(value);
        else if (key == "max_potential")
            spec.max_potential = std::stod(value);
        else if (key == "sustain_frames")
            spec.sustain_frames = std::stoi(value);
        else if (key == "sustain_tail_fraction")
            spec.sustain_tail_fraction = std::stod(value);
        else if (key == "onset_fraction")
            spec.onset_fraction = std::stod(value);
        else if (key.rfind("stim.", 0) == 0)
            set_stimulus_field(spec.stimulus, key.substr(5), value);
        else if (key.rfind("stim_b.", 0) == 0)
            has_b = true;
        else if (key.rfind("param.", 0) == 0)
            lgmd::apply_param(spec.params, key.substr(6), value);
        else
            throw lgmd::Error(lgmd::Error::Kind::parse, "unknown experiment key: " + key);
    }
    // the second stimulus starts as a copy of the first; stim_b.* overrides
    if (has_b) {
        spec.stimulus_b = spec.stimulus;
        for (const auto& [key, value] : kv)
            if (key.rfind("stim_b.", 0) == 0)
                set_stimulus_field(*spec.stimulus_b, key.substr(7), value);
    }
    lgmd::require_valid(spec.params);
    return spec;
}

ExperimentSpec parse_experiment_text(const std::string& text) {
    return parse_experiment(lgmd::parse_key_values(text));
}

void write_suite_report(const std::string& path, const std::vector<ExperimentResult>& results) {
    std::ofstream out(path);
    if (!out) throw lgmd::Error(lgmd::Error::Kind::io, path + ": cannot open for writing");
    out << "name,expectation,frames,collision_frame,first_alert_frame,total_spikes,"
           "peak_spike_rate_hz,peak_potential,verdict\n";
    for (const auto& r : results) {
        out << r.name << ',' << to_string(r.expectation) << ',' << r.frames << ','
            << r.collision_frame << ',' << r.first_alert_frame << ',' << r.total_spikes << ','
            << r.peak_spike_rate_hz << ',' << r.peak_potential << ','
            << (r.errored ? "error" : (r.pass ? "pass" : "fail")) << '\n';
    }
}

} // namespace harness
