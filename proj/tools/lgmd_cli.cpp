// Command-line front end: synthesize stimuli, run the detector over frame
// directories, sweep stimulus grids. Talks to the library exclusively
// through the C API.
#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lgmd.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitAlert = 2;

[[noreturn]] void die(const std::string& message) {
    std::fprintf(stderr, "error: %s\n", message.c_str());
    std::exit(kExitError);
}

void check(lgmd_status status, const std::string& what) {
    if (status != LGMD_OK)
        die(what + ": " + lgmd_status_name(status) + " (" + lgmd_last_error() + ")");
}

struct ParamsHandle {
    lgmd_params* p = nullptr;
    ~ParamsHandle() { lgmd_params_destroy(p); }
};

struct SynthArgs {
    std::string kind = "grating";
    std::string out_dir;
    std::string polarity = "dark";
    std::string background;
    std::optional<double> sf, tf, sf_background, background_level, fps, duration, speed, shift_speed;
    std::optional<double> object_size, distance;
    std::optional<int> width, height;
    std::optional<std::uint64_t> seed;
};

void apply_synth_args(lgmd_stimulus_spec& spec, const SynthArgs& a) {
    if (a.width) spec.width = *a.width;
    if (a.height) spec.height = *a.height;
    if (a.fps) spec.fps = *a.fps;
    if (a.duration) spec.duration_s = *a.duration;
    if (a.sf) spec.spatial_frequency = *a.sf;
    if (a.tf) spec.temporal_frequency = *a.tf;
    if (a.sf_background) spec.background_sf_per_m = *a.sf_background;
    if (a.background_level) spec.background_level = *a.background_level;
    if (a.speed) spec.object_speed_mps = *a.speed;
    if (a.shift_speed) spec.shift_speed_px = *a.shift_speed;
    if (a.object_size) spec.object_size_m = *a.object_size;
    if (a.distance) spec.initial_distance_m = *a.distance;
    if (a.seed) spec.seed = *a.seed;
    if (a.polarity != "dark" && a.polarity != "light")
        die("--polarity must be 'dark' or 'light'");
    spec.light_object = a.polarity == "light" ? 1 : 0;
    if (!a.background.empty())
        std::snprintf(spec.background_path, sizeof(spec.background_path), "%s",
                      a.background.c_str());
}

int cmd_synth(const SynthArgs& a) {
    lgmd_stimulus_spec spec;
    check(lgmd_stimulus_spec_init(&spec, a.kind.c_str()), "synth");
    apply_synth_args(spec, a);
    int64_t frames = 0, collision = -1;
    check(lgmd_stimulus_render(&spec, a.out_dir.c_str(), &frames, &collision), "synth");
    std::printf("frames %" PRId64 "\n", frames);
    if (collision >= 0) std::printf("collision_frame %" PRId64 "\n", collision);
    return kExitOk;
}

ParamsHandle load_config(const std::string& config_flag) {
    ParamsHandle handle;
    std::string path = config_flag;
    if (path.empty()) {
        if (const char* env = std::getenv("LGMD_CONFIG")) path = env;
    }
    if (path.empty())
        check(lgmd_params_create(&handle.p), "params");
    else
        check(lgmd_params_load(path.c_str(), &handle.p), "config " + path);
    return handle;
}

void print_summary(const lgmd_summary& s) {
    std::printf("total_frames          %" PRId64 "\n", s.total_frames);
    std::printf("total_spikes          %" PRId64 "\n", s.total_spikes);
    std::printf("peak_spike_frequency  %.6g\n", s.peak_spike_rate_hz);
    if (s.first_alert_frame >= 0)
        std::printf("first_alert_frame     %" PRId64 "\n", s.first_alert_frame);
    else
        std::printf("first_alert_frame     -\n");
    std::printf("alert_frames          %" PRId64 "\n", s.alert_frames);
    if (s.collision_frame_truth >= 0)
        std::printf("collision_frame_truth %" PRId64 "\n", s.collision_frame_truth);
    else
        std::printf("collision_frame_truth -\n");
    if (s.has_lead_time)
        std::printf("lead_time_ms          %.6g\n", s.lead_time_ms);
    else
        std::printf("lead_time_ms          -\n");
}

struct RunResult {
    lgmd_summary summary{};
    double fps = 0.0;
    bool ok = false;
    std::string error;
};

// Streams a frame directory through the model; fps_flag > 0 overrides the
// sidecar, t_sf > 0 overrides the configured alert threshold.
RunResult run_directory(const std::string& input_dir, lgmd_params* params, double fps_flag,
                        double t_sf, const std::string& out_csv) {
    RunResult result;
    lgmd_source* source = nullptr;
    lgmd_status status = lgmd_source_open(input_dir.c_str(), &source);
    if (status != LGMD_OK) {
        result.error = input_dir + ": " + lgmd_last_error();
        return result;
    }

    double fps = fps_flag > 0.0 ? fps_flag : lgmd_source_fps(source);
    if (fps <= 0.0) {
        lgmd_source_close(source);
        result.error = input_dir + ": fps unknown; pass --fps or provide metadata.txt";
        return result;
    }
    result.fps = fps;

    char value[64];
    std::snprintf(value, sizeof(value), "%.17g", 1000.0 / fps);
    if (lgmd_params_set(params, "tau_i", value) != LGMD_OK) {
        lgmd_source_close(source);
        result.error = lgmd_last_error();
        return result;
    }
    if (t_sf > 0.0) {
        std::snprintf(value, sizeof(value), "%.17g", t_sf);
        if (lgmd_params_set(params, "T_sf", value) != LGMD_OK) {
            lgmd_source_close(source);
            result.error = lgmd_last_error();
            return result;
        }
    }

    const int32_t width = lgmd_source_width(source);
    const int32_t height = lgmd_source_height(source);
    lgmd_model* model = nullptr;
    if (lgmd_model_create(params, width, height, &model) != LGMD_OK) {
        lgmd_source_close(source);
        result.error = lgmd_last_error();
        return result;
    }

    lgmd_trace* trace = nullptr;
    if (!out_csv.empty() && lgmd_trace_open(out_csv.c_str(), &trace) != LGMD_OK) {
        lgmd_model_destroy(model);
        lgmd_source_close(source);
        result.error = lgmd_last_error();
        return result;
    }

    lgmd_summary_init(&result.summary, lgmd_source_collision_frame(source));
    std::vector<double> buffer(static_cast<size_t>(width) * height);
    lgmd_report report;
    for (;;) {
        status = lgmd_source_next(source, buffer.data(), buffer.size());
        if (status == LGMD_END_OF_STREAM) break;
        if (status == LGMD_OK)
            status = lgmd_model_process(model, buffer.data(), buffer.size(), &report);
        if (status != LGMD_OK) {
            result.error = lgmd_last_error();
            break;
        }
        lgmd_summary_add(&result.summary, &report);
        if (trace && lgmd_trace_write(trace, &report) != LGMD_OK) {
            result.error = lgmd_last_error();
            break;
        }
    }
    lgmd_summary_finish(&result.summary, 1000.0 / fps);

    if (trace && lgmd_trace_close(trace) != LGMD_OK && result.error.empty())
        result.error = lgmd_last_error();
    lgmd_model_destroy(model);
    lgmd_source_close(source);
    result.ok = result.error.empty();
    return result;
}

int cmd_run(const std::string& input_dir, const std::string& config, double fps_flag,
            double t_sf, const std::string& out_csv) {
    ParamsHandle params = load_config(config);
    RunResult result = run_directory(input_dir, params.p, fps_flag, t_sf, out_csv);
    if (!result.ok) die(result.error);
    print_summary(result.summary);
    return result.summary.alert_frames > 0 ? kExitAlert : kExitOk;
}

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
    std::vector<double> values;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            die(flag + ": cannot parse '" + item + "'");
        }
    }
    return values;
}

int cmd_sweep(const std::string& kind, const std::string& sf_list, const std::string& tf_list,
              const std::string& polarity_list, const std::string& config, double t_sf,
              const std::string& out_dir, const SynthArgs& base) {
    const std::vector<double> sfs = parse_list(sf_list, "--sf-list");
    std::vector<double> tfs = tf_list.empty() ? std::vector<double>{} : parse_list(tf_list, "--tf-list");
    std::vector<std::string> polarities;
    {
        std::istringstream in(polarity_list);
        std::string item;
        while (std::getline(in, item, ',')) polarities.push_back(item);
    }
    if (sfs.empty()) die("--sf-list: empty axis");
    const bool grating = kind == "grating";
    if (grating && tfs.empty()) die("--tf-list: empty axis");
    if (!grating && tfs.empty()) tfs.push_back(0.0);  // marker: keep the kind default
    if (polarities.empty()) polarities.push_back("dark");

    std::filesystem::create_directories(out_dir);
    const std::string table_path = out_dir + "/sweep.csv";
    std::ofstream table(table_path);
    if (!table) die(table_path + ": cannot open for writing");
    table << "kind,sf,tf,polarity,frames,total_spikes,peak_spike_freq,first_alert_frame,"
             "collision_frame,lead_time_ms,status\n";

    ParamsHandle params = load_config(config);

    bool any_alert = false;
    int cell = 0;
    for (double sf : sfs) {
        for (double tf : tfs) {
            for (const std::string& polarity : polarities) {
                SynthArgs args = base;
                args.kind = kind;
                args.polarity = polarity;
                if (grating)
                    args.sf = sf;
                else
                    args.sf_background = sf;
                if (tf > 0.0) args.tf = tf;
                args.out_dir = out_dir + "/cell_" + std::to_string(cell++);

                std::string status = "ok";
                lgmd_summary summary{};
                lgmd_stimulus_spec spec;
                lgmd_status rc = lgmd_stimulus_spec_init(&spec, kind.c_str());
                if (rc == LGMD_OK) {
                    apply_synth_args(spec, args);
                    rc = lgmd_stimulus_render(&spec, args.out_dir.c_str(), nullptr, nullptr);
                }
                if (rc != LGMD_OK) {
                    status = std::string("error: ") + lgmd_last_error();
                } else {
                    RunResult run = run_directory(args.out_dir, params.p, 0.0, t_sf, "");
                    if (!run.ok)
                        status = "error: " + run.error;
                    else
                        summary = run.summary;
                }
                if (summary.alert_frames > 0) any_alert = true;
                table << kind << ',' << sf << ',' << (tf > 0.0 ? tf : spec.temporal_frequency)
                      << ',' << polarity << ',' << summary.total_frames << ','
                      << summary.total_spikes << ',' << summary.peak_spike_rate_hz << ','
                      << summary.first_alert_frame << ',' << summary.collision_frame_truth << ','
                      << (summary.has_lead_time ? std::to_string(summary.lead_time_ms) : "-")
                      << ',' << status << '\n';
            }
        }
    }
    table.flush();
    if (!table) die(table_path + ": write failed");
    std::printf("wrote %s\n", table_path.c_str());
    return any_alert ? kExitAlert : kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Looming-detection pipeline: synthetic stimuli, frame-stream runs, sweeps"};
    app.require_subcommand(1);

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "render a synthetic stimulus to PGM frames");
    synth_cmd->add_option("--kind", synth.kind,
                          "grating | looming_in_grating | panoramic_loom | panoramic_recede | "
                          "panoramic_translate | panoramic_shift_only");
    synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();
    synth_cmd->add_option("--sf", synth.sf, "spatial frequency, cycles/pixel (gratings)");
    synth_cmd->add_option("--tf", synth.tf, "temporal frequency, Hz");
    synth_cmd->add_option("--sf-background", synth.sf_background,
                          "background grating frequency, cycles/metre");
    synth_cmd->add_option("--background-level", synth.background_level,
                          "mean luminance of the looming-run grating");
    synth_cmd->add_option("--polarity", synth.polarity, "dark | light");
    synth_cmd->add_option("--fps", synth.fps, "frames per second");
    synth_cmd->add_option("--duration", synth.duration, "seconds");
    synth_cmd->add_option("--speed", synth.speed, "object speed, m/s");
    synth_cmd->add_option("--shift-speed", synth.shift_speed, "panorama shift, pixels/frame");
    synth_cmd->add_option("--object-size", synth.object_size, "object edge length, m");
    synth_cmd->add_option("--distance", synth.distance, "initial object distance, m");
    synth_cmd->add_option("--width", synth.width, "frame width, pixels");
    synth_cmd->add_option("--height", synth.height, "frame height, pixels");
    synth_cmd->add_option("--background", synth.background, "panorama PGM path");
    synth_cmd->add_option("--seed", synth.seed, "texture seed");

    std::string run_input, run_config, run_csv;
    double run_fps = 0.0, run_tsf = 0.0;
    CLI::App* run_cmd = app.add_subcommand("run", "process a directory of PGM/PPM frames");
    run_cmd->add_option("input", run_input, "frame directory")->required();
    run_cmd->add_option("--config", run_config, "model config file (default: $LGMD_CONFIG)");
    run_cmd->add_option("--fps", run_fps, "frame rate when metadata.txt is absent");
    run_cmd->add_option("--t-sf", run_tsf, "alert threshold, spikes/s");
    run_cmd->add_option("--out-csv", run_csv, "per-frame trace CSV path");

    std::string sweep_kind = "grating", sweep_sf, sweep_tf, sweep_pol, sweep_config, sweep_out;
    double sweep_tsf = 0.0;
    SynthArgs sweep_base;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "render and run a stimulus grid");
    sweep_cmd->add_option("--kind", sweep_kind, "stimulus kind for every cell");
    sweep_cmd->add_option("--sf-list", sweep_sf, "comma-separated spatial frequencies")->required();
    sweep_cmd->add_option("--tf-list", sweep_tf, "comma-separated temporal frequencies");
    sweep_cmd->add_option("--polarity-list", sweep_pol, "comma-separated polarities");
    sweep_cmd->add_option("--config", sweep_config, "model config file");
    sweep_cmd->add_option("--t-sf", sweep_tsf, "alert threshold, spikes/s");
    sweep_cmd->add_option("--out", sweep_out, "output directory")->required();
    sweep_cmd->add_option("--fps", sweep_base.fps, "frames per second");
    sweep_cmd->add_option("--duration", sweep_base.duration, "seconds");
    sweep_cmd->add_option("--width", sweep_base.width, "frame width, pixels");
    sweep_cmd->add_option("--height", sweep_base.height, "frame height, pixels");
    sweep_cmd->add_option("--seed", sweep_base.seed, "texture seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return kExitError;
    }

    if (synth_cmd->parsed()) return cmd_synth(synth);
    if (run_cmd->parsed()) return cmd_run(run_input, run_config, run_fps, run_tsf, run_csv);
    if (sweep_cmd->parsed())
        return cmd_sweep(sweep_kind, sweep_sf, sweep_tf, sweep_pol, sweep_config, sweep_tsf,
                         sweep_out, sweep_base);
    return kExitError;
}
