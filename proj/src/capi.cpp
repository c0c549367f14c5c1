#include "lgmd.h"

#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lgmd/config.hpp"
#include "lgmd/error.hpp"
#include "lgmd/model.hpp"
#include "lgmd/pgm_io.hpp"
#include "lgmd/run_summary.hpp"
#include "lgmd/stimuli.hpp"
#include "lgmd/trace.hpp"

namespace {

thread_local std::string t_last_error;

lgmd_status status_of(const lgmd::Error& e) {
    switch (e.kind()) {
    case lgmd::Error::Kind::argument: return LGMD_ERR_ARGUMENT;
    case lgmd::Error::Kind::dimension: return LGMD_ERR_DIMENSION;
    case lgmd::Error::Kind::io: return LGMD_ERR_IO;
    case lgmd::Error::Kind::parse: return LGMD_ERR_PARSE;
    case lgmd::Error::Kind::range: return LGMD_ERR_RANGE;
    }
    return LGMD_ERR_ARGUMENT;
}

lgmd_status fail(lgmd_status status, const char* message) {
    t_last_error = message;
    return status;
}

// Runs the body, converting exceptions to status codes.
template <typename Fn>
lgmd_status guarded(Fn&& fn) {
    try {
        t_last_error.clear();
        return fn();
    } catch (const lgmd::Error& e) {
        t_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        t_last_error = e.what();
        return LGMD_ERR_ARGUMENT;
    }
}

void fill_report(lgmd_report& out, const lgmd::FrameReport& r) {
    out.frame_index = r.frame_index;
    out.time_ms = r.time_ms;
    out.ffi_raw = r.ffi_raw;
    out.ffi_delayed = r.ffi_delayed;
    out.inhibition_bias = r.inhibition_bias;
    out.group_latency_ms = r.group_latency_ms;
    out.excitation_tau_ms = r.excitation_tau_ms;
    out.pooled = r.pooled;
    out.potential = r.potential;
    out.potential_adapted = r.potential_adapted;
    out.spikes = r.spikes;
    out.spike_rate_hz = r.spike_rate_hz;
    out.collision = r.collision ? 1 : 0;
}

lgmd::FrameReport to_core_report(const lgmd_report& r) {
    lgmd::FrameReport out;
    out.frame_index = r.frame_index;
    out.time_ms = r.time_ms;
    out.ffi_raw = r.ffi_raw;
    out.ffi_delayed = r.ffi_delayed;
    out.inhibition_bias = r.inhibition_bias;
    out.group_latency_ms = r.group_latency_ms;
    out.excitation_tau_ms = r.excitation_tau_ms;
    out.pooled = r.pooled;
    out.potential = r.potential;
    out.potential_adapted = r.potential_adapted;
    out.spikes = r.spikes;
    out.spike_rate_hz = r.spike_rate_hz;
    out.collision = r.collision != 0;
    return out;
}

} // namespace

struct lgmd_params_s {
    lgmd::ModelParams params;
};

struct lgmd_model_s {
    lgmd::Model model;
};

struct lgmd_source_s {
    // directory mode
    std::vector<std::string> files;
    std::size_t next = 0;
    // raw-stream mode: frames decode lazily, count unknown up front
    std::unique_ptr<std::ifstream> stream;
    std::string path;
    std::optional<lgmd::Frame> pending;  // first frame, decoded to learn dimensions
    std::int64_t streamed = 0;

    int width = 0;
    int height = 0;
    double fps = 0.0;
    std::int64_t collision_frame = -1;
};

struct lgmd_trace_s {
    lgmd::TraceWriter writer;
};

extern "C" {

const char* lgmd_status_name(lgmd_status status) {
    switch (status) {
    case LGMD_OK: return "ok";
    case LGMD_ERR_ARGUMENT: return "invalid argument";
    case LGMD_ERR_DIMENSION: return "dimension mismatch";
    case LGMD_ERR_IO: return "io error";
    case LGMD_ERR_PARSE: return "parse error";
    case LGMD_ERR_RANGE: return "value out of range";
    case LGMD_END_OF_STREAM: return "end of stream";
    }
    return "unknown";
}

const char* lgmd_last_error(void) { return t_last_error.c_str(); }

lgmd_status lgmd_params_create(lgmd_params** out) {
    if (!out) return fail(LGMD_ERR_ARGUMENT, "params_create: null output");
    return guarded([&] {
        *out = new lgmd_params_s{};
        return LGMD_OK;
    });
}

lgmd_status lgmd_params_load(const char* path, lgmd_params** out) {
    if (!path || !out) return fail(LGMD_ERR_ARGUMENT, "params_load: null argument");
    return guarded([&] {
        auto params = lgmd::load_params(path);
        *out = new lgmd_params_s{params};
        return LGMD_OK;
    });
}

lgmd_status lgmd_params_set(lgmd_params* params, const char* key, const char* value) {
    if (!params || !key || !value) return fail(LGMD_ERR_ARGUMENT, "params_set: null argument");
    return guarded([&] {
        lgmd::ModelParams candidate = params->params;
        lgmd::apply_param(candidate, key, value);
        lgmd::require_valid(candidate);
        params->params = candidate;
        return LGMD_OK;
    });
}

lgmd_status lgmd_params_get(const lgmd_params* params, const char* key, double* out_value) {
    if (!params || !key || !out_value) return fail(LGMD_ERR_ARGUMENT, "params_get: null argument");
    return guarded([&] {
        *out_value = lgmd::get_param(params->params, key);
        return LGMD_OK;
    });
}

void lgmd_params_destroy(lgmd_params* params) { delete params; }

lgmd_status lgmd_model_create(const lgmd_params* params, int32_t width, int32_t height,
                              lgmd_model** out) {
    if (!params || !out) return fail(LGMD_ERR_ARGUMENT, "model_create: null argument");
    return guarded([&] {
        *out = new lgmd_model_s{lgmd::Model(params->params, width, height)};
        return LGMD_OK;
    });
}

lgmd_status lgmd_model_process(lgmd_model* model, const double* luminance, size_t count,
                               lgmd_report* out_report) {
    if (!model || !luminance || !out_report)
        return fail(LGMD_ERR_ARGUMENT, "model_process: null argument");
    return guarded([&] {
        const auto expected = static_cast<size_t>(model->model.width()) *
                              static_cast<size_t>(model->model.height());
        if (count != expected)
            throw lgmd::Error(lgmd::Error::Kind::dimension,
                              "model_process: expected " + std::to_string(expected) +
                                  " values, got " + std::to_string(count));
        lgmd::Frame frame(model->model.width(), model->model.height());
        std::memcpy(frame.data.data(), luminance, count * sizeof(double));
        fill_report(*out_report, model->model.process(frame));
        return LGMD_OK;
    });
}

lgmd_status lgmd_model_process_u8(lgmd_model* model, const uint8_t* luminance, size_t count,
                                  lgmd_report* out_report) {
    if (!model || !luminance || !out_report)
        return fail(LGMD_ERR_ARGUMENT, "model_process: null argument");
    return guarded([&] {
        const auto expected = static_cast<size_t>(model->model.width()) *
                              static_cast<size_t>(model->model.height());
        if (count != expected)
            throw lgmd::Error(lgmd::Error::Kind::dimension,
                              "model_process: expected " + std::to_string(expected) +
                                  " values, got " + std::to_string(count));
        lgmd::Frame frame(model->model.width(), model->model.height());
        for (size_t i = 0; i < count; ++i) frame.data[i] = luminance[i];
        fill_report(*out_report, model->model.process(frame));
        return LGMD_OK;
    });
}

void lgmd_model_reset(lgmd_model* model) {
    if (model) model->model.reset();
}

void lgmd_model_destroy(lgmd_model* model) { delete model; }

lgmd_status lgmd_source_open(const char* path, lgmd_source** out) {
    if (!path || !out) return fail(LGMD_ERR_ARGUMENT, "source_open: null argument");
    return guarded([&] {
        auto source = std::make_unique<lgmd_source_s>();
        if (std::filesystem::is_regular_file(path)) {
            source->path = path;
            source->stream = std::make_unique<std::ifstream>(path, std::ios::binary);
            if (!*source->stream)
                throw lgmd::Error(lgmd::Error::Kind::io, std::string(path) + ": cannot open");
            source->pending = lgmd::read_pnm_payload(*source->stream, source->path);
            source->width = source->pending->width;
            source->height = source->pending->height;
        } else {
            source->files = lgmd::list_frame_files(path);
            if (source->files.empty())
                throw lgmd::Error(lgmd::Error::Kind::io,
                                  std::string(path) + ": no .pgm/.ppm frames found");
            lgmd::Frame first = lgmd::read_pnm(source->files.front());
            source->width = first.width;
            source->height = first.height;

            const auto meta_path = std::filesystem::path(path) / "metadata.txt";
            if (std::filesystem::exists(meta_path)) {
                lgmd::StimulusMetadata meta = lgmd::read_stimulus_metadata(meta_path.string());
                source->fps = meta.fps;
                source->collision_frame = meta.collision_frame;
            }
        }
        *out = source.release();
        return LGMD_OK;
    });
}

int32_t lgmd_source_width(const lgmd_source* source) { return source ? source->width : 0; }
int32_t lgmd_source_height(const lgmd_source* source) { return source ? source->height : 0; }

int64_t lgmd_source_frame_count(const lgmd_source* source) {
    if (!source) return 0;
    if (source->stream) return -1;  // raw stream: unknown until exhausted
    return static_cast<int64_t>(source->files.size());
}

double lgmd_source_fps(const lgmd_source* source) { return source ? source->fps : 0.0; }

int64_t lgmd_source_collision_frame(const lgmd_source* source) {
    return source ? source->collision_frame : -1;
}

lgmd_status lgmd_source_next(lgmd_source* source, double* buffer, size_t count) {
    if (!source || !buffer) return fail(LGMD_ERR_ARGUMENT, "source_next: null argument");
    return guarded([&] {
        lgmd::Frame frame;
        std::string origin;
        if (source->stream) {
            if (source->pending) {
                frame = std::move(*source->pending);
                source->pending.reset();
            } else {
                if (source->stream->peek() == EOF) return LGMD_END_OF_STREAM;
                origin = source->path + " (frame " + std::to_string(source->streamed) + ")";
                frame = lgmd::read_pnm_payload(*source->stream, origin);
            }
            origin = source->path + " (frame " + std::to_string(source->streamed) + ")";
            ++source->streamed;
        } else {
            if (source->next >= source->files.size()) return LGMD_END_OF_STREAM;
            origin = source->files[source->next] + " (frame " +
                     std::to_string(source->next) + ")";
            frame = lgmd::read_pnm(source->files[source->next]);
            ++source->next;
        }
        if (frame.width != source->width || frame.height != source->height)
            throw lgmd::Error(lgmd::Error::Kind::dimension,
                              origin + ": dimensions differ from the first frame");
        if (count != frame.data.size())
            throw lgmd::Error(lgmd::Error::Kind::dimension,
                              "source_next: buffer holds " + std::to_string(count) +
                                  " values, frame has " + std::to_string(frame.data.size()));
        std::memcpy(buffer, frame.data.data(), count * sizeof(double));
        return LGMD_OK;
    });
}

void lgmd_source_close(lgmd_source* source) { delete source; }

lgmd_status lgmd_stimulus_spec_init(lgmd_stimulus_spec* spec, const char* kind) {
    if (!spec || !kind) return fail(LGMD_ERR_ARGUMENT, "stimulus_spec_init: null argument");
    return guarded([&] {
        const lgmd::StimulusSpec defaults =
            lgmd::default_spec(lgmd::stimulus_kind_from_string(kind));
        std::memset(spec, 0, sizeof(*spec));
        std::snprintf(spec->kind, sizeof(spec->kind), "%s", lgmd::to_string(defaults.kind));
        spec->width = defaults.width;
        spec->height = defaults.height;
        spec->fps = defaults.fps;
        spec->duration_s = defaults.duration_s;
        spec->spatial_frequency = defaults.spatial_frequency;
        spec->temporal_frequency = defaults.temporal_frequency;
        spec->background_sf_per_m = defaults.background_sf_per_m;
        spec->background_level = defaults.background_level;
        spec->light_object = defaults.light_object ? 1 : 0;
        spec->object_speed_mps = defaults.object_speed_mps;
        spec->object_size_m = defaults.object_size_m;
        spec->initial_distance_m = defaults.initial_distance_m;
        spec->shift_speed_px = defaults.shift_speed_px;
        spec->pixels_per_meter = defaults.pixels_per_meter;
        spec->focal_px = defaults.focal_px;
        spec->seed = defaults.seed;
        return LGMD_OK;
    });
}

lgmd_status lgmd_stimulus_render(const lgmd_stimulus_spec* spec, const char* out_dir,
                                 int64_t* out_frames, int64_t* out_collision_frame) {
    if (!spec || !out_dir) return fail(LGMD_ERR_ARGUMENT, "stimulus_render: null argument");
    return guarded([&] {
        lgmd::StimulusSpec s;
        s.kind = lgmd::stimulus_kind_from_string(spec->kind);
        s.width = spec->width;
        s.height = spec->height;
        s.fps = spec->fps;
        s.duration_s = spec->duration_s;
        s.spatial_frequency = spec->spatial_frequency;
        s.temporal_frequency = spec->temporal_frequency;
        s.background_sf_per_m = spec->background_sf_per_m;
        s.background_level = spec->background_level;
        s.light_object = spec->light_object != 0;
        s.object_speed_mps = spec->object_speed_mps;
        s.object_size_m = spec->object_size_m;
        s.initial_distance_m = spec->initial_distance_m;
        s.shift_speed_px = spec->shift_speed_px;
        s.pixels_per_meter = spec->pixels_per_meter;
        s.focal_px = spec->focal_px;
        s.background_path = spec->background_path;
        s.seed = spec->seed;

        const lgmd::StimulusSequence seq = lgmd::render(s);
        lgmd::write_frame_sequence(out_dir, seq.frames);
        lgmd::write_stimulus_metadata(
            (std::filesystem::path(out_dir) / "metadata.txt").string(), seq);
        if (out_frames) *out_frames = static_cast<int64_t>(seq.frames.size());
        if (out_collision_frame) *out_collision_frame = seq.collision_frame;
        return LGMD_OK;
    });
}

lgmd_status lgmd_trace_open(const char* path, lgmd_trace** out) {
    if (!path || !out) return fail(LGMD_ERR_ARGUMENT, "trace_open: null argument");
    return guarded([&] {
        *out = new lgmd_trace_s{lgmd::TraceWriter(path)};
        return LGMD_OK;
    });
}

lgmd_status lgmd_trace_write(lgmd_trace* trace, const lgmd_report* report) {
    if (!trace || !report) return fail(LGMD_ERR_ARGUMENT, "trace_write: null argument");
    return guarded([&] {
        trace->writer.write(to_core_report(*report));
        return LGMD_OK;
    });
}

lgmd_status lgmd_trace_close(lgmd_trace* trace) {
    if (!trace) return fail(LGMD_ERR_ARGUMENT, "trace_close: null argument");
    return guarded([&] {
        trace->writer.close();
        delete trace;
        return LGMD_OK;
    });
}

void lgmd_summary_init(lgmd_summary* summary, int64_t collision_frame_truth) {
    if (!summary) return;
    std::memset(summary, 0, sizeof(*summary));
    summary->first_alert_frame = -1;
    summary->collision_frame_truth = collision_frame_truth;
}

void lgmd_summary_add(lgmd_summary* summary, const lgmd_report* report) {
    if (!summary || !report) return;
    lgmd::RunSummary s;
    s.total_frames = summary->total_frames;
    s.total_spikes = summary->total_spikes;
    s.peak_spike_rate_hz = summary->peak_spike_rate_hz;
    s.first_alert_frame = summary->first_alert_frame;
    s.alert_frames = summary->alert_frames;
    s.collision_frame_truth = summary->collision_frame_truth;
    s.add(to_core_report(*report));
    summary->total_frames = s.total_frames;
    summary->total_spikes = s.total_spikes;
    summary->peak_spike_rate_hz = s.peak_spike_rate_hz;
    summary->first_alert_frame = s.first_alert_frame;
    summary->alert_frames = s.alert_frames;
}

void lgmd_summary_finish(lgmd_summary* summary, double frame_interval_ms) {
    if (!summary) return;
    lgmd::RunSummary s;
    s.first_alert_frame = summary->first_alert_frame;
    s.collision_frame_truth = summary->collision_frame_truth;
    s.finish(frame_interval_ms);
    summary->lead_time_ms = s.lead_time_ms;
    summary->has_lead_time = s.has_lead_time ? 1 : 0;
}

} // extern "C"
