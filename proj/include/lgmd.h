/* C interface to the looming-detection library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Functions return LGMD_OK on success; lgmd_last_error() carries the
 * detail message of the most recent failure on the calling thread.
 */
#ifndef LGMD_H
#define LGMD_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define LGMD_API __declspec(dllexport)
#else
#  define LGMD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum lgmd_status {
    LGMD_OK = 0,
    LGMD_ERR_ARGUMENT = 1,   /* bad value or null pointer */
    LGMD_ERR_DIMENSION = 2,  /* frame shape does not match the model */
    LGMD_ERR_IO = 3,         /* file system failure */
    LGMD_ERR_PARSE = 4,      /* malformed file content */
    LGMD_ERR_RANGE = 5,      /* value outside a documented bound */
    LGMD_END_OF_STREAM = 6   /* no more frames in the source */
} lgmd_status;

typedef struct lgmd_params_s lgmd_params;
typedef struct lgmd_model_s lgmd_model;
typedef struct lgmd_source_s lgmd_source;
typedef struct lgmd_trace_s lgmd_trace;

/* Per-frame observables. */
typedef struct lgmd_report {
    int64_t frame_index;
    double time_ms;
    double ffi_raw;           /* mean |luminance change| over the frame */
    double ffi_delayed;       /* low-passed FFI driving the mediation */
    double inhibition_bias;
    double group_latency_ms;
    double excitation_tau_ms;
    double pooled;            /* summed grouped excitation */
    double potential;         /* membrane potential, [0.5, 1) */
    double potential_adapted; /* after spike-frequency adaptation */
    int32_t spikes;
    double spike_rate_hz;
    int32_t collision;        /* 0/1 */
} lgmd_report;

/* Aggregates of one run. first_alert_frame and collision_frame_truth are
 * -1 when absent; lead_time_ms is valid only when has_lead_time != 0. */
typedef struct lgmd_summary {
    int64_t total_frames;
    int64_t total_spikes;
    double peak_spike_rate_hz;
    int64_t first_alert_frame;
    int64_t alert_frames;
    int64_t collision_frame_truth;
    double lead_time_ms;
    int32_t has_lead_time;
} lgmd_summary;

/* Synthetic stimulus description; lgmd_stimulus_spec_init fills per-kind
 * defaults. kind is one of: grating, looming_in_grating, panoramic_loom,
 * panoramic_recede, panoramic_translate, panoramic_shift_only. */
typedef struct lgmd_stimulus_spec {
    char kind[32];
    int32_t width, height;
    double fps;
    double duration_s;
    double spatial_frequency;    /* cycles/pixel, pure gratings */
    double temporal_frequency;   /* Hz */
    double background_sf_per_m;  /* background grating, cycles/metre */
    double background_level;     /* mean luminance of the looming-run grating */
    int32_t light_object;        /* 1 light square, 0 dark */
    double object_speed_mps;
    double object_size_m;
    double initial_distance_m;
    double shift_speed_px;
    double pixels_per_meter;
    double focal_px;
    char background_path[1024];  /* optional PGM panorama */
    uint64_t seed;
} lgmd_stimulus_spec;

LGMD_API const char* lgmd_status_name(lgmd_status status);
LGMD_API const char* lgmd_last_error(void);

/* --- model parameters --- */
LGMD_API lgmd_status lgmd_params_create(lgmd_params** out);
LGMD_API lgmd_status lgmd_params_load(const char* path, lgmd_params** out);
LGMD_API lgmd_status lgmd_params_set(lgmd_params* params, const char* key, const char* value);
LGMD_API lgmd_status lgmd_params_get(const lgmd_params* params, const char* key, double* out_value);
LGMD_API void lgmd_params_destroy(lgmd_params* params);

/* --- model --- */
LGMD_API lgmd_status lgmd_model_create(const lgmd_params* params, int32_t width, int32_t height,
                                       lgmd_model** out);
/* luminance: row-major width*height values in [0, 255]. */
LGMD_API lgmd_status lgmd_model_process(lgmd_model* model, const double* luminance,
                                        size_t count, lgmd_report* out_report);
LGMD_API lgmd_status lgmd_model_process_u8(lgmd_model* model, const uint8_t* luminance,
                                           size_t count, lgmd_report* out_report);
LGMD_API void lgmd_model_reset(lgmd_model* model);
LGMD_API void lgmd_model_destroy(lgmd_model* model);

/* --- frame sources (directory of PGM/PPM frames) --- */
LGMD_API lgmd_status lgmd_source_open(const char* directory, lgmd_source** out);
LGMD_API int32_t lgmd_source_width(const lgmd_source* source);
LGMD_API int32_t lgmd_source_height(const lgmd_source* source);
LGMD_API int64_t lgmd_source_frame_count(const lgmd_source* source);
/* From the metadata sidecar; 0 / -1 when unknown. */
LGMD_API double lgmd_source_fps(const lgmd_source* source);
LGMD_API int64_t lgmd_source_collision_frame(const lgmd_source* source);
/* Fills buffer (count must be width*height); LGMD_END_OF_STREAM when done. */
LGMD_API lgmd_status lgmd_source_next(lgmd_source* source, double* buffer, size_t count);
LGMD_API void lgmd_source_close(lgmd_source* source);

/* --- synthetic stimuli --- */
LGMD_API lgmd_status lgmd_stimulus_spec_init(lgmd_stimulus_spec* spec, const char* kind);
/* Renders frame_%06d.pgm plus metadata.txt into out_dir. */
LGMD_API lgmd_status lgmd_stimulus_render(const lgmd_stimulus_spec* spec, const char* out_dir,
                                          int64_t* out_frames, int64_t* out_collision_frame);

/* --- trace CSV --- */
LGMD_API lgmd_status lgmd_trace_open(const char* path, lgmd_trace** out);
LGMD_API lgmd_status lgmd_trace_write(lgmd_trace* trace, const lgmd_report* report);
LGMD_API lgmd_status lgmd_trace_close(lgmd_trace* trace);

/* --- run summaries --- */
LGMD_API void lgmd_summary_init(lgmd_summary* summary, int64_t collision_frame_truth);
LGMD_API void lgmd_summary_add(lgmd_summary* summary, const lgmd_report* report);
LGMD_API void lgmd_summary_finish(lgmd_summary* summary, double frame_interval_ms);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* LGMD_H */
