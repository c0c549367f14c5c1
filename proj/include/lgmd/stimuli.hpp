#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lgmd/grid.hpp"

namespace lgmd {

enum class StimulusKind {
    grating,
    looming_in_grating,
    panoramic_loom,
    panoramic_recede,
    panoramic_translate,
    panoramic_shift_only,
};

const char* to_string(StimulusKind kind);
StimulusKind stimulus_kind_from_string(const std::string& name);  // throws Error{argument}

// Parametric description of a synthetic sequence. Rendering is pure:
// identical spec (seed included) gives identical frames.
struct StimulusSpec {
    StimulusKind kind = StimulusKind::grating;
    int width = 380;
    int height = 334;
    double fps = 30.0;
    double duration_s = 4.0;

    // gratings
    double spatial_frequency = 0.05;     // cycles per pixel (pure grating)
    double temporal_frequency = 2.0;     // Hz
    double background_sf_per_m = 60.0;   // grating behind a looming object, cycles per metre
    double background_level = 110.0;     // mean luminance of the looming-run grating; driving
                                         // scenes sit below mid-grey, so a light object carries
                                         // more contrast than a dark one

    // object
    bool light_object = false;           // dark (0) or light (255) square
    double object_speed_mps = 0.108;
    double object_size_m = 0.04;         // edge length
    double initial_distance_m = 0.65;

    // panoramic backgrounds
    double shift_speed_px = 2.0;         // viewport slide per frame
    std::string background_path;         // optional PGM panorama; generated when empty

    // scene projection
    double pixels_per_meter = 1000.0;    // maps cycles/m of grating stimuli onto pixels
    double focal_px = 300.0;             // perspective scale for object size on screen

    std::uint64_t seed = 1;
};

// Sensible per-kind dimensions and durations (panoramic scenes are wider,
// looming runs last until contact).
StimulusSpec default_spec(StimulusKind kind);

struct StimulusSequence {
    std::vector<Frame> frames;
    double fps = 30.0;
    std::int64_t collision_frame = -1;   // index of the truncation frame, -1 when never reached
    StimulusSpec spec;
};

// Renders the sequence described by the spec. Throws Error{argument} on
// invalid parameters (non-positive SF/TF, background too narrow, ...).
StimulusSequence render(const StimulusSpec& spec);

// Half edge length in pixels of the approaching square at time t.
double looming_half_size_px(const StimulusSpec& spec, double t_s);

// Generated panoramic background: octaves of smooth value noise with a
// roughly 1/f amplitude spectrum, normalised to [10, 245].
Grid natural_texture(int width, int height, std::uint64_t seed);

} // namespace lgmd
