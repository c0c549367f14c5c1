#include "lgmd/stimuli.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "lgmd/error.hpp"
#include "lgmd/pgm_io.hpp"

namespace lgmd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double lattice_value(std::uint64_t seed, int octave, int xi, int yi) {
    std::uint64_t h = splitmix64(seed ^ (0xABCD0000ull + static_cast<std::uint64_t>(octave)));
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(xi)));
    h = splitmix64(h ^ static_cast<std::uint64_t>(static_cast<std::uint32_t>(yi)));
    return static_cast<double>(h >> 11) * (1.0 / 9007199254740992.0);
}

Frame grating_frame(int width, int height, double sf_cpp, double tf_hz, double t_s,
                    double mean, double amplitude) {
    Frame f(width, height);
    for (int x = 0; x < width; ++x) {
        const double v = mean + amplitude * std::sin(kTwoPi * (sf_cpp * x - tf_hz * t_s));
        for (int y = 0; y < height; ++y) f.at(x, y) = v;
    }
    return f;
}

void fill_square_at(Frame& frame, double cx, double cy, double half_px, double value) {
    const int x0 = std::max(0, static_cast<int>(std::llround(cx - half_px)));
    const int x1 = std::min(frame.width, static_cast<int>(std::llround(cx + half_px)));
    const int y0 = std::max(0, static_cast<int>(std::llround(cy - half_px)));
    const int y1 = std::min(frame.height, static_cast<int>(std::llround(cy + half_px)));
    for (int y = y0; y < y1; ++y)
        for (int x = x0; x < x1; ++x) frame.at(x, y) = value;
}

void fill_centered_square(Frame& frame, double half_px, double value) {
    fill_square_at(frame, frame.width / 2.0, frame.height / 2.0, half_px, value);
}

int requested_frame_count(const StimulusSpec& spec) {
    const int n = static_cast<int>(std::llround(spec.fps * spec.duration_s));
    if (n < 1) throw Error(Error::Kind::argument, "stimulus: duration renders no frames");
    return n;
}

void require_common(const StimulusSpec& spec) {
    if (spec.width <= 0 || spec.height <= 0)
        throw Error(Error::Kind::argument, "stimulus: dimensions must be positive");
    if (!(spec.fps > 0.0)) throw Error(Error::Kind::argument, "stimulus: fps must be > 0");
    if (!(spec.duration_s > 0.0))
        throw Error(Error::Kind::argument, "stimulus: duration must be > 0");
}

// Index of the last frame strictly before contact, or -1 when the
// approach outlasts the sequence.
int contact_frame(const StimulusSpec& spec, int requested) {
    if (!(spec.object_speed_mps > 0.0))
        throw Error(Error::Kind::argument, "stimulus: object speed must be > 0");
    if (!(spec.initial_distance_m > 0.0))
        throw Error(Error::Kind::argument, "stimulus: initial distance must be > 0");
    const double t_contact = spec.initial_distance_m / spec.object_speed_mps;
    const int k = static_cast<int>(std::ceil(t_contact * spec.fps - 1e-9)) - 1;
    return (k <= requested - 1) ? k : -1;
}

double object_value(const StimulusSpec& spec) { return spec.light_object ? 255.0 : 0.0; }

StimulusSequence render_looming_in_grating(const StimulusSpec& spec) {
    const double sf_cpp = spec.background_sf_per_m / spec.pixels_per_meter;
    if (!(sf_cpp > 0.0))
        throw Error(Error::Kind::argument, "stimulus: background spatial frequency must be > 0");
    if (!(spec.temporal_frequency > 0.0))
        throw Error(Error::Kind::argument, "stimulus: temporal frequency must be > 0");
    if (spec.background_level < 0.0 || spec.background_level > 255.0)
        throw Error(Error::Kind::argument, "stimulus: background level outside [0, 255]");
    const int requested = requested_frame_count(spec);
    const int collision = contact_frame(spec, requested);
    const int last = (collision >= 0) ? collision : requested - 1;

    // full-contrast drift around the chosen mean, clipped by the range
    const double amplitude = std::min(spec.background_level, 255.0 - spec.background_level);

    StimulusSequence seq;
    seq.fps = spec.fps;
    seq.spec = spec;
    seq.collision_frame = collision;
    seq.frames.reserve(static_cast<std::size_t>(last) + 1);
    for (int k = 0; k <= last; ++k) {
        const double t = k / spec.fps;
        Frame f = grating_frame(spec.width, spec.height, sf_cpp, spec.temporal_frequency, t,
                                spec.background_level, amplitude);
        fill_centered_square(f, looming_half_size_px(spec, t), object_value(spec));
        seq.frames.push_back(std::move(f));
    }
    return seq;
}

Grid load_or_generate_panorama(const StimulusSpec& spec, int needed_width) {
    if (!spec.background_path.empty()) {
        Grid pano = read_pnm(spec.background_path);
        if (pano.width < needed_width)
            throw Error(Error::Kind::argument,
                        "stimulus: background " + spec.background_path + " is " +
                            std::to_string(pano.width) + " px wide, needs " +
                            std::to_string(needed_width));
        if (pano.height < spec.height)
            throw Error(Error::Kind::argument, "stimulus: background shorter than the viewport");
        return pano;
    }
    return natural_texture(needed_width, spec.height, spec.seed);
}

StimulusSequence render_panoramic(const StimulusSpec& spec) {
    if (spec.shift_speed_px < 0.0)
        throw Error(Error::Kind::argument, "stimulus: shift speed must be >= 0");
    const int requested = requested_frame_count(spec);

    const bool looming = spec.kind == StimulusKind::panoramic_loom ||
                         spec.kind == StimulusKind::panoramic_recede;
    int collision = -1;
    int count = requested;
    if (looming) {
        collision = contact_frame(spec, requested);
        if (collision >= 0) count = collision + 1;
    }

    const int max_offset = static_cast<int>(std::llround(spec.shift_speed_px * (count - 1)));
    const Grid pano = load_or_generate_panorama(spec, spec.width + max_offset + 1);

    // translating object: fixed apparent size and speed at the initial distance
    const double translate_half =
        spec.focal_px * (spec.object_size_m / 2.0) / spec.initial_distance_m;
    const double translate_px_per_frame =
        spec.focal_px * spec.object_speed_mps / spec.initial_distance_m / spec.fps;

    StimulusSequence seq;
    seq.fps = spec.fps;
    seq.spec = spec;
    seq.frames.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        const double t = k / spec.fps;
        const int offset = static_cast<int>(std::llround(spec.shift_speed_px * k));
        Frame f(spec.width, spec.height);
        for (int y = 0; y < spec.height; ++y)
            for (int x = 0; x < spec.width; ++x) f.at(x, y) = pano.at(x + offset, y);

        switch (spec.kind) {
        case StimulusKind::panoramic_loom:
        case StimulusKind::panoramic_recede:
            fill_centered_square(f, looming_half_size_px(spec, t), object_value(spec));
            break;
        case StimulusKind::panoramic_translate: {
            const double margin = translate_half + 4.0;
            double cx = margin + translate_px_per_frame * k;
            cx = std::min(cx, spec.width - margin);  // parks at the far edge if overdriven
            fill_square_at(f, cx, spec.height / 2.0, translate_half, object_value(spec));
            break;
        }
        default:
            break;
        }
        seq.frames.push_back(std::move(f));
    }

    if (spec.kind == StimulusKind::panoramic_recede) {
        std::reverse(seq.frames.begin(), seq.frames.end());
        seq.collision_frame = -1;
    } else {
        seq.collision_frame = collision;
    }
    return seq;
}

} // namespace

const char* to_string(StimulusKind kind) {
    switch (kind) {
    case StimulusKind::grating: return "grating";
    case StimulusKind::looming_in_grating: return "looming_in_grating";
    case StimulusKind::panoramic_loom: return "panoramic_loom";
    case StimulusKind::panoramic_recede: return "panoramic_recede";
    case StimulusKind::panoramic_translate: return "panoramic_translate";
    case StimulusKind::panoramic_shift_only: return "panoramic_shift_only";
    }
    return "unknown";
}

StimulusKind stimulus_kind_from_string(const std::string& name) {
    for (StimulusKind kind : {StimulusKind::grating, StimulusKind::looming_in_grating,
                              StimulusKind::panoramic_loom, StimulusKind::panoramic_recede,
                              StimulusKind::panoramic_translate,
                              StimulusKind::panoramic_shift_only})
        if (name == to_string(kind)) return kind;
    throw Error(Error::Kind::argument, "unknown stimulus kind: " + name);
}

StimulusSpec default_spec(StimulusKind kind) {
    StimulusSpec spec;
    spec.kind = kind;
    switch (kind) {
    case StimulusKind::grating:
        spec.width = 380;
        spec.height = 334;
        spec.duration_s = 4.0;
        break;
    case StimulusKind::looming_in_grating:
        spec.width = 380;
        spec.height = 334;
        spec.duration_s = 6.5;
        break;
    default:
        spec.width = 540;
        spec.height = 270;
        spec.duration_s = (kind == StimulusKind::panoramic_loom ||
                           kind == StimulusKind::panoramic_recede)
                              ? 11.5
                              : 8.0;
        spec.object_size_m = 0.1;
        spec.initial_distance_m = 1.2;
        break;
    }
    return spec;
}

double looming_half_size_px(const StimulusSpec& spec, double t_s) {
    const double distance =
        std::max(spec.initial_distance_m - spec.object_speed_mps * t_s, 1e-6);
    return spec.focal_px * (spec.object_size_m / 2.0) / distance;
}

Grid natural_texture(int width, int height, std::uint64_t seed) {
    Grid out(width, height);
    const int octaves = 5;
    for (int o = 0; o < octaves; ++o) {
        const double spacing = static_cast<double>(std::max(4, 64 >> o));
        const double amplitude = 1.0 / static_cast<double>(1 << o);
        for (int y = 0; y < height; ++y) {
            const double fy = y / spacing;
            const int y0 = static_cast<int>(std::floor(fy));
            const double ty = fy - y0;
            for (int x = 0; x < width; ++x) {
                const double fx = x / spacing;
                const int x0 = static_cast<int>(std::floor(fx));
                const double tx = fx - x0;
                const double v00 = lattice_value(seed, o, x0, y0);
                const double v10 = lattice_value(seed, o, x0 + 1, y0);
                const double v01 = lattice_value(seed, o, x0, y0 + 1);
                const double v11 = lattice_value(seed, o, x0 + 1, y0 + 1);
                const double top = v00 + (v10 - v00) * tx;
                const double bottom = v01 + (v11 - v01) * tx;
                out.at(x, y) += amplitude * (top + (bottom - top) * ty);
            }
        }
    }
    const auto [lo_it, hi_it] = std::minmax_element(out.data.begin(), out.data.end());
    const double lo = *lo_it, hi = *hi_it;
    const double span = (hi > lo) ? hi - lo : 1.0;
    for (double& v : out.data) v = 10.0 + (v - lo) / span * 235.0;
    return out;
}

StimulusSequence render(const StimulusSpec& spec) {
    require_common(spec);
    switch (spec.kind) {
    case StimulusKind::grating: {
        if (!(spec.spatial_frequency > 0.0))
            throw Error(Error::Kind::argument, "stimulus: spatial frequency must be > 0");
        if (!(spec.temporal_frequency > 0.0))
            throw Error(Error::Kind::argument, "stimulus: temporal frequency must be > 0");
        const int count = requested_frame_count(spec);
        StimulusSequence seq;
        seq.fps = spec.fps;
        seq.spec = spec;
        seq.frames.reserve(static_cast<std::size_t>(count));
        for (int k = 0; k < count; ++k)
            seq.frames.push_back(grating_frame(spec.width, spec.height, spec.spatial_frequency,
                                               spec.temporal_frequency, k / spec.fps, 127.5,
                                               127.5));
        return seq;
    }
    case StimulusKind::looming_in_grating:
        return render_looming_in_grating(spec);
    case StimulusKind::panoramic_loom:
    case StimulusKind::panoramic_recede:
    case StimulusKind::panoramic_translate:
    case StimulusKind::panoramic_shift_only:
        return render_panoramic(spec);
    }
    throw Error(Error::Kind::argument, "stimulus: unknown kind");
}

} // namespace lgmd
