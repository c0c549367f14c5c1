#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "lgmd/grid.hpp"
#include "lgmd/params.hpp"

namespace lgmd {

// Per-frame observables of the pipeline.
struct FrameReport {
    std::int64_t frame_index = 0;
    double time_ms = 0.0;
    double ffi_raw = 0.0;              // F: mean absolute photoreceptor output
    double ffi_delayed = 0.0;          // F_hat after the low-pass
    double inhibition_bias = 0.5;      // w
    double group_latency_ms = 10.0;    // mediated grouping latency
    double excitation_tau_ms = 180.0;  // mediated excitation latency
    double pooled = 0.0;               // k: sum of grouped excitation
    double potential = 0.5;            // K in [0.5, 1)
    double potential_adapted = 0.5;    // K after spike-frequency adaptation
    int spikes = 0;
    double spike_rate_hz = 0.0;
    bool collision = false;
};

// Mediated quantities derived from the delayed FFI level.
struct Mediation {
    double inhibition_bias;     // w = max(sigma1, F_hat / T_f)
    double group_latency_ms;    // tau_g_base * max(sigma2, 1 - F_hat / T_f)
    double excitation_tau_ms;   // ramps from tau2_min up to tau2_max with activity
};

// --- building blocks, also used directly by the unit tests ---

// alpha = dt / (dt + tau); y <- y + alpha * (x - y)
double low_pass_alpha(double dt_ms, double tau_ms);
double low_pass_step(double state, double input, double dt_ms, double tau_ms);
void low_pass_step(Grid& state, const Grid& input, double dt_ms, double tau_ms);

// Coefficients a_i = 1 / (1 + e^(u*i)), i = 1..depth.
std::vector<double> persistence_coefficients(int depth, double steepness);

// P = L(t) - L(t-1) + sum a_i * P(t-i). history is newest first.
Grid photoreceptor_output(const Frame& current, const Frame& previous,
                          const std::deque<Grid>& history,
                          const std::vector<double>& coefficients);

// F: mean of |P| over all cells.
double mean_abs(const Grid& g);

Mediation mediate(double ffi_delayed, const ModelParams& params);

// Half-wave rectification; on - off reconstructs the input exactly.
void rectify(const Grid& p, Grid& on, Grid& off);

// 3x3 convolution, out-of-bounds neighbours contribute zero.
Grid convolve3x3(const Grid& input, const Kernel3x3& kernel);

// S = max(0, E - bias * I)
Grid compete(const Grid& excitation, const Grid& inhibition, double bias);

// theta1*on + theta2*off + theta3*on*off
Grid combine_on_off(const Grid& on, const Grid& off, const ModelParams& params);

// Grouping: amplify clustered excitation, cull isolated cells.
Grid group(const Grid& s, const ModelParams& params);

double membrane_potential(double pooled, std::size_t cell_count, double pool_scale);

int emit_spikes(double potential, const ModelParams& params);

// Spike-frequency adaptation: a rising potential passes unchanged (the
// looming signature), anything else decays toward the 0.5 baseline.
class Adaptation {
public:
    // decay is alpha_sfa in (0, 1). First call returns the potential as is.
    double apply(double potential, double decay);
    void clear() { primed_ = false; }

private:
    double previous_potential_ = 0.0;
    double previous_adapted_ = 0.0;
    bool primed_ = false;
};

// Sliding window over the last `capacity` spike counts. The divisor stays
// at capacity * frame interval even while the window is still filling, so
// the opening frames cannot fire spuriously.
class SpikeWindow {
public:
    explicit SpikeWindow(int capacity) : capacity_(capacity) {}

    // Pushes one frame's count and returns the window rate in spikes/s.
    double push(int spikes, double frame_interval_ms);
    void clear() { counts_.clear(); }
    int size() const { return static_cast<int>(counts_.size()); }

private:
    int capacity_;
    std::deque<int> counts_;
};

// --- the stateful model ---

class Model {
public:
    // Throws Error{argument|range} on bad dimensions or invalid params.
    Model(ModelParams params, int width, int height);

    // Consumes the next frame. Throws Error{dimension} when the frame does
    // not match the model dimensions. The first frame yields a quiet report.
    FrameReport process(const Frame& frame);

    void reset();

    const ModelParams& params() const { return params_; }
    int width() const { return width_; }
    int height() const { return height_; }
    std::int64_t frames_seen() const { return frame_index_; }

private:
    ModelParams params_;
    int width_;
    int height_;
    std::vector<double> persistence_;

    Frame previous_luminance_;
    std::deque<Grid> photoreceptor_history_;  // newest first, at most n_p entries
    double ffi_delayed_ = 0.0;
    Grid excitation_on_delayed_;
    Grid excitation_off_delayed_;
    Grid group_delayed_;
    Adaptation adaptation_;
    SpikeWindow spike_window_;
    std::int64_t frame_index_ = 0;

    // scratch buffers reused across frames
    Grid on_, off_, inhibition_on_, inhibition_off_;
};

} // namespace lgmd
