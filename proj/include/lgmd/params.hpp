#pragma once

#include <array>
#include <string>

namespace lgmd {

// 3x3 inhibition spread, row-major. Centre weight 1 makes local excitation
// inhibit itself one latency step later.
struct Kernel3x3 {
    std::array<double, 9> w{};

    double at(int dx, int dy) const { return w[static_cast<std::size_t>(dy + 1) * 3 + (dx + 1)]; }
};

constexpr Kernel3x3 default_inhibition_kernel() {
    return Kernel3x3{{1.0 / 8, 1.0 / 4, 1.0 / 8,
                      1.0 / 4, 1.0,     1.0 / 4,
                      1.0 / 8, 1.0 / 4, 1.0 / 8}};
}

// Every constant of the model. Defaults reproduce the published network;
// config keys accepted by load_params() are listed next to each field.
struct ModelParams {
    int persistence_depth = 2;             // n_p: frames of luminance-change persistence
    double persistence_steepness = 1.0;    // u: decay steepness of the persistence coefficients

    double ffi_tau_ms = 10.0;              // tau1: FFI low-pass time constant
    double ffi_threshold = 20.0;           // T_f: FFI level at which inhibition bias reaches 1

    double excitation_tau_min_ms = 60.0;   // tau2_min
    double excitation_tau_max_ms = 180.0;  // tau2_max

    Kernel3x3 inhibition_kernel = default_inhibition_kernel();

    double theta_on = 1.0;                 // theta1
    double theta_off = 1.0;                // theta2
    double theta_product = 1.0;            // theta3: supralinear ON*OFF weight

    double group_tau_base_ms = 10.0;       // tau_g_base: grouping latency at quiet background

    double bias_floor = 0.5;               // sigma1: lower bound of the inhibition bias
    double latency_floor = 0.01;           // sigma2: lower bound of the latency coefficient
    double pool_scale = 1.0;               // sigma3: membrane potential normalisation
    double spike_scale = 10.0;             // sigma4: spike emission steepness
    double spike_threshold = 0.7;          // T_sp: potential at which spiking starts

    int spike_window = 6;                  // N_ts: frames in the spike-frequency window
    double alert_threshold_hz = 30.0;      // T_sf: spikes/s at which a collision is flagged
    double frame_interval_ms = 1000.0 / 30.0;  // tau_i: time between successive frames

    // Grouping layer constants.
    double group_offset = 0.01;            // delta_c: scale offset
    double group_weight = 4.0;             // c_w: scale divisor applied to the peak coefficient
    double group_decay = 0.5;              // c_de: decay factor in the pass threshold
    double group_threshold = 15.0;         // t_de: cells with G*c_de below this are culled

    double sfa_decay = 0.8;                // alpha_sfa: decay of non-rising potentials
};

// Returns an empty string when valid, otherwise "key: reason".
std::string validate(const ModelParams& params);

// Throws Error{range} when invalid.
void require_valid(const ModelParams& params);

} // namespace lgmd
