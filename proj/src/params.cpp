#include "lgmd/params.hpp"

#include <cmath>

#include "lgmd/error.hpp"

namespace lgmd {

namespace {

bool positive(double v) { return std::isfinite(v) && v > 0.0; }

} // namespace

std::string validate(const ModelParams& p) {
    if (p.persistence_depth < 0) return "n_p: must be >= 0";
    if (!positive(p.persistence_steepness)) return "u: must be > 0";
    if (!positive(p.ffi_tau_ms)) return "tau1: must be > 0";
    if (!positive(p.ffi_threshold)) return "T_f: must be > 0";
    if (!positive(p.excitation_tau_min_ms)) return "tau2_min: must be > 0";
    if (!positive(p.excitation_tau_max_ms)) return "tau2_max: must be > 0";
    if (p.excitation_tau_min_ms > p.excitation_tau_max_ms)
        return "tau2_min: must be <= tau2_max";
    if (!positive(p.group_tau_base_ms)) return "tau_g_base: must be > 0";
    if (!(p.bias_floor > 0.0 && p.bias_floor <= 1.0)) return "sigma1: must be in (0, 1]";
    if (!(p.latency_floor > 0.0 && p.latency_floor < 1.0)) return "sigma2: must be in (0, 1)";
    if (!positive(p.pool_scale)) return "sigma3: must be > 0";
    if (!positive(p.spike_scale)) return "sigma4: must be > 0";
    if (!(p.spike_threshold > 0.5 && p.spike_threshold < 1.0))
        return "T_sp: must be in (0.5, 1)";
    if (p.spike_window < 1) return "N_ts: must be >= 1";
    if (!positive(p.alert_threshold_hz)) return "T_sf: must be > 0";
    if (!positive(p.frame_interval_ms)) return "tau_i: must be > 0";
    if (!positive(p.group_offset)) return "delta_c: must be > 0";
    if (!positive(p.group_weight)) return "c_w: must be > 0";
    if (!positive(p.group_decay)) return "c_de: must be > 0";
    if (!(std::isfinite(p.group_threshold) && p.group_threshold >= 0.0))
        return "t_de: must be >= 0";
    if (!(p.sfa_decay > 0.0 && p.sfa_decay < 1.0)) return "alpha_sfa: must be in (0, 1)";
    for (double v : {p.theta_on, p.theta_off, p.theta_product})
        if (!std::isfinite(v)) return "theta: must be finite";
    for (double v : p.inhibition_kernel.w)
        if (!std::isfinite(v)) return "W: must be finite";
    return {};
}

void require_valid(const ModelParams& params) {
    std::string problem = validate(params);
    if (!problem.empty()) throw Error(Error::Kind::range, problem);
}

} // namespace lgmd
