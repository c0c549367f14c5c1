#include "lgmd/model.hpp"

#include <algorithm>
#include <cmath>

#include "lgmd/error.hpp"

namespace lgmd {

double low_pass_alpha(double dt_ms, double tau_ms) {
    return dt_ms / (dt_ms + tau_ms);
}

double low_pass_step(double state, double input, double dt_ms, double tau_ms) {
    return state + low_pass_alpha(dt_ms, tau_ms) * (input - state);
}

void low_pass_step(Grid& state, const Grid& input, double dt_ms, double tau_ms) {
    const double alpha = low_pass_alpha(dt_ms, tau_ms);
    const std::size_t n = state.data.size();
    for (std::size_t i = 0; i < n; ++i)
        state.data[i] += alpha * (input.data[i] - state.data[i]);
}

std::vector<double> persistence_coefficients(int depth, double steepness) {
    std::vector<double> a(static_cast<std::size_t>(depth));
    for (int i = 1; i <= depth; ++i)
        a[static_cast<std::size_t>(i - 1)] = 1.0 / (1.0 + std::exp(steepness * i));
    return a;
}

Grid photoreceptor_output(const Frame& current, const Frame& previous,
                          const std::deque<Grid>& history,
                          const std::vector<double>& coefficients) {
    if (!current.same_shape(previous))
        throw Error(Error::Kind::dimension, "photoreceptor: frame shape changed");
    Grid p(current.width, current.height);
    const std::size_t n = p.data.size();
    for (std::size_t i = 0; i < n; ++i)
        p.data[i] = current.data[i] - previous.data[i];
    std::size_t terms = std::min(history.size(), coefficients.size());
    for (std::size_t h = 0; h < terms; ++h) {
        const Grid& past = history[h];
        const double a = coefficients[h];
        for (std::size_t i = 0; i < n; ++i)
            p.data[i] += a * past.data[i];
    }
    return p;
}

double mean_abs(const Grid& g) {
    double sum = 0.0;
    for (double v : g.data) sum += std::abs(v);
    return sum / static_cast<double>(g.data.size());
}

Mediation mediate(double ffi_delayed, const ModelParams& params) {
    const double ratio = ffi_delayed / params.ffi_threshold;
    Mediation m;
    m.inhibition_bias = std::max(params.bias_floor, ratio);
    m.group_latency_ms = params.group_tau_base_ms * std::max(params.latency_floor, 1.0 - ratio);
    // busier backgrounds lengthen the excitation-delay memory, so
    // inhibition persists across the recurrence period of wide-field
    // patterns instead of fading between their passes
    m.excitation_tau_ms = params.excitation_tau_min_ms +
                          (params.excitation_tau_max_ms - params.excitation_tau_min_ms) *
                              std::min(1.0, ratio);
    return m;
}

void rectify(const Grid& p, Grid& on, Grid& off) {
    if (!on.same_shape(p)) on = Grid(p.width, p.height);
    if (!off.same_shape(p)) off = Grid(p.width, p.height);
    const std::size_t n = p.data.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double v = p.data[i];
        on.data[i] = std::max(0.0, v);
        off.data[i] = -std::min(0.0, v);
    }
}

Grid convolve3x3(const Grid& input, const Kernel3x3& kernel) {
    Grid out(input.width, input.height);
    const int w = input.width, h = input.height;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= h) continue;
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= w) continue;
                    sum += input.at(xx, yy) * kernel.at(dx, dy);
                }
            }
            out.at(x, y) = sum;
        }
    }
    return out;
}

Grid compete(const Grid& excitation, const Grid& inhibition, double bias) {
    if (!excitation.same_shape(inhibition))
        throw Error(Error::Kind::dimension, "compete: grid shapes differ");
    Grid s(excitation.width, excitation.height);
    const std::size_t n = s.data.size();
    for (std::size_t i = 0; i < n; ++i)
        s.data[i] = std::max(0.0, excitation.data[i] - bias * inhibition.data[i]);
    return s;
}

Grid combine_on_off(const Grid& on, const Grid& off, const ModelParams& params) {
    if (!on.same_shape(off))
        throw Error(Error::Kind::dimension, "combine_on_off: grid shapes differ");
    Grid s(on.width, on.height);
    const std::size_t n = s.data.size();
    for (std::size_t i = 0; i < n; ++i)
        s.data[i] = params.theta_on * on.data[i] + params.theta_off * off.data[i] +
                    params.theta_product * on.data[i] * off.data[i];
    return s;
}

Grid group(const Grid& s, const ModelParams& params) {
    const int w = s.width, h = s.height;
    Grid ce(w, h);
    double ce_max = 0.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= h) continue;
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= w) continue;
                    sum += s.at(xx, yy);
                }
            }
            const double v = sum / 9.0;
            ce.at(x, y) = v;
            if (v > ce_max) ce_max = v;
        }
    }
    const double omega = params.group_offset + ce_max / params.group_weight;
    Grid g(w, h);
    const std::size_t n = g.data.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double raw = s.data[i] * ce.data[i] / omega;
        g.data[i] = (raw * params.group_decay >= params.group_threshold) ? raw : 0.0;
    }
    return g;
}

double membrane_potential(double pooled, std::size_t cell_count, double pool_scale) {
    const double k = 1.0 / (1.0 + std::exp(-pooled / (static_cast<double>(cell_count) * pool_scale)));
    // the sigmoid saturates to 1.0 in double precision once the argument
    // passes ~37; keep the documented [0.5, 1) range
    return std::min(k, std::nextafter(1.0, 0.0));
}

int emit_spikes(double potential, const ModelParams& params) {
    return static_cast<int>(
        std::floor(std::exp(params.spike_scale * (potential - params.spike_threshold))));
}

double Adaptation::apply(double potential, double decay) {
    double adapted;
    if (!primed_) {
        adapted = potential;
        primed_ = true;
    } else {
        const double delta = potential - previous_potential_;
        if (delta > 0.0)
            adapted = potential;
        else
            adapted = std::max(0.5, decay * (previous_adapted_ + delta));
    }
    previous_potential_ = potential;
    previous_adapted_ = adapted;
    return adapted;
}

double SpikeWindow::push(int spikes, double frame_interval_ms) {
    counts_.push_back(spikes);
    while (static_cast<int>(counts_.size()) > capacity_) counts_.pop_front();
    double sum = 0.0;
    for (int v : counts_) sum += v;
    return sum * 1000.0 / (capacity_ * frame_interval_ms);
}

Model::Model(ModelParams params, int width, int height)
    : params_(std::move(params)), width_(width), height_(height),
      spike_window_(params_.spike_window) {
    if (width_ <= 0 || height_ <= 0)
        throw Error(Error::Kind::argument, "model: dimensions must be positive");
    require_valid(params_);
    persistence_ = persistence_coefficients(params_.persistence_depth,
                                            params_.persistence_steepness);
    reset();
}

void Model::reset() {
    previous_luminance_ = Grid(width_, height_);
    photoreceptor_history_.clear();
    ffi_delayed_ = 0.0;
    excitation_on_delayed_ = Grid(width_, height_);
    excitation_off_delayed_ = Grid(width_, height_);
    group_delayed_ = Grid(width_, height_);
    adaptation_.clear();
    spike_window_.clear();
    frame_index_ = 0;
}

FrameReport Model::process(const Frame& frame) {
    if (frame.width != width_ || frame.height != height_)
        throw Error(Error::Kind::dimension, "model: frame dimensions do not match");
    const double dt = params_.frame_interval_ms;
    const bool first = frame_index_ == 0;

    Grid p = first ? Grid(width_, height_)
                   : photoreceptor_output(frame, previous_luminance_,
                                          photoreceptor_history_, persistence_);
    previous_luminance_ = frame;
    photoreceptor_history_.push_front(p);
    while (static_cast<int>(photoreceptor_history_.size()) > params_.persistence_depth)
        photoreceptor_history_.pop_back();

    // The first moving frame primes every delay line to its steady state:
    // a pattern present at onset is treated as having been there all along,
    // so nothing fires until genuinely novel excitation appears.
    const bool prime = frame_index_ == 1;

    const double ffi = mean_abs(p);
    ffi_delayed_ = prime ? ffi : low_pass_step(ffi_delayed_, ffi, dt, params_.ffi_tau_ms);

    const Mediation med = mediate(ffi_delayed_, params_);

    rectify(p, on_, off_);

    // Inhibition spreads the delayed excitation of the previous frames;
    // the delay state advances afterwards. Novel excitation therefore
    // escapes inhibition for one latency step while repeating patterns
    // meet inhibition built from their own recent activity.
    if (prime) {
        // an oscillating pattern's phase is unknown at onset, so both
        // polarity delay lines start from the local change magnitude,
        // floored at the wide-field mean to cover momentarily-quiet cells
        excitation_on_delayed_ = Grid(width_, height_);
        for (std::size_t i = 0; i < p.data.size(); ++i)
            excitation_on_delayed_.data[i] = std::max(on_.data[i] + off_.data[i], ffi);
        excitation_off_delayed_ = excitation_on_delayed_;
    }
    inhibition_on_ = convolve3x3(excitation_on_delayed_, params_.inhibition_kernel);
    inhibition_off_ = convolve3x3(excitation_off_delayed_, params_.inhibition_kernel);
    if (!prime) {
        low_pass_step(excitation_on_delayed_, on_, dt, med.excitation_tau_ms);
        low_pass_step(excitation_off_delayed_, off_, dt, med.excitation_tau_ms);
    }

    const Grid s_on = compete(on_, inhibition_on_, med.inhibition_bias);
    const Grid s_off = compete(off_, inhibition_off_, med.inhibition_bias);
    const Grid s = combine_on_off(s_on, s_off, params_);

    const Grid g = group(s, params_);
    low_pass_step(group_delayed_, g, dt, med.group_latency_ms);

    double pooled = 0.0;
    for (double v : group_delayed_.data) pooled += v;
    const double potential = membrane_potential(pooled, group_delayed_.cell_count(),
                                                params_.pool_scale);
    const double adapted = adaptation_.apply(potential, params_.sfa_decay);
    const int spikes = emit_spikes(adapted, params_);

    const double rate = spike_window_.push(spikes, dt);

    FrameReport report;
    report.frame_index = frame_index_;
    report.time_ms = static_cast<double>(frame_index_) * dt;
    report.ffi_raw = ffi;
    report.ffi_delayed = ffi_delayed_;
    report.inhibition_bias = med.inhibition_bias;
    report.group_latency_ms = med.group_latency_ms;
    report.excitation_tau_ms = med.excitation_tau_ms;
    report.pooled = pooled;
    report.potential = potential;
    report.potential_adapted = adapted;
    report.spikes = spikes;
    report.spike_rate_hz = rate;
    report.collision = rate >= params_.alert_threshold_hz;
    ++frame_index_;
    return report;
}

} // namespace lgmd
