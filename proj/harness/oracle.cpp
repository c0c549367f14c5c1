#include "oracle.hpp"

#include <cmath>
#include <cstddef>

namespace harness {

namespace {

using Mat = std::vector<std::vector<double>>;

Mat zeros(int rows, int cols) {
    return Mat(static_cast<std::size_t>(rows), std::vector<double>(static_cast<std::size_t>(cols), 0.0));
}

} // namespace

std::vector<lgmd::FrameReport> oracle_process(const std::vector<lgmd::Frame>& frames,
                                              const lgmd::ModelParams& p) {
    std::vector<lgmd::FrameReport> reports;
    if (frames.empty()) return reports;

    const int rows = frames.front().height;
    const int cols = frames.front().width;
    const double n_cell = static_cast<double>(rows) * cols;
    const double dt = p.frame_interval_ms;

    // decay coefficients a_i = 1 / (1 + e^(u*i))
    std::vector<double> a(static_cast<std::size_t>(p.persistence_depth));
    for (int i = 1; i <= p.persistence_depth; ++i)
        a[static_cast<std::size_t>(i - 1)] = 1.0 / (1.0 + std::exp(p.persistence_steepness * i));

    Mat prev_lum = zeros(rows, cols);
    std::vector<Mat> p_history;  // newest first
    double f_hat = 0.0;
    Mat e_on_hat = zeros(rows, cols);
    Mat e_off_hat = zeros(rows, cols);
    Mat g_delayed = zeros(rows, cols);
    double k_prev = 0.0, adapted_prev = 0.0;
    bool have_prev_k = false;
    std::vector<int> spike_window;

    for (std::size_t t = 0; t < frames.size(); ++t) {
        const lgmd::Frame& frame = frames[t];

        // photoreceptors with persistence; frame 0 is all zero by convention
        Mat P = zeros(rows, cols);
        if (t > 0) {
            for (int y = 0; y < rows; ++y)
                for (int x = 0; x < cols; ++x) {
                    double v = frame.at(x, y) - prev_lum[y][x];
                    for (std::size_t i = 0; i < p_history.size(); ++i)
                        v += a[i] * p_history[i][y][x];
                    P[y][x] = v;
                }
        }
        for (int y = 0; y < rows; ++y)
            for (int x = 0; x < cols; ++x)
                prev_lum[y][x] = frame.at(x, y);
        p_history.insert(p_history.begin(), P);
        if (static_cast<int>(p_history.size()) > p.persistence_depth) p_history.pop_back();

        // frame 1 primes the delay lines to steady state
        const bool prime = t == 1;

        // FFI and its low-pass delay
        double f = 0.0;
        for (int y = 0; y < rows; ++y)
            for (int x = 0; x < cols; ++x) f += std::abs(P[y][x]);
        f /= n_cell;
        double alpha1 = dt / (dt + p.ffi_tau_ms);
        f_hat = prime ? f : f_hat + alpha1 * (f - f_hat);

        // mediation; the excitation-delay memory lengthens with activity
        double ratio = f_hat / p.ffi_threshold;
        double w = std::max(p.bias_floor, ratio);
        double tau_g = p.group_tau_base_ms * std::max(p.latency_floor, 1.0 - ratio);
        double tau2 = p.excitation_tau_min_ms +
                      (p.excitation_tau_max_ms - p.excitation_tau_min_ms) * std::min(1.0, ratio);

        // half-wave rectification
        Mat p_on = zeros(rows, cols), p_off = zeros(rows, cols);
        for (int y = 0; y < rows; ++y)
            for (int x = 0; x < cols; ++x) {
                p_on[y][x] = std::max(0.0, P[y][x]);
                p_off[y][x] = -std::min(0.0, P[y][x]);
            }

        // inhibition convolves the delayed excitation of the previous
        // frames; the delay state advances afterwards. At onset both
        // polarity delay lines are primed with the local change magnitude
        // floored at the wide-field mean.
        if (prime) {
            for (int y = 0; y < rows; ++y)
                for (int x = 0; x < cols; ++x) {
                    e_on_hat[y][x] = std::max(p_on[y][x] + p_off[y][x], f);
                    e_off_hat[y][x] = e_on_hat[y][x];
                }
        }
        Mat i_on = zeros(rows, cols), i_off = zeros(rows, cols);
        for (int y = 0; y < rows; ++y)
            for (int x = 0; x < cols; ++x) {
                double son = 0.0, soff = 0.0;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        int yy = y + dy, xx = x + dx;
                        if (yy < 0 || yy >= rows || xx < 0 || xx >= cols) continue;
                        double weight = p.inhibition_kernel.at(dx, dy);
                        son += e_on_hat[yy][xx] * weight;
                        soff += e_off_hat[yy][xx] * weight;
                    }
                i_on[y][x] = son;
                i_off[y][x] = soff;
            }
        double alpha2 = dt / (dt + tau2);
        if (!prime) {
            for (int y = 0; y < rows; ++y)
                for (int x = 0; x < cols; ++x) {
                    e_on_hat[y][x] += alpha2 * (p_on[y][x] - e_on_hat[y][x]);
                    e_off_hat[y][x] += alpha2 * (p_off[y][x] - e_off_hat[y][x]);
                }
        }

        // competition, then the supralinear ON/OFF combination
        Mat s = zeros(rows, cols);
        for (int y = 0; y < rows; ++y)
            for (int x = 0; x < cols; ++x) {
                double s_on = std::max(0.0, p_on[y][x] - w * i_on[y][x]);
                double s_off = std::max(0.0, p_off[y][x] - w * i_off[y][x]);
                s[y][x] = p.theta_on * s_on + p.theta_off * s_off +
                          p.theta_product * s_on * s_off;
            }

        // grouping: box-mean passing coefficient, peak-scaled, culled below threshold
        Mat ce = zeros(rows, cols);
        double ce_max = 0.0;
        for (int y = 0; y < rows; ++y)
            for (int x = 0; x < cols; ++x) {
                double sum = 0.0;
                for (int dy = -1; dy <= 1; ++dy)
                    for (int dx = -1; dx <= 1; ++dx) {
                        int yy = y + dy, xx = x + dx;
                        if (yy < 0 || yy >= rows || xx < 0 || xx >= cols) continue;
                        sum += s[yy][xx];
                    }
                ce[y][x] = sum / 9.0;
                if (ce[y][x] > ce_max) ce_max = ce[y][x];
            }
        double omega = p.group_offset + ce_max / p.group_weight;
        Mat g = zeros(rows, cols);
        for (int y = 0; y < rows; ++y)
            for (int x = 0; x < cols; ++x) {
                double raw = s[y][x] * ce[y][x] / omega;
                g[y][x] = (raw * p.group_decay >= p.group_threshold) ? raw : 0.0;
            }

        // dynamic grouping latency
        double alpha_g = dt / (dt + tau_g);
        for (int y = 0; y < rows; ++y)
            for (int x = 0; x < cols; ++x)
                g_delayed[y][x] += alpha_g * (g[y][x] - g_delayed[y][x]);

        // pooling and the sigmoid membrane potential, held below 1.0
        double k = 0.0;
        for (int y = 0; y < rows; ++y)
            for (int x = 0; x < cols; ++x) k += g_delayed[y][x];
        double potential = 1.0 / (1.0 + std::exp(-k / (n_cell * p.pool_scale)));
        potential = std::min(potential, std::nextafter(1.0, 0.0));

        // spike frequency adaptation: rising potentials pass, others decay
        double adapted;
        if (!have_prev_k) {
            adapted = potential;
            have_prev_k = true;
        } else {
            double delta = potential - k_prev;
            if (delta > 0.0)
                adapted = potential;
            else
                adapted = std::max(0.5, p.sfa_decay * (adapted_prev + delta));
        }
        k_prev = potential;
        adapted_prev = adapted;

        // spike emission and the windowed collision decision
        int spikes = static_cast<int>(std::floor(std::exp(p.spike_scale * (adapted - p.spike_threshold))));
        spike_window.push_back(spikes);
        if (static_cast<int>(spike_window.size()) > p.spike_window)
            spike_window.erase(spike_window.begin());
        double spike_sum = 0.0;
        for (int v : spike_window) spike_sum += v;
        double rate = spike_sum * 1000.0 / (p.spike_window * p.frame_interval_ms);
        bool collision = rate >= p.alert_threshold_hz;

        lgmd::FrameReport r;
        r.frame_index = static_cast<std::int64_t>(t);
        r.time_ms = static_cast<double>(t) * dt;
        r.ffi_raw = f;
        r.ffi_delayed = f_hat;
        r.inhibition_bias = w;
        r.group_latency_ms = tau_g;
        r.excitation_tau_ms = tau2;
        r.pooled = k;
        r.potential = potential;
        r.potential_adapted = adapted;
        r.spikes = spikes;
        r.spike_rate_hz = rate;
        r.collision = collision;
        reports.push_back(r);
    }
    return reports;
}

} // namespace harness
