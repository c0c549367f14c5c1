#pragma once

#include <cstdint>

#include "lgmd/model.hpp"

namespace lgmd {

// Aggregate view of one run, accumulated frame by frame.
struct RunSummary {
    std::int64_t total_frames = 0;
    std::int64_t total_spikes = 0;
    double peak_spike_rate_hz = 0.0;
    std::int64_t first_alert_frame = -1;
    std::int64_t alert_frames = 0;
    std::int64_t collision_frame_truth = -1;
    double lead_time_ms = 0.0;     // valid only when has_lead_time
    bool has_lead_time = false;

    void add(const FrameReport& report);
    // Computes lead time from the truth frame once all frames are in.
    void finish(double frame_interval_ms);
};

} // namespace lgmd
