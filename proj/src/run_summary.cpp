#include "lgmd/run_summary.hpp"

namespace lgmd {

void RunSummary::add(const FrameReport& report) {
    ++total_frames;
    total_spikes += report.spikes;
    if (report.spike_rate_hz > peak_spike_rate_hz) peak_spike_rate_hz = report.spike_rate_hz;
    if (report.collision) {
        ++alert_frames;
        if (first_alert_frame < 0) first_alert_frame = report.frame_index;
    }
}

void RunSummary::finish(double frame_interval_ms) {
    has_lead_time = collision_frame_truth >= 0 && first_alert_frame >= 0;
    if (has_lead_time)
        lead_time_ms = static_cast<double>(collision_frame_truth - first_alert_frame) *
                       frame_interval_ms;
}

} // namespace lgmd
