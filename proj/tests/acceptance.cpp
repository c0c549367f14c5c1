// Acceptance suite: every criterion prints one PASS/FAIL line; the exit
// code is the number of failed criteria.
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "lgmd/model.hpp"
#include "lgmd/pgm_io.hpp"
#include "lgmd/stimuli.hpp"
#include "lgmd/trace.hpp"

#include "experiment.hpp"
#include "oracle.hpp"

using namespace lgmd;

namespace {

int g_failures = 0;
std::vector<harness::ExperimentResult> g_results;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %d: %s%s%s\n", pass ? "PASS" : "FAIL", criterion, name.c_str(),
                detail.empty() ? "" : " -- ", detail.c_str());
    if (!pass) ++g_failures;
}

bool run_and_collect(const std::string& text, std::string& detail) {
    harness::ExperimentResult result = harness::run_experiment(harness::parse_experiment_text(text));
    g_results.push_back(result);
    detail += (detail.empty() ? "" : "; ") + result.name + ": " +
              (result.errored ? "ERROR " : "") + result.detail;
    return result.pass && !result.errored;
}

// ---- criterion 1: drifting gratings never spike and stay under 0.7 ----
void criterion_grating_immunity() {
    bool pass = true;
    std::string detail;
    const double sfs[] = {0.02, 0.05, 0.1};  // cycles/pixel: coarse, mid, fine
    const double tfs[] = {0.5, 2.0, 5.0};    // Hz: slow, mid, fast drift
    for (double sf : sfs)
        for (double tf : tfs) {
            char text[512];
            std::snprintf(text, sizeof(text),
                          "name = grating_sf%g_tf%g\n"
                          "expectation = silent\n"
                          "max_potential = 0.7\n"
                          "param.T_sf = 30\n"
                          "stim.kind = grating\n"
                          "stim.width = 380\nstim.height = 334\n"
                          "stim.fps = 30\nstim.duration = 4\n"
                          "stim.sf = %g\nstim.tf = %g\n",
                          sf, tf, sf, tf);
            if (!run_and_collect(text, detail)) pass = false;
        }
    report(1, "grating immunity (9 cells, zero spikes, K < 0.7)", pass, detail);
}

// ---- criterion 2: looming over gratings alerts before contact ----
void criterion_looming_in_grating() {
    bool pass = true;
    std::string detail;
    for (const char* polarity : {"dark", "light"})
        for (double sf_bg : {40.0, 60.0, 80.0}) {
            char text[512];
            std::snprintf(text, sizeof(text),
                          "name = loom_%s_sf%g\n"
                          "expectation = alert_before_collision\n"
                          "param.T_sf = 30\n"
                          "stim.kind = looming_in_grating\n"
                          "stim.polarity = %s\n"
                          "stim.sf_background = %g\n",
                          polarity, sf_bg, polarity, sf_bg);
            if (!run_and_collect(text, detail)) pass = false;
        }
    report(2, "looming in gratings alerts before collision (6 runs, T_sf = 30)", pass, detail);
}

// ---- criterion 3: light looming outfires dark looming ----
void criterion_contrast_ordering() {
    std::string detail;
    const char* text =
        "name = light_vs_dark_loom\n"
        "expectation = ordering\n"
        "param.T_sf = 30\n"
        "stim.kind = looming_in_grating\n"
        "stim.polarity = light\n"
        "stim.sf_background = 80\n"
        "stim_b.polarity = dark\n";
    bool pass = run_and_collect(text, detail);
    report(3, "light loom peaks above dark loom at matched parameters", pass, detail);
}

// ---- criterion 4: panoramic selectivity at 15 spikes/s ----
void criterion_panoramic_selectivity() {
    bool pass = true;
    std::string detail;
    for (const char* polarity : {"dark", "light"}) {
        char loom[512];
        std::snprintf(loom, sizeof(loom),
                      "name = pano_loom_%s\n"
                      "expectation = alert_sustained\n"
                      "sustain_frames = 10\n"
                      "sustain_tail_fraction = 0.8\n"
                      "param.T_sf = 15\n"
                      "stim.kind = panoramic_loom\n"
                      "stim.polarity = %s\n",
                      polarity, polarity);
        if (!run_and_collect(loom, detail)) pass = false;

        char translate[512];
        std::snprintf(translate, sizeof(translate),
                      "name = pano_translate_%s\n"
                      "expectation = brief_onset_only\n"
                      "onset_fraction = 0\n"  // no alert frames at all
                      "param.T_sf = 15\n"
                      "stim.kind = panoramic_translate\n"
                      "stim.polarity = %s\n",
                      polarity, polarity);
        if (!run_and_collect(translate, detail)) pass = false;

        char recede[512];
        std::snprintf(recede, sizeof(recede),
                      "name = pano_recede_%s\n"
                      "expectation = brief_onset_only\n"
                      "onset_fraction = 0.25\n"
                      "param.T_sf = 15\n"
                      "stim.kind = panoramic_recede\n"
                      "stim.polarity = %s\n",
                      polarity, polarity);
        if (!run_and_collect(recede, detail)) pass = false;
    }
    report(4, "panoramic selectivity: loom sustained, translate quiet, recede onset-only",
           pass, detail);
}

// ---- criterion 5: core matches the straight-loop oracle ----
void criterion_oracle_equivalence() {
    bool pass = true;
    std::string detail;
    const double tol = 1e-9;
    for (unsigned seed = 1; seed <= 20; ++seed) {
        std::mt19937 rng(seed);
        std::uniform_real_distribution<double> lum(0.0, 255.0);
        std::vector<Frame> frames;
        for (int t = 0; t < 50; ++t) {
            Frame f(32, 32);
            for (double& v : f.data) v = lum(rng);
            frames.push_back(std::move(f));
        }
        ModelParams params;
        auto expected = harness::oracle_process(frames, params);
        Model model(params, 32, 32);
        double worst = 0.0;
        for (std::size_t t = 0; t < frames.size(); ++t) {
            FrameReport got = model.process(frames[t]);
            const FrameReport& want = expected[t];
            for (double d : {got.ffi_raw - want.ffi_raw, got.ffi_delayed - want.ffi_delayed,
                             got.inhibition_bias - want.inhibition_bias,
                             got.group_latency_ms - want.group_latency_ms,
                             got.excitation_tau_ms - want.excitation_tau_ms,
                             got.pooled - want.pooled, got.potential - want.potential,
                             got.potential_adapted - want.potential_adapted,
                             static_cast<double>(got.spikes - want.spikes),
                             got.spike_rate_hz - want.spike_rate_hz,
                             static_cast<double>(got.collision != want.collision)})
                worst = std::max(worst, std::abs(d));
        }
        if (worst > tol) {
            pass = false;
            detail += "seed " + std::to_string(seed) + " worst " + std::to_string(worst) + "; ";
        }
    }
    report(5, "oracle equivalence on 20 random 32x32x50 sequences (1e-9)", pass, detail);
}

// ---- criterion 6: invariants ----
void criterion_invariants() {
    bool pass = true;
    std::string detail;
    ModelParams params;

    // potential, bias and latency bounds on a mixed diet of inputs
    {
        std::mt19937 rng(1234);
        std::uniform_real_distribution<double> lum(0.0, 255.0);
        Model model(params, 24, 18);
        StimulusSpec spec = default_spec(StimulusKind::panoramic_loom);
        spec.width = 24;
        spec.height = 18;
        spec.duration_s = 1.0;
        spec.object_speed_mps = 0.6;
        auto seq = render(spec);
        std::vector<Frame> diet = seq.frames;
        for (int i = 0; i < 30; ++i) {
            Frame f(24, 18);
            for (double& v : f.data) v = lum(rng);
            diet.push_back(std::move(f));
        }
        for (const Frame& f : diet) {
            FrameReport r = model.process(f);
            if (!(r.potential >= 0.5 && r.potential < 1.0)) pass = false;
            if (!(r.inhibition_bias >= 0.5)) pass = false;
            if (!(r.group_latency_ms >= 0.1 - 1e-12 && r.group_latency_ms <= 10.0 + 1e-12))
                pass = false;
            if (r.spikes < 0) pass = false;
            if (r.spike_rate_hz < 0.0) pass = false;
        }
        if (!pass) detail += "bounds violated on mixed input; ";
    }

    // rectification identity is exact
    {
        std::mt19937 rng(77);
        std::uniform_real_distribution<double> value(-255.0, 255.0);
        Grid p(15, 11);
        for (double& v : p.data) v = value(rng);
        Grid on, off;
        rectify(p, on, off);
        for (std::size_t i = 0; i < p.data.size(); ++i)
            if (on.data[i] - off.data[i] != p.data[i]) {
                pass = false;
                detail += "rectification identity broken; ";
                break;
            }
    }

    // kernel delta response reproduces the inhibition matrix exactly
    {
        Grid delta(5, 5, 0.0);
        delta.at(2, 2) = 1.0;
        Grid conv = convolve3x3(delta, params.inhibition_kernel);
        for (int dy = -1; dy <= 1; ++dy)
            for (int dx = -1; dx <= 1; ++dx)
                if (conv.at(2 + dx, 2 + dy) != params.inhibition_kernel.at(dx, dy)) {
                    pass = false;
                    detail += "kernel delta mismatch; ";
                }
    }

    // a static video of any length yields zero spikes
    {
        std::mt19937 rng(99);
        std::uniform_real_distribution<double> lum(0.0, 255.0);
        Frame f(20, 20);
        for (double& v : f.data) v = lum(rng);
        Model model(params, 20, 20);
        for (int i = 0; i < 120; ++i)
            if (model.process(f).spikes != 0) {
                pass = false;
                detail += "static video spiked; ";
                break;
            }
    }

    report(6, "invariant suite (bounds, rectification, kernel delta, static silence)", pass,
           detail);
}

// ---- criterion 7: arithmetic spot checks ----
void criterion_spot_checks() {
    bool pass = true;
    std::string detail;

    SpikeWindow window(6);
    double rate = 0.0;
    for (int i = 0; i < 6; ++i) rate = window.push(1, 1000.0 / 30.0);
    if (std::abs(rate - 30.0) > 1e-9) {
        pass = false;
        detail += "six-ones window at 30 Hz gave " + std::to_string(rate) + "; ";
    }

    if (membrane_potential(0.0, 123, 1.0) != 0.5) {
        pass = false;
        detail += "potential at zero pooled excitation is not exactly 0.5; ";
    }

    ModelParams params;
    if (emit_spikes(params.spike_threshold, params) != 1) {
        pass = false;
        detail += "potential at threshold does not emit exactly one spike; ";
    }

    report(7, "arithmetic spot checks (window rate, sigmoid midpoint, threshold spike)", pass,
           detail);
}

// ---- criterion 8: byte-identical traces from the CLI ----
void criterion_cli_determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "lgmd_acceptance_cli";
    fs::remove_all(dir);
    fs::create_directories(dir);

    StimulusSpec spec = default_spec(StimulusKind::looming_in_grating);
    spec.width = 96;
    spec.height = 84;
    spec.duration_s = 1.5;
    spec.object_speed_mps = 0.54;
    StimulusSequence seq = render(spec);
    write_frame_sequence((dir / "frames").string(), seq.frames);

    auto run_once = [&](const std::string& csv) {
        const std::string command = std::string(LGMD_CLI_PATH) + " run " +
                                    (dir / "frames").string() + " --fps 30 --out-csv " + csv +
                                    " > /dev/null 2>&1";
        return std::system(command.c_str());
    };
    const std::string csv_a = (dir / "a.csv").string();
    const std::string csv_b = (dir / "b.csv").string();
    int rc_a = run_once(csv_a);
    int rc_b = run_once(csv_b);

    auto slurp = [](const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in),
                           std::istreambuf_iterator<char>());
    };
    const std::string a = slurp(csv_a), b = slurp(csv_b);
    const bool exited_ok = WIFEXITED(rc_a) && WIFEXITED(rc_b) &&
                           WEXITSTATUS(rc_a) != 1 && WEXITSTATUS(rc_b) != 1;
    const bool pass = exited_ok && !a.empty() && a == b;
    std::string detail = "trace bytes " + std::to_string(a.size());
    if (!exited_ok) detail += "; cli run failed";

    fs::remove_all(dir);
    report(8, "two identical cli runs produce byte-identical traces", pass, detail);
}

} // namespace

int main() {
    criterion_grating_immunity();
    criterion_looming_in_grating();
    criterion_contrast_ordering();
    criterion_panoramic_selectivity();
    criterion_oracle_equivalence();
    criterion_invariants();
    criterion_spot_checks();
    criterion_cli_determinism();

    const char* report_path = std::getenv("LGMD_SUITE_REPORT");
    harness::write_suite_report(report_path ? report_path : "acceptance_report.csv", g_results);

    std::printf("%s: %d criterion(s) failed\n", g_failures == 0 ? "OK" : "FAILED", g_failures);
    return g_failures;
}
