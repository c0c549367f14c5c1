#include <doctest.h>

#include <array>
#include <cmath>
#include <random>
#include <thread>

#include "lgmd/error.hpp"
#include "lgmd/model.hpp"

#include "test_util.hpp"

using namespace lgmd;

namespace {

Grid grid1x1(double v) {
    Grid g(1, 1);
    g.data[0] = v;
    return g;
}

ModelParams defaults() { return ModelParams{}; }

} // namespace

TEST_CASE("photoreceptor: plain difference without history") {
    auto coeffs = persistence_coefficients(2, 1.0);
    Grid p = photoreceptor_output(grid1x1(100.0), grid1x1(90.0), {}, coeffs);
    CHECK(p.data[0] == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("photoreceptor: one persistence term") {
    auto coeffs = persistence_coefficients(1, 1.0);
    const double a1 = 1.0 / (1.0 + std::exp(1.0));
    std::deque<Grid> history{grid1x1(10.0)};
    Grid p = photoreceptor_output(grid1x1(100.0), grid1x1(90.0), history, coeffs);
    CHECK(p.data[0] == doctest::Approx(10.0 + a1 * 10.0).epsilon(1e-12));
    CHECK(p.data[0] == doctest::Approx(12.689414213699951).epsilon(1e-9));
}

TEST_CASE("photoreceptor: constant luminance gives zero output") {
    auto coeffs = persistence_coefficients(2, 1.0);
    Grid same(3, 2, 42.0);
    Grid p = photoreceptor_output(same, same, {}, coeffs);
    for (double v : p.data) CHECK(v == 0.0);
}

TEST_CASE("photoreceptor: shape mismatch is rejected") {
    auto coeffs = persistence_coefficients(2, 1.0);
    CHECK_THROWS_AS(photoreceptor_output(Grid(2, 2), Grid(3, 2), {}, coeffs), Error);
}

TEST_CASE("persistence coefficients follow the logistic decay") {
    auto coeffs = persistence_coefficients(3, 1.0);
    REQUIRE(coeffs.size() == 3);
    CHECK(coeffs[0] == doctest::Approx(1.0 / (1.0 + std::exp(1.0))).epsilon(1e-15));
    CHECK(coeffs[1] == doctest::Approx(1.0 / (1.0 + std::exp(2.0))).epsilon(1e-15));
    CHECK(coeffs[2] == doctest::Approx(1.0 / (1.0 + std::exp(3.0))).epsilon(1e-15));
}

TEST_CASE("ffi: mean absolute value") {
    Grid p(2, 2);
    p.data = {1.0, -1.0, 2.0, 0.0};
    CHECK(mean_abs(p) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ffi delay: one low-pass step") {
    const double dt = 33.33, tau = 10.0;
    CHECK(low_pass_step(0.0, 1.0, dt, tau) == doctest::Approx(dt / (dt + tau)).epsilon(1e-12));
    CHECK(low_pass_step(0.0, 1.0, dt, tau) == doctest::Approx(0.7692).epsilon(1e-4));
    CHECK(low_pass_step(0.0, 0.0, dt, tau) == 0.0);
}

TEST_CASE("low-pass converges monotonically to a constant input") {
    double y = 0.0;
    double prev = y;
    for (int i = 0; i < 60; ++i) {
        y = low_pass_step(y, 5.0, 33.0, 60.0);
        CHECK(y > prev);
        CHECK(y <= 5.0);
        prev = y;
    }
    CHECK(y == doctest::Approx(5.0).epsilon(1e-6));
    // and decays monotonically to zero input
    for (int i = 0; i < 60; ++i) {
        double next = low_pass_step(y, 0.0, 33.0, 60.0);
        CHECK(next < y);
        CHECK(next >= 0.0);
        y = next;
    }
}

TEST_CASE("mediation: quoted operating points") {
    ModelParams p = defaults();

    Mediation half = mediate(10.0, p);
    CHECK(half.inhibition_bias == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(half.group_latency_ms == doctest::Approx(5.0).epsilon(1e-12));

    Mediation busy = mediate(40.0, p);
    CHECK(busy.inhibition_bias == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(busy.group_latency_ms == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(busy.excitation_tau_ms == doctest::Approx(180.0).epsilon(1e-12));

    Mediation quiet = mediate(0.0, p);
    CHECK(quiet.inhibition_bias == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(quiet.group_latency_ms == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(quiet.excitation_tau_ms == doctest::Approx(60.0).epsilon(1e-12));
}

TEST_CASE("mediation: bounds and monotonicity") {
    ModelParams p = defaults();
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> level(0.0, 100.0);
    for (int i = 0; i < 500; ++i) {
        double a = level(rng), b = level(rng);
        if (a > b) std::swap(a, b);
        Mediation ma = mediate(a, p), mb = mediate(b, p);
        CHECK(ma.inhibition_bias >= p.bias_floor);
        CHECK(ma.group_latency_ms >= p.latency_floor * p.group_tau_base_ms);
        CHECK(ma.group_latency_ms <= p.group_tau_base_ms);
        CHECK(ma.excitation_tau_ms >= p.excitation_tau_min_ms);
        CHECK(ma.excitation_tau_ms <= p.excitation_tau_max_ms);
        // bias rises with FFI, grouping latency falls, delay memory lengthens
        CHECK(mb.inhibition_bias >= ma.inhibition_bias);
        CHECK(mb.group_latency_ms <= ma.group_latency_ms);
        CHECK(mb.excitation_tau_ms >= ma.excitation_tau_ms);
    }
}

TEST_CASE("rectify: signs split into the two pathways") {
    Grid p(3, 1);
    p.data = {5.0, -3.0, 0.0};
    Grid on, off;
    rectify(p, on, off);
    CHECK(on.data[0] == 5.0);
    CHECK(off.data[0] == 0.0);
    CHECK(on.data[1] == 0.0);
    CHECK(off.data[1] == 3.0);
    CHECK(on.data[2] == 0.0);
    CHECK(off.data[2] == 0.0);
}

TEST_CASE("rectify: on - off reconstructs the input exactly") {
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> value(-300.0, 300.0);
    Grid p(17, 9);
    for (double& v : p.data) v = value(rng);
    Grid on, off;
    rectify(p, on, off);
    for (std::size_t i = 0; i < p.data.size(); ++i) {
        CHECK(on.data[i] - off.data[i] == p.data[i]);  // exact
        CHECK(on.data[i] >= 0.0);
        CHECK(off.data[i] >= 0.0);
    }
}

TEST_CASE("excitation delay: single step from zero") {
    Grid e(4, 4, 1.0);
    Grid state(4, 4, 0.0);
    low_pass_step(state, e, 33.33, 60.0);
    for (double v : state.data)
        CHECK(v == doctest::Approx(33.33 / 93.33).epsilon(1e-12));
}

TEST_CASE("inhibition: delta input reproduces the kernel exactly") {
    ModelParams p = defaults();
    Grid e(3, 3, 0.0);
    e.at(1, 1) = 1.0;
    Grid inhibition = convolve3x3(e, p.inhibition_kernel);
    for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx)
            CHECK(inhibition.at(1 + dx, 1 + dy) == p.inhibition_kernel.at(dx, dy));
    CHECK(inhibition.at(1, 1) == 1.0);
    CHECK(inhibition.at(0, 1) == 0.25);
    CHECK(inhibition.at(0, 0) == 0.125);
}

TEST_CASE("inhibition: uniform field sums the kernel weights in the interior") {
    ModelParams p = defaults();
    Grid e(5, 5, 1.0);
    Grid inhibition = convolve3x3(e, p.inhibition_kernel);
    CHECK(inhibition.at(2, 2) == doctest::Approx(2.5).epsilon(1e-12));
    // borders miss the out-of-bounds neighbours
    CHECK(inhibition.at(0, 0) == doctest::Approx(1.0 + 2 * 0.25 + 0.125).epsilon(1e-12));
    Grid zero(4, 6, 0.0);
    for (double v : convolve3x3(zero, p.inhibition_kernel).data) CHECK(v == 0.0);
}

TEST_CASE("inhibition: convolution is linear") {
    ModelParams p = defaults();
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> value(-10.0, 10.0);
    Grid a(8, 6), b(8, 6);
    for (double& v : a.data) v = value(rng);
    for (double& v : b.data) v = value(rng);

    Grid sum(8, 6);
    for (std::size_t i = 0; i < sum.data.size(); ++i)
        sum.data[i] = a.data[i] + 3.0 * b.data[i];

    Grid ca = convolve3x3(a, p.inhibition_kernel);
    Grid cb = convolve3x3(b, p.inhibition_kernel);
    Grid cs = convolve3x3(sum, p.inhibition_kernel);
    for (std::size_t i = 0; i < cs.data.size(); ++i)
        CHECK(cs.data[i] == doctest::Approx(ca.data[i] + 3.0 * cb.data[i]).epsilon(1e-12));
}

TEST_CASE("competition: clipped linear subtraction") {
    CHECK(compete(grid1x1(1.0), grid1x1(1.0), 0.5).data[0] == doctest::Approx(0.5));
    CHECK(compete(grid1x1(0.5), grid1x1(2.0), 0.5).data[0] == 0.0);
    CHECK(compete(grid1x1(0.7), grid1x1(0.0), 0.5).data[0] == doctest::Approx(0.7));
}

TEST_CASE("competition: output bounded by the excitation") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> value(0.0, 50.0);
    Grid e(9, 9), inh(9, 9);
    for (double& v : e.data) v = value(rng);
    for (double& v : inh.data) v = value(rng);
    Grid s = compete(e, inh, 0.8);
    for (std::size_t i = 0; i < s.data.size(); ++i) {
        CHECK(s.data[i] >= 0.0);
        CHECK(s.data[i] <= e.data[i]);
    }
}

TEST_CASE("on/off combination: supralinear sum") {
    ModelParams p = defaults();
    CHECK(combine_on_off(grid1x1(1.0), grid1x1(1.0), p).data[0] == doctest::Approx(3.0));
    CHECK(combine_on_off(grid1x1(0.8), grid1x1(0.0), p).data[0] == doctest::Approx(0.8));
    CHECK(combine_on_off(grid1x1(2.0), grid1x1(3.0), p).data[0] == doctest::Approx(11.0));
}

TEST_CASE("grouping: zero input stays zero") {
    ModelParams p = defaults();
    for (double v : group(Grid(6, 6, 0.0), p).data) CHECK(v == 0.0);
}

TEST_CASE("grouping: noise-scale isolated pixels are culled") {
    ModelParams p = defaults();
    for (double magnitude : {1.0, 5.0}) {
        Grid s(7, 7, 0.0);
        s.at(3, 3) = magnitude;
        // expected pass value: s * (s/9) / (delta_c + (s/9)/c_w), below the cull line
        const double ce = magnitude / 9.0;
        const double raw = magnitude * ce / (p.group_offset + ce / p.group_weight);
        REQUIRE(raw * p.group_decay < p.group_threshold);
        for (double v : group(s, p).data) CHECK(v == 0.0);
    }
}

TEST_CASE("grouping: a coherent patch passes") {
    ModelParams p = defaults();
    Grid s(9, 9, 0.0);
    for (int y = 2; y < 7; ++y)
        for (int x = 2; x < 7; ++x) s.at(x, y) = 50.0;
    Grid g = group(s, p);
    // interior of the patch: box mean = 50, peak coefficient = 50
    const double omega = p.group_offset + 50.0 / p.group_weight;
    const double expected = 50.0 * 50.0 / omega;
    REQUIRE(expected * p.group_decay >= p.group_threshold);
    CHECK(g.at(4, 4) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(g.at(4, 4) > 0.0);
    CHECK(g.at(0, 0) == 0.0);
}

TEST_CASE("group delay: latency floor passes the input almost unchanged") {
    Grid state(2, 2, 0.0);
    Grid input(2, 2, 1.0);
    low_pass_step(state, input, 33.33, 0.1);
    for (double v : state.data) {
        CHECK(v == doctest::Approx(33.33 / 33.43).epsilon(1e-12));
        CHECK(v > 0.99);
    }
    Grid slow(2, 2, 0.0);
    low_pass_step(slow, input, 33.33, 10.0);
    for (double v : slow.data) CHECK(v == doctest::Approx(33.33 / 43.33).epsilon(1e-12));
}

TEST_CASE("pooling: sigmoid operating points") {
    CHECK(membrane_potential(0.0, 100, 1.0) == 0.5);  // exact
    // uniform grouped excitation of 1 gives K = 1 / (1 + e^-1)
    CHECK(membrane_potential(100.0, 100, 1.0) ==
          doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-15));
    CHECK(membrane_potential(1e12, 100, 1.0) < 1.0);
    CHECK(membrane_potential(1e12, 100, 1.0) > 0.999);
}

TEST_CASE("spike emission: threshold and scale") {
    ModelParams p = defaults();
    CHECK(emit_spikes(0.7, p) == 1);   // e^0 exactly
    CHECK(emit_spikes(0.5, p) == 0);   // e^-2 floors to zero
    CHECK(emit_spikes(0.93, p) == 9);  // e^2.3 = 9.97...
}

TEST_CASE("spike window: quoted rates") {
    const double tau_30hz = 1000.0 / 30.0;
    SpikeWindow window(6);
    double rate = 0.0;
    for (int i = 0; i < 6; ++i) rate = window.push(1, tau_30hz);
    CHECK(rate == doctest::Approx(30.0).epsilon(1e-12));

    const double tau_18hz = 1000.0 / 18.0;
    SpikeWindow window18(6);
    for (int i = 0; i < 6; ++i) rate = window18.push(1, tau_18hz);
    CHECK(rate == doctest::Approx(18.0).epsilon(1e-12));
    CHECK(rate >= 15.0);
    CHECK(rate < 30.0);

    SpikeWindow quiet(6);
    for (int i = 0; i < 10; ++i) CHECK(quiet.push(0, tau_30hz) == 0.0);
}

TEST_CASE("spike window: warm-up keeps the full divisor") {
    const double tau = 1000.0 / 30.0;
    SpikeWindow window(6);
    // one spike in a partially filled window counts against all 6 slots
    CHECK(window.push(1, tau) == doctest::Approx(1000.0 / (6.0 * tau)).epsilon(1e-12));
    CHECK(window.size() == 1);
}

TEST_CASE("sfa: first value passes as is") {
    Adaptation sfa;
    CHECK(sfa.apply(0.83, 0.8) == 0.83);
}

TEST_CASE("sfa: strictly rising sequences pass pointwise") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> step(1e-4, 0.02);
    Adaptation sfa;
    double k = 0.5;
    for (int i = 0; i < 40 && k < 0.999; ++i) {
        CHECK(sfa.apply(k, 0.8) == k);
        k += step(rng);
    }
}

TEST_CASE("sfa: a held potential decays toward baseline") {
    Adaptation sfa;
    double adapted = sfa.apply(0.8, 0.8);
    CHECK(adapted == 0.8);
    // frozen decay of a 0.8 plateau: 0.8 * previous, floored at 0.5
    adapted = sfa.apply(0.8, 0.8);
    CHECK(adapted == doctest::Approx(0.64).epsilon(1e-12));
    adapted = sfa.apply(0.8, 0.8);
    CHECK(adapted == doctest::Approx(0.512).epsilon(1e-12));
    adapted = sfa.apply(0.8, 0.8);
    CHECK(adapted == 0.5);
    double prev = adapted;
    for (int i = 0; i < 20; ++i) {
        double next = sfa.apply(0.8, 0.8);
        CHECK(next <= prev);
        CHECK(next >= 0.5);
        prev = next;
    }
}

TEST_CASE("sfa: model holds a static video at baseline") {
    Model model(defaults(), 4, 4);
    Frame constant(4, 4, 128.0);
    for (int i = 0; i < 10; ++i) {
        FrameReport r = model.process(constant);
        CHECK(r.potential == 0.5);
        CHECK(r.potential_adapted == 0.5);
        CHECK(r.spikes == 0);
    }
}

TEST_CASE("model: first frame reports quiet") {
    Model model(defaults(), 8, 8);
    std::mt19937 rng(5);
    FrameReport r = model.process(testutil::random_frame(8, 8, rng));
    CHECK(r.ffi_raw == 0.0);
    CHECK(r.ffi_delayed == 0.0);
    CHECK(r.inhibition_bias == 0.5);
    CHECK(r.potential == 0.5);
    CHECK(r.spikes == 0);
    CHECK(!r.collision);
}

TEST_CASE("model: two identical frames stay quiet") {
    Model model(defaults(), 6, 5);
    Frame f(6, 5, 200.0);
    model.process(f);
    FrameReport r = model.process(f);
    CHECK(r.ffi_raw == 0.0);
    CHECK(r.inhibition_bias == 0.5);
    CHECK(r.potential == 0.5);
    CHECK(r.spikes == 0);
    CHECK(!r.collision);
}

TEST_CASE("model: dimension drift is rejected") {
    Model model(defaults(), 4, 4);
    model.process(Frame(4, 4, 10.0));
    CHECK_THROWS_AS(model.process(Frame(5, 4, 10.0)), Error);
}

TEST_CASE("model: constant video of any content never spikes") {
    std::mt19937 rng(17);
    Frame f = testutil::random_frame(12, 10, rng);
    Model model(defaults(), 12, 10);
    for (int i = 0; i < 40; ++i) {
        FrameReport r = model.process(f);
        CHECK(r.spikes == 0);
        CHECK(r.spike_rate_hz == 0.0);
        CHECK(!r.collision);
    }
}

TEST_CASE("model: per-frame invariants on random input") {
    ModelParams p = defaults();
    Model model(p, 16, 12);
    auto frames = testutil::random_sequence(16, 12, 30, 99);
    for (const Frame& f : frames) {
        FrameReport r = model.process(f);
        CHECK(r.potential >= 0.5);
        CHECK(r.potential < 1.0);
        CHECK(r.potential_adapted >= 0.5);
        CHECK(r.potential_adapted < 1.0);
        CHECK(r.spikes >= 0);
        CHECK(r.spike_rate_hz >= 0.0);
        CHECK(r.inhibition_bias >= 0.5);
        CHECK(r.group_latency_ms >= p.latency_floor * p.group_tau_base_ms - 1e-12);
        CHECK(r.group_latency_ms <= p.group_tau_base_ms + 1e-12);
        CHECK(r.collision == (r.spike_rate_hz >= p.alert_threshold_hz));
    }
}

TEST_CASE("model: bitwise deterministic across runs") {
    auto frames = testutil::random_sequence(14, 9, 25, 4242);
    Model a(defaults(), 14, 9), b(defaults(), 14, 9);
    for (const Frame& f : frames) {
        FrameReport ra = a.process(f);
        FrameReport rb = b.process(f);
        CHECK(ra.ffi_raw == rb.ffi_raw);
        CHECK(ra.ffi_delayed == rb.ffi_delayed);
        CHECK(ra.inhibition_bias == rb.inhibition_bias);
        CHECK(ra.group_latency_ms == rb.group_latency_ms);
        CHECK(ra.excitation_tau_ms == rb.excitation_tau_ms);
        CHECK(ra.pooled == rb.pooled);
        CHECK(ra.potential == rb.potential);
        CHECK(ra.potential_adapted == rb.potential_adapted);
        CHECK(ra.spikes == rb.spikes);
        CHECK(ra.spike_rate_hz == rb.spike_rate_hz);
        CHECK(ra.collision == rb.collision);
    }
}

TEST_CASE("model: reset restores the initial state") {
    auto frames = testutil::random_sequence(10, 10, 12, 77);
    Model model(defaults(), 10, 10);
    std::vector<double> first;
    for (const Frame& f : frames) first.push_back(model.process(f).potential);
    model.reset();
    for (std::size_t i = 0; i < frames.size(); ++i)
        CHECK(model.process(frames[i]).potential == first[i]);
}

TEST_CASE("model: independent instances run concurrently without interference") {
    auto frames = testutil::random_sequence(12, 12, 20, 555);
    std::vector<double> serial;
    {
        Model model(defaults(), 12, 12);
        for (const Frame& f : frames) serial.push_back(model.process(f).potential);
    }
    std::vector<std::thread> workers;
    std::array<std::vector<double>, 4> results;
    for (auto& out : results)
        workers.emplace_back([&frames, &out] {
            Model model(ModelParams{}, 12, 12);
            for (const Frame& f : frames) out.push_back(model.process(f).potential);
        });
    for (auto& t : workers) t.join();
    for (const auto& out : results) CHECK(out == serial);
}

TEST_CASE("model: invalid parameters are rejected with the offending key") {
    ModelParams p = defaults();
    p.bias_floor = -1.0;
    try {
        Model model(p, 4, 4);
        FAIL("expected a range error");
    } catch (const Error& e) {
        CHECK(e.kind() == Error::Kind::range);
        CHECK(std::string(e.what()).find("sigma1") != std::string::npos);
    }
}
