// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <complex>

#include <doctest.h>

#include "isac/dsp.hpp"
#include "isac/errors.hpp"
#include "isac/synth.hpp"

using namespace isac;

namespace {

RadarConfig small_radar() {
    RadarConfig r;
    r.n_chirps_per_frame = 32;
    r.n_samples_per_chirp = 256;
    r.n_rx = 4;
    return r; // defaults: fs 20 MHz, slope 125 THz/s -> 0.625 ns coarse bin
}

InterferenceConfig interf_for(const RadarConfig& victim, std::vector<int> chirps,
                              PhaseMode mode = PhaseMode::Coherent) {
    InterferenceConfig ic;
    ic.aggressor = victim;
    ic.aggressor.chirp_slope_hz_per_s += 1e8;
    ic.slope_delta_hz_per_s = 1e8;
    ic.interfered_chirp_indices = std::move(chirps);
    ic.per_chirp_phase_mode = mode;
    return ic;
}

GroundTruthChannel one_path(double delay_s, double gain_db, double aoa_deg = 0.0) {
    GroundTruthChannel gt;
    gt.carrier_freq_hz = 79e9;
    RayPath p;
    p.delay = delay_s;
    p.path_length = delay_s * kSpeedOfLight;
    p.gain_db = gain_db;
    p.aoa_elevation_deg = aoa_deg;
    gt.paths.push_back(p);
    return gt;
}

dsp::cvec range_profile(const FrameCube& cube, int rx, int chirp) {
    dsp::cvec x(cube.config.n_samples_per_chirp);
    for (int s = 0; s < cube.config.n_samples_per_chirp; ++s) {
        const auto v = cube.at(rx, chirp, s);
        x[s] = {v.real(), v.imag()};
    }
    return dsp::fft(x);
}

} // namespace

TEST_CASE("no paths, no clutter, noise off gives an all-zero cube") {
    const RadarConfig victim = small_radar();
    GroundTruthChannel empty;
    const auto cube = synth_frame(empty, victim, interf_for(victim, {3}), {}, 1,
                                  {.noise_enabled = false});
    for (const auto& v : cube.data) CHECK(std::abs(std::complex<double>(v)) == 0.0);
}

TEST_CASE("static clutter tap lands on the closed-form beat bin in every chirp") {
    const RadarConfig victim = small_radar();
    const double tau = 16e-9; // beat k*tau = 2 MHz -> bin 25.6
    GroundTruthChannel empty;
    const auto cube = synth_frame(empty, victim, interf_for(victim, {}),
                                  {{tau, -80.0}}, 1, {.noise_enabled = false});
    const double beat = victim.chirp_slope_hz_per_s * tau;
    const auto expected_bin = static_cast<std::size_t>(
        std::lround(beat / (victim.fs_adc_hz / victim.n_samples_per_chirp)));
    std::size_t first_peak = dsp::peak_index(range_profile(cube, 0, 0));
    CHECK(first_peak == expected_bin);
    for (int c = 1; c < victim.n_chirps_per_frame; ++c)
        CHECK(dsp::peak_index(range_profile(cube, 0, c)) == first_peak);
}

TEST_CASE("coherent mode makes interfered chirps identical") {
    const RadarConfig victim = small_radar();
    const auto gt = one_path(15e-9, -85.0);
    const auto cube =
        synth_frame(gt, victim, interf_for(victim, {0, 1, 2, 3, 4, 5, 6, 7}), {}, 1,
                    {.noise_enabled = false});
    const auto ref = range_profile(cube, 0, 0);
    const double peak = std::abs(ref[dsp::peak_index(ref)]);
    for (int c = 1; c < 8; ++c) {
        const auto p = range_profile(cube, 0, c);
        for (std::size_t b = 0; b < p.size(); ++b)
            CHECK(std::abs(std::abs(p[b]) - std::abs(ref[b])) <= 1e-6 * peak);
    }
}

TEST_CASE("noise realization is a pure function of the seed") {
    const RadarConfig victim = small_radar();
    const auto gt = one_path(15e-9, -85.0);
    const auto a = synth_frame(gt, victim, interf_for(victim, {3}), {}, 42);
    const auto b = synth_frame(gt, victim, interf_for(victim, {3}), {}, 42);
    const auto c = synth_frame(gt, victim, interf_for(victim, {3}), {}, 43);
    CHECK(a.data == b.data);
    CHECK(a.data != c.data);
}

TEST_CASE("doubling a path's amplitude raises its range-FFT peak by 6.02 dB") {
    const RadarConfig victim = small_radar();
    const auto cube1 = synth_frame(one_path(15e-9, -85.0), victim, interf_for(victim, {0}),
                                   {}, 1, {.noise_enabled = false});
    const auto cube2 =
        synth_frame(one_path(15e-9, -85.0 + 20.0 * std::log10(2.0)), victim,
                    interf_for(victim, {0}), {}, 1, {.noise_enabled = false});
    const auto p1 = range_profile(cube1, 0, 0);
    const auto p2 = range_profile(cube2, 0, 0);
    const double db = 20.0 * std::log10(std::abs(p2[dsp::peak_index(p2)]) /
                                        std::abs(p1[dsp::peak_index(p1)]));
    CHECK(db == doctest::Approx(6.02).epsilon(0.01));
}

TEST_CASE("array steering phase between adjacent antennas matches the AoA") {
    const RadarConfig victim = small_radar();
    const double aoa = 20.0;
    const auto cube = synth_frame(one_path(15e-9, -85.0, aoa), victim,
                                  interf_for(victim, {0}), {}, 1, {.noise_enabled = false});
    const double expect = 2.0 * M_PI * 0.5 * std::sin(deg2rad(aoa));
    for (int rx = 0; rx + 1 < victim.n_rx; ++rx) {
        const auto pa = range_profile(cube, rx, 0);
        const auto pb = range_profile(cube, rx + 1, 0);
        const std::size_t bin = dsp::peak_index(pa);
        double dphi = std::arg(pb[bin]) - std::arg(pa[bin]);
        dphi = std::remainder(dphi - expect, 2.0 * M_PI);
        CHECK(std::abs(dphi) < 1e-6);
    }
}

TEST_CASE("random per-chirp phase keeps magnitude profiles identical but raw chirps distinct") {
    const RadarConfig victim = small_radar();
    const auto cube = synth_frame(one_path(15e-9, -85.0), victim,
                                  interf_for(victim, {2, 9}, PhaseMode::RandomUniform), {},
                                  7, {.noise_enabled = false});
    const auto p2 = range_profile(cube, 0, 2);
    const auto p9 = range_profile(cube, 0, 9);
    const double peak = std::abs(p2[dsp::peak_index(p2)]);
    for (std::size_t b = 0; b < p2.size(); ++b)
        CHECK(std::abs(std::abs(p2[b]) - std::abs(p9[b])) <= 1e-5 * peak);
    bool any_diff = false;
    for (int s = 0; s < victim.n_samples_per_chirp; ++s)
        if (cube.at(0, 2, s) != cube.at(0, 9, s)) any_diff = true;
    CHECK(any_diff);
}

TEST_CASE("config invariants rejected") {
    RadarConfig bad = small_radar();
    bad.chirp_slope_hz_per_s = 1e15; // sweep would exceed bandwidth
    GroundTruthChannel gt = one_path(15e-9, -85.0);
    CHECK_THROWS_AS(
        synth_frame(gt, bad, interf_for(small_radar(), {}), {}, 1), ConfigError);

    const RadarConfig victim = small_radar();
    auto ic = interf_for(victim, {victim.n_chirps_per_frame}); // out of range
    CHECK_THROWS_AS(synth_frame(gt, victim, ic, {}, 1), ConfigMismatch);

    auto ic2 = interf_for(victim, {1});
    ic2.slope_delta_hz_per_s = 0.0;
    CHECK_THROWS_AS(synth_frame(gt, victim, ic2, {}, 1), ConfigError);
}

TEST_CASE("pick_interfered_chirps is deterministic and sized by the fraction") {
    const auto a = pick_interfered_chirps(128, 0.25, 5);
    const auto b = pick_interfered_chirps(128, 0.25, 5);
    CHECK(a == b);
    CHECK(a.size() == 32);
    for (int idx : a) CHECK((idx >= 0 && idx < 128));
}
