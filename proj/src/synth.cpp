// SPDX-License-Identifier: Apache-2.0
#include "isac/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "isac/errors.hpp"

namespace isac {

void RadarConfig::validate() const {
    if (!(f_start_hz > 0.0) || !(bandwidth_hz > 0.0) || !(fs_adc_hz > 0.0))
        throw ConfigError("radar: frequencies must be positive");
    if (chirp_slope_hz_per_s <= 0.0)
        throw ConfigError("radar: chirp slope must be positive");
    if (chirp_slope_hz_per_s * chirp_duration_s > bandwidth_hz * (1.0 + 1e-12))
        throw ConfigError("radar: chirp sweep exceeds the configured bandwidth");
    if (n_chirps_per_frame <= 0 || n_samples_per_chirp <= 0 || n_rx <= 0)
        throw ConfigError("radar: dimensions must be positive");
    if (static_cast<double>(n_samples_per_chirp) / fs_adc_hz >
        chirp_duration_s * (1.0 + 1e-12))
        throw ConfigError("radar: ADC capture window exceeds the chirp duration");
    if (!(rx_spacing_wavelengths > 0.0))
        throw ConfigError("radar: rx spacing must be positive");
}

void InterferenceConfig::validate(const RadarConfig& victim) const {
    aggressor.validate();
    if (!interfered_chirp_indices.empty() && slope_delta_hz_per_s == 0.0)
        throw ConfigError("interference: slope_delta must be non-zero when enabled");
    for (int idx : interfered_chirp_indices)
        if (idx < 0 || idx >= victim.n_chirps_per_frame)
            throw ConfigMismatch("interference: chirp index out of range");
    if (per_chirp_phase_mode == PhaseMode::Quantized && phase_levels < 1)
        throw ConfigError("interference: phase_levels must be >= 1");
}

double tap_amplitude(double tx_power_dbm, double gain_db) {
    return std::pow(10.0, (tx_power_dbm + gain_db) / 20.0);
}

double noise_power_mw(double noise_figure_db, double fs_adc_hz) {
    const double p_dbm = -174.0 + 10.0 * std::log10(fs_adc_hz / 2.0) + noise_figure_db;
    return std::pow(10.0, p_dbm / 10.0);
}

std::vector<int> pick_interfered_chirps(int n_chirps, double fraction, std::uint64_t seed) {
    const int count = std::clamp(static_cast<int>(std::lround(fraction * n_chirps)), 0,
                                 n_chirps);
    std::vector<int> all(n_chirps);
    std::iota(all.begin(), all.end(), 0);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::shuffle(all.begin(), all.end(), rng);
    all.resize(count);
    std::sort(all.begin(), all.end());
    return all;
}

FrameCube synth_frame(const GroundTruthChannel& scene_channel, const RadarConfig& victim,
                      const InterferenceConfig& interf,
                      const std::vector<ClutterTap>& static_clutter,
                      std::uint64_t noise_seed, const SynthOptions& opts) {
    victim.validate();
    interf.validate(victim);

    FrameCube cube = FrameCube::zeros(victim);
    cube.truth = scene_channel;

    const int n_rx = victim.n_rx;
    const int n_chirps = victim.n_chirps_per_frame;
    const int n_samples = victim.n_samples_per_chirp;
    const double fs = victim.fs_adc_hz;
    const double k_victim = victim.chirp_slope_hz_per_s;
    const double slope_delta = interf.slope_delta_hz_per_s;
    // Carrier-offset term of the beat: start-frequency mismatch plus the
    // frequency the aggressor has already swept at the victim's chirp start.
    const double f_offset = (interf.aggressor.f_start_hz - victim.f_start_hz) -
                            interf.aggressor.chirp_slope_hz_per_s * interf.chirp_start_offset_s;

    std::vector<bool> interfered(n_chirps, false);
    for (int idx : interf.interfered_chirp_indices) interfered[idx] = true;

    // Per-chirp phase references, drawn in chirp order from the seed so that
    // the realization is a pure function of noise_seed.
    std::mt19937_64 phase_rng(noise_seed);
    std::uniform_real_distribution<double> uni(0.0, 2.0 * M_PI);
    std::uniform_int_distribution<int> level(0, std::max(1, interf.phase_levels) - 1);
    std::vector<double> chirp_phase(n_chirps, 0.0);
    for (int c = 0; c < n_chirps; ++c) {
        if (!interfered[c]) continue;
        switch (interf.per_chirp_phase_mode) {
            case PhaseMode::RandomUniform: chirp_phase[c] = uni(phase_rng); break;
            case PhaseMode::Quantized:
                chirp_phase[c] = 2.0 * M_PI * level(phase_rng) / interf.phase_levels;
                break;
            case PhaseMode::Coherent: chirp_phase[c] = 0.0; break;
        }
    }

    struct Tap {
        double amp;
        double beat_freq;
        double phase0;
        double sin_aoa;
    };
    std::vector<Tap> interference_taps;
    interference_taps.reserve(scene_channel.paths.size());
    for (const auto& p : scene_channel.paths) {
        Tap t;
        t.amp = tap_amplitude(interf.aggressor.tx_power_dbm, p.gain_db);
        t.beat_freq = k_victim * p.delay + f_offset;
        t.phase0 = -2.0 * M_PI * scene_channel.carrier_freq_hz * p.delay;
        t.sin_aoa = std::sin(deg2rad(p.aoa_elevation_deg));
        interference_taps.push_back(t);
    }
    std::vector<Tap> clutter_taps;
    clutter_taps.reserve(static_clutter.size());
    for (const auto& cl : static_clutter) {
        Tap t;
        t.amp = tap_amplitude(victim.tx_power_dbm, cl.gain_db);
        t.beat_freq = k_victim * cl.delay_s;
        t.phase0 = -2.0 * M_PI * victim.f_start_hz * cl.delay_s;
        t.sin_aoa = 0.0;
        clutter_taps.push_back(t);
    }

    const double sigma2 = noise_power_mw(victim.noise_figure_db, fs);
    std::mt19937_64 noise_rng(noise_seed ^ 0xc2b2ae3d27d4eb4full);
    std::normal_distribution<double> gauss(0.0, std::sqrt(sigma2 / 2.0));

    for (int rx = 0; rx < n_rx; ++rx) {
        for (int c = 0; c < n_chirps; ++c) {
            for (int s = 0; s < n_samples; ++s) {
                const double t = static_cast<double>(s) / fs;
                std::complex<double> val{0.0, 0.0};
                for (const auto& tap : clutter_taps) {
                    const double ph = 2.0 * M_PI * tap.beat_freq * t + tap.phase0;
                    val += tap.amp * std::complex<double>(std::cos(ph), std::sin(ph));
                }
                if (interfered[c]) {
                    for (const auto& tap : interference_taps) {
                        const double steer = 2.0 * M_PI * rx *
                                             victim.rx_spacing_wavelengths * tap.sin_aoa;
                        const double ph = 2.0 * M_PI * (0.5 * slope_delta * t * t +
                                                        tap.beat_freq * t) +
                                          tap.phase0 + steer + chirp_phase[c];
                        val += tap.amp * std::complex<double>(std::cos(ph), std::sin(ph));
                    }
                }
                if (opts.noise_enabled) {
                    val += std::complex<double>(gauss(noise_rng), gauss(noise_rng));
                }
                cube.at(rx, c, s) = std::complex<float>(static_cast<float>(val.real()),
                                                        static_cast<float>(val.imag()));
            }
        }
    }
    return cube;
}

} // namespace isac
