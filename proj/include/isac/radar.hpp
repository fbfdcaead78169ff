// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

namespace isac {

struct RadarConfig {
    double f_start_hz = 77e9;
    double bandwidth_hz = 4e9;
    double chirp_slope_hz_per_s = 125e12;
    double chirp_duration_s = 12.8e-6;
    int n_chirps_per_frame = 128;
    double fs_adc_hz = 20e6;
    int n_samples_per_chirp = 256;
    double tx_power_dbm = 12.0;
    double noise_figure_db = 12.0;
    int n_rx = 4;
    double rx_spacing_wavelengths = 0.5;

    void validate() const; // throws ConfigError

    /// Delay spacing of one range-FFT bin: fs / (N * slope).
    double coarse_delay_bin_s() const {
        return fs_adc_hz / (static_cast<double>(n_samples_per_chirp) * chirp_slope_hz_per_s);
    }
};

enum class PhaseMode : std::uint8_t {
    RandomUniform, // independent U(0, 2pi) phase per chirp
    Quantized,     // phases drawn from k evenly spaced levels
    Coherent,      // zero extra phase, all chirps identical
};

struct InterferenceConfig {
    RadarConfig aggressor;
    double slope_delta_hz_per_s = 1e8; // aggressor slope - victim slope, != 0
    double chirp_start_offset_s = 0.0;
    std::vector<int> interfered_chirp_indices;
    PhaseMode per_chirp_phase_mode = PhaseMode::Quantized;
    int phase_levels = 8; // used by Quantized

    void validate(const RadarConfig& victim) const;
};

} // namespace isac
