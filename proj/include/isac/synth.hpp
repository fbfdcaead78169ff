// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <vector>

#include "isac/frame.hpp"

namespace isac {

/// Static clutter tap seen identically in every chirp.
struct ClutterTap {
    double delay_s = 0.0;
    double gain_db = 0.0;
};

struct SynthOptions {
    bool noise_enabled = true;
};

/// Synthesizes the victim's dechirped ADC frame: static clutter beat tones in
/// every chirp, the aggressor's ghost-target interference (propagated through
/// `scene_channel`) in the configured chirps with a per-chirp phase, and
/// seeded AWGN at the level implied by the noise figure over fs/2.
FrameCube synth_frame(const GroundTruthChannel& scene_channel, const RadarConfig& victim,
                      const InterferenceConfig& interf,
                      const std::vector<ClutterTap>& static_clutter,
                      std::uint64_t noise_seed, const SynthOptions& opts = {});

/// Tap amplitude in sqrt(mW) units for a given tx power and path gain.
double tap_amplitude(double tx_power_dbm, double gain_db);

/// Complex-noise variance (mW) implied by a noise figure over fs/2.
double noise_power_mw(double noise_figure_db, double fs_adc_hz);

/// Evenly seeded choice of interfered chirp indices for a given fraction.
std::vector<int> pick_interfered_chirps(int n_chirps, double fraction, std::uint64_t seed);

} // namespace isac
