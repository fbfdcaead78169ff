// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <utility>
#include <vector>

#include "isac/extract.hpp"
#include "isac/scene.hpp"

namespace isac {

struct Pdp {
    std::vector<double> delays_s;  // uniform, increasing
    std::vector<double> power_db;  // 20 log10 |cir|
    int rx_index = 0;
};

struct RmsDsResult {
    double rms_ds_s = 0.0;
    double mean_delay_s = 0.0;
    std::pair<double, double> window{0.0, 0.0};
};

enum class DsWeighting {
    Amplitude, // g_i = linear amplitude (default)
    Power,     // g_i = linear power
};

struct AoaMap {
    std::vector<double> delays_s;
    std::vector<double> angles_deg;          // spans [-90, 90]
    std::vector<std::vector<double>> power_db; // [delay][angle], peak = 0 dB
    int n_angle_bins = 181;
};

/// One measured PDP tap (local maximum).
struct PdpTap {
    double delay_s = 0.0;
    double power_db = 0.0;
};

struct MatchPair {
    int ray_index = -1;
    int tap_index = -1;
    double delay_error_s = 0.0;
    double gain_error_db = 0.0; // relative-to-peak powers compared
};

struct MatchReport {
    std::vector<MatchPair> pairs;
    std::vector<int> unmatched_rays;
    std::vector<int> unmatched_taps;
};

enum class MatchGate {
    DsWindow,   // rays restricted to mean_delay +/- K * rms_ds
    GainMargin, // rays within gain_margin_db of the strongest ray
};

struct MatchOptions {
    double ds_window_k = 1.0;
    double max_delay_gap_s = 1e-9;
    MatchGate gate = MatchGate::DsWindow;
    double gain_margin_db = 25.0;
};

Pdp compute_pdp(const ChannelEstimate& est, int rx);

/// Default integration window: first to last sample above the estimated
/// noise floor + 6 dB.
std::pair<double, double> default_ds_window(const Pdp& pdp);

RmsDsResult rms_delay_spread(const Pdp& pdp, std::pair<double, double> window,
                             DsWeighting weighting = DsWeighting::Amplitude);

/// Spatial spectrum across the rx array per delay bin; angle grid uniform in
/// elevation over [-90, 90], map normalized to a 0 dB peak.
AoaMap angle_fft(const ChannelEstimate& est, double rx_spacing_wavelengths,
                 int n_angle_bins = 181);

/// Local PDP maxima within min_rel_db of the strongest and above the noise
/// floor + 6 dB.
std::vector<PdpTap> extract_taps(const Pdp& pdp, double min_rel_db = 30.0);

/// Greedy nearest-delay matching of gated simulated rays against measured
/// taps; gains compared relative to each side's strongest component.
MatchReport compare_to_rt(const std::vector<PdpTap>& taps, const GroundTruthChannel& truth,
                          const RmsDsResult& rms, const MatchOptions& opts = {});

} // namespace isac
