// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isac/analysis.hpp"
#include "isac/extract.hpp"
#include "isac/scene.hpp"
#include "isac/synth.hpp"

namespace isac {

struct AnalysisParams {
    int n_angle_bins = 181;
    DsWeighting ds_weighting = DsWeighting::Amplitude;
    double ds_window_k = 1.0;
    std::optional<double> max_delay_gap_s; // default: one coarse bin
    MatchGate gate = MatchGate::DsWindow;
    double gain_margin_db = 25.0;
    double tap_min_rel_db = 30.0;
};

/// Everything one run needs; parsed from a versioned JSON document.
struct RunConfig {
    Scene scene;
    RadioParams radio;
    RadarConfig victim;
    InterferenceConfig interference;
    std::optional<double> interfered_fraction; // used when indices not given
    std::vector<ClutterTap> clutter;
    ExtractionParams extraction;
    AnalysisParams analysis;
    std::uint64_t seed = 1;
};

RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

/// Canonical serialization used for hashing; key order is stable, so
/// semantically identical configs hash identically.
std::string canonical_config_json(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

} // namespace isac
