// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "isac/dsp.hpp"
#include "isac/frame.hpp"

namespace isac {

using Matrix = std::vector<std::vector<double>>;

/// Selected interference chirps of one antenna, as aligned range profiles.
struct ChirpSet {
    std::vector<dsp::cvec> chirps;  // post range-FFT, one per selected chirp
    std::vector<int> source_indices; // chirp indices in the original frame
    int reference_bin = 0;
    std::vector<int> applied_shifts; // circular shift applied per chirp
    std::vector<int> dropped;        // chirps discarded for lack of a peak
};

struct CorrelationReport {
    Matrix module_corr;
    Matrix phase_corr;
    int los_bin = 0;
};

struct Cluster {
    std::vector<int> members;  // indices into the ChirpSet
    dsp::cvec profile;         // complex mean of member profiles
};

struct ClusterSet {
    std::vector<Cluster> clusters;
    double module_thresh = 0.85;
    double phase_thresh = 0.8;
};

/// Complex CIR per rx antenna on a refined delay grid.
struct ChannelEstimate {
    std::vector<dsp::cvec> cir;      // [rx][refined bin]
    std::vector<double> delay_grid_s; // uniform, step = coarse bin / zoom_factor
    int zoom_factor = 1;
};

struct ExtractionParams {
    double threshold_db_over_noise = 10.0;
    double module_thresh = 0.85;
    double phase_thresh = 0.8;
    int zoom_factor = 16;
    int zoom_band_lo_rel = -8;  // coarse bins relative to the reference peak
    int zoom_band_hi_rel = 24;
    std::optional<int> reference_bin; // default: peak of the mean profile
    int reference_rx = 0;

    void validate() const;
};

/// Per-stage intermediate output, filled when requested (mirrors the
/// processing-chain debug plots).
struct StageDumps {
    std::vector<dsp::cvec> raw_profiles;      // reference antenna, post static filter
    ChirpSet selected;
    CorrelationReport correlation;
    ClusterSet clusters;
    std::vector<dsp::cvec> windowed_clusters;
    std::vector<dsp::cvec> refined_clusters;  // post ICZT and realignment, reference rx
};

// --- individual stages ------------------------------------------------------

/// Removes components identical in every chirp by subtracting the
/// across-chirp mean per (rx, sample).
FrameCube static_filter(const FrameCube& cube);

/// Chirps whose total power exceeds the estimated per-chirp noise floor by
/// threshold_db_over_noise, with their range-FFT profiles.  The floor is the
/// median across chirps of the per-chirp median bin power times the bin
/// count, so the estimate stays valid even when every chirp is interfered.
ChirpSet select_interference_chirps(const FrameCube& cube, double threshold_db_over_noise,
                                    int rx = 0);

/// Circularly shifts every profile so its strongest bin lands on
/// reference_bin; chirps without a >= 6 dB dominant peak are dropped.
ChirpSet align_chirps(const ChirpSet& set, int reference_bin);

/// Pearson correlation of magnitude profiles, all pairs.
Matrix module_correlation(const ChirpSet& set);

/// Phase similarity at the strongest (LOS) bin and its two neighbors,
/// power-weighted cos of the pairwise phase difference.
std::pair<Matrix, int> phase_correlation(const ChirpSet& set);

/// Connected components of the graph with an edge where both correlations
/// clear their thresholds; cluster profiles are complex means.
ClusterSet cluster_chirps(const Matrix& module_corr, const Matrix& phase_corr,
                          double module_thresh, double phase_thresh,
                          const ChirpSet& set);

/// Sidelobe suppression of the dominant tap: Hamming window applied in the
/// fast-time (frequency) domain, amplitude compensated by +5.35 dB.
dsp::cvec autoclutter_hamming(const dsp::cvec& cluster_profile);

/// Re-evaluates the profile's spectrum on a zoom_factor x denser contour over
/// [bin_lo, bin_hi] coarse bins, preserving complex phase.
dsp::cvec iczt_refine(const dsp::cvec& cluster_profile, std::pair<int, int> zoom_band,
                      int zoom_factor);

/// Scale / rotation / integer refined-bin shift that maps each cluster's
/// dominant peak onto the first cluster's peak.
struct RealignOp {
    std::complex<double> factor{1.0, 0.0};
    int shift = 0;
};
std::vector<RealignOp> compute_realignment(const std::vector<dsp::cvec>& refined);
std::vector<dsp::cvec> apply_realignment(const std::vector<dsp::cvec>& refined,
                                         const std::vector<RealignOp>& ops);
std::vector<dsp::cvec> realign_clusters(const std::vector<dsp::cvec>& refined);

/// Full chain over all rx antennas.  Selection, alignment shifts, clustering
/// and realignment are decided on the reference antenna and replayed on the
/// others so inter-antenna phase (and with it the AoA information) survives.
ChannelEstimate run_extraction(const FrameCube& cube, const ExtractionParams& params,
                               StageDumps* dumps = nullptr);

} // namespace isac
