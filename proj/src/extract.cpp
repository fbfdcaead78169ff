// SPDX-License-Identifier: Apache-2.0
#include "isac/extract.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "isac/errors.hpp"

namespace isac {

namespace {

dsp::cvec chirp_samples(const FrameCube& cube, int rx, int chirp) {
    const int n = cube.config.n_samples_per_chirp;
    dsp::cvec x(n);
    for (int s = 0; s < n; ++s) {
        const auto v = cube.at(rx, chirp, s);
        x[s] = {static_cast<double>(v.real()), static_cast<double>(v.imag())};
    }
    return x;
}

dsp::cvec circshift(const dsp::cvec& v, int shift) {
    const int n = static_cast<int>(v.size());
    dsp::cvec out(n);
    for (int i = 0; i < n; ++i) {
        int j = (i - shift) % n;
        if (j < 0) j += n;
        out[i] = v[j];
    }
    return out;
}

double total_power(const dsp::cvec& v) {
    double p = 0.0;
    for (const auto& x : v) p += std::norm(x);
    return p;
}

std::vector<double> magnitudes(const dsp::cvec& v) {
    std::vector<double> m(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) m[i] = std::abs(v[i]);
    return m;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa <= 0.0 || sbb <= 0.0)
        throw DegenerateChirp("chirp magnitude profile has zero variance");
    return sab / std::sqrt(saa * sbb);
}

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void merge(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

void ExtractionParams::validate() const {
    if (module_thresh < -1.0 || module_thresh > 1.0)
        throw ConfigError("module threshold must be in [-1, 1]");
    if (phase_thresh < -1.0 || phase_thresh > 1.0)
        throw ConfigError("phase threshold must be in [-1, 1]");
    if (zoom_factor < 1) throw ConfigError("zoom factor must be >= 1");
    if (zoom_band_lo_rel >= zoom_band_hi_rel)
        throw ConfigError("zoom band is empty");
    if (threshold_db_over_noise < 0.0)
        throw ConfigError("interference power threshold must be >= 0 dB");
}

FrameCube static_filter(const FrameCube& cube) {
    const int n_chirps = cube.config.n_chirps_per_frame;
    if (n_chirps < 2)
        throw TooFewChirps("static filtering needs at least two chirps");
    FrameCube out = cube;
    const int n_rx = cube.config.n_rx;
    const int n_samples = cube.config.n_samples_per_chirp;
    for (int rx = 0; rx < n_rx; ++rx) {
        for (int s = 0; s < n_samples; ++s) {
            std::complex<double> mean{0.0, 0.0};
            for (int c = 0; c < n_chirps; ++c) {
                const auto v = cube.at(rx, c, s);
                mean += std::complex<double>(v.real(), v.imag());
            }
            mean /= static_cast<double>(n_chirps);
            const std::complex<float> m(static_cast<float>(mean.real()),
                                        static_cast<float>(mean.imag()));
            for (int c = 0; c < n_chirps; ++c) out.at(rx, c, s) -= m;
        }
    }
    return out;
}

ChirpSet select_interference_chirps(const FrameCube& cube, double threshold_db_over_noise,
                                    int rx) {
    const int n_chirps = cube.config.n_chirps_per_frame;
    const int n_samples = cube.config.n_samples_per_chirp;

    std::vector<dsp::cvec> profiles(n_chirps);
    std::vector<double> chirp_power(n_chirps);
    std::vector<double> median_bin_power(n_chirps);
    for (int c = 0; c < n_chirps; ++c) {
        profiles[c] = dsp::fft(chirp_samples(cube, rx, c));
        std::vector<double> bin_power(n_samples);
        for (int b = 0; b < n_samples; ++b) bin_power[b] = std::norm(profiles[c][b]);
        chirp_power[c] = std::accumulate(bin_power.begin(), bin_power.end(), 0.0);
        median_bin_power[c] = dsp::median(bin_power);
    }
    // Tone-like interference concentrates in few bins, so the median bin power
    // tracks the noise even in fully interfered frames.
    const double noise_floor = dsp::median(median_bin_power) * n_samples;
    const double gate = noise_floor * std::pow(10.0, threshold_db_over_noise / 10.0);

    ChirpSet set;
    for (int c = 0; c < n_chirps; ++c) {
        if (chirp_power[c] > gate) {
            set.chirps.push_back(std::move(profiles[c]));
            set.source_indices.push_back(c);
        }
    }
    if (set.chirps.empty())
        throw NoInterferenceFound("no chirp exceeds the interference power threshold");
    return set;
}

ChirpSet align_chirps(const ChirpSet& set, int reference_bin) {
    ChirpSet out;
    out.reference_bin = reference_bin;
    for (std::size_t i = 0; i < set.chirps.size(); ++i) {
        const auto& p = set.chirps[i];
        std::vector<double> bin_power(p.size());
        for (std::size_t b = 0; b < p.size(); ++b) bin_power[b] = std::norm(p[b]);
        const auto peak = static_cast<int>(dsp::peak_index(p));
        const double med = dsp::median(bin_power);
        if (bin_power[peak] < 4.0 * med || bin_power[peak] <= 0.0) {
            out.dropped.push_back(static_cast<int>(i)); // NoDominantPeak, chirp skipped
            continue;
        }
        const int shift = reference_bin - peak;
        out.chirps.push_back(circshift(p, shift));
        out.source_indices.push_back(set.source_indices[i]);
        out.applied_shifts.push_back(shift);
    }
    if (out.chirps.empty())
        throw NoDominantPeak("every selected chirp lacks a dominant peak");
    return out;
}

Matrix module_correlation(const ChirpSet& set) {
    const std::size_t n = set.chirps.size();
    if (n < 2) throw TooFewChirps("module correlation needs at least two chirps");
    std::vector<std::vector<double>> mags(n);
    for (std::size_t i = 0; i < n; ++i) mags[i] = magnitudes(set.chirps[i]);
    Matrix corr(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            corr[i][j] = corr[j][i] = pearson(mags[i], mags[j]);
    return corr;
}

std::pair<Matrix, int> phase_correlation(const ChirpSet& set) {
    const std::size_t n = set.chirps.size();
    if (n < 2) throw TooFewChirps("phase correlation needs at least two chirps");
    const std::size_t len = set.chirps[0].size();

    std::vector<double> mean_power(len, 0.0);
    for (const auto& c : set.chirps)
        for (std::size_t b = 0; b < len; ++b) mean_power[b] += std::norm(c[b]);
    const auto los_bin = static_cast<int>(
        std::max_element(mean_power.begin(), mean_power.end()) - mean_power.begin());
    if (mean_power[los_bin] <= 0.0)
        throw DegenerateChirp("no power at any bin for phase correlation");

    std::vector<int> bins;
    for (int b = los_bin - 1; b <= los_bin + 1; ++b)
        if (b >= 0 && b < static_cast<int>(len)) bins.push_back(b);

    Matrix corr(n, std::vector<double>(n, 1.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double num = 0.0, den = 0.0;
            for (int b : bins) {
                const double w = mean_power[b];
                const double dphi =
                    std::arg(set.chirps[i][b]) - std::arg(set.chirps[j][b]);
                num += w * std::cos(dphi);
                den += w;
            }
            corr[i][j] = corr[j][i] = num / den;
        }
    }
    return {corr, los_bin};
}

ClusterSet cluster_chirps(const Matrix& module_corr, const Matrix& phase_corr,
                          double module_thresh, double phase_thresh,
                          const ChirpSet& set) {
    const int n = static_cast<int>(set.chirps.size());
    Dsu dsu(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (module_corr[i][j] >= module_thresh && phase_corr[i][j] >= phase_thresh)
                dsu.merge(i, j);

    ClusterSet out;
    out.module_thresh = module_thresh;
    out.phase_thresh = phase_thresh;
    std::vector<int> root_to_cluster(n, -1);
    for (int i = 0; i < n; ++i) {
        const int r = dsu.find(i);
        if (root_to_cluster[r] < 0) {
            root_to_cluster[r] = static_cast<int>(out.clusters.size());
            out.clusters.push_back({});
        }
        out.clusters[root_to_cluster[r]].members.push_back(i);
    }
    for (auto& cl : out.clusters) {
        dsp::cvec mean(set.chirps[0].size(), {0.0, 0.0});
        for (int m : cl.members)
            for (std::size_t b = 0; b < mean.size(); ++b) mean[b] += set.chirps[m][b];
        for (auto& v : mean) v /= static_cast<double>(cl.members.size());
        cl.profile = std::move(mean);
    }
    return out;
}

dsp::cvec autoclutter_hamming(const dsp::cvec& cluster_profile) {
    const std::size_t n = cluster_profile.size();
    dsp::cvec x = dsp::ifft(cluster_profile);
    const auto w = dsp::hamming_periodic(n);
    for (std::size_t i = 0; i < n; ++i) x[i] *= w[i];
    dsp::cvec y = dsp::fft(x);
    // The window's coherent gain is 0.54 (-5.35 dB); undo it so tap powers
    // stay comparable across stages.
    const double comp = 1.0 / 0.54;
    for (auto& v : y) v *= comp;
    return y;
}

dsp::cvec iczt_refine(const dsp::cvec& cluster_profile, std::pair<int, int> zoom_band,
                      int zoom_factor) {
    const int n = static_cast<int>(cluster_profile.size());
    const auto [lo, hi] = zoom_band;
    if (lo < 0 || hi >= n || lo >= hi || zoom_factor < 1)
        throw BadBand("iczt zoom band outside the profile or empty");
    const dsp::cvec x = dsp::ifft(cluster_profile);
    return dsp::czt_band(x, static_cast<double>(lo), static_cast<double>(hi), zoom_factor);
}

std::vector<RealignOp> compute_realignment(const std::vector<dsp::cvec>& refined) {
    if (refined.empty()) throw NoDominantPeak("no clusters to realign");
    std::vector<RealignOp> ops(refined.size());
    const std::size_t ref_idx = dsp::peak_index(refined[0]);
    const std::complex<double> ref_peak = refined[0][ref_idx];
    if (std::abs(ref_peak) <= 0.0)
        throw NoDominantPeak("reference cluster has no dominant peak");
    for (std::size_t m = 0; m < refined.size(); ++m) {
        const std::size_t idx = dsp::peak_index(refined[m]);
        const std::complex<double> peak = refined[m][idx];
        if (std::abs(peak) <= 0.0)
            throw NoDominantPeak("cluster has no dominant peak");
        ops[m].factor = ref_peak / peak;
        ops[m].shift = static_cast<int>(ref_idx) - static_cast<int>(idx);
    }
    return ops;
}

std::vector<dsp::cvec> apply_realignment(const std::vector<dsp::cvec>& refined,
                                         const std::vector<RealignOp>& ops) {
    std::vector<dsp::cvec> out(refined.size());
    for (std::size_t m = 0; m < refined.size(); ++m) {
        const int n = static_cast<int>(refined[m].size());
        dsp::cvec shifted(n, {0.0, 0.0});
        for (int i = 0; i < n; ++i) {
            const int j = i - ops[m].shift;
            if (j >= 0 && j < n) shifted[i] = refined[m][j];
        }
        for (auto& v : shifted) v *= ops[m].factor;
        out[m] = std::move(shifted);
    }
    return out;
}

std::vector<dsp::cvec> realign_clusters(const std::vector<dsp::cvec>& refined) {
    return apply_realignment(refined, compute_realignment(refined));
}

ChannelEstimate run_extraction(const FrameCube& cube, const ExtractionParams& params,
                               StageDumps* dumps) {
    params.validate();
    const int n_rx = cube.config.n_rx;
    const int n_samples = cube.config.n_samples_per_chirp;
    const int ref_rx = params.reference_rx;
    if (ref_rx < 0 || ref_rx >= n_rx)
        throw ConfigError("reference rx antenna out of range");

    const FrameCube filtered = static_filter(cube);
    ChirpSet selected =
        select_interference_chirps(filtered, params.threshold_db_over_noise, ref_rx);

    if (dumps) dumps->raw_profiles = selected.chirps;

    // Reference bin: peak of the mean magnitude profile over selected chirps.
    int ref_bin;
    if (params.reference_bin) {
        ref_bin = *params.reference_bin;
        if (ref_bin < 0 || ref_bin >= n_samples)
            throw ConfigError("reference bin out of range");
    } else {
        std::vector<double> mean_mag(n_samples, 0.0);
        for (const auto& c : selected.chirps)
            for (int b = 0; b < n_samples; ++b) mean_mag[b] += std::abs(c[b]);
        ref_bin = static_cast<int>(
            std::max_element(mean_mag.begin(), mean_mag.end()) - mean_mag.begin());
    }

    const ChirpSet aligned = align_chirps(selected, ref_bin);
    const Matrix mod_corr = module_correlation(aligned);
    auto [ph_corr, los_bin] = phase_correlation(aligned);
    const ClusterSet clusters = cluster_chirps(mod_corr, ph_corr, params.module_thresh,
                                               params.phase_thresh, aligned);

    if (dumps) {
        dumps->selected = aligned;
        dumps->correlation = {mod_corr, ph_corr, los_bin};
        dumps->clusters = clusters;
    }

    const int band_lo = std::clamp(ref_bin + params.zoom_band_lo_rel, 0, n_samples - 2);
    const int band_hi = std::clamp(ref_bin + params.zoom_band_hi_rel, band_lo + 1,
                                   n_samples - 1);

    // Replay the reference antenna's chirp selection and shifts on every rx,
    // then refine each cluster.
    std::vector<std::vector<dsp::cvec>> refined(n_rx);
    for (int rx = 0; rx < n_rx; ++rx) {
        std::vector<dsp::cvec> rx_profiles(aligned.chirps.size());
        if (rx == ref_rx) {
            rx_profiles = aligned.chirps;
        } else {
            for (std::size_t i = 0; i < aligned.source_indices.size(); ++i) {
                dsp::cvec prof = dsp::fft(chirp_samples(filtered, rx, aligned.source_indices[i]));
                rx_profiles[i] = circshift(prof, aligned.applied_shifts[i]);
            }
        }
        refined[rx].reserve(clusters.clusters.size());
        for (const auto& cl : clusters.clusters) {
            dsp::cvec mean(n_samples, {0.0, 0.0});
            for (int m : cl.members)
                for (int b = 0; b < n_samples; ++b) mean[b] += rx_profiles[m][b];
            for (auto& v : mean) v /= static_cast<double>(cl.members.size());
            dsp::cvec windowed = autoclutter_hamming(mean);
            if (dumps && rx == ref_rx) dumps->windowed_clusters.push_back(windowed);
            refined[rx].push_back(
                iczt_refine(windowed, {band_lo, band_hi}, params.zoom_factor));
        }
    }

    const auto ops = compute_realignment(refined[ref_rx]);

    ChannelEstimate est;
    est.zoom_factor = params.zoom_factor;
    const std::size_t n_refined = refined[0][0].size();
    const double coarse = cube.config.coarse_delay_bin_s();
    est.delay_grid_s.resize(n_refined);
    for (std::size_t m = 0; m < n_refined; ++m)
        est.delay_grid_s[m] =
            (band_lo + static_cast<double>(m) / params.zoom_factor) * coarse;

    est.cir.resize(n_rx);
    for (int rx = 0; rx < n_rx; ++rx) {
        const auto realigned = apply_realignment(refined[rx], ops);
        if (dumps && rx == ref_rx) dumps->refined_clusters = realigned;
        dsp::cvec mean(n_refined, {0.0, 0.0});
        for (const auto& cl : realigned)
            for (std::size_t b = 0; b < n_refined; ++b) mean[b] += cl[b];
        for (auto& v : mean) v /= static_cast<double>(realigned.size());
        est.cir[rx] = std::move(mean);
    }
    return est;
}

} // namespace isac
