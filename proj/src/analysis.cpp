// SPDX-License-Identifier: Apache-2.0
#include "isac/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "isac/errors.hpp"

namespace isac {

namespace {
constexpr double kFloorDb = -300.0; // stand-in for log of zero
}

Pdp compute_pdp(const ChannelEstimate& est, int rx) {
    if (rx < 0 || rx >= static_cast<int>(est.cir.size()))
        throw ConfigError("pdp: rx index out of range");
    Pdp pdp;
    pdp.rx_index = rx;
    pdp.delays_s = est.delay_grid_s;
    pdp.power_db.resize(est.cir[rx].size());
    for (std::size_t i = 0; i < est.cir[rx].size(); ++i) {
        const double mag = std::abs(est.cir[rx][i]);
        pdp.power_db[i] = mag > 0.0 ? 20.0 * std::log10(mag) : kFloorDb;
    }
    return pdp;
}

std::pair<double, double> default_ds_window(const Pdp& pdp) {
    std::vector<double> lin(pdp.power_db.size());
    for (std::size_t i = 0; i < lin.size(); ++i)
        lin[i] = std::pow(10.0, pdp.power_db[i] / 10.0);
    const double floor_db = 10.0 * std::log10(dsp::median(lin));
    const double gate = floor_db + 6.0;
    int first = -1, last = -1;
    for (std::size_t i = 0; i < pdp.power_db.size(); ++i) {
        if (pdp.power_db[i] > gate) {
            if (first < 0) first = static_cast<int>(i);
            last = static_cast<int>(i);
        }
    }
    if (first < 0) throw EmptyWindow("no PDP sample rises above the noise floor");
    return {pdp.delays_s[first], pdp.delays_s[last]};
}

RmsDsResult rms_delay_spread(const Pdp& pdp, std::pair<double, double> window,
                             DsWeighting weighting) {
    const auto [t0, t1] = window;
    double sum_g = 0.0, sum_gt = 0.0;
    for (std::size_t i = 0; i < pdp.delays_s.size(); ++i) {
        const double tau = pdp.delays_s[i];
        if (tau < t0 || tau > t1) continue;
        const double div = weighting == DsWeighting::Amplitude ? 20.0 : 10.0;
        const double g = std::pow(10.0, pdp.power_db[i] / div);
        sum_g += g;
        sum_gt += g * tau;
    }
    if (sum_g <= 0.0) throw EmptyWindow("DS window holds no energy");
    const double mean_delay = sum_gt / sum_g;
    double sum_gd2 = 0.0;
    for (std::size_t i = 0; i < pdp.delays_s.size(); ++i) {
        const double tau = pdp.delays_s[i];
        if (tau < t0 || tau > t1) continue;
        const double div = weighting == DsWeighting::Amplitude ? 20.0 : 10.0;
        const double g = std::pow(10.0, pdp.power_db[i] / div);
        const double d = tau - mean_delay;
        sum_gd2 += g * d * d;
    }
    RmsDsResult r;
    r.rms_ds_s = std::sqrt(sum_gd2 / sum_g);
    r.mean_delay_s = mean_delay;
    r.window = window;
    return r;
}

AoaMap angle_fft(const ChannelEstimate& est, double rx_spacing_wavelengths,
                 int n_angle_bins) {
    const int n_rx = static_cast<int>(est.cir.size());
    if (n_rx < 2) throw TooFewAntennas("angle analysis needs at least two rx antennas");
    if (n_angle_bins < 2) throw ConfigError("angle grid needs at least two bins");

    AoaMap map;
    map.n_angle_bins = n_angle_bins;
    map.delays_s = est.delay_grid_s;
    map.angles_deg.resize(n_angle_bins);
    for (int a = 0; a < n_angle_bins; ++a)
        map.angles_deg[a] = -90.0 + 180.0 * a / (n_angle_bins - 1);

    const std::size_t n_delay = est.delay_grid_s.size();
    map.power_db.assign(n_delay, std::vector<double>(n_angle_bins, kFloorDb));
    double peak = 0.0;
    std::vector<std::vector<double>> lin(n_delay, std::vector<double>(n_angle_bins, 0.0));
    for (std::size_t d = 0; d < n_delay; ++d) {
        for (int a = 0; a < n_angle_bins; ++a) {
            const double s = std::sin(deg2rad(map.angles_deg[a]));
            std::complex<double> acc{0.0, 0.0};
            for (int rx = 0; rx < n_rx; ++rx) {
                const double ang = -2.0 * M_PI * rx * rx_spacing_wavelengths * s;
                acc += est.cir[rx][d] * std::complex<double>(std::cos(ang), std::sin(ang));
            }
            lin[d][a] = std::norm(acc);
            peak = std::max(peak, lin[d][a]);
        }
    }
    if (peak > 0.0) {
        for (std::size_t d = 0; d < n_delay; ++d)
            for (int a = 0; a < n_angle_bins; ++a)
                if (lin[d][a] > 0.0)
                    map.power_db[d][a] = 10.0 * std::log10(lin[d][a] / peak);
    }
    return map;
}

std::vector<PdpTap> extract_taps(const Pdp& pdp, double min_rel_db) {
    std::vector<PdpTap> taps;
    if (pdp.power_db.size() < 3) return taps;
    const double max_db = *std::max_element(pdp.power_db.begin(), pdp.power_db.end());
    std::vector<double> lin(pdp.power_db.size());
    for (std::size_t i = 0; i < lin.size(); ++i)
        lin[i] = std::pow(10.0, pdp.power_db[i] / 10.0);
    const double floor_gate = 10.0 * std::log10(dsp::median(lin)) + 6.0;
    const double rel_gate = max_db - min_rel_db;
    for (std::size_t i = 1; i + 1 < pdp.power_db.size(); ++i) {
        const double p = pdp.power_db[i];
        if (p <= pdp.power_db[i - 1] || p < pdp.power_db[i + 1]) continue;
        if (p < rel_gate || p < floor_gate) continue;
        taps.push_back({pdp.delays_s[i], p});
    }
    return taps;
}

MatchReport compare_to_rt(const std::vector<PdpTap>& taps, const GroundTruthChannel& truth,
                          const RmsDsResult& rms, const MatchOptions& opts) {
    MatchReport report;

    // Gate the simulated rays.
    std::vector<int> gated;
    if (opts.gate == MatchGate::DsWindow) {
        const double lo = rms.mean_delay_s - opts.ds_window_k * rms.rms_ds_s;
        const double hi = rms.mean_delay_s + opts.ds_window_k * rms.rms_ds_s;
        for (int i = 0; i < static_cast<int>(truth.paths.size()); ++i)
            if (truth.paths[i].delay >= lo && truth.paths[i].delay <= hi)
                gated.push_back(i);
    } else {
        double best = -std::numeric_limits<double>::infinity();
        for (const auto& p : truth.paths) best = std::max(best, p.gain_db);
        for (int i = 0; i < static_cast<int>(truth.paths.size()); ++i)
            if (truth.paths[i].gain_db >= best - opts.gain_margin_db) gated.push_back(i);
    }

    double best_ray_gain = -std::numeric_limits<double>::infinity();
    for (int i : gated) best_ray_gain = std::max(best_ray_gain, truth.paths[i].gain_db);
    double best_tap_db = -std::numeric_limits<double>::infinity();
    for (const auto& t : taps) best_tap_db = std::max(best_tap_db, t.power_db);

    // Strongest rays first, each grabbing its nearest free tap.
    std::vector<int> order = gated;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return truth.paths[a].gain_db > truth.paths[b].gain_db;
    });
    std::vector<bool> tap_used(taps.size(), false);
    for (int ray : order) {
        int best_tap = -1;
        double best_gap = opts.max_delay_gap_s;
        for (int t = 0; t < static_cast<int>(taps.size()); ++t) {
            if (tap_used[t]) continue;
            const double gap = std::abs(taps[t].delay_s - truth.paths[ray].delay);
            if (gap <= best_gap) {
                best_gap = gap;
                best_tap = t;
            }
        }
        if (best_tap < 0) {
            report.unmatched_rays.push_back(ray);
            continue;
        }
        tap_used[best_tap] = true;
        MatchPair pair;
        pair.ray_index = ray;
        pair.tap_index = best_tap;
        pair.delay_error_s = taps[best_tap].delay_s - truth.paths[ray].delay;
        pair.gain_error_db = (taps[best_tap].power_db - best_tap_db) -
                             (truth.paths[ray].gain_db - best_ray_gain);
        report.pairs.push_back(pair);
    }
    for (int t = 0; t < static_cast<int>(taps.size()); ++t)
        if (!tap_used[t]) report.unmatched_taps.push_back(t);
    return report;
}

} // namespace isac
