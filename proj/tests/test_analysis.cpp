// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <complex>

#include <doctest.h>

#include "isac/analysis.hpp"
#include "isac/errors.hpp"

using namespace isac;

namespace {

Pdp make_pdp(std::vector<double> delays_ns, std::vector<double> power_db) {
    Pdp pdp;
    for (double d : delays_ns) pdp.delays_s.push_back(d * 1e-9);
    pdp.power_db = std::move(power_db);
    return pdp;
}

ChannelEstimate estimate_with_steering(double aoa_deg, int n_rx, double spacing,
                                       std::size_t n_bins = 33, std::size_t tap_bin = 16) {
    ChannelEstimate est;
    est.zoom_factor = 1;
    for (std::size_t b = 0; b < n_bins; ++b) est.delay_grid_s.push_back(b * 0.625e-9);
    const double s = std::sin(deg2rad(aoa_deg));
    for (int rx = 0; rx < n_rx; ++rx) {
        dsp::cvec cir(n_bins, {0.0, 0.0});
        cir[tap_bin] = std::polar(1.0, 2.0 * M_PI * rx * spacing * s);
        est.cir.push_back(std::move(cir));
    }
    return est;
}

double map_peak_angle(const AoaMap& map, std::size_t delay_idx) {
    const auto& row = map.power_db[delay_idx];
    const std::size_t best = std::max_element(row.begin(), row.end()) - row.begin();
    return map.angles_deg[best];
}

} // namespace

TEST_CASE("PDP is 20 log10 of the CIR magnitude with a floor for exact zeros") {
    ChannelEstimate est;
    est.delay_grid_s = {0.0, 1e-9, 2e-9};
    est.cir = {{{1.0, 0.0}, {0.0, 0.0}, {0.0, 10.0}}};
    const Pdp pdp = compute_pdp(est, 0);
    CHECK(pdp.power_db[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pdp.power_db[1] <= -250.0);
    CHECK(pdp.power_db[2] == doctest::Approx(20.0).epsilon(1e-12));
    CHECK_THROWS_AS(compute_pdp(est, 3), ConfigError);
}

TEST_CASE("rms delay spread closed-form oracles") {
    SUBCASE("single tap has zero spread") {
        const Pdp pdp = make_pdp({0, 10, 20}, {-300, 0, -300});
        const auto r = rms_delay_spread(pdp, {-1e-9, 21e-9});
        CHECK(r.mean_delay_s == doctest::Approx(10e-9).epsilon(1e-9));
        CHECK(r.rms_ds_s < 1e-13);
    }

    SUBCASE("symmetric equal pair: mean at the midpoint, rms = half spacing") {
        const Pdp pdp = make_pdp({0, 10}, {0, 0});
        const auto r = rms_delay_spread(pdp, {0.0, 10e-9});
        CHECK(r.mean_delay_s == doctest::Approx(5e-9).epsilon(1e-12));
        CHECK(r.rms_ds_s == doctest::Approx(5e-9).epsilon(1e-12));
    }

    SUBCASE("hand-computed three-tap oracle, amplitude weighting") {
        // g = [1, 0.5, 0.25] at [0, 10, 20] ns:
        // mean = (0 + 5 + 5) / 1.75 = 40/7 ns
        // E[t^2] = (0 + 50 + 100) / 1.75 ns^2; rms = sqrt(1050/1.75 - (40/7)^2)... computed below
        const Pdp pdp = make_pdp({0, 10, 20},
                                 {0.0, 20.0 * std::log10(0.5), 20.0 * std::log10(0.25)});
        const auto r = rms_delay_spread(pdp, {0.0, 20e-9});
        const double mean = (0.0 + 0.5 * 10.0 + 0.25 * 20.0) / 1.75;
        const double m2 = (0.0 + 0.5 * 100.0 + 0.25 * 400.0) / 1.75;
        CHECK(r.mean_delay_s * 1e9 == doctest::Approx(mean).epsilon(1e-12));
        CHECK(r.rms_ds_s * 1e9 ==
              doctest::Approx(std::sqrt(m2 - mean * mean)).epsilon(1e-12));
    }

    SUBCASE("power weighting uses linear powers as weights") {
        const Pdp pdp = make_pdp({0, 10}, {0.0, -10.0});
        const auto r = rms_delay_spread(pdp, {0.0, 10e-9}, DsWeighting::Power);
        const double mean = (0.0 + 0.1 * 10.0) / 1.1;
        const double m2 = (0.0 + 0.1 * 100.0) / 1.1;
        CHECK(r.mean_delay_s * 1e9 == doctest::Approx(mean).epsilon(1e-12));
        CHECK(r.rms_ds_s * 1e9 ==
              doctest::Approx(std::sqrt(m2 - mean * mean)).epsilon(1e-12));
    }

    SUBCASE("invariant under uniform gain scaling, equivariant under delay shift") {
        const Pdp a = make_pdp({0, 5, 10, 15}, {-3.0, 0.0, -7.0, -12.0});
        Pdp scaled = a;
        for (auto& p : scaled.power_db) p += 17.0;
        Pdp shifted = a;
        for (auto& d : shifted.delays_s) d += 4e-9;
        const auto ra = rms_delay_spread(a, {-1e-9, 16e-9});
        const auto rs = rms_delay_spread(scaled, {-1e-9, 16e-9});
        const auto rt = rms_delay_spread(shifted, {3e-9, 20e-9});
        CHECK(rs.rms_ds_s == doctest::Approx(ra.rms_ds_s).epsilon(1e-12));
        CHECK(rs.mean_delay_s == doctest::Approx(ra.mean_delay_s).epsilon(1e-12));
        CHECK(rt.rms_ds_s == doctest::Approx(ra.rms_ds_s).epsilon(1e-12));
        CHECK(rt.mean_delay_s ==
              doctest::Approx(ra.mean_delay_s + 4e-9).epsilon(1e-12));
    }

    SUBCASE("empty window throws") {
        const Pdp pdp = make_pdp({0, 10}, {0.0, 0.0});
        CHECK_THROWS_AS(rms_delay_spread(pdp, {20e-9, 30e-9}), EmptyWindow);
    }
}

TEST_CASE("default DS window brackets the samples above the floor + 6 dB") {
    const Pdp pdp = make_pdp({0, 1, 2, 3, 4, 5, 6, 7},
                             {-90, -90, 0, -3, -10, -90, -90, -90});
    const auto [lo, hi] = default_ds_window(pdp);
    CHECK(lo == doctest::Approx(2e-9).epsilon(1e-12));
    CHECK(hi == doctest::Approx(4e-9).epsilon(1e-12));
}

TEST_CASE("angle scan finds the steering direction") {
    SUBCASE("broadside array peaks at 0 degrees") {
        const auto map = angle_fft(estimate_with_steering(0.0, 4, 0.5), 0.5, 181);
        CHECK(map_peak_angle(map, 16) == doctest::Approx(0.0).scale(1.0));
        // normalized: global peak is 0 dB
        double best = -1e9;
        for (const auto& row : map.power_db)
            for (double v : row) best = std::max(best, v);
        CHECK(best == doctest::Approx(0.0).scale(1e-9));
    }

    SUBCASE("off-broadside tap recovered within the 1-degree grid") {
        for (double aoa : {-30.0, 17.0, 30.0}) {
            const auto map = angle_fft(estimate_with_steering(aoa, 8, 0.5), 0.5, 181);
            CHECK(std::abs(map_peak_angle(map, 16) - aoa) <= 1.0);
        }
    }

    SUBCASE("scan is invariant under a global complex scale") {
        auto est = estimate_with_steering(20.0, 4, 0.5);
        auto scaled = est;
        for (auto& cir : scaled.cir)
            for (auto& v : cir) v *= std::polar(3.0, 0.8);
        const auto a = angle_fft(est, 0.5, 181);
        const auto b = angle_fft(scaled, 0.5, 181);
        for (std::size_t d = 0; d < a.power_db.size(); ++d)
            for (std::size_t g = 0; g < a.power_db[d].size(); ++g)
                CHECK(a.power_db[d][g] == doctest::Approx(b.power_db[d][g]).scale(1.0));
    }

    SUBCASE("a single antenna cannot resolve angle") {
        CHECK_THROWS_AS(angle_fft(estimate_with_steering(0.0, 1, 0.5), 0.5, 181),
                        TooFewAntennas);
    }
}

TEST_CASE("tap extraction keeps prominent local maxima only") {
    const Pdp pdp = make_pdp({0, 1, 2, 3, 4, 5, 6, 7, 8},
                             {-90, -90, 0, -90, -8, -90, -50, -90, -90});
    const auto taps = extract_taps(pdp, 30.0);
    REQUIRE(taps.size() == 2); // -50 dB tap is below the 30 dB relative cut
    CHECK(taps[0].delay_s == doctest::Approx(2e-9).epsilon(1e-12));
    CHECK(taps[1].delay_s == doctest::Approx(4e-9).epsilon(1e-12));
    CHECK(taps[1].power_db == doctest::Approx(-8.0).epsilon(1e-12));
}

TEST_CASE("comparison against ray-traced truth") {
    GroundTruthChannel truth;
    for (const auto& [delay_ns, gain] :
         {std::pair{10.0, -80.0}, std::pair{14.0, -86.0}, std::pair{60.0, -84.0}}) {
        RayPath p;
        p.delay = delay_ns * 1e-9;
        p.path_length = p.delay * kSpeedOfLight;
        p.gain_db = gain;
        truth.paths.push_back(p);
    }

    SUBCASE("taps that mirror the truth match with zero error") {
        const std::vector<PdpTap> taps = {{10.0e-9, -40.0}, {14.0e-9, -46.0}};
        RmsDsResult rms;
        rms.mean_delay_s = 11e-9;
        rms.rms_ds_s = 4e-9; // window [7, 15] ns excludes the 60 ns ray
        const MatchReport rep = compare_to_rt(taps, truth, rms);
        REQUIRE(rep.pairs.size() == 2);
        for (const auto& pr : rep.pairs) {
            CHECK(std::abs(pr.delay_error_s) < 1e-15);
            CHECK(std::abs(pr.gain_error_db) < 1e-12);
        }
        // the 60 ns ray sits outside the DS gate and is not a candidate at all
        CHECK(rep.unmatched_rays.empty());
        CHECK(rep.unmatched_taps.empty());
    }

    SUBCASE("gain-margin gating keeps every strong ray") {
        const std::vector<PdpTap> taps = {{10.0e-9, -40.0}, {14.0e-9, -46.0},
                                          {60.0e-9, -44.0}};
        MatchOptions opts;
        opts.gate = MatchGate::GainMargin;
        opts.gain_margin_db = 25.0;
        const MatchReport rep = compare_to_rt(taps, truth, {}, opts);
        CHECK(rep.pairs.size() == 3);
        CHECK(rep.unmatched_rays.empty());
    }

    SUBCASE("taps beyond the delay gap stay unmatched") {
        const std::vector<PdpTap> taps = {{10.0e-9, -40.0}, {25.0e-9, -52.0}};
        RmsDsResult rms;
        rms.mean_delay_s = 11e-9;
        rms.rms_ds_s = 4e-9;
        const MatchReport rep = compare_to_rt(taps, truth, rms);
        REQUIRE(rep.pairs.size() == 1);
        CHECK(rep.pairs[0].ray_index == 0);
        CHECK(rep.unmatched_taps == std::vector<int>{1});
    }
}
