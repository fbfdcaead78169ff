// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <complex>
#include <random>

#include <doctest.h>

#include "isac/dsp.hpp"

using namespace isac;
using dsp::cvec;

namespace {

cvec tone(std::size_t n, double bin, double phase = 0.0, double amp = 1.0) {
    cvec x(n);
    for (std::size_t k = 0; k < n; ++k) {
        const double ang = 2.0 * M_PI * bin * k / n + phase;
        x[k] = amp * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    return x;
}

// Independent direct DFT used as the oracle for the FFT path.
cvec dft_oracle(const cvec& x) {
    const std::size_t n = x.size();
    cvec out(n);
    for (std::size_t m = 0; m < n; ++m) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t k = 0; k < n; ++k) {
            const double ang = -2.0 * M_PI * static_cast<double>(m) * k / n;
            acc += x[k] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[m] = acc;
    }
    return out;
}

} // namespace

TEST_CASE("fft matches a direct DFT oracle") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g(0.0, 1.0);
    cvec x(64);
    for (auto& v : x) v = {g(rng), g(rng)};
    const cvec a = dsp::fft(x);
    const cvec b = dft_oracle(x);
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(a[i] - b[i]) < 1e-9);
}

TEST_CASE("ifft inverts fft") {
    const cvec x = tone(128, 10.3, 0.7);
    const cvec y = dsp::ifft(dsp::fft(x));
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(std::abs(y[i] - x[i]) < 1e-12);
}

TEST_CASE("czt with zoom 1 over the full band degenerates to the DFT") {
    const cvec x = tone(64, 5.0);
    const cvec spec = dsp::fft(x);
    const cvec czt = dsp::czt_band(x, 0.0, 63.0, 1);
    REQUIRE(czt.size() == spec.size());
    double max_rel = 0.0;
    double scale = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) {
        max_rel = std::max(max_rel, std::abs(czt[i] - spec[i]));
        scale = std::max(scale, std::abs(spec[i]));
    }
    CHECK(max_rel / scale < 1e-9);
}

TEST_CASE("czt localizes a fractional-bin tone") {
    const double true_bin = 10.30;
    const cvec x = tone(256, true_bin);
    const int zoom = 16;
    const cvec band = dsp::czt_band(x, 6.0, 14.0, zoom);
    const std::size_t peak = dsp::peak_index(band);
    const double est_bin = 6.0 + static_cast<double>(peak) / zoom;
    CHECK(std::abs(est_bin - true_bin) <= 0.05);
}

TEST_CASE("periodic hamming window has coherent gain 0.54") {
    const auto w = dsp::hamming_periodic(256);
    double mean = 0.0;
    for (double v : w) mean += v;
    mean /= w.size();
    CHECK(mean == doctest::Approx(0.54).epsilon(1e-12));
}

TEST_CASE("median handles odd and even lengths") {
    CHECK(dsp::median({3.0, 1.0, 2.0}) == 2.0);
    CHECK(dsp::median({4.0, 1.0, 2.0, 3.0}) == 2.5);
}
