// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "isac/radar.hpp"
#include "isac/scene.hpp"

namespace isac {

/// Raw ADC frame: complex baseband samples indexed [rx][chirp][sample].
struct FrameCube {
    std::vector<std::complex<float>> data; // rx-major, chirp-middle, sample-minor
    RadarConfig config;
    std::optional<GroundTruthChannel> truth; // carried for test oracles, not serialized

    std::complex<float>& at(int rx, int chirp, int sample) {
        return data[index(rx, chirp, sample)];
    }
    std::complex<float> at(int rx, int chirp, int sample) const {
        return data[index(rx, chirp, sample)];
    }
    std::size_t index(int rx, int chirp, int sample) const {
        return (static_cast<std::size_t>(rx) * config.n_chirps_per_frame + chirp) *
                   config.n_samples_per_chirp +
               sample;
    }

    static FrameCube zeros(const RadarConfig& cfg);
    void validate() const; // dimensions match config, samples finite
};

/// Binary frame-cube format: magic "ISACFRM1", LE u32 n_rx / n_chirps /
/// n_samples, f64 fs_adc / f_start / chirp_slope, then interleaved f32 (I,Q)
/// pairs, rx-major, chirp-middle, sample-minor.
void write_frame(const FrameCube& cube, std::ostream& os);
void write_frame(const FrameCube& cube, const std::string& path);
FrameCube read_frame(std::istream& is);
FrameCube read_frame(const std::string& path);

} // namespace isac
