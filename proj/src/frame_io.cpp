// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>

#include "isac/errors.hpp"
#include "isac/frame.hpp"

namespace isac {

namespace {

constexpr char kMagic[8] = {'I', 'S', 'A', 'C', 'F', 'R', 'M', '1'};
constexpr std::uint32_t kMaxDim = 1u << 20;

template <typename T>
void write_le(std::ostream& os, T v) {
    // Assumes a little-endian host; checked at build configure time for the
    // targets this ships on.
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) throw TruncatedPayload("frame file ended inside the header");
    return v;
}

} // namespace

FrameCube FrameCube::zeros(const RadarConfig& cfg) {
    FrameCube cube;
    cube.config = cfg;
    cube.data.assign(static_cast<std::size_t>(cfg.n_rx) * cfg.n_chirps_per_frame *
                         cfg.n_samples_per_chirp,
                     {0.0f, 0.0f});
    return cube;
}

void FrameCube::validate() const {
    const std::size_t expect = static_cast<std::size_t>(config.n_rx) *
                               config.n_chirps_per_frame * config.n_samples_per_chirp;
    if (data.size() != expect)
        throw ConfigMismatch("frame cube sample count does not match its config");
    for (const auto& v : data)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
            throw ConfigMismatch("frame cube contains non-finite samples");
}

void write_frame(const FrameCube& cube, std::ostream& os) {
    cube.validate();
    os.write(kMagic, sizeof(kMagic));
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(cube.config.n_rx));
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(cube.config.n_chirps_per_frame));
    write_le<std::uint32_t>(os, static_cast<std::uint32_t>(cube.config.n_samples_per_chirp));
    write_le<double>(os, cube.config.fs_adc_hz);
    write_le<double>(os, cube.config.f_start_hz);
    write_le<double>(os, cube.config.chirp_slope_hz_per_s);
    for (const auto& v : cube.data) {
        write_le<float>(os, v.real());
        write_le<float>(os, v.imag());
    }
    if (!os) throw IoError("failed to write frame payload");
}

void write_frame(const FrameCube& cube, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    write_frame(cube, os);
}

FrameCube read_frame(std::istream& is) {
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw BadMagic("not an ISACFRM1 frame file");

    const auto n_rx = read_le<std::uint32_t>(is);
    const auto n_chirps = read_le<std::uint32_t>(is);
    const auto n_samples = read_le<std::uint32_t>(is);
    if (n_rx == 0 || n_chirps == 0 || n_samples == 0 || n_rx > kMaxDim ||
        n_chirps > kMaxDim || n_samples > kMaxDim)
        throw DimensionOverflow("frame header dimensions out of range");
    const std::size_t total =
        static_cast<std::size_t>(n_rx) * n_chirps * n_samples;
    if (total > (std::size_t{1} << 30))
        throw DimensionOverflow("frame payload too large");

    FrameCube cube;
    cube.config.n_rx = static_cast<int>(n_rx);
    cube.config.n_chirps_per_frame = static_cast<int>(n_chirps);
    cube.config.n_samples_per_chirp = static_cast<int>(n_samples);
    cube.config.fs_adc_hz = read_le<double>(is);
    cube.config.f_start_hz = read_le<double>(is);
    cube.config.chirp_slope_hz_per_s = read_le<double>(is);
    cube.config.chirp_duration_s =
        static_cast<double>(n_samples) / cube.config.fs_adc_hz;

    cube.data.resize(total);
    is.read(reinterpret_cast<char*>(cube.data.data()),
            static_cast<std::streamsize>(total * sizeof(std::complex<float>)));
    if (is.gcount() != static_cast<std::streamsize>(total * sizeof(std::complex<float>)))
        throw TruncatedPayload("frame header declares more samples than the payload holds");
    return cube;
}

FrameCube read_frame(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoError("cannot open '" + path + "' for reading");
    return read_frame(is);
}

} // namespace isac
