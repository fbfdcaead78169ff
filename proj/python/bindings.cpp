// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the channel sounder core: scene tracing, frame
// synthesis, CIR extraction and the analysis helpers.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "isac/errors.hpp"
#include "isac/pipeline.hpp"

namespace py = pybind11;
using namespace isac;

namespace {

FrameCube cube_from_array(py::array_t<std::complex<float>, py::array::c_style> arr,
                          double fs_adc_hz, double f_start_hz, double chirp_slope) {
    if (arr.ndim() != 3)
        throw ConfigError("frame array must have shape (n_rx, n_chirps, n_samples)");
    FrameCube cube;
    cube.config.n_rx = static_cast<int>(arr.shape(0));
    cube.config.n_chirps_per_frame = static_cast<int>(arr.shape(1));
    cube.config.n_samples_per_chirp = static_cast<int>(arr.shape(2));
    cube.config.fs_adc_hz = fs_adc_hz;
    cube.config.f_start_hz = f_start_hz;
    cube.config.chirp_slope_hz_per_s = chirp_slope;
    cube.config.chirp_duration_s = arr.shape(2) / fs_adc_hz;
    cube.data.assign(arr.data(), arr.data() + arr.size());
    return cube;
}

py::array_t<std::complex<float>> cube_to_array(const FrameCube& cube) {
    py::array_t<std::complex<float>> arr({cube.config.n_rx, cube.config.n_chirps_per_frame,
                                          cube.config.n_samples_per_chirp});
    std::copy(cube.data.begin(), cube.data.end(), arr.mutable_data());
    return arr;
}

py::array_t<double> vector_to_array(const std::vector<double>& v) {
    py::array_t<double> arr(py::array::ShapeContainer{static_cast<py::ssize_t>(v.size())});
    std::copy(v.begin(), v.end(), arr.mutable_data());
    return arr;
}

py::dict estimate_to_dict(const ChannelEstimate& est) {
    const auto n_rx = static_cast<py::ssize_t>(est.cir.size());
    const auto n_bins = static_cast<py::ssize_t>(est.delay_grid_s.size());
    py::array_t<std::complex<double>> cir({n_rx, n_bins});
    for (py::ssize_t rx = 0; rx < n_rx; ++rx)
        std::copy(est.cir[rx].begin(), est.cir[rx].end(),
                  cir.mutable_data() + rx * n_bins);
    py::dict d;
    d["delays_s"] = vector_to_array(est.delay_grid_s);
    d["cir"] = cir;
    d["zoom_factor"] = est.zoom_factor;
    return d;
}

py::list truth_to_list(const GroundTruthChannel& truth) {
    py::list out;
    for (const auto& p : truth.paths) {
        py::dict d;
        d["path_length_m"] = p.path_length;
        d["delay_s"] = p.delay;
        d["gain_db"] = p.gain_db;
        d["aoa_elevation_deg"] = p.aoa_elevation_deg;
        d["bounce_ids"] = p.bounce_ids;
        out.append(d);
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "FMCW interference channel sounding: scene ray tracing, frame "
              "synthesis, CIR extraction and analysis";
    m.attr("__version__") = kToolVersion;
    m.attr("SPEED_OF_LIGHT") = kSpeedOfLight;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_IOError);

    m.def("ground_truth",
          [](const std::string& config_json) {
              const RunConfig cfg = parse_run_config(config_json);
              return truth_to_list(ground_truth_channel(cfg.scene, cfg.radio));
          },
          py::arg("config_json"),
          "Ray-traced tap list (delay, gain, elevation AoA, bounces) for the "
          "scene in a run-config JSON string.");

    m.def("path_gain_db", &path_gain_db, py::arg("path_length_m"),
          py::arg("carrier_freq_hz"), py::arg("g_tx_db") = 0.0, py::arg("g_rx_db") = 0.0,
          py::arg("l_sys_db") = 0.0, py::arg("l_ref_total_db") = 0.0);

    m.def("synthesize",
          [](const std::string& config_json) {
              const RunConfig cfg = parse_run_config(config_json);
              const auto truth = ground_truth_channel(cfg.scene, cfg.radio);
              const auto cube = synth_frame(truth, cfg.victim, resolved_interference(cfg),
                                            cfg.clutter, cfg.seed);
              return py::make_tuple(cube_to_array(cube), truth_to_list(truth));
          },
          py::arg("config_json"),
          "Synthesize the victim frame for a run config; returns "
          "(complex64 array [rx, chirp, sample], ground-truth tap list).");

    m.def("extract_cir",
          [](py::array_t<std::complex<float>, py::array::c_style> frame, double fs_adc_hz,
             double f_start_hz, double chirp_slope_hz_per_s, double threshold_db,
             double module_thresh, double phase_thresh, int zoom_factor) {
              const FrameCube cube =
                  cube_from_array(frame, fs_adc_hz, f_start_hz, chirp_slope_hz_per_s);
              ExtractionParams params;
              params.threshold_db_over_noise = threshold_db;
              params.module_thresh = module_thresh;
              params.phase_thresh = phase_thresh;
              params.zoom_factor = zoom_factor;
              return estimate_to_dict(run_extraction(cube, params));
          },
          py::arg("frame"), py::arg("fs_adc_hz"), py::arg("f_start_hz"),
          py::arg("chirp_slope_hz_per_s"), py::arg("threshold_db") = 10.0,
          py::arg("module_thresh") = 0.85, py::arg("phase_thresh") = 0.8,
          py::arg("zoom_factor") = 16,
          "Run the full extraction chain on a raw frame array; returns a dict "
          "with 'delays_s' and per-antenna complex 'cir'.");

    m.def("rms_delay_spread",
          [](py::array_t<double> delays_s, py::array_t<double> power_db,
             const std::string& weighting) {
              Pdp pdp;
              pdp.delays_s.assign(delays_s.data(), delays_s.data() + delays_s.size());
              pdp.power_db.assign(power_db.data(), power_db.data() + power_db.size());
              const auto w = weighting == "power" ? DsWeighting::Power
                                                  : DsWeighting::Amplitude;
              const auto r = rms_delay_spread(pdp, default_ds_window(pdp), w);
              return py::make_tuple(r.rms_ds_s, r.mean_delay_s);
          },
          py::arg("delays_s"), py::arg("power_db"), py::arg("weighting") = "amplitude",
          "(rms_ds_s, mean_delay_s) over the default noise-gated window.");

    m.def("angle_map",
          [](py::array_t<std::complex<double>, py::array::c_style> cir,
             py::array_t<double> delays_s, double rx_spacing_wavelengths,
             int n_angle_bins) {
              if (cir.ndim() != 2)
                  throw ConfigError("cir must have shape (n_rx, n_bins)");
              ChannelEstimate est;
              est.delay_grid_s.assign(delays_s.data(), delays_s.data() + delays_s.size());
              est.cir.resize(cir.shape(0));
              for (py::ssize_t rx = 0; rx < cir.shape(0); ++rx)
                  est.cir[rx].assign(cir.data() + rx * cir.shape(1),
                                     cir.data() + (rx + 1) * cir.shape(1));
              const AoaMap map = angle_fft(est, rx_spacing_wavelengths, n_angle_bins);
              const auto nd = static_cast<py::ssize_t>(map.delays_s.size());
              const auto na = static_cast<py::ssize_t>(map.angles_deg.size());
              py::array_t<double> grid({nd, na});
              for (py::ssize_t d = 0; d < nd; ++d)
                  std::copy(map.power_db[d].begin(), map.power_db[d].end(),
                            grid.mutable_data() + d * na);
              return py::make_tuple(vector_to_array(map.angles_deg), grid);
          },
          py::arg("cir"), py::arg("delays_s"), py::arg("rx_spacing_wavelengths") = 0.5,
          py::arg("n_angle_bins") = 181,
          "(angles_deg, power_db[delay, angle]) normalized to a 0 dB peak.");

    m.def("write_frame",
          [](const std::string& path,
             py::array_t<std::complex<float>, py::array::c_style> frame, double fs_adc_hz,
             double f_start_hz, double chirp_slope_hz_per_s) {
              write_frame(cube_from_array(frame, fs_adc_hz, f_start_hz,
                                          chirp_slope_hz_per_s),
                          path);
          },
          py::arg("path"), py::arg("frame"), py::arg("fs_adc_hz"), py::arg("f_start_hz"),
          py::arg("chirp_slope_hz_per_s"));

    m.def("read_frame",
          [](const std::string& path) {
              const FrameCube cube = read_frame(path);
              py::dict meta;
              meta["fs_adc_hz"] = cube.config.fs_adc_hz;
              meta["f_start_hz"] = cube.config.f_start_hz;
              meta["chirp_slope_hz_per_s"] = cube.config.chirp_slope_hz_per_s;
              return py::make_tuple(cube_to_array(cube), meta);
          },
          py::arg("path"));

    m.def("run_pipeline",
          [](const std::string& config_json, const std::string& out_dir,
             bool dump_stages) {
              return run_pipeline_cmd(parse_run_config(config_json), out_dir, dump_stages);
          },
          py::arg("config_json"), py::arg("out_dir"), py::arg("dump_stages") = false,
          "simulate + extract + analyze + compare; returns the written files.");
}
