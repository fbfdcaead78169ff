// SPDX-License-Identifier: Apache-2.0
#include "isac/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "isac/errors.hpp"

namespace isac {

namespace {

using nlohmann::json;

Vec3 parse_vec3(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(field + ": expected an array of 3 numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

template <typename T>
void maybe(const json& j, const char* key, T& target) {
    if (j.contains(key)) target = j.at(key).get<T>();
}

RadarConfig parse_radar(const json& j, const RadarConfig& base) {
    RadarConfig r = base;
    maybe(j, "f_start_hz", r.f_start_hz);
    maybe(j, "bandwidth_hz", r.bandwidth_hz);
    maybe(j, "chirp_slope_hz_per_s", r.chirp_slope_hz_per_s);
    maybe(j, "chirp_duration_s", r.chirp_duration_s);
    maybe(j, "n_chirps_per_frame", r.n_chirps_per_frame);
    maybe(j, "fs_adc_hz", r.fs_adc_hz);
    maybe(j, "n_samples_per_chirp", r.n_samples_per_chirp);
    maybe(j, "tx_power_dbm", r.tx_power_dbm);
    maybe(j, "noise_figure_db", r.noise_figure_db);
    maybe(j, "n_rx", r.n_rx);
    maybe(j, "rx_spacing_wavelengths", r.rx_spacing_wavelengths);
    return r;
}

json radar_to_json(const RadarConfig& r) {
    return json{{"f_start_hz", r.f_start_hz},
                {"bandwidth_hz", r.bandwidth_hz},
                {"chirp_slope_hz_per_s", r.chirp_slope_hz_per_s},
                {"chirp_duration_s", r.chirp_duration_s},
                {"n_chirps_per_frame", r.n_chirps_per_frame},
                {"fs_adc_hz", r.fs_adc_hz},
                {"n_samples_per_chirp", r.n_samples_per_chirp},
                {"tx_power_dbm", r.tx_power_dbm},
                {"noise_figure_db", r.noise_figure_db},
                {"n_rx", r.n_rx},
                {"rx_spacing_wavelengths", r.rx_spacing_wavelengths}};
}

PhaseMode parse_phase_mode(const std::string& s) {
    if (s == "random_uniform") return PhaseMode::RandomUniform;
    if (s == "quantized") return PhaseMode::Quantized;
    if (s == "coherent") return PhaseMode::Coherent;
    throw ConfigError("interference.phase_mode: unknown mode '" + s + "'");
}

std::string phase_mode_name(PhaseMode m) {
    switch (m) {
        case PhaseMode::RandomUniform: return "random_uniform";
        case PhaseMode::Quantized: return "quantized";
        case PhaseMode::Coherent: return "coherent";
    }
    return "?";
}

} // namespace

RunConfig parse_run_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    try {
        RunConfig cfg;
        if (j.contains("version") && j.at("version").get<int>() != 1)
            throw ConfigError("config: unsupported version");
        maybe(j, "seed", cfg.seed);

        if (j.contains("scene")) {
            const auto& js = j.at("scene");
            cfg.scene.tx_position = parse_vec3(js.at("tx"), "scene.tx");
            cfg.scene.rx_position = parse_vec3(js.at("rx"), "scene.rx");
            maybe(js, "max_bounces", cfg.scene.max_bounces);
            if (js.contains("reflectors")) {
                for (const auto& jr : js.at("reflectors")) {
                    PlanarReflector r;
                    r.name = jr.at("name").get<std::string>();
                    r.center = parse_vec3(jr.at("center"), "reflector.center");
                    r.normal = parse_vec3(jr.at("normal"), "reflector.normal").normalized();
                    const auto& he = jr.at("half_extents");
                    if (!he.is_array() || he.size() != 2)
                        throw ConfigError("reflector.half_extents: expected [u, v]");
                    r.half_extent_u = he[0].get<double>();
                    r.half_extent_v = he[1].get<double>();
                    maybe(jr, "reflection_loss_db", r.reflection_loss_db);
                    cfg.scene.reflectors.push_back(std::move(r));
                }
            }
            if (js.contains("scatterers")) {
                for (const auto& jp : js.at("scatterers")) {
                    PointScatterer s;
                    s.name = jp.at("name").get<std::string>();
                    s.position = parse_vec3(jp.at("position"), "scatterer.position");
                    maybe(jp, "scatter_loss_db", s.scatter_loss_db);
                    cfg.scene.scatterers.push_back(std::move(s));
                }
            }
        }

        if (j.contains("radio")) {
            const auto& jr = j.at("radio");
            maybe(jr, "carrier_freq_hz", cfg.radio.carrier_freq_hz);
            maybe(jr, "g_tx_db", cfg.radio.g_tx_db);
            maybe(jr, "g_rx_db", cfg.radio.g_rx_db);
            maybe(jr, "l_sys_db", cfg.radio.l_sys_db);
        }

        cfg.victim = parse_radar(j.value("victim", json::object()), RadarConfig{});
        if (j.contains("interference")) {
            const auto& ji = j.at("interference");
            maybe(ji, "slope_delta_hz_per_s", cfg.interference.slope_delta_hz_per_s);
            maybe(ji, "chirp_start_offset_s", cfg.interference.chirp_start_offset_s);
            if (ji.contains("interfered_chirp_indices"))
                cfg.interference.interfered_chirp_indices =
                    ji.at("interfered_chirp_indices").get<std::vector<int>>();
            if (ji.contains("interfered_fraction"))
                cfg.interfered_fraction = ji.at("interfered_fraction").get<double>();
            if (ji.contains("phase_mode"))
                cfg.interference.per_chirp_phase_mode =
                    parse_phase_mode(ji.at("phase_mode").get<std::string>());
            maybe(ji, "phase_levels", cfg.interference.phase_levels);
        }
        RadarConfig aggressor_base = cfg.victim;
        aggressor_base.chirp_slope_hz_per_s += cfg.interference.slope_delta_hz_per_s;
        cfg.interference.aggressor =
            parse_radar(j.value("aggressor", json::object()), aggressor_base);

        if (j.contains("clutter")) {
            for (const auto& jc : j.at("clutter")) {
                ClutterTap t;
                t.delay_s = jc.at("delay_ns").get<double>() * 1e-9;
                t.gain_db = jc.at("gain_db").get<double>();
                cfg.clutter.push_back(t);
            }
        }

        if (j.contains("extraction")) {
            const auto& je = j.at("extraction");
            maybe(je, "threshold_db_over_noise", cfg.extraction.threshold_db_over_noise);
            maybe(je, "module_thresh", cfg.extraction.module_thresh);
            maybe(je, "phase_thresh", cfg.extraction.phase_thresh);
            maybe(je, "zoom_factor", cfg.extraction.zoom_factor);
            if (je.contains("zoom_band")) {
                const auto& zb = je.at("zoom_band");
                cfg.extraction.zoom_band_lo_rel = zb.at(0).get<int>();
                cfg.extraction.zoom_band_hi_rel = zb.at(1).get<int>();
            }
            if (je.contains("reference_bin") && !je.at("reference_bin").is_null())
                cfg.extraction.reference_bin = je.at("reference_bin").get<int>();
            maybe(je, "reference_rx", cfg.extraction.reference_rx);
        }

        if (j.contains("analysis")) {
            const auto& ja = j.at("analysis");
            maybe(ja, "n_angle_bins", cfg.analysis.n_angle_bins);
            if (ja.contains("ds_mode")) {
                const auto mode = ja.at("ds_mode").get<std::string>();
                if (mode == "amplitude")
                    cfg.analysis.ds_weighting = DsWeighting::Amplitude;
                else if (mode == "power")
                    cfg.analysis.ds_weighting = DsWeighting::Power;
                else
                    throw ConfigError("analysis.ds_mode: expected amplitude|power");
            }
            maybe(ja, "ds_window_k", cfg.analysis.ds_window_k);
            if (ja.contains("match_max_gap_ns"))
                cfg.analysis.max_delay_gap_s =
                    ja.at("match_max_gap_ns").get<double>() * 1e-9;
            if (ja.contains("gate")) {
                const auto g = ja.at("gate").get<std::string>();
                if (g == "ds_window")
                    cfg.analysis.gate = MatchGate::DsWindow;
                else if (g == "gain_margin")
                    cfg.analysis.gate = MatchGate::GainMargin;
                else
                    throw ConfigError("analysis.gate: expected ds_window|gain_margin");
            }
            maybe(ja, "gain_margin_db", cfg.analysis.gain_margin_db);
            maybe(ja, "tap_min_rel_db", cfg.analysis.tap_min_rel_db);
        }

        cfg.extraction.validate();
        cfg.victim.validate();
        return cfg;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config field error: ") + e.what());
    }
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_run_config(ss.str());
}

std::string canonical_config_json(const RunConfig& cfg) {
    json js;
    js["version"] = 1;
    js["seed"] = cfg.seed;
    json scene;
    scene["tx"] = {cfg.scene.tx_position.x, cfg.scene.tx_position.y, cfg.scene.tx_position.z};
    scene["rx"] = {cfg.scene.rx_position.x, cfg.scene.rx_position.y, cfg.scene.rx_position.z};
    scene["max_bounces"] = cfg.scene.max_bounces;
    scene["reflectors"] = json::array();
    for (const auto& r : cfg.scene.reflectors)
        scene["reflectors"].push_back(
            {{"name", r.name},
             {"center", {r.center.x, r.center.y, r.center.z}},
             {"normal", {r.normal.x, r.normal.y, r.normal.z}},
             {"half_extents", {r.half_extent_u, r.half_extent_v}},
             {"reflection_loss_db", r.reflection_loss_db}});
    scene["scatterers"] = json::array();
    for (const auto& s : cfg.scene.scatterers)
        scene["scatterers"].push_back(
            {{"name", s.name},
             {"position", {s.position.x, s.position.y, s.position.z}},
             {"scatter_loss_db", s.scatter_loss_db}});
    js["scene"] = scene;
    js["radio"] = {{"carrier_freq_hz", cfg.radio.carrier_freq_hz},
                   {"g_tx_db", cfg.radio.g_tx_db},
                   {"g_rx_db", cfg.radio.g_rx_db},
                   {"l_sys_db", cfg.radio.l_sys_db}};
    js["victim"] = radar_to_json(cfg.victim);
    js["aggressor"] = radar_to_json(cfg.interference.aggressor);
    js["interference"] = {
        {"slope_delta_hz_per_s", cfg.interference.slope_delta_hz_per_s},
        {"chirp_start_offset_s", cfg.interference.chirp_start_offset_s},
        {"interfered_chirp_indices", cfg.interference.interfered_chirp_indices},
        {"interfered_fraction",
         cfg.interfered_fraction ? json(*cfg.interfered_fraction) : json(nullptr)},
        {"phase_mode", phase_mode_name(cfg.interference.per_chirp_phase_mode)},
        {"phase_levels", cfg.interference.phase_levels}};
    js["clutter"] = json::array();
    for (const auto& t : cfg.clutter)
        js["clutter"].push_back({{"delay_ns", t.delay_s * 1e9}, {"gain_db", t.gain_db}});
    js["extraction"] = {
        {"threshold_db_over_noise", cfg.extraction.threshold_db_over_noise},
        {"module_thresh", cfg.extraction.module_thresh},
        {"phase_thresh", cfg.extraction.phase_thresh},
        {"zoom_factor", cfg.extraction.zoom_factor},
        {"zoom_band", {cfg.extraction.zoom_band_lo_rel, cfg.extraction.zoom_band_hi_rel}},
        {"reference_bin",
         cfg.extraction.reference_bin ? json(*cfg.extraction.reference_bin) : json(nullptr)},
        {"reference_rx", cfg.extraction.reference_rx}};
    js["analysis"] = {
        {"n_angle_bins", cfg.analysis.n_angle_bins},
        {"ds_mode",
         cfg.analysis.ds_weighting == DsWeighting::Amplitude ? "amplitude" : "power"},
        {"ds_window_k", cfg.analysis.ds_window_k},
        {"match_max_gap_ns",
         cfg.analysis.max_delay_gap_s ? json(*cfg.analysis.max_delay_gap_s * 1e9)
                                      : json(nullptr)},
        {"gate", cfg.analysis.gate == MatchGate::DsWindow ? "ds_window" : "gain_margin"},
        {"gain_margin_db", cfg.analysis.gain_margin_db},
        {"tap_min_rel_db", cfg.analysis.tap_min_rel_db}};
    return js.dump(); // nlohmann objects are key-sorted, so this is canonical
}

std::uint64_t config_hash(const RunConfig& cfg) {
    const std::string s = canonical_config_json(cfg);
    std::uint64_t h = 0xcbf29ce484222325ull; // FNV-1a
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

} // namespace isac
