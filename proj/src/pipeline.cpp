// SPDX-License-Identifier: Apache-2.0
#include "isac/pipeline.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "isac/errors.hpp"

namespace isac {

namespace fs = std::filesystem;

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) throw IoError("cannot open '" + path + "' for writing");
    os << std::setprecision(17);
    return os;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open '" + path + "' for reading (run the earlier "
                           "pipeline stage first, or pass --out pointing at its outputs)");
    return is;
}

std::string join_ids(const std::vector<std::string>& ids) {
    std::string s;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) s += ';';
        s += ids[i];
    }
    return s.empty() ? "direct" : s;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

void skip_comments(std::ifstream& is, std::string& line) {
    while (std::getline(is, line))
        if (!line.empty() && line[0] != '#') return;
    line.clear();
}

} // namespace

void write_truth_csv(const std::string& path, const GroundTruthChannel& truth,
                     std::uint64_t seed) {
    auto os = open_out(path);
    os << "# seed=" << seed << "\n";
    os << "# carrier_freq_hz=" << truth.carrier_freq_hz << "\n";
    os << "delay_ns,gain_db,aoa_deg,bounces\n";
    for (const auto& p : truth.paths)
        os << p.delay * 1e9 << ',' << p.gain_db << ',' << p.aoa_elevation_deg << ','
           << join_ids(p.bounce_ids) << "\n";
}

GroundTruthChannel read_truth_csv(const std::string& path) {
    auto is = open_in(path);
    GroundTruthChannel truth;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("# carrier_freq_hz=", 0) == 0) {
            truth.carrier_freq_hz = std::stod(line.substr(18));
            continue;
        }
        if (line[0] == '#' || line.rfind("delay_ns", 0) == 0) continue;
        const auto cols = split(line, ',');
        if (cols.size() < 4) throw IoError(path + ": malformed truth row");
        RayPath p;
        p.delay = std::stod(cols[0]) * 1e-9;
        p.path_length = p.delay * kSpeedOfLight;
        p.gain_db = std::stod(cols[1]);
        p.aoa_elevation_deg = std::stod(cols[2]);
        if (cols[3] != "direct") p.bounce_ids = split(cols[3], ';');
        truth.paths.push_back(std::move(p));
    }
    return truth;
}

void write_cir_csv(const std::string& path, const ChannelEstimate& est, std::uint64_t seed) {
    auto os = open_out(path);
    os << "# seed=" << seed << "\n";
    os << "# zoom_factor=" << est.zoom_factor << "\n";
    os << "delay_ns";
    for (std::size_t rx = 0; rx < est.cir.size(); ++rx)
        os << ",rx" << rx << "_re,rx" << rx << "_im";
    os << "\n";
    for (std::size_t i = 0; i < est.delay_grid_s.size(); ++i) {
        os << est.delay_grid_s[i] * 1e9;
        for (const auto& cir : est.cir)
            os << ',' << cir[i].real() << ',' << cir[i].imag();
        os << "\n";
    }
}

ChannelEstimate read_cir_csv(const std::string& path) {
    auto is = open_in(path);
    ChannelEstimate est;
    std::string line;
    std::size_t n_rx = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (line.rfind("# zoom_factor=", 0) == 0) {
            est.zoom_factor = std::stoi(line.substr(14));
            continue;
        }
        if (line[0] == '#') continue;
        if (line.rfind("delay_ns", 0) == 0) {
            n_rx = (split(line, ',').size() - 1) / 2;
            est.cir.resize(n_rx);
            continue;
        }
        const auto cols = split(line, ',');
        if (cols.size() != 1 + 2 * n_rx) throw IoError(path + ": malformed CIR row");
        est.delay_grid_s.push_back(std::stod(cols[0]) * 1e-9);
        for (std::size_t rx = 0; rx < n_rx; ++rx)
            est.cir[rx].push_back(
                {std::stod(cols[1 + 2 * rx]), std::stod(cols[2 + 2 * rx])});
    }
    if (est.cir.empty()) throw IoError(path + ": empty CIR file");
    return est;
}

void write_pdp_csv(const std::string& path, const std::vector<Pdp>& pdps,
                   std::uint64_t seed) {
    auto os = open_out(path);
    os << "# seed=" << seed << "\n";
    os << "delay_ns";
    for (const auto& p : pdps) os << ",rx" << p.rx_index << "_db";
    os << "\n";
    for (std::size_t i = 0; i < pdps[0].delays_s.size(); ++i) {
        os << pdps[0].delays_s[i] * 1e9;
        for (const auto& p : pdps) os << ',' << p.power_db[i];
        os << "\n";
    }
}

void write_rmsds_csv(const std::string& path, const std::vector<RmsDsResult>& results,
                     std::uint64_t seed) {
    auto os = open_out(path);
    os << "# seed=" << seed << "\n";
    os << "rx,rms_ds_ns,mean_delay_ns\n";
    for (std::size_t rx = 0; rx < results.size(); ++rx)
        os << rx << ',' << results[rx].rms_ds_s * 1e9 << ','
           << results[rx].mean_delay_s * 1e9 << "\n";
}

void write_aoa_csv(const std::string& path, const AoaMap& map, std::uint64_t seed) {
    auto os = open_out(path);
    os << "# seed=" << seed << "\n";
    os << "delay_ns,angle_deg,power_db\n";
    for (std::size_t d = 0; d < map.delays_s.size(); ++d)
        for (std::size_t a = 0; a < map.angles_deg.size(); ++a)
            os << map.delays_s[d] * 1e9 << ',' << map.angles_deg[a] << ','
               << map.power_db[d][a] << "\n";
}

void write_match_csv(const std::string& path, const MatchReport& report,
                     const GroundTruthChannel& truth, const std::vector<PdpTap>& taps,
                     std::uint64_t seed) {
    auto os = open_out(path);
    os << "# seed=" << seed << "\n";
    os << "kind,ray_delay_ns,ray_gain_db,tap_delay_ns,tap_power_db,"
          "delay_error_ns,gain_error_db\n";
    for (const auto& p : report.pairs) {
        const auto& ray = truth.paths[p.ray_index];
        const auto& tap = taps[p.tap_index];
        os << "matched," << ray.delay * 1e9 << ',' << ray.gain_db << ','
           << tap.delay_s * 1e9 << ',' << tap.power_db << ',' << p.delay_error_s * 1e9
           << ',' << p.gain_error_db << "\n";
    }
    for (int r : report.unmatched_rays)
        os << "unmatched_ray," << truth.paths[r].delay * 1e9 << ','
           << truth.paths[r].gain_db << ",,,,\n";
    for (int t : report.unmatched_taps)
        os << "unmatched_tap,,," << taps[t].delay_s * 1e9 << ',' << taps[t].power_db
           << ",,\n";
}

void write_stage_dumps(const std::string& out_dir, const StageDumps& dumps,
                       std::uint64_t seed) {
    auto dump_profiles = [&](const std::string& name,
                             const std::vector<dsp::cvec>& profiles) {
        if (profiles.empty()) return;
        auto os = open_out((fs::path(out_dir) / name).string());
        os << "# seed=" << seed << "\n";
        os << "bin";
        for (std::size_t i = 0; i < profiles.size(); ++i) os << ",p" << i << "_db";
        os << "\n";
        for (std::size_t b = 0; b < profiles[0].size(); ++b) {
            os << b;
            for (const auto& p : profiles) {
                const double m = std::abs(p[b]);
                os << ',' << (m > 0.0 ? 20.0 * std::log10(m) : -300.0);
            }
            os << "\n";
        }
    };
    dump_profiles("stage_selected.csv", dumps.raw_profiles);
    dump_profiles("stage_aligned.csv", dumps.selected.chirps);
    dump_profiles("stage_windowed.csv", dumps.windowed_clusters);
    dump_profiles("stage_refined.csv", dumps.refined_clusters);

    auto os = open_out((fs::path(out_dir) / "stage_correlation.csv").string());
    os << "# seed=" << seed << "\n";
    os << "i,j,module_corr,phase_corr\n";
    const auto& mc = dumps.correlation.module_corr;
    const auto& pc = dumps.correlation.phase_corr;
    for (std::size_t i = 0; i < mc.size(); ++i)
        for (std::size_t j = 0; j < mc.size(); ++j)
            os << i << ',' << j << ',' << mc[i][j] << ',' << pc[i][j] << "\n";
}

void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs) {
    nlohmann::json js;
    js["tool_version"] = kToolVersion;
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(config_hash(cfg)));
    js["config_hash"] = hash_hex;
    js["seed"] = cfg.seed;
    js["inputs"] = inputs;
    js["outputs"] = outputs;
    js["timestamp_unix"] = std::chrono::duration_cast<std::chrono::seconds>(
                               std::chrono::system_clock::now().time_since_epoch())
                               .count();
    auto os = open_out(path);
    os << js.dump(2) << "\n";
}

InterferenceConfig resolved_interference(const RunConfig& cfg) {
    InterferenceConfig interf = cfg.interference;
    if (interf.interfered_chirp_indices.empty()) {
        const double fraction = cfg.interfered_fraction.value_or(0.25);
        interf.interfered_chirp_indices =
            pick_interfered_chirps(cfg.victim.n_chirps_per_frame, fraction, cfg.seed);
    }
    return interf;
}

std::vector<std::string> run_simulate(const RunConfig& cfg, const std::string& out_dir) {
    fs::create_directories(out_dir);
    const GroundTruthChannel truth = ground_truth_channel(cfg.scene, cfg.radio);
    const InterferenceConfig interf = resolved_interference(cfg);
    const FrameCube cube =
        synth_frame(truth, cfg.victim, interf, cfg.clutter, cfg.seed);

    const std::string frame_path = (fs::path(out_dir) / "frame.isacfrm").string();
    const std::string truth_path = (fs::path(out_dir) / "truth.csv").string();
    write_frame(cube, frame_path);
    write_truth_csv(truth_path, truth, cfg.seed);
    return {frame_path, truth_path};
}

std::vector<std::string> run_extract(const RunConfig& cfg, const std::string& out_dir,
                                     bool dump_stages) {
    fs::create_directories(out_dir);
    const std::string frame_path = (fs::path(out_dir) / "frame.isacfrm").string();
    if (!fs::exists(frame_path))
        throw IoError("missing '" + frame_path + "' (run the simulate stage first)");
    const FrameCube cube = read_frame(frame_path);

    StageDumps dumps;
    const ChannelEstimate est =
        run_extraction(cube, cfg.extraction, dump_stages ? &dumps : nullptr);

    const std::string cir_path = (fs::path(out_dir) / "cir.csv").string();
    write_cir_csv(cir_path, est, cfg.seed);
    std::vector<std::string> files{cir_path};
    if (dump_stages) {
        write_stage_dumps(out_dir, dumps, cfg.seed);
        files.insert(files.end(),
                     {(fs::path(out_dir) / "stage_selected.csv").string(),
                      (fs::path(out_dir) / "stage_aligned.csv").string(),
                      (fs::path(out_dir) / "stage_windowed.csv").string(),
                      (fs::path(out_dir) / "stage_refined.csv").string(),
                      (fs::path(out_dir) / "stage_correlation.csv").string()});
    }
    return files;
}

std::vector<std::string> run_analyze(const RunConfig& cfg, const std::string& out_dir) {
    const std::string cir_path = (fs::path(out_dir) / "cir.csv").string();
    const ChannelEstimate est = read_cir_csv(cir_path);

    std::vector<Pdp> pdps;
    std::vector<RmsDsResult> rms;
    for (std::size_t rx = 0; rx < est.cir.size(); ++rx) {
        pdps.push_back(compute_pdp(est, static_cast<int>(rx)));
        rms.push_back(rms_delay_spread(pdps.back(), default_ds_window(pdps.back()),
                                       cfg.analysis.ds_weighting));
    }
    const AoaMap map =
        angle_fft(est, cfg.victim.rx_spacing_wavelengths, cfg.analysis.n_angle_bins);

    const std::string pdp_path = (fs::path(out_dir) / "pdp.csv").string();
    const std::string rms_path = (fs::path(out_dir) / "rmsds.csv").string();
    const std::string aoa_path = (fs::path(out_dir) / "aoa.csv").string();
    write_pdp_csv(pdp_path, pdps, cfg.seed);
    write_rmsds_csv(rms_path, rms, cfg.seed);
    write_aoa_csv(aoa_path, map, cfg.seed);
    return {pdp_path, rms_path, aoa_path};
}

std::vector<std::string> run_compare(const RunConfig& cfg, const std::string& out_dir) {
    const ChannelEstimate est =
        read_cir_csv((fs::path(out_dir) / "cir.csv").string());
    const GroundTruthChannel truth =
        read_truth_csv((fs::path(out_dir) / "truth.csv").string());

    const int rx = cfg.extraction.reference_rx;
    const Pdp pdp = compute_pdp(est, rx);
    const RmsDsResult rms = rms_delay_spread(pdp, default_ds_window(pdp),
                                             cfg.analysis.ds_weighting);
    const auto taps = extract_taps(pdp, cfg.analysis.tap_min_rel_db);

    MatchOptions opts;
    opts.ds_window_k = cfg.analysis.ds_window_k;
    opts.max_delay_gap_s =
        cfg.analysis.max_delay_gap_s.value_or(cfg.victim.coarse_delay_bin_s());
    opts.gate = cfg.analysis.gate;
    opts.gain_margin_db = cfg.analysis.gain_margin_db;
    const MatchReport report = compare_to_rt(taps, truth, rms, opts);

    const std::string match_path = (fs::path(out_dir) / "match.csv").string();
    write_match_csv(match_path, report, truth, taps, cfg.seed);
    return {match_path};
}

std::vector<std::string> run_pipeline_cmd(const RunConfig& cfg, const std::string& out_dir,
                                          bool dump_stages) {
    std::vector<std::string> files = run_simulate(cfg, out_dir);
    for (auto&& f : run_extract(cfg, out_dir, dump_stages)) files.push_back(f);
    for (auto&& f : run_analyze(cfg, out_dir)) files.push_back(f);
    for (auto&& f : run_compare(cfg, out_dir)) files.push_back(f);
    const std::string manifest = (fs::path(out_dir) / "manifest.json").string();
    write_manifest(manifest, cfg, {}, files);
    files.push_back(manifest);
    return files;
}

} // namespace isac
