// SPDX-License-Identifier: Apache-2.0
//
// isac-sounder: synthesize interfered FMCW frames over a ray-traced scene,
// extract the embedded channel, and compare it against the ground truth.

#include <cstdio>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "isac/errors.hpp"
#include "isac/pipeline.hpp"

namespace {

// Stable exit-code contract: 0 ok, 2 config error, 3 domain error, 4 I/O.
constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;
constexpr int kExitIo = 4;

struct CliOptions {
    std::string config_path;
    std::string out_dir = "out";
    std::optional<std::uint64_t> seed;
    std::optional<double> module_thresh;
    std::optional<double> phase_thresh;
    std::optional<int> zoom;
    std::optional<std::string> ds_mode;
    bool dump_stages = false;
};

void add_common(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--config", opt.config_path, "Run configuration (JSON)")
        ->required();
    cmd->add_option("--seed", opt.seed, "Override the config RNG seed");
    cmd->add_option("--out", opt.out_dir, "Output directory");
    cmd->add_option("--module-thresh", opt.module_thresh,
                    "Module correlation clustering threshold, in [-1, 1]");
    cmd->add_option("--phase-thresh", opt.phase_thresh,
                    "Phase correlation clustering threshold, in [-1, 1]");
    cmd->add_option("--zoom", opt.zoom, "ICZT zoom factor (>= 1)");
    cmd->add_option("--ds-mode", opt.ds_mode, "RMS DS weighting: amplitude|power");
    cmd->add_flag("--dump-stages", opt.dump_stages,
                  "Write per-stage CSVs of the extraction chain");
}

isac::RunConfig load_with_overrides(const CliOptions& opt) {
    isac::RunConfig cfg = isac::load_run_config(opt.config_path);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.module_thresh) cfg.extraction.module_thresh = *opt.module_thresh;
    if (opt.phase_thresh) cfg.extraction.phase_thresh = *opt.phase_thresh;
    if (opt.zoom) cfg.extraction.zoom_factor = *opt.zoom;
    if (opt.ds_mode) {
        if (*opt.ds_mode == "amplitude")
            cfg.analysis.ds_weighting = isac::DsWeighting::Amplitude;
        else if (*opt.ds_mode == "power")
            cfg.analysis.ds_weighting = isac::DsWeighting::Power;
        else
            throw isac::ConfigError("--ds-mode: expected amplitude|power");
    }
    cfg.extraction.validate();
    return cfg;
}

void print_files(const std::vector<std::string>& files) {
    for (const auto& f : files) std::printf("wrote %s\n", f.c_str());
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"ISAC channel sounder simulator and extractor"};
    app.set_version_flag("--version", isac::kToolVersion);
    app.require_subcommand(1);

    CliOptions opt;
    auto* sim = app.add_subcommand("simulate", "Synthesize a raw interfered frame");
    auto* ext = app.add_subcommand("extract", "Extract the CIR from a frame file");
    auto* ana = app.add_subcommand("analyze", "PDP / RMS DS / AoA from a CIR file");
    auto* cmp = app.add_subcommand("compare", "Match extracted taps against ground truth");
    auto* pipe = app.add_subcommand("pipeline", "simulate + extract + analyze + compare");
    for (auto* cmd : {sim, ext, ana, cmp, pipe}) add_common(cmd, opt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        const isac::RunConfig cfg = load_with_overrides(opt);
        if (sim->parsed()) print_files(isac::run_simulate(cfg, opt.out_dir));
        if (ext->parsed()) print_files(isac::run_extract(cfg, opt.out_dir, opt.dump_stages));
        if (ana->parsed()) print_files(isac::run_analyze(cfg, opt.out_dir));
        if (cmp->parsed()) print_files(isac::run_compare(cfg, opt.out_dir));
        if (pipe->parsed())
            print_files(isac::run_pipeline_cmd(cfg, opt.out_dir, opt.dump_stages));
        return kExitOk;
    } catch (const isac::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitConfig;
    } catch (const isac::DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitDomain;
    } catch (const isac::IoError& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "unexpected error: %s\n", e.what());
        return kExitIo;
    }
}
