// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "isac/config.hpp"

namespace isac {

inline constexpr const char* kToolVersion = "1.0.0";

// CSV / report persistence.  All CSVs start with a "# seed=N" comment so a
// result file can always be traced back to its run.
void write_truth_csv(const std::string& path, const GroundTruthChannel& truth,
                     std::uint64_t seed);
GroundTruthChannel read_truth_csv(const std::string& path);

void write_cir_csv(const std::string& path, const ChannelEstimate& est, std::uint64_t seed);
ChannelEstimate read_cir_csv(const std::string& path);

void write_pdp_csv(const std::string& path, const std::vector<Pdp>& pdps, std::uint64_t seed);
void write_rmsds_csv(const std::string& path, const std::vector<RmsDsResult>& results,
                     std::uint64_t seed);
void write_aoa_csv(const std::string& path, const AoaMap& map, std::uint64_t seed);
void write_match_csv(const std::string& path, const MatchReport& report,
                     const GroundTruthChannel& truth, const std::vector<PdpTap>& taps,
                     std::uint64_t seed);
void write_stage_dumps(const std::string& out_dir, const StageDumps& dumps,
                       std::uint64_t seed);

void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::vector<std::string>& inputs,
                    const std::vector<std::string>& outputs);

// Command bodies shared by the CLI and the python bindings.  Each returns the
// list of files it wrote inside out_dir.
std::vector<std::string> run_simulate(const RunConfig& cfg, const std::string& out_dir);
std::vector<std::string> run_extract(const RunConfig& cfg, const std::string& out_dir,
                                     bool dump_stages);
std::vector<std::string> run_analyze(const RunConfig& cfg, const std::string& out_dir);
std::vector<std::string> run_compare(const RunConfig& cfg, const std::string& out_dir);
std::vector<std::string> run_pipeline_cmd(const RunConfig& cfg, const std::string& out_dir,
                                          bool dump_stages);

/// The interference config with chirp indices resolved from the configured
/// fraction (default 25% of chirps) when none were given explicitly.
InterferenceConfig resolved_interference(const RunConfig& cfg);

} // namespace isac
