#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "emscr/emscr.hpp"
#include "emscr/repair.hpp"
#include "emscr/shardstore.hpp"

namespace emscr {

// Everything a simulator run needs, as read from the config file (plus any
// command-line overrides).  field_poly = 0 selects the prime field of order
// field_order; the outer code always runs over the prime field of order q.
struct ExperimentConfig {
    std::uint32_t q = 0;
    std::uint32_t inner_k = 0;
    std::uint32_t outer_n = 0;
    std::uint32_t outer_k = 0;
    std::uint64_t field_order = 0;
    std::uint64_t field_poly = 0;
    std::uint64_t subgroup_order = 0;
    std::uint64_t groups = 0;
    std::uint64_t seed = 0;
    std::uint32_t fail1 = 0;
    std::uint32_t fail2 = 0;
};

// Line-oriented `key = value` text; '#' starts a comment, numeric values
// accept 0x prefixes, and the failed pair is written `fail = i1,i2`.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Builds and fully validates the code instance the config describes.
EmscrParams build_from_config(const ExperimentConfig& cfg);

// Canonical parameter file: primary fields plus a few derived ones
// (generator, evaluation points, node count) that loading cross-checks.
std::vector<std::uint8_t> serialize_params(const ExperimentConfig& cfg,
                                           const EmscrParams& p);

struct LoadedParams {
    ExperimentConfig config;
    EmscrParams params;
    Digest digest;  // of the file bytes; stamped into every shard
};

LoadedParams parse_params(const std::vector<std::uint8_t>& bytes);
LoadedParams load_params(const std::filesystem::path& dir);

// The materialized coordinate set of a run, derived from the config alone.
Slice config_slice(const ExperimentConfig& cfg, const EmscrParams& p);

// Commands of the simulator; `dir` is the experiment directory holding
// params.bin, the shard files, transcript.txt and report.txt.
void cmd_gen_params(const ExperimentConfig& cfg, const std::filesystem::path& dir);
void cmd_encode(const std::filesystem::path& dir);
void cmd_fail(const std::filesystem::path& dir, std::uint32_t i1, std::uint32_t i2);
void cmd_repair(const std::filesystem::path& dir);
BandwidthReport cmd_report(const std::filesystem::path& dir, std::ostream& human);

// transcript.txt helpers: text form of a repair run, parseable back.
struct TranscriptFile {
    Digest params_digest{};
    std::uint32_t node1 = 0, node2 = 0;
    RepairTranscript transcript;
};

std::string format_transcript(const Digest& params_digest, std::uint32_t node1,
                              std::uint32_t node2, const RepairTranscript& tx);
TranscriptFile parse_transcript(const std::string& text);

}  // namespace emscr
