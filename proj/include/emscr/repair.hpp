#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "emscr/emscr.hpp"
#include "emscr/linalg.hpp"
#include "emscr/rational.hpp"
#include "emscr/shardstore.hpp"

namespace emscr {

enum class RepairCase { Distinct, Equal };

// Selection of the downloaded subset inside the largest helper class:
// smallest node ids by default, or a seeded draw for property testing.
struct SubsetPolicy {
    bool randomized = false;
    std::uint64_t seed = 0;
};

// Block-local split of the surviving nodes by their outer symbol at that
// block, together with the chosen download subsets.
struct HelperPartition {
    RepairCase kind = RepairCase::Distinct;
    std::uint32_t block = 0;
    std::uint32_t node1 = 0, node2 = 0;    // failed pair as given
    std::uint32_t s1 = 0, s2 = 0, s3 = 0;  // outer symbols (s3 only when Equal)
    std::uint32_t g_pos = 0;               // digit position spanning each repair group

    // kind == Distinct (s1 != s2): helpers sharing s1, sharing s2, and the
    // rest; gamma_sum is the k' = |gamma|-(r-3) subset downloaded as sums.
    std::vector<std::uint32_t> q;
    std::vector<std::uint32_t> v;
    std::vector<std::uint32_t> gamma;
    std::vector<std::uint32_t> gamma_sum;

    // kind == Equal (s1 == s2): a companion codeword supplies a reference
    // symbol s3 at every block; its node is never downloaded.  w shares s1,
    // y shares s3, z is the rest; z_sum (k'' = |z|-(r-5)) feeds the pair
    // stage, z_raw (k''' = |z|-(r-3)) the single-coordinate stage.
    std::uint32_t a3_node = 0;
    std::vector<std::uint32_t> w;
    std::vector<std::uint32_t> y;
    std::vector<std::uint32_t> z;
    std::vector<std::uint32_t> z_sum;
    std::vector<std::uint32_t> z_raw;
};

HelperPartition partition_helpers(const EmscrParams& p, std::uint32_t block,
                                  std::uint32_t node1, std::uint32_t node2,
                                  const SubsetPolicy& policy = {});

// Row i holds the coefficients of x^i * p0(x) zero-padded to `cols`, where
// p0(x) = prod over roots of (x - root).  Applying a row to the length-
// `cols` power column (1, x, ..., x^{cols-1}) of any root yields zero, so
// the matrix removes those evaluation points from the parity system.
struct AnnihilatorMatrix {
    FMatrix p;
    std::vector<Fe> roots;
};

AnnihilatorMatrix annihilator(const Field& f, std::span<const Fe> roots,
                              std::size_t rows, std::size_t cols);

// One transferred value: the subject node's symbol at (block, b1), or the
// sum of its symbols at b1 and b2 when b2 is present.  `helper` answers the
// request; in round 2 the other replacement does, so helper != subject.
struct SymbolRequest {
    std::uint32_t helper = 0;
    std::uint32_t subject = 0;
    std::uint32_t block = 0;
    BIndex b1;
    std::optional<BIndex> b2;

    friend bool operator==(const SymbolRequest&, const SymbolRequest&) = default;
};

using HelperRead = std::function<Fe(const SymbolRequest&)>;

struct DownloadRecord {
    int round = 0;                  // 1 or 2
    std::uint32_t replacement = 0;  // failed node whose replacement downloaded
    BIndex group_base;
    SymbolRequest request;

    friend bool operator==(const DownloadRecord&, const DownloadRecord&) = default;
};

struct RepairTranscript {
    std::vector<DownloadRecord> downloads;

    std::uint64_t total() const { return downloads.size(); }
    // Count of matching records; 0 acts as a wildcard on every filter.
    std::uint64_t count(std::uint32_t block = 0, int round = 0,
                        std::uint32_t replacement = 0) const;
    std::vector<std::uint32_t> round1_helpers() const;  // distinct, ascending
};

// The six repaired symbols of one group, indexed by the digit value at the
// partition's g_pos.
struct GroupRecovery {
    std::uint32_t block = 0;
    BIndex base;
    std::array<Fe, 3> node1_symbols{};
    std::array<Fe, 3> node2_symbols{};
};

GroupRecovery repair_group_case1(const EmscrParams& p, const HelperPartition& part,
                                 BIndex base, const HelperRead& read, RepairTranscript& tx);
GroupRecovery repair_group_case2(const EmscrParams& p, const HelperPartition& part,
                                 BIndex base, const HelperRead& read, RepairTranscript& tx);

// Chooses the materialized coordinates: per block, `groups` seeded bases at
// the digit position the failed pair pins there.
Slice plan_slice(const EmscrParams& p, std::uint32_t node1, std::uint32_t node2,
                 std::uint64_t groups, std::uint64_t seed);

struct RepairResult {
    Shard shard1, shard2;
    RepairTranscript transcript;
    std::vector<HelperPartition> partitions;  // index block-1
};

RepairResult cooperative_repair(const EmscrParams& p, std::uint32_t node1,
                                std::uint32_t node2, const Slice& slice,
                                const HelperRead& read, const SubsetPolicy& policy = {});

// Symbols downloaded per group, both replacements, both rounds.
std::uint64_t group_download_count(const HelperPartition& part);
// The same as per-block repair bandwidth in units of l (a block has l/3 groups).
Rat bandwidth_closed_form(const HelperPartition& part);

// Flow bounds on repair bandwidth, in the units of `ell` (per-node storage).
struct CutsetBounds {
    Rat single;       // one failure, d helpers
    Rat cooperative;  // h failures repaired jointly
    Rat centralized;  // h failures repaired at one site
};
CutsetBounds cutset_bounds(std::uint64_t h, std::uint64_t d, std::uint64_t k, const Rat& ell);

// Guaranteed ceiling on (measured / optimal - 1) for this construction,
// given r parity rows, P contacted helpers, and distance ratio delta.
Rat epsilon_bound(std::uint32_t r, std::uint64_t P, const Rat& delta);
// Specialized r=5 form; algebraically identical to epsilon_bound(5, ...).
Rat epsilon_bound_r5(std::uint64_t P, const Rat& delta);

struct BandwidthReport {
    std::vector<RepairCase> cases;                     // per block
    std::vector<std::uint64_t> measured_per_group;     // per block, from the transcript
    std::vector<std::uint64_t> closed_form_per_group;  // per block, from the formulas
    std::uint64_t helpers_p = 0;                       // distinct round-1 helpers
    std::uint64_t m_nodes = 0;
    std::uint32_t r = 0;
    Rat delta;
    Rat rb_total;        // units of l, full two-node repair extrapolated per block
    Rat rb_closed_form;  // units of l
    Rat rb_optimal;      // units of l, cooperative flow bound at d = helpers_p
    Rat eps_measured;
    Rat eps_bound;
    bool counts_match = false;
    bool lemma_floor_ok = false;  // helpers_p >= m_nodes - r
    bool bound_ok = false;        // eps_measured <= eps_bound
};

BandwidthReport bandwidth_report(const EmscrParams& p,
                                 const std::vector<HelperPartition>& partitions,
                                 const Slice& slice, const RepairTranscript& tx);
Rat epsilon_measured(const BandwidthReport& report);

// Sub-packetization and field-size bookkeeping, exact arithmetic only.
struct ScalingReport {
    std::uint64_t q = 0, u = 0, outer_g = 0, n_blocks = 0;
    std::uint64_t m_nodes = 0;        // q^(u * outer_g)
    std::uint32_t l_exponent = 0;     // stored symbols per node: n_blocks * 3^l_exponent
    std::uint64_t log_m_coeff = 0;    // log(m_nodes) = coeff * log q
    std::uint64_t min_field_order = 0;
    std::uint64_t field_order = 0;
    bool field_ok = false;
    bool ratio_identity_ok = false;
};

ScalingReport scaling_report(std::uint64_t q, std::uint64_t u, std::uint64_t outer_g,
                             std::uint64_t n_blocks, std::uint64_t field_order);

}  // namespace emscr
