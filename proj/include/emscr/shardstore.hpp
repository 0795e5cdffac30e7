#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "emscr/field.hpp"
#include "emscr/indexspace.hpp"

namespace emscr {

inline constexpr std::size_t kDigestSize = 32;
using Digest = std::array<std::uint8_t, kDigestSize>;

Digest sha256(const std::uint8_t* data, std::size_t size);
Digest sha256(const std::vector<std::uint8_t>& bytes);
std::string hex(const Digest& digest);

// Big-endian byte packing used by every on-disk format.
namespace wire {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v);
void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v);
void put_u128(std::vector<std::uint8_t>& out, uint128 v);

// Sequential reader over a byte buffer; running past the end throws
// TruncatedFileError.
class Reader {
  public:
    explicit Reader(const std::vector<std::uint8_t>& buf) : buf_(buf) {}

    std::uint16_t u16();
    std::uint64_t u64();
    uint128 u128();
    std::vector<std::uint8_t> bytes(std::size_t n);

    std::size_t remaining() const { return buf_.size() - pos_; }
    bool done() const { return remaining() == 0; }

  private:
    void need(std::size_t n) const;

    const std::vector<std::uint8_t>& buf_;
    std::size_t pos_ = 0;
};

}  // namespace wire

// The symbols one node holds for the materialized coordinate slice, keyed
// by (block, coordinate).
struct Shard {
    std::uint64_t node = 0;
    std::map<std::pair<std::uint16_t, BIndex>, Fe> symbols;
};

// Shard file layout (all integers big-endian): 7-byte magic, 1-byte format
// version, the 32-byte digest of the parameter file the shard belongs to,
// node id (u64), entry count (u64), then one (block u16, coordinate u128,
// symbol u16) record per entry in ascending (block, coordinate) order.
std::vector<std::uint8_t> serialize_shard(const Shard& shard, const Digest& params_digest);
Shard parse_shard(const std::vector<std::uint8_t>& bytes, const Digest& expected_params_digest);

// One outer block's share of the slice: every group is the three
// coordinates obtained by sweeping the digit at g_pos over {0, 1, 2}
// starting from a base that has digit 0 there.
struct SliceBlock {
    std::uint16_t block = 0;
    std::uint32_t g_pos = 0;
    std::vector<BIndex> bases;  // ascending, digit 0 at g_pos
};

struct Slice {
    std::vector<SliceBlock> blocks;  // one entry per outer position, ascending
};

std::array<BIndex, 3> group_coords(const PairMap& pm, std::uint32_t g_pos, BIndex base);
std::vector<BIndex> slice_block_coords(const PairMap& pm, const SliceBlock& sb);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
// Writes to `<path>.tmp` and renames into place so readers never observe a
// half-written file.
void write_file_atomic(const std::filesystem::path& path, const std::vector<std::uint8_t>& bytes);

void save_shard(const std::filesystem::path& path, const Shard& shard,
                const Digest& params_digest);
Shard load_shard(const std::filesystem::path& path, const Digest& expected_params_digest);

}  // namespace emscr
