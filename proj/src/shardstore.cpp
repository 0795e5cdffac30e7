#include "emscr/shardstore.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <iterator>

#include "emscr/errors.hpp"

namespace emscr {

Digest sha256(const std::uint8_t* data, std::size_t size) {
    static const std::uint8_t empty = 0;
    if (size == 0) data = &empty;
    Digest out{};
    unsigned int written = 0;
    if (EVP_Digest(data, size, out.data(), &written, EVP_sha256(), nullptr) != 1 ||
        written != out.size())
        throw Error("sha256 computation failed");
    return out;
}

Digest sha256(const std::vector<std::uint8_t>& bytes) {
    return sha256(bytes.data(), bytes.size());
}

std::string hex(const Digest& digest) {
    static const char alphabet[] = "0123456789abcdef";
    std::string out;
    out.reserve(2 * digest.size());
    for (std::uint8_t byte : digest) {
        out.push_back(alphabet[byte >> 4]);
        out.push_back(alphabet[byte & 0x0f]);
    }
    return out;
}

namespace wire {

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void put_u128(std::vector<std::uint8_t>& out, uint128 v) {
    for (int shift = 120; shift >= 0; shift -= 8)
        out.push_back(static_cast<std::uint8_t>(v >> shift));
}

void Reader::need(std::size_t n) const {
    if (remaining() < n) throw TruncatedFileError("unexpected end of file");
}

std::uint16_t Reader::u16() {
    need(2);
    auto v = static_cast<std::uint16_t>((buf_[pos_] << 8) | buf_[pos_ + 1]);
    pos_ += 2;
    return v;
}

std::uint64_t Reader::u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | buf_[pos_ + i];
    pos_ += 8;
    return v;
}

uint128 Reader::u128() {
    need(16);
    uint128 v = 0;
    for (int i = 0; i < 16; ++i) v = (v << 8) | buf_[pos_ + i];
    pos_ += 16;
    return v;
}

std::vector<std::uint8_t> Reader::bytes(std::size_t n) {
    need(n);
    std::vector<std::uint8_t> out(buf_.data() + pos_, buf_.data() + pos_ + n);
    pos_ += n;
    return out;
}

}  // namespace wire

namespace {

constexpr std::uint8_t kShardMagic[7] = {'E', 'M', 'S', 'C', 'R', '1', '\0'};
constexpr std::uint8_t kShardVersion = 1;
constexpr std::size_t kEntrySize = 2 + 16 + 2;

}  // namespace

std::vector<std::uint8_t> serialize_shard(const Shard& shard, const Digest& params_digest) {
    if (shard.node == 0) throw IoError("shard node id must be positive");
    std::vector<std::uint8_t> out;
    out.reserve(sizeof kShardMagic + 1 + kDigestSize + 16 + shard.symbols.size() * kEntrySize);
    out.insert(out.end(), std::begin(kShardMagic), std::end(kShardMagic));
    out.push_back(kShardVersion);
    out.insert(out.end(), params_digest.begin(), params_digest.end());
    wire::put_u64(out, shard.node);
    wire::put_u64(out, shard.symbols.size());
    for (const auto& [key, symbol] : shard.symbols) {
        if (key.first == 0) throw IoError("shard entry block index must be positive");
        if (symbol.v > 0xffff)
            throw IoError("field element does not fit the 16-bit shard entry format");
        wire::put_u16(out, key.first);
        wire::put_u128(out, key.second.value);
        wire::put_u16(out, static_cast<std::uint16_t>(symbol.v));
    }
    return out;
}

Shard parse_shard(const std::vector<std::uint8_t>& bytes, const Digest& expected_params_digest) {
    wire::Reader in(bytes);
    auto magic = in.bytes(sizeof kShardMagic);
    if (!std::equal(magic.begin(), magic.end(), std::begin(kShardMagic)))
        throw MagicMismatchError("not a shard file");
    if (in.bytes(1)[0] != kShardVersion) throw IoError("unsupported shard file version");
    auto digest = in.bytes(kDigestSize);
    if (!std::equal(digest.begin(), digest.end(), expected_params_digest.begin()))
        throw DigestMismatchError("shard was written under a different parameter file");

    Shard shard;
    shard.node = in.u64();
    if (shard.node == 0) throw IoError("shard node id must be positive");
    std::uint64_t count = in.u64();
    if (in.remaining() / kEntrySize < count) throw TruncatedFileError("shard file truncated");
    if (in.remaining() != count * kEntrySize) throw IoError("shard file has trailing bytes");

    std::pair<std::uint16_t, BIndex> prev{0, BIndex{0}};
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint16_t block = in.u16();
        BIndex b{in.u128()};
        std::uint16_t value = in.u16();
        if (block == 0) throw IoError("shard entry block index must be positive");
        std::pair<std::uint16_t, BIndex> key{block, b};
        if (i > 0 && !(prev < key)) throw IoError("shard entries out of canonical order");
        prev = key;
        shard.symbols.emplace(key, Fe{value});
    }
    return shard;
}

std::array<BIndex, 3> group_coords(const PairMap& pm, std::uint32_t g_pos, BIndex base) {
    if (digit(pm, base, g_pos) != 0)
        throw ConstructionError("group base must have digit 0 at the group position");
    return {base, with_digit(pm, base, g_pos, 1), with_digit(pm, base, g_pos, 2)};
}

std::vector<BIndex> slice_block_coords(const PairMap& pm, const SliceBlock& sb) {
    std::vector<BIndex> coords;
    coords.reserve(3 * sb.bases.size());
    for (BIndex base : sb.bases)
        for (BIndex b : group_coords(pm, sb.g_pos, base)) coords.push_back(b);
    std::sort(coords.begin(), coords.end());
    for (std::size_t i = 1; i < coords.size(); ++i)
        if (coords[i] == coords[i - 1]) throw ConstructionError("slice groups overlap");
    return coords;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                    std::istreambuf_iterator<char>()};
    if (in.bad()) throw IoError("read failed for " + path.string());
    return bytes;
}

void write_file_atomic(const std::filesystem::path& path,
                       const std::vector<std::uint8_t>& bytes) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        if (!bytes.empty())
            out.write(reinterpret_cast<const char*>(bytes.data()),
                      static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw IoError("cannot move " + tmp.string() + " into place: " + ec.message());
}

void save_shard(const std::filesystem::path& path, const Shard& shard,
                const Digest& params_digest) {
    write_file_atomic(path, serialize_shard(shard, params_digest));
}

Shard load_shard(const std::filesystem::path& path, const Digest& expected_params_digest) {
    return parse_shard(read_file(path), expected_params_digest);
}

}  // namespace emscr
