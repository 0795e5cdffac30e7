#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <filesystem>

#include "emscr/errors.hpp"
#include "emscr/shardstore.hpp"

using namespace emscr;

namespace {

Digest digest_of(const char* text) {
    return sha256(reinterpret_cast<const std::uint8_t*>(text), std::strlen(text));
}

Shard sample_shard() {
    Shard s;
    s.node = 9;
    s.symbols.emplace(std::pair<std::uint16_t, BIndex>{1, BIndex{0}}, Fe{5});
    s.symbols.emplace(std::pair<std::uint16_t, BIndex>{1, BIndex{92}}, Fe{4095});
    s.symbols.emplace(std::pair<std::uint16_t, BIndex>{2, BIndex{3}}, Fe{0});
    return s;
}

}  // namespace

TEST_CASE("sha256 matches published test vectors") {
    CHECK(hex(sha256(std::vector<std::uint8_t>{})) ==
          "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(hex(digest_of("abc")) ==
          "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("big-endian packing round-trips through the reader") {
    std::vector<std::uint8_t> buf;
    wire::put_u16(buf, 0x1234);
    wire::put_u16(buf, 0xffff);
    wire::put_u64(buf, 0);
    wire::put_u64(buf, 0xdeadbeefcafe0123ULL);
    uint128 big = (static_cast<uint128>(0x0123456789abcdefULL) << 64) | 0xfedcba9876543210ULL;
    wire::put_u128(buf, big);
    REQUIRE(buf.size() == 2 + 2 + 8 + 8 + 16);
    CHECK(buf[0] == 0x12);
    CHECK(buf[1] == 0x34);

    wire::Reader in(buf);
    CHECK(in.u16() == 0x1234);
    CHECK(in.u16() == 0xffff);
    CHECK(in.u64() == 0);
    CHECK(in.u64() == 0xdeadbeefcafe0123ULL);
    CHECK(in.u128() == big);
    CHECK(in.done());
    CHECK_THROWS_AS(in.u16(), TruncatedFileError);

    wire::Reader again(buf);
    CHECK(again.bytes(4) == std::vector<std::uint8_t>{0x12, 0x34, 0xff, 0xff});
    CHECK(again.remaining() == buf.size() - 4);
    CHECK_THROWS_AS(again.bytes(buf.size()), TruncatedFileError);
}

TEST_CASE("shard bytes round-trip and are deterministic") {
    Shard s = sample_shard();
    Digest d = digest_of("params-v1");

    auto bytes = serialize_shard(s, d);
    CHECK(bytes.size() == 7 + 1 + 32 + 8 + 8 + 3 * 20);
    CHECK(serialize_shard(s, d) == bytes);

    Shard back = parse_shard(bytes, d);
    CHECK(back.node == s.node);
    CHECK(back.symbols == s.symbols);

    Shard empty;
    empty.node = 1;
    auto small = serialize_shard(empty, d);
    CHECK(small.size() == 56);
    CHECK(parse_shard(small, d).symbols.empty());
}

TEST_CASE("parse rejects malformed and mismatched files") {
    Shard s = sample_shard();
    Digest d = digest_of("params-v1");
    const auto good = serialize_shard(s, d);

    CHECK_THROWS_AS(parse_shard({}, d), TruncatedFileError);

    auto bad_magic = good;
    bad_magic[0] ^= 0x01;
    CHECK_THROWS_AS(parse_shard(bad_magic, d), MagicMismatchError);

    auto bad_version = good;
    bad_version[7] = 2;
    CHECK_THROWS_AS(parse_shard(bad_version, d), IoError);

    auto bad_digest = good;
    bad_digest[8 + 5] ^= 0x80;
    CHECK_THROWS_AS(parse_shard(bad_digest, d), DigestMismatchError);
    CHECK_THROWS_AS(parse_shard(good, digest_of("other")), DigestMismatchError);

    auto truncated = good;
    truncated.pop_back();
    CHECK_THROWS_AS(parse_shard(truncated, d), TruncatedFileError);

    auto trailing = good;
    trailing.push_back(0);
    CHECK_THROWS_AS(parse_shard(trailing, d), IoError);

    // Count says two entries but three follow.
    auto bad_count = good;
    bad_count[55] = 2;
    CHECK_THROWS_WITH_AS(parse_shard(bad_count, d), doctest::Contains("trailing"), IoError);

    // Swap the first two entry records to break canonical ordering.
    auto swapped = good;
    for (std::size_t i = 0; i < 20; ++i) std::swap(swapped[56 + i], swapped[56 + 20 + i]);
    CHECK_THROWS_WITH_AS(parse_shard(swapped, d), doctest::Contains("order"), IoError);

    // Duplicate keys are not ascending either.
    auto dup = good;
    for (std::size_t i = 0; i < 20; ++i) dup[56 + 20 + i] = dup[56 + i];
    CHECK_THROWS_WITH_AS(parse_shard(dup, d), doctest::Contains("order"), IoError);
}

TEST_CASE("serialize validates node, block, and symbol width") {
    Digest d = digest_of("params-v1");

    Shard no_node;
    CHECK_THROWS_AS(serialize_shard(no_node, d), IoError);

    Shard bad_block;
    bad_block.node = 1;
    bad_block.symbols.emplace(std::pair<std::uint16_t, BIndex>{0, BIndex{0}}, Fe{1});
    CHECK_THROWS_AS(serialize_shard(bad_block, d), IoError);

    Shard wide;
    wide.node = 1;
    wide.symbols.emplace(std::pair<std::uint16_t, BIndex>{1, BIndex{0}}, Fe{0x10000});
    CHECK_THROWS_WITH_AS(serialize_shard(wide, d), doctest::Contains("16-bit"), IoError);
}

TEST_CASE("group coordinates sweep one digit") {
    PairMap pm = make_pair_map(4);

    auto g = group_coords(pm, 2, BIndex{0});
    CHECK(g[0] == BIndex{0});
    CHECK(g[1] == BIndex{3});
    CHECK(g[2] == BIndex{6});

    auto h = group_coords(pm, 2, BIndex{92});
    CHECK(h[0] == BIndex{92});
    CHECK(h[1] == BIndex{95});
    CHECK(h[2] == BIndex{98});

    CHECK_THROWS_AS(group_coords(pm, 2, BIndex{3}), ConstructionError);
}

TEST_CASE("slice block coordinates are sorted and disjoint") {
    PairMap pm = make_pair_map(3);
    SliceBlock sb;
    sb.block = 1;
    sb.g_pos = 1;
    sb.bases = {BIndex{0}, BIndex{3}};

    auto coords = slice_block_coords(pm, sb);
    REQUIRE(coords.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) CHECK(coords[i] == BIndex{i});

    sb.bases = {BIndex{0}, BIndex{0}};
    CHECK_THROWS_WITH_AS(slice_block_coords(pm, sb), doctest::Contains("overlap"),
                         ConstructionError);
}

TEST_CASE("shard files survive a save/load round trip") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "emscr_shardstore_test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    Shard s = sample_shard();
    Digest d = digest_of("params-v1");
    fs::path file = dir / "node_9.shard";

    save_shard(file, s, d);
    CHECK(!fs::exists(file.string() + ".tmp"));
    CHECK(read_file(file) == serialize_shard(s, d));

    Shard back = load_shard(file, d);
    CHECK(back.node == s.node);
    CHECK(back.symbols == s.symbols);

    // Overwrite in place with different contents.
    s.symbols.emplace(std::pair<std::uint16_t, BIndex>{3, BIndex{7}}, Fe{11});
    save_shard(file, s, d);
    CHECK(load_shard(file, d).symbols.size() == 4);

    CHECK_THROWS_AS(load_shard(dir / "missing.shard", d), IoError);
    CHECK_THROWS_AS(read_file(dir / "missing.shard"), IoError);

    fs::remove_all(dir);
}
