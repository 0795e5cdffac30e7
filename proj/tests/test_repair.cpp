#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "emscr/linalg.hpp"
#include "emscr/repair.hpp"
#include "helpers.hpp"

using namespace emscr;
using emscr::testing::TestCluster;
using emscr::testing::default_params;

namespace {

std::vector<Fe> power_column(const Field& f, Fe x, std::uint32_t rows) {
    std::vector<Fe> col(rows);
    Fe pw = f.one();
    for (std::uint32_t t = 0; t < rows; ++t) {
        col[t] = pw;
        pw = f.mul(pw, x);
    }
    return col;
}

bool annihilates(const Field& f, const AnnihilatorMatrix& ann, std::uint32_t cols) {
    for (Fe rt : ann.roots) {
        std::vector<Fe> prod = mat_vec(f, ann.p, power_column(f, rt, cols));
        for (Fe v : prod)
            if (v != f.zero()) return false;
    }
    return true;
}

// All node ids a partition touches, failed nodes included.
std::vector<std::uint32_t> covered_nodes(const HelperPartition& part) {
    std::vector<std::uint32_t> ids{part.node1, part.node2};
    for (const auto* cls : {&part.q, &part.v, &part.gamma, &part.w, &part.y, &part.z})
        ids.insert(ids.end(), cls->begin(), cls->end());
    if (part.a3_node != 0) ids.push_back(part.a3_node);
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<std::uint32_t> iota_ids(std::uint32_t from, std::uint32_t to) {
    std::vector<std::uint32_t> ids;
    for (std::uint32_t i = from; i <= to; ++i) ids.push_back(i);
    return ids;
}

Slice single_group_slice(std::uint16_t block, std::uint32_t g_pos, BIndex base) {
    Slice s;
    s.blocks.push_back({block, g_pos, {base}});
    return s;
}

}  // namespace

TEST_CASE("helper partition splits by block symbol") {
    EmscrParams p = default_params();

    SUBCASE("distinct-symbol block of the pair (1,2)") {
        HelperPartition part = partition_helpers(p, 2, 1, 2);
        CHECK(part.kind == RepairCase::Distinct);
        CHECK(part.s1 == 1);
        CHECK(part.s2 == 2);
        CHECK(part.g_pos == 1);
        CHECK(part.q == std::vector<std::uint32_t>{14, 20, 26, 32, 38, 44});
        CHECK(part.v == std::vector<std::uint32_t>{8, 21, 27, 33, 39, 45});
        CHECK(part.gamma.size() == 35);
        REQUIRE(part.gamma_sum.size() == 33);
        CHECK(std::equal(part.gamma_sum.begin(), part.gamma_sum.end(), part.gamma.begin()));
        CHECK(covered_nodes(part) == iota_ids(1, 49));
        CHECK(group_download_count(part) == 104);
    }

    SUBCASE("equal-symbol block of the pair (1,2)") {
        HelperPartition part = partition_helpers(p, 1, 1, 2);
        CHECK(part.kind == RepairCase::Equal);
        CHECK(part.s1 == 1);
        CHECK(part.s2 == 1);
        CHECK(part.a3_node == 8);
        CHECK(part.s3 == 2);
        CHECK(part.g_pos == 1);
        CHECK(part.w == std::vector<std::uint32_t>{3, 4, 5, 6, 7});
        CHECK(part.y == iota_ids(9, 14));
        CHECK(part.z == iota_ids(15, 49));
        CHECK(part.z_sum == part.z);
        CHECK(part.z_raw == iota_ids(15, 47));
        CHECK(covered_nodes(part) == iota_ids(1, 49));
        CHECK(group_download_count(part) == 98);
    }

    SUBCASE("digit position follows the symbol pair") {
        HelperPartition part = partition_helpers(p, 3, 1, 2);
        CHECK(part.s2 == 3);
        CHECK(part.g_pos == 2);
    }

    SUBCASE("the all-distinct pair (1,8) stays in the first case everywhere") {
        for (std::uint32_t j = 1; j <= p.N; ++j) {
            HelperPartition part = partition_helpers(p, j, 1, 8);
            CHECK(part.kind == RepairCase::Distinct);
            CHECK(part.q.size() == 6);
            CHECK(part.v.size() == 6);
            CHECK(part.gamma.size() == 35);
        }
    }

    SUBCASE("input validation") {
        CHECK_THROWS_AS(partition_helpers(p, 1, 0, 2), UsageError);
        CHECK_THROWS_AS(partition_helpers(p, 1, 1, 50), UsageError);
        CHECK_THROWS_AS(partition_helpers(p, 1, 3, 3), UsageError);
        CHECK_THROWS_AS(partition_helpers(p, 0, 1, 2), UsageError);
        CHECK_THROWS_AS(partition_helpers(p, 8, 1, 2), UsageError);
    }
}

TEST_CASE("randomized download subsets stay inside their pool") {
    EmscrParams p = default_params();
    SubsetPolicy pol{true, 7};

    HelperPartition part = partition_helpers(p, 2, 1, 2, pol);
    REQUIRE(part.gamma_sum.size() == 33);
    CHECK(std::is_sorted(part.gamma_sum.begin(), part.gamma_sum.end()));
    CHECK(std::includes(part.gamma.begin(), part.gamma.end(), part.gamma_sum.begin(),
                        part.gamma_sum.end()));

    HelperPartition again = partition_helpers(p, 2, 1, 2, pol);
    CHECK(again.gamma_sum == part.gamma_sum);

    // r = 5 leaves no slack on the paired-stage subset of the equal case.
    HelperPartition eq = partition_helpers(p, 1, 1, 2, pol);
    CHECK(eq.z_sum == eq.z);
    CHECK(eq.z_raw.size() == 33);
    CHECK(std::includes(eq.z.begin(), eq.z.end(), eq.z_raw.begin(), eq.z_raw.end()));
}

TEST_CASE("annihilator matches hand-built coefficients") {
    Field f = make_field({.prime = 19});
    std::vector<Fe> roots{f.zero()};
    AnnihilatorMatrix ann = annihilator(f, roots, 2, 5);
    REQUIRE(ann.p.rows() == 2);
    REQUIRE(ann.p.cols() == 5);
    // p0(x) = x, so the rows spell out x and x^2.
    std::vector<Fe> row0{{0}, {1}, {0}, {0}, {0}};
    std::vector<Fe> row1{{0}, {0}, {1}, {0}, {0}};
    for (std::size_t c = 0; c < 5; ++c) {
        CHECK(ann.p.at(0, c) == row0[c]);
        CHECK(ann.p.at(1, c) == row1[c]);
    }
}

TEST_CASE("annihilator kills the power columns of its roots") {
    EmscrParams p = default_params();
    const Field& f = p.field();
    std::mt19937_64 rng(2024);

    SUBCASE("random root sets") {
        for (int it = 0; it < 50; ++it) {
            std::set<Fe> pick;
            std::size_t n_roots = 2 + rng() % 3;
            while (pick.size() < n_roots) pick.insert(Fe{rng() % f.order()});
            std::vector<Fe> roots(pick.begin(), pick.end());
            AnnihilatorMatrix ann = annihilator(f, roots, 5 - n_roots, 5);
            CHECK(annihilates(f, ann, 5));
        }
    }

    SUBCASE("the three stage configurations of a live repair") {
        std::vector<BIndex> bases = group_bases(p.inner.pairs, 1, 4, 99);
        for (BIndex base : bases) {
            auto g = group_coords(p.inner.pairs, 1, base);

            HelperPartition d = partition_helpers(p, 2, 1, 2);
            std::vector<Fe> r1{p.eval_point(1, 2, g[0]), p.eval_point(1, 2, g[1]),
                               p.eval_point(2, 2, g[0])};
            CHECK(annihilates(f, annihilator(f, r1, 2, 5), 5));

            HelperPartition e = partition_helpers(p, 1, 1, 2);
            std::vector<Fe> r2{p.eval_point(1, 1, g[0]), p.eval_point(1, 1, g[1]),
                               p.eval_point(2, 1, g[0]), p.eval_point(2, 1, g[1])};
            CHECK(annihilates(f, annihilator(f, r2, 1, 5), 5));

            std::vector<Fe> r3{p.eval_point(1, 1, g[2]), p.eval_point(2, 1, g[2])};
            CHECK(annihilates(f, annihilator(f, r3, 3, 5), 5));
        }
    }

    SUBCASE("shape and root validation") {
        std::vector<Fe> three{f.element(1), f.element(2), f.element(3)};
        CHECK_THROWS_AS(annihilator(f, three, 3, 5), ConstructionError);
        std::vector<Fe> dup{f.element(1), f.element(1)};
        CHECK_THROWS_AS(annihilator(f, dup, 1, 5), ConstructionError);
    }
}

TEST_CASE("distinct-symbol group repair is exact") {
    EmscrParams p = default_params();
    HelperPartition part = partition_helpers(p, 2, 1, 2);
    std::vector<BIndex> bases = group_bases(p.inner.pairs, part.g_pos, 3, 17);

    std::uint64_t seed = 400;
    for (BIndex base : bases) {
        Slice s = single_group_slice(2, part.g_pos, base);
        TestCluster cluster(p, s, seed++);
        RepairTranscript tx;
        GroupRecovery rec = repair_group_case1(p, part, base, cluster.reader(), tx);

        auto g = group_coords(p.inner.pairs, part.g_pos, base);
        for (std::uint32_t d = 0; d < 3; ++d) {
            CHECK(rec.node1_symbols[d] == cluster.at(1, 2, g[d]));
            CHECK(rec.node2_symbols[d] == cluster.at(2, 2, g[d]));
        }
        CHECK(tx.total() == 104);
        CHECK(tx.count(2, 1, 1) == 51);
        CHECK(tx.count(2, 1, 2) == 51);
        CHECK(tx.count(2, 2, 1) == 1);
        CHECK(tx.count(2, 2, 2) == 1);
        CHECK(tx.total() == group_download_count(part));
    }

    SUBCASE("rejects a partition of the wrong kind") {
        HelperPartition eq = partition_helpers(p, 1, 1, 2);
        RepairTranscript tx;
        TestCluster cluster(p, single_group_slice(2, part.g_pos, bases[0]), 1);
        CHECK_THROWS_AS(repair_group_case1(p, eq, bases[0], cluster.reader(), tx),
                        UsageError);
    }
}

TEST_CASE("equal-symbol group repair is exact") {
    EmscrParams p = default_params();
    HelperPartition part = partition_helpers(p, 1, 1, 2);
    std::vector<BIndex> bases = group_bases(p.inner.pairs, part.g_pos, 3, 18);

    std::uint64_t seed = 500;
    for (BIndex base : bases) {
        Slice s = single_group_slice(1, part.g_pos, base);
        TestCluster cluster(p, s, seed++);
        RepairTranscript tx;
        GroupRecovery rec = repair_group_case2(p, part, base, cluster.reader(), tx);

        auto g = group_coords(p.inner.pairs, part.g_pos, base);
        for (std::uint32_t d = 0; d < 3; ++d) {
            CHECK(rec.node1_symbols[d] == cluster.at(1, 1, g[d]));
            CHECK(rec.node2_symbols[d] == cluster.at(2, 1, g[d]));
        }
        CHECK(tx.total() == 98);
        CHECK(tx.count(1, 1, 1) == 51);
        CHECK(tx.count(1, 1, 2) == 44);
        CHECK(tx.count(1, 2, 1) == 1);
        CHECK(tx.count(1, 2, 2) == 2);
        CHECK(tx.total() == group_download_count(part));

        // The companion's node is never contacted.
        for (const DownloadRecord& d : tx.downloads) CHECK(d.request.helper != 8);
    }

    SUBCASE("rejects a partition of the wrong kind") {
        HelperPartition di = partition_helpers(p, 2, 1, 2);
        RepairTranscript tx;
        TestCluster cluster(p, single_group_slice(1, part.g_pos, bases[0]), 1);
        CHECK_THROWS_AS(repair_group_case2(p, di, bases[0], cluster.reader(), tx),
                        UsageError);
    }
}

TEST_CASE("zero data repairs to zero with identical download counts") {
    EmscrParams p = default_params();
    HelperRead zeros = [&](const SymbolRequest&) { return p.field().zero(); };

    HelperPartition d = partition_helpers(p, 2, 1, 2);
    BIndex base = group_bases(p.inner.pairs, d.g_pos, 1, 3)[0];
    RepairTranscript tx;
    GroupRecovery rec = repair_group_case1(p, d, base, zeros, tx);
    for (std::uint32_t i = 0; i < 3; ++i) {
        CHECK(rec.node1_symbols[i] == p.field().zero());
        CHECK(rec.node2_symbols[i] == p.field().zero());
    }
    CHECK(tx.total() == 104);

    HelperPartition e = partition_helpers(p, 1, 1, 2);
    RepairTranscript tx2;
    GroupRecovery rec2 = repair_group_case2(p, e, base, zeros, tx2);
    for (std::uint32_t i = 0; i < 3; ++i) {
        CHECK(rec2.node1_symbols[i] == p.field().zero());
        CHECK(rec2.node2_symbols[i] == p.field().zero());
    }
    CHECK(tx2.total() == 98);
}

TEST_CASE("cooperative repair restores the slice exactly") {
    EmscrParams p = default_params();
    Slice slice = plan_slice(p, 1, 2, 3, 42);
    REQUIRE(slice.blocks.size() == 7);
    TestCluster cluster(p, slice, 904);

    RepairResult res = cooperative_repair(p, 1, 2, slice, cluster.reader());

    REQUIRE(res.partitions.size() == 7);
    CHECK(res.partitions[0].kind == RepairCase::Equal);
    for (std::size_t j = 1; j < 7; ++j)
        CHECK(res.partitions[j].kind == RepairCase::Distinct);

    CHECK(res.shard1.node == 1);
    CHECK(res.shard2.node == 2);
    REQUIRE(res.shard1.symbols.size() == 7 * 3 * 3);
    REQUIRE(res.shard2.symbols.size() == 7 * 3 * 3);
    for (const auto& [key, val] : res.shard1.symbols)
        CHECK(val == cluster.at(1, key.first, key.second));
    for (const auto& [key, val] : res.shard2.symbols)
        CHECK(val == cluster.at(2, key.first, key.second));

    // One equal block at 98 per group, six distinct blocks at 104, 3 groups.
    CHECK(res.transcript.total() == 3 * (98 + 6 * 104));
    CHECK(res.transcript.round1_helpers().size() == 47);
    CHECK(res.transcript.count(0, 2) == 3 * (2 * 6 + 3));
}

TEST_CASE("cooperative repair covers the all-distinct pair") {
    EmscrParams p = default_params();
    Slice slice = plan_slice(p, 1, 8, 2, 43);
    TestCluster cluster(p, slice, 905);

    RepairResult res = cooperative_repair(p, 1, 8, slice, cluster.reader());
    for (const auto& [key, val] : res.shard1.symbols)
        CHECK(val == cluster.at(1, key.first, key.second));
    for (const auto& [key, val] : res.shard2.symbols)
        CHECK(val == cluster.at(8, key.first, key.second));
    CHECK(res.transcript.total() == 2 * 7 * 104);
    CHECK(res.transcript.round1_helpers().size() == 47);
}

TEST_CASE("unusable slices are rejected before any download") {
    EmscrParams p = default_params();
    Slice good = plan_slice(p, 1, 2, 2, 11);
    std::uint64_t reads = 0;
    HelperRead counting = [&](const SymbolRequest&) {
        ++reads;
        return p.field().zero();
    };

    auto expect_rejected = [&](const Slice& s) {
        reads = 0;
        CHECK_THROWS_AS(cooperative_repair(p, 1, 2, s, counting), UsageError);
        CHECK(reads == 0);
    };

    Slice missing = good;
    missing.blocks.pop_back();
    expect_rejected(missing);

    Slice reordered = good;
    std::swap(reordered.blocks[0], reordered.blocks[1]);
    expect_rejected(reordered);

    Slice wrong_pos = good;
    wrong_pos.blocks[2].g_pos = wrong_pos.blocks[2].g_pos + 1;
    expect_rejected(wrong_pos);

    Slice empty_block = good;
    empty_block.blocks[3].bases.clear();
    expect_rejected(empty_block);

    Slice unsorted = good;
    std::swap(unsorted.blocks[1].bases[0], unsorted.blocks[1].bases[1]);
    expect_rejected(unsorted);

    Slice dirty_digit = good;
    dirty_digit.blocks[1].bases[0] =
        with_digit(p.inner.pairs, dirty_digit.blocks[1].bases[0],
                   dirty_digit.blocks[1].g_pos, 2);
    expect_rejected(dirty_digit);

    Slice duplicate = good;
    duplicate.blocks[1].bases[1] = duplicate.blocks[1].bases[0];
    expect_rejected(duplicate);
}

TEST_CASE("randomized subsets keep repair exact and deterministic") {
    EmscrParams p = default_params();
    Slice slice = plan_slice(p, 1, 2, 2, 12);
    TestCluster cluster(p, slice, 77);
    SubsetPolicy pol{true, 1234};

    RepairResult a = cooperative_repair(p, 1, 2, slice, cluster.reader(), pol);
    RepairResult b = cooperative_repair(p, 1, 2, slice, cluster.reader(), pol);

    for (const auto& [key, val] : a.shard1.symbols)
        CHECK(val == cluster.at(1, key.first, key.second));
    for (const auto& [key, val] : a.shard2.symbols)
        CHECK(val == cluster.at(2, key.first, key.second));
    CHECK(a.transcript.total() == 2 * (98 + 6 * 104));
    CHECK(a.transcript.downloads == b.transcript.downloads);
    CHECK(a.shard1.symbols == b.shard1.symbols);
    CHECK(a.shard2.symbols == b.shard2.symbols);
}

TEST_CASE("cut-set bounds evaluate exactly") {
    CutsetBounds at = cutset_bounds(2, 45, 44, Rat(7));
    CHECK(at.single == Rat(7, 2));
    CHECK(at.cooperative == Rat(644, 3));
    CHECK(at.centralized == Rat(210));

    CHECK(cutset_bounds(1, 5, 3, Rat(1)).single == Rat(1, 3));
    CHECK(cutset_bounds(1, 5, 3, Rat(1)).cooperative == Rat(5, 3));
    CHECK(cutset_bounds(2, 4, 4, Rat(1)).single == Rat(1));

    CHECK_THROWS_AS(cutset_bounds(2, 43, 44, Rat(1)), UsageError);
    CHECK_THROWS_AS(cutset_bounds(0, 4, 4, Rat(1)), UsageError);
}

TEST_CASE("bandwidth guarantee evaluates exactly") {
    CHECK(epsilon_bound(5, 45, Rat(6, 7)) == Rat(591, 644));
    CHECK(epsilon_bound(5, 45, Rat(6, 7)) + Rat(1) == Rat(1235, 644));
    CHECK(epsilon_bound(5, 47, Rat(6, 7)) == Rat(1849, 2016));

    for (std::uint64_t P : {1ULL, 2ULL, 10ULL, 45ULL, 144ULL}) {
        for (Rat delta : {Rat(1), Rat(6, 7), Rat(1, 2)}) {
            CHECK(epsilon_bound(5, P, delta) == epsilon_bound_r5(P, delta));
        }
    }

    CHECK_THROWS_AS(epsilon_bound(5, 0, Rat(1)), UsageError);
    CHECK_THROWS_AS(epsilon_bound(5, 45, Rat(2)), UsageError);
    CHECK_THROWS_AS(epsilon_bound(5, 45, Rat(0)), UsageError);
    CHECK_THROWS_AS(epsilon_bound(5, 45, Rat(-1, 2)), UsageError);
    CHECK_THROWS_AS(epsilon_bound_r5(0, Rat(1)), UsageError);
    CHECK_THROWS_AS(epsilon_bound_r5(45, Rat(2)), UsageError);
}

TEST_CASE("bandwidth report freezes the mixed reference pair") {
    EmscrParams p = default_params();
    Slice slice = plan_slice(p, 1, 2, 3, 42);
    TestCluster cluster(p, slice, 904);
    RepairResult res = cooperative_repair(p, 1, 2, slice, cluster.reader());

    BandwidthReport rep = bandwidth_report(p, res.partitions, slice, res.transcript);
    CHECK(rep.m_nodes == 49);
    CHECK(rep.r == 5);
    CHECK(rep.delta == Rat(6, 7));
    CHECK(rep.helpers_p == 47);
    CHECK(rep.cases.front() == RepairCase::Equal);
    CHECK(rep.measured_per_group ==
          std::vector<std::uint64_t>{98, 104, 104, 104, 104, 104, 104});
    CHECK(rep.measured_per_group == rep.closed_form_per_group);
    CHECK(rep.counts_match);
    CHECK(rep.rb_total == Rat(722, 3));
    CHECK(rep.rb_closed_form == Rat(722, 3));
    CHECK(rep.rb_optimal == Rat(672, 5));
    CHECK(rep.eps_measured == Rat(797, 1008));
    CHECK(rep.eps_bound == Rat(1849, 2016));
    CHECK(rep.lemma_floor_ok);
    CHECK(rep.bound_ok);
    CHECK(epsilon_measured(rep) == rep.eps_measured);
}

TEST_CASE("bandwidth report for the all-distinct pair") {
    EmscrParams p = default_params();
    Slice slice = plan_slice(p, 1, 8, 2, 43);
    TestCluster cluster(p, slice, 905);
    RepairResult res = cooperative_repair(p, 1, 8, slice, cluster.reader());

    BandwidthReport rep = bandwidth_report(p, res.partitions, slice, res.transcript);
    CHECK(rep.helpers_p == 47);
    CHECK(rep.rb_total == Rat(728, 3));
    CHECK(rep.eps_measured == Rat(29, 36));
    CHECK(rep.bound_ok);
    CHECK(rep.counts_match);
}

TEST_CASE("closed forms match the download counters") {
    EmscrParams p = default_params();
    HelperPartition d = partition_helpers(p, 2, 1, 2);
    CHECK(bandwidth_closed_form(d) == Rat(104, 3));
    HelperPartition e = partition_helpers(p, 1, 1, 2);
    CHECK(bandwidth_closed_form(e) == Rat(98, 3));

    // Formula floor with no helpers at all: only the round-2 exchange remains.
    HelperPartition bare;
    bare.kind = RepairCase::Distinct;
    CHECK(bandwidth_closed_form(bare) == Rat(2, 3));
}

TEST_CASE("scaling report arithmetic") {
    ScalingReport rep = scaling_report(7, 1, 2, 7, 4096);
    CHECK(rep.m_nodes == 49);
    CHECK(rep.l_exponent == 21);
    CHECK(rep.log_m_coeff == 2);
    CHECK(rep.min_field_order == 687);
    CHECK(rep.field_ok);
    CHECK(rep.ratio_identity_ok);

    ScalingReport wide = scaling_report(7, 1, 4, 7, 4096);
    CHECK(wide.m_nodes == 2401);
    CHECK(wide.log_m_coeff == 4);
    CHECK(wide.l_exponent == 21);
    CHECK(wide.min_field_order == 2 * 16807 + 1);
    CHECK_FALSE(wide.field_ok);

    CHECK_FALSE(scaling_report(7, 1, 2, 7, 512).field_ok);
    CHECK_THROWS_AS(scaling_report(7, 1, 30, 7, 4096), ConstructionError);
    CHECK_THROWS_AS(scaling_report(1, 1, 2, 7, 4096), UsageError);
    CHECK_THROWS_AS(scaling_report(7, 0, 2, 7, 4096), UsageError);
}

TEST_CASE("transcript counting filters") {
    EmscrParams p = default_params();
    HelperPartition part = partition_helpers(p, 2, 1, 2);
    BIndex base = group_bases(p.inner.pairs, part.g_pos, 1, 5)[0];
    HelperRead zeros = [&](const SymbolRequest&) { return p.field().zero(); };
    RepairTranscript tx;
    repair_group_case1(p, part, base, zeros, tx);

    CHECK(tx.count() == tx.total());
    CHECK(tx.count(2) == 104);
    CHECK(tx.count(3) == 0);
    CHECK(tx.count(0, 1) == 102);
    CHECK(tx.count(0, 2) == 2);
    CHECK(tx.count(0, 0, 1) == 52);
    CHECK(tx.count(0, 0, 2) == 52);
}
