#include "emscr/repair.hpp"

#include <algorithm>
#include <iterator>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "emscr/errors.hpp"

namespace emscr {

namespace {

std::vector<std::uint32_t> set_minus(const std::vector<std::uint32_t>& a,
                                     const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

std::vector<std::uint32_t> joined(const std::vector<std::uint32_t>& a,
                                  const std::vector<std::uint32_t>& b) {
    std::vector<std::uint32_t> out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

std::vector<std::uint32_t> joined(const std::vector<std::uint32_t>& a,
                                  const std::vector<std::uint32_t>& b,
                                  const std::vector<std::uint32_t>& c) {
    return joined(joined(a, b), c);
}

// `count` ids out of the sorted pool: the smallest ones by default, or a
// seeded draw (returned sorted) when the policy asks for it.  The salt keeps
// the three subset draws of one block independent.
std::vector<std::uint32_t> pick_subset(const std::vector<std::uint32_t>& pool,
                                       std::size_t count, const SubsetPolicy& policy,
                                       std::uint32_t block, std::uint32_t salt) {
    if (!policy.randomized)
        return {pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(count)};
    std::mt19937_64 rng(policy.seed ^
                        (0x9e3779b97f4a7c15ULL * (std::uint64_t(block) * 4 + salt)));
    std::vector<std::uint32_t> deck = pool;
    for (std::size_t i = 0; i < count; ++i) {
        std::size_t pick = i + static_cast<std::size_t>(rng() % (deck.size() - i));
        std::swap(deck[i], deck[pick]);
    }
    deck.resize(count);
    std::sort(deck.begin(), deck.end());
    return deck;
}

// One download-and-solve pass of a replacement node over one or two
// coordinates of a group.  Every unknown of the combined parity system sits
// at a single evaluation point: raw helpers are read once per coordinate
// (their points differ across the pair), sum helpers transfer one value at
// their shared point, inferred helpers transfer nothing.  The annihilator of
// the target points reduces the system to the inferred unknowns; the targets
// then follow from a Vandermonde solve.
struct StageRequest {
    std::uint32_t replacement = 0;
    std::vector<BIndex> coords;
    std::vector<std::uint32_t> raw_helpers;
    std::vector<std::uint32_t> sum_helpers;
    std::vector<std::uint32_t> inferred;
    std::vector<Fe> target_points;
};

std::vector<Fe> run_stage(const EmscrParams& p, std::uint32_t block, BIndex base,
                          const StageRequest& req, const HelperRead& read,
                          RepairTranscript& tx) {
    const Field& f = p.field();
    const std::uint32_t r = p.r();
    const bool paired = req.coords.size() == 2;
    if (req.inferred.size() + req.target_points.size() != r)
        throw ConstructionError("stage unknowns do not match the parity row count");

    // Accumulated known contributions to the r combined parity sums.
    std::vector<Fe> syn(r, f.zero());
    auto accumulate = [&](Fe point, Fe value) {
        Fe pw = f.one();
        for (std::uint32_t t = 0; t < r; ++t) {
            syn[t] = f.add(syn[t], f.mul(pw, value));
            pw = f.mul(pw, point);
        }
    };
    auto constant_point = [&](std::uint32_t node) {
        Fe x = p.eval_point(node, block, req.coords[0]);
        if (paired && x != p.eval_point(node, block, req.coords[1]))
            throw ConstructionError("evaluation point not constant across paired coordinates");
        return x;
    };

    for (std::uint32_t h : req.raw_helpers) {
        if (paired && p.eval_point(h, block, req.coords[0]) ==
                          p.eval_point(h, block, req.coords[1]))
            throw ConstructionError("raw helper evaluation point failed to flip");
        for (BIndex b : req.coords) {
            SymbolRequest rq{h, h, block, b, std::nullopt};
            Fe v = read(rq);
            tx.downloads.push_back({1, req.replacement, base, rq});
            accumulate(p.eval_point(h, block, b), v);
        }
    }
    for (std::uint32_t h : req.sum_helpers) {
        Fe x = constant_point(h);
        SymbolRequest rq{h, h, block, req.coords[0],
                         paired ? std::optional<BIndex>(req.coords[1]) : std::nullopt};
        Fe v = read(rq);
        tx.downloads.push_back({1, req.replacement, base, rq});
        accumulate(x, v);
    }

    if (!req.inferred.empty()) {
        std::vector<Fe> points;
        points.reserve(req.inferred.size());
        for (std::uint32_t h : req.inferred) points.push_back(constant_point(h));

        const std::size_t rows = req.inferred.size();
        AnnihilatorMatrix ann = annihilator(f, req.target_points, rows, r);
        FMatrix a(rows, rows);
        std::vector<Fe> rhs(rows, f.zero());
        for (std::size_t i = 0; i < rows; ++i) {
            for (std::size_t c = 0; c < rows; ++c) {
                Fe acc = f.zero();
                Fe pw = f.one();
                for (std::uint32_t t = 0; t < r; ++t) {
                    acc = f.add(acc, f.mul(ann.p.at(i, t), pw));
                    pw = f.mul(pw, points[c]);
                }
                a.at(i, c) = acc;
            }
            Fe rv = f.zero();
            for (std::uint32_t t = 0; t < r; ++t)
                rv = f.add(rv, f.mul(ann.p.at(i, t), f.neg(syn[t])));
            rhs[i] = rv;
        }
        std::vector<Fe> solved = solve_square(f, std::move(a), std::move(rhs));
        for (std::size_t c = 0; c < rows; ++c) accumulate(points[c], solved[c]);
    }

    const std::size_t u0 = req.target_points.size();
    FMatrix vm = vandermonde(f, req.target_points, u0);
    std::vector<Fe> rhs(u0);
    for (std::size_t t = 0; t < u0; ++t) rhs[t] = f.neg(syn[t]);
    return solve_square(f, std::move(vm), std::move(rhs));
}

}  // namespace

HelperPartition partition_helpers(const EmscrParams& p, std::uint32_t block,
                                  std::uint32_t node1, std::uint32_t node2,
                                  const SubsetPolicy& policy) {
    if (node1 == 0 || node2 == 0 || node1 > p.M || node2 > p.M)
        throw UsageError("failed node id out of range");
    if (node1 == node2) throw UsageError("failed nodes must be distinct");
    if (block == 0 || block > p.N) throw UsageError("block out of range");

    HelperPartition part;
    part.block = block;
    part.node1 = node1;
    part.node2 = node2;
    part.s1 = p.symbol(node1, block);
    part.s2 = p.symbol(node2, block);
    const std::uint32_t r = p.r();
    const PairMap& pm = p.inner.pairs;

    if (part.s1 != part.s2) {
        part.kind = RepairCase::Distinct;
        part.g_pos = pair_index(pm, std::min(part.s1, part.s2), std::max(part.s1, part.s2));
        for (std::uint32_t i = 1; i <= p.M; ++i) {
            if (i == node1 || i == node2) continue;
            std::uint32_t s = p.symbol(i, block);
            if (s == part.s1)
                part.q.push_back(i);
            else if (s == part.s2)
                part.v.push_back(i);
            else
                part.gamma.push_back(i);
        }
        if (part.gamma.size() + 3 <= r)
            throw ConstructionError("too few mixed-symbol helpers for a paired stage");
        part.gamma_sum = pick_subset(part.gamma, part.gamma.size() - (r - 3), policy, block, 0);
    } else {
        part.kind = RepairCase::Equal;
        OuterCodeword a3 = companion(p.outer, p.codewords[node1 - 1], p.codewords[node2 - 1]);
        part.a3_node = static_cast<std::uint32_t>(codeword_index(p.outer, a3.message));
        part.s3 = a3.symbols[block - 1];
        part.g_pos = pair_index(pm, std::min(part.s1, part.s3), std::max(part.s1, part.s3));
        for (std::uint32_t i = 1; i <= p.M; ++i) {
            if (i == node1 || i == node2 || i == part.a3_node) continue;
            std::uint32_t s = p.symbol(i, block);
            if (s == part.s1)
                part.w.push_back(i);
            else if (s == part.s3)
                part.y.push_back(i);
            else
                part.z.push_back(i);
        }
        if (part.z.size() + 3 <= r)
            throw ConstructionError("too few mixed-symbol helpers for the single stage");
        part.z_sum = pick_subset(part.z, part.z.size() - (r - 5), policy, block, 1);
        part.z_raw = pick_subset(part.z, part.z.size() - (r - 3), policy, block, 2);
    }
    return part;
}

AnnihilatorMatrix annihilator(const Field& f, std::span<const Fe> roots,
                              std::size_t rows, std::size_t cols) {
    for (std::size_t i = 0; i < roots.size(); ++i)
        for (std::size_t k = i + 1; k < roots.size(); ++k)
            if (roots[i] == roots[k])
                throw ConstructionError("annihilator roots must be distinct");
    if (rows + roots.size() > cols)
        throw ConstructionError("annihilator degree overflow");

    std::vector<Fe> p0{f.one()};
    for (Fe rt : roots) {
        std::vector<Fe> next(p0.size() + 1, f.zero());
        for (std::size_t t = 0; t < p0.size(); ++t) {
            next[t + 1] = f.add(next[t + 1], p0[t]);
            next[t] = f.add(next[t], f.mul(f.neg(rt), p0[t]));
        }
        p0 = std::move(next);
    }

    AnnihilatorMatrix out;
    out.roots.assign(roots.begin(), roots.end());
    out.p = FMatrix(rows, cols);
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t t = 0; t < p0.size(); ++t) out.p.at(i, i + t) = p0[t];
    return out;
}

std::uint64_t RepairTranscript::count(std::uint32_t block, int round,
                                      std::uint32_t replacement) const {
    std::uint64_t n = 0;
    for (const DownloadRecord& d : downloads) {
        if (block != 0 && d.request.block != block) continue;
        if (round != 0 && d.round != round) continue;
        if (replacement != 0 && d.replacement != replacement) continue;
        ++n;
    }
    return n;
}

std::vector<std::uint32_t> RepairTranscript::round1_helpers() const {
    std::set<std::uint32_t> ids;
    for (const DownloadRecord& d : downloads)
        if (d.round == 1) ids.insert(d.request.helper);
    return {ids.begin(), ids.end()};
}

GroupRecovery repair_group_case1(const EmscrParams& p, const HelperPartition& part,
                                 BIndex base, const HelperRead& read,
                                 RepairTranscript& tx) {
    if (part.kind != RepairCase::Distinct)
        throw UsageError("partition does not describe a distinct-symbol block");
    const Field& f = p.field();
    const PairMap& pm = p.inner.pairs;
    const std::uint32_t j = part.block;
    const auto g = group_coords(pm, part.g_pos, base);

    // The digit whose substitution flips a failed node's own evaluation point
    // is 1 for the smaller of the two block symbols and 2 for the larger.
    const std::uint32_t e1 = part.s1 < part.s2 ? 1 : 2;
    const std::uint32_t e2 = 3 - e1;

    auto flip_points = [&](std::uint32_t node, std::uint32_t e) {
        Fe x0 = p.eval_point(node, j, g[0]);
        Fe xe = p.eval_point(node, j, g[e]);
        if (x0 == xe)
            throw ConstructionError("replacement evaluation point failed to flip");
        return std::pair<Fe, Fe>{x0, xe};
    };
    auto const_point = [&](std::uint32_t node, std::uint32_t e) {
        Fe x0 = p.eval_point(node, j, g[0]);
        if (x0 != p.eval_point(node, j, g[e]))
            throw ConstructionError("evaluation point not constant across paired coordinates");
        return x0;
    };

    // Replacement 1 works the pair {0, e1}: it recovers its own two symbols
    // and the sum of the other replacement's (whose point stays constant).
    auto [x10, x1e] = flip_points(part.node1, e1);
    Fe x2c = const_point(part.node2, e1);
    StageRequest st1;
    st1.replacement = part.node1;
    st1.coords = {g[0], g[e1]};
    st1.raw_helpers = part.q;
    st1.sum_helpers = joined(part.v, part.gamma_sum);
    st1.inferred = set_minus(part.gamma, part.gamma_sum);
    st1.target_points = {x10, x1e, x2c};
    std::vector<Fe> t1 = run_stage(p, j, base, st1, read, tx);

    auto [x20, x2e] = flip_points(part.node2, e2);
    Fe x1c = const_point(part.node1, e2);
    StageRequest st2;
    st2.replacement = part.node2;
    st2.coords = {g[0], g[e2]};
    st2.raw_helpers = part.v;
    st2.sum_helpers = joined(part.q, part.gamma_sum);
    st2.inferred = set_minus(part.gamma, part.gamma_sum);
    st2.target_points = {x20, x2e, x1c};
    std::vector<Fe> t2 = run_stage(p, j, base, st2, read, tx);

    // Round 2: each replacement hands over the sum it recovered on the
    // other's behalf; one transferred value per direction.
    tx.downloads.push_back({2, part.node1, base, {part.node2, part.node1, j, g[0], g[e2]}});
    tx.downloads.push_back({2, part.node2, base, {part.node1, part.node2, j, g[0], g[e1]}});

    GroupRecovery out;
    out.block = j;
    out.base = base;
    out.node1_symbols[0] = t1[0];
    out.node1_symbols[e1] = t1[1];
    out.node1_symbols[e2] = f.sub(t2[2], t1[0]);
    out.node2_symbols[0] = t2[0];
    out.node2_symbols[e2] = t2[1];
    out.node2_symbols[e1] = f.sub(t1[2], t2[0]);
    return out;
}

GroupRecovery repair_group_case2(const EmscrParams& p, const HelperPartition& part,
                                 BIndex base, const HelperRead& read,
                                 RepairTranscript& tx) {
    if (part.kind != RepairCase::Equal)
        throw UsageError("partition does not describe an equal-symbol block");
    const PairMap& pm = p.inner.pairs;
    const std::uint32_t j = part.block;
    const auto g = group_coords(pm, part.g_pos, base);

    const std::uint32_t e = part.s1 < part.s3 ? 1 : 2;
    const std::uint32_t o = 3 - e;

    // The companion's node joins the inferred pool of both stages; it is
    // never read.
    std::vector<std::uint32_t> zplus = part.z;
    zplus.insert(std::lower_bound(zplus.begin(), zplus.end(), part.a3_node), part.a3_node);

    auto flip_points = [&](std::uint32_t node, std::uint32_t d) {
        Fe x0 = p.eval_point(node, j, g[0]);
        Fe xd = p.eval_point(node, j, g[d]);
        if (x0 == xd)
            throw ConstructionError("replacement evaluation point failed to flip");
        return std::pair<Fe, Fe>{x0, xd};
    };

    // Both failed nodes share the block symbol, so both their points flip
    // across {0, e}; replacement 1 recovers all four symbols there.
    auto [x10, x1e] = flip_points(part.node1, e);
    auto [x20, x2e] = flip_points(part.node2, e);
    StageRequest pair_stage;
    pair_stage.replacement = part.node1;
    pair_stage.coords = {g[0], g[e]};
    pair_stage.raw_helpers = part.w;
    pair_stage.sum_helpers = joined(part.y, part.z_sum);
    pair_stage.inferred = set_minus(zplus, part.z_sum);
    pair_stage.target_points = {x10, x1e, x20, x2e};
    std::vector<Fe> tp = run_stage(p, j, base, pair_stage, read, tx);

    // Replacement 2 covers the remaining digit alone; every helper sends the
    // one symbol it holds there.
    StageRequest single_stage;
    single_stage.replacement = part.node2;
    single_stage.coords = {g[o]};
    single_stage.sum_helpers = joined(part.w, part.y, part.z_raw);
    single_stage.inferred = set_minus(zplus, part.z_raw);
    single_stage.target_points = {p.eval_point(part.node1, j, g[o]),
                                  p.eval_point(part.node2, j, g[o])};
    std::vector<Fe> ts = run_stage(p, j, base, single_stage, read, tx);

    // Round 2: replacement 1 pulls its remaining symbol, replacement 2 its
    // other two.
    tx.downloads.push_back({2, part.node1, base, {part.node2, part.node1, j, g[o], std::nullopt}});
    tx.downloads.push_back({2, part.node2, base, {part.node1, part.node2, j, g[0], std::nullopt}});
    tx.downloads.push_back({2, part.node2, base, {part.node1, part.node2, j, g[e], std::nullopt}});

    GroupRecovery out;
    out.block = j;
    out.base = base;
    out.node1_symbols[0] = tp[0];
    out.node1_symbols[e] = tp[1];
    out.node1_symbols[o] = ts[0];
    out.node2_symbols[0] = tp[2];
    out.node2_symbols[e] = tp[3];
    out.node2_symbols[o] = ts[1];
    return out;
}

Slice plan_slice(const EmscrParams& p, std::uint32_t node1, std::uint32_t node2,
                 std::uint64_t groups, std::uint64_t seed) {
    if (groups == 0) throw UsageError("slice needs at least one group per block");
    Slice slice;
    for (std::uint32_t j = 1; j <= p.N; ++j) {
        HelperPartition part = partition_helpers(p, j, node1, node2);
        SliceBlock sb;
        sb.block = static_cast<std::uint16_t>(j);
        sb.g_pos = part.g_pos;
        sb.bases = group_bases(p.inner.pairs, part.g_pos, groups, seed + j);
        slice.blocks.push_back(std::move(sb));
    }
    return slice;
}

RepairResult cooperative_repair(const EmscrParams& p, std::uint32_t node1,
                                std::uint32_t node2, const Slice& slice,
                                const HelperRead& read, const SubsetPolicy& policy) {
    std::vector<HelperPartition> parts;
    parts.reserve(p.N);
    for (std::uint32_t j = 1; j <= p.N; ++j)
        parts.push_back(partition_helpers(p, j, node1, node2, policy));

    // Reject unusable slices before the first download.
    if (slice.blocks.size() != p.N)
        throw UsageError("slice must cover every block exactly once");
    const PairMap& pm = p.inner.pairs;
    for (std::uint32_t j = 1; j <= p.N; ++j) {
        const SliceBlock& sb = slice.blocks[j - 1];
        if (sb.block != j) throw UsageError("slice blocks must appear in order");
        if (sb.g_pos != parts[j - 1].g_pos)
            throw UsageError("slice digit position does not match the failed pair at block " +
                             std::to_string(j));
        if (sb.bases.empty()) throw UsageError("slice block has no groups");
        for (std::size_t i = 0; i < sb.bases.size(); ++i) {
            if (digit(pm, sb.bases[i], sb.g_pos) != 0)
                throw UsageError("group base has a nonzero digit at the group position");
            if (i > 0 && !(sb.bases[i - 1] < sb.bases[i]))
                throw UsageError("group bases must be strictly ascending");
        }
    }

    RepairResult res;
    res.shard1.node = node1;
    res.shard2.node = node2;
    for (std::uint32_t j = 1; j <= p.N; ++j) {
        const HelperPartition& part = parts[j - 1];
        for (BIndex base : slice.blocks[j - 1].bases) {
            GroupRecovery rec = part.kind == RepairCase::Distinct
                                    ? repair_group_case1(p, part, base, read, res.transcript)
                                    : repair_group_case2(p, part, base, read, res.transcript);
            const auto coords = group_coords(pm, part.g_pos, base);
            for (std::uint32_t d = 0; d < 3; ++d) {
                std::pair<std::uint16_t, BIndex> key{static_cast<std::uint16_t>(j), coords[d]};
                bool fresh = res.shard1.symbols.emplace(key, rec.node1_symbols[d]).second;
                fresh = res.shard2.symbols.emplace(key, rec.node2_symbols[d]).second && fresh;
                if (!fresh) throw ConstructionError("slice groups overlap");
            }
        }
    }
    res.partitions = std::move(parts);
    return res;
}

std::uint64_t group_download_count(const HelperPartition& part) {
    if (part.kind == RepairCase::Distinct)
        return 3 * (part.q.size() + part.v.size()) + 2 * part.gamma_sum.size() + 2;
    return 3 * part.w.size() + 2 * part.y.size() + part.z_sum.size() + part.z_raw.size() + 3;
}

Rat bandwidth_closed_form(const HelperPartition& part) {
    return Rat(static_cast<int128>(group_download_count(part)), 3);
}

CutsetBounds cutset_bounds(std::uint64_t h, std::uint64_t d, std::uint64_t k,
                           const Rat& ell) {
    if (h == 0) throw UsageError("cut-set bounds need at least one failure");
    if (d < k) throw UsageError("cut-set bounds need at least k helpers");
    const Rat hh(static_cast<int128>(h));
    const Rat joint(static_cast<int128>(h + d - k));
    CutsetBounds out;
    out.single = ell / Rat(static_cast<int128>(d - k + 1));
    out.cooperative = hh * Rat(static_cast<int128>(h + d - 1)) * ell / joint;
    out.centralized = hh * Rat(static_cast<int128>(d)) * ell / joint;
    return out;
}

Rat epsilon_bound(std::uint32_t r, std::uint64_t P, const Rat& delta) {
    if (P == 0) throw UsageError("the guarantee needs at least one helper");
    if (!(Rat(0) < delta) || !(delta <= Rat(1)))
        throw UsageError("distance ratio must lie in (0, 1]");
    const Rat pp(static_cast<int128>(P));
    return Rat(static_cast<int128>(r)) / (pp + Rat(1)) *
               (Rat(1, 2) + (Rat(2) - delta) * pp / Rat(3)) -
           Rat(1);
}

Rat epsilon_bound_r5(std::uint64_t P, const Rat& delta) {
    if (P == 0) throw UsageError("the guarantee needs at least one helper");
    if (!(Rat(0) < delta) || !(delta <= Rat(1)))
        throw UsageError("distance ratio must lie in (0, 1]");
    const Rat pp(static_cast<int128>(P));
    return Rat(5, 6) * (Rat(3) + Rat(2) * (Rat(2) - delta) * pp) / (pp + Rat(1)) - Rat(1);
}

BandwidthReport bandwidth_report(const EmscrParams& p,
                                 const std::vector<HelperPartition>& partitions,
                                 const Slice& slice, const RepairTranscript& tx) {
    if (partitions.size() != p.N || slice.blocks.size() != p.N)
        throw UsageError("report needs one partition and one slice block per code block");

    BandwidthReport rep;
    rep.m_nodes = p.M;
    rep.r = p.r();
    rep.delta = p.outer.delta();

    Rat total(0);
    Rat closed(0);
    rep.counts_match = true;
    for (std::uint32_t j = 1; j <= p.N; ++j) {
        const HelperPartition& part = partitions[j - 1];
        const std::uint64_t groups = slice.blocks[j - 1].bases.size();
        if (groups == 0) throw UsageError("slice block has no groups");
        const std::uint64_t cnt = tx.count(j);
        if (cnt % groups != 0)
            throw IntegrityError("downloads at block " + std::to_string(j) +
                                 " are not a whole number of groups");
        const std::uint64_t measured = cnt / groups;
        const std::uint64_t predicted = group_download_count(part);
        rep.cases.push_back(part.kind);
        rep.measured_per_group.push_back(measured);
        rep.closed_form_per_group.push_back(predicted);
        if (measured != predicted) rep.counts_match = false;
        total = total + Rat(static_cast<int128>(measured), 3);
        closed = closed + bandwidth_closed_form(part);
    }
    rep.rb_total = total;
    rep.rb_closed_form = closed;

    rep.helpers_p = tx.round1_helpers().size();
    rep.lemma_floor_ok = rep.helpers_p + rep.r >= rep.m_nodes;
    rep.rb_optimal =
        cutset_bounds(2, rep.helpers_p, p.M - rep.r, Rat(static_cast<int128>(p.N)))
            .cooperative;
    rep.eps_measured = rep.rb_total / rep.rb_optimal - Rat(1);
    rep.eps_bound = epsilon_bound(rep.r, rep.helpers_p, rep.delta);
    rep.bound_ok = rep.eps_measured <= rep.eps_bound;
    return rep;
}

Rat epsilon_measured(const BandwidthReport& report) {
    return report.rb_total / report.rb_optimal - Rat(1);
}

ScalingReport scaling_report(std::uint64_t q, std::uint64_t u, std::uint64_t outer_g,
                             std::uint64_t n_blocks, std::uint64_t field_order) {
    if (q < 2 || u == 0 || outer_g == 0 || n_blocks == 0)
        throw UsageError("scaling report needs q >= 2 and positive u, K, N");

    ScalingReport rep;
    rep.q = q;
    rep.u = u;
    rep.outer_g = outer_g;
    rep.n_blocks = n_blocks;
    rep.field_order = field_order;

    const uint128 pairs = uint128(q) * (q - 1) / 2;
    if (pairs > std::numeric_limits<std::uint32_t>::max())
        throw ConstructionError("pair count overflows the exponent type");
    rep.l_exponent = static_cast<std::uint32_t>(pairs);

    const uint128 exponent = uint128(u) * outer_g;
    uint128 m = 1;
    for (uint128 e = 0; e < exponent; ++e) {
        m *= q;
        if (m > std::numeric_limits<std::uint64_t>::max())
            throw ConstructionError("node count overflows 64 bits");
    }
    rep.m_nodes = static_cast<std::uint64_t>(m);
    rep.log_m_coeff = static_cast<std::uint64_t>(exponent);

    uint128 mf = 2;
    for (std::uint64_t e = 0; e < outer_g + 1; ++e) {
        mf *= q;
        if (mf > std::numeric_limits<std::uint64_t>::max())
            throw ConstructionError("minimum field order overflows 64 bits");
    }
    mf += 1;
    rep.min_field_order = static_cast<std::uint64_t>(mf);
    rep.field_ok = field_order >= rep.min_field_order;

    // log m = u*K*log q holds exactly once K/N stands in for 1/(sqrt(q)-1)
    // in u*N/(sqrt(q)-1); checked as the rational identity it reduces to.
    rep.ratio_identity_ok =
        Rat(static_cast<int128>(u)) * Rat(static_cast<int128>(n_blocks)) *
            Rat(static_cast<int128>(outer_g), static_cast<int128>(n_blocks)) ==
        Rat(static_cast<int128>(u) * static_cast<int128>(outer_g));
    return rep;
}

}  // namespace emscr
