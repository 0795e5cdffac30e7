#include "emscr/cli.hpp"

#include <algorithm>
#include <cctype>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "emscr/errors.hpp"

namespace emscr {

namespace {

namespace fs = std::filesystem;

constexpr std::array<std::uint8_t, 8> kParamsMagic = {'E', 'M', 'S', 'C',
                                                      'R', 'P', '1', '\0'};

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return {};
    const std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::uint64_t parse_u64(const std::string& text, const std::string& key) {
    if (text.empty() || text[0] == '-')
        throw UsageError("value for '" + key + "' is not a non-negative number: " + text);
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(text, &used, 0);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw UsageError("value for '" + key + "' is not a number: " + text);
    }
}

std::uint32_t narrow_u32(std::uint64_t v, const std::string& what) {
    if (v > 0xffffffffULL) throw UsageError(what + " is out of range");
    return static_cast<std::uint32_t>(v);
}

uint128 parse_u128(const std::string& text) {
    if (text.empty()) throw IoError("empty coordinate value");
    uint128 v = 0;
    const uint128 cap = ~uint128(0);
    for (char c : text) {
        if (c < '0' || c > '9') throw IoError("malformed coordinate value: " + text);
        const unsigned d = static_cast<unsigned>(c - '0');
        if (v > (cap - d) / 10) throw IoError("coordinate value out of range: " + text);
        v = v * 10 + d;
    }
    return v;
}

Digest parse_hex_digest(const std::string& text) {
    if (text.size() != 2 * kDigestSize) throw IoError("malformed digest: " + text);
    auto nibble = [&](char c) -> std::uint8_t {
        if (c >= '0' && c <= '9') return static_cast<std::uint8_t>(c - '0');
        if (c >= 'a' && c <= 'f') return static_cast<std::uint8_t>(c - 'a' + 10);
        throw IoError("malformed digest: " + text);
    };
    Digest d{};
    for (std::size_t i = 0; i < kDigestSize; ++i)
        d[i] = static_cast<std::uint8_t>((nibble(text[2 * i]) << 4) | nibble(text[2 * i + 1]));
    return d;
}

fs::path shard_path(const fs::path& dir, std::uint32_t node, bool failed) {
    std::string name = "node_" + std::to_string(node) + ".shard";
    if (failed) name += ".failed";
    return dir / name;
}

// Ascending ids of every node_<i>.shard.failed present in the directory.
std::vector<std::uint32_t> scan_failed(const fs::path& dir, std::uint64_t m) {
    const std::string prefix = "node_";
    const std::string suffix = ".shard.failed";
    std::vector<std::uint32_t> ids;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.size() <= prefix.size() + suffix.size()) continue;
        if (name.compare(0, prefix.size(), prefix) != 0) continue;
        if (name.compare(name.size() - suffix.size(), suffix.size(), suffix) != 0) continue;
        const std::string mid =
            name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
        if (!std::all_of(mid.begin(), mid.end(),
                         [](unsigned char c) { return std::isdigit(c) != 0; }))
            continue;
        const std::uint64_t id = parse_u64(mid, "shard file name");
        if (id >= 1 && id <= m) ids.push_back(static_cast<std::uint32_t>(id));
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

std::vector<std::uint8_t> to_bytes(const std::string& text) {
    return {text.begin(), text.end()};
}

std::string line_joined(const std::vector<std::uint64_t>& vals) {
    std::string out;
    for (std::size_t i = 0; i < vals.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(vals[i]);
    }
    return out;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = line;
        if (const std::size_t hash = s.find('#'); hash != std::string::npos)
            s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw UsageError("config line " + std::to_string(lineno) + " is not 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty())
            throw UsageError("config line " + std::to_string(lineno) + " is not 'key = value'");
        if (!kv.emplace(key, val).second)
            throw UsageError("config repeats key '" + key + "'");
    }

    auto take = [&](const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw UsageError("config is missing '" + key + "'");
        std::string v = it->second;
        kv.erase(it);
        return v;
    };

    ExperimentConfig cfg;
    cfg.q = narrow_u32(parse_u64(take("q"), "q"), "q");
    cfg.inner_k = narrow_u32(parse_u64(take("inner_k"), "inner_k"), "inner_k");
    cfg.outer_n = narrow_u32(parse_u64(take("outer_n"), "outer_n"), "outer_n");
    cfg.outer_k = narrow_u32(parse_u64(take("outer_k"), "outer_k"), "outer_k");
    cfg.field_order = parse_u64(take("field_order"), "field_order");
    if (auto it = kv.find("field_poly"); it != kv.end()) {
        cfg.field_poly = parse_u64(it->second, "field_poly");
        kv.erase(it);
    }
    cfg.subgroup_order = parse_u64(take("subgroup_order"), "subgroup_order");
    cfg.groups = parse_u64(take("groups"), "groups");
    cfg.seed = parse_u64(take("seed"), "seed");

    const std::string fail = take("fail");
    const std::size_t comma = fail.find(',');
    if (comma == std::string::npos)
        throw UsageError("'fail' needs two node ids separated by a comma");
    cfg.fail1 = narrow_u32(parse_u64(trim(fail.substr(0, comma)), "fail"), "fail");
    cfg.fail2 = narrow_u32(parse_u64(trim(fail.substr(comma + 1)), "fail"), "fail");

    if (!kv.empty()) throw UsageError("config has unknown key '" + kv.begin()->first + "'");
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    const std::vector<std::uint8_t> bytes = read_file(path);
    return parse_config(std::string(bytes.begin(), bytes.end()));
}

EmscrParams build_from_config(const ExperimentConfig& cfg) {
    if (cfg.field_order == 0) throw UsageError("field_order must be positive");
    FieldSpec spec;
    if (cfg.field_poly != 0)
        spec.poly_mask = cfg.field_poly;
    else
        spec.prime = cfg.field_order;
    Field f = make_field(spec);
    if (f.order() != cfg.field_order)
        throw UsageError("field polynomial does not produce the configured order");

    Subgroup sg = subgroup_of_order(f, cfg.subgroup_order);
    MscrParams inner = build_mscr(cfg.q, cfg.inner_k, f, sg);
    ScalarCodeSpec outer = build_rs(make_field({.prime = cfg.q}), cfg.outer_n, cfg.outer_k);
    EmscrParams p = build_emscr(inner, outer);

    if (cfg.groups == 0) throw UsageError("groups must be positive");
    if (cfg.fail1 == 0 || cfg.fail2 == 0 || cfg.fail1 > p.M || cfg.fail2 > p.M)
        throw UsageError("failed node ids must lie in [1, M]");
    if (cfg.fail1 == cfg.fail2) throw UsageError("failed nodes must be distinct");
    return p;
}

std::vector<std::uint8_t> serialize_params(const ExperimentConfig& cfg,
                                           const EmscrParams& p) {
    std::vector<std::uint8_t> out(kParamsMagic.begin(), kParamsMagic.end());
    wire::put_u64(out, cfg.field_order);
    wire::put_u64(out, cfg.field_poly);
    wire::put_u64(out, p.field().generator().v);
    wire::put_u64(out, cfg.subgroup_order);
    wire::put_u64(out, cfg.q);
    wire::put_u64(out, cfg.inner_k);
    wire::put_u64(out, cfg.outer_n);
    wire::put_u64(out, cfg.outer_k);
    for (Fe x : p.outer.eval_points) wire::put_u64(out, x.v);
    wire::put_u64(out, p.M);
    wire::put_u64(out, cfg.seed);
    wire::put_u64(out, cfg.groups);
    wire::put_u64(out, cfg.fail1);
    wire::put_u64(out, cfg.fail2);
    return out;
}

LoadedParams parse_params(const std::vector<std::uint8_t>& bytes) {
    wire::Reader in(bytes);
    const std::vector<std::uint8_t> magic = in.bytes(kParamsMagic.size());
    if (!std::equal(magic.begin(), magic.end(), kParamsMagic.begin()))
        throw MagicMismatchError("not a parameter file");

    ExperimentConfig cfg;
    cfg.field_order = in.u64();
    cfg.field_poly = in.u64();
    const std::uint64_t generator = in.u64();
    cfg.subgroup_order = in.u64();
    cfg.q = narrow_u32(in.u64(), "q");
    cfg.inner_k = narrow_u32(in.u64(), "inner_k");
    cfg.outer_n = narrow_u32(in.u64(), "outer_n");
    cfg.outer_k = narrow_u32(in.u64(), "outer_k");
    if (cfg.outer_n > in.remaining() / 8)
        throw TruncatedFileError("unexpected end of file");
    std::vector<std::uint64_t> evals(cfg.outer_n);
    for (std::uint64_t& e : evals) e = in.u64();
    const std::uint64_t m = in.u64();
    cfg.seed = in.u64();
    cfg.groups = in.u64();
    cfg.fail1 = narrow_u32(in.u64(), "fail1");
    cfg.fail2 = narrow_u32(in.u64(), "fail2");
    if (!in.done()) throw IoError("parameter file has trailing bytes");

    LoadedParams lp;
    lp.config = cfg;
    lp.params = build_from_config(cfg);
    bool consistent = lp.params.field().generator().v == generator && lp.params.M == m;
    for (std::uint32_t i = 0; consistent && i < cfg.outer_n; ++i)
        consistent = lp.params.outer.eval_points[i].v == evals[i];
    if (!consistent)
        throw IntegrityError("parameter file disagrees with its derived fields");
    lp.digest = sha256(bytes);
    return lp;
}

LoadedParams load_params(const std::filesystem::path& dir) {
    return parse_params(read_file(dir / "params.bin"));
}

Slice config_slice(const ExperimentConfig& cfg, const EmscrParams& p) {
    return plan_slice(p, cfg.fail1, cfg.fail2, cfg.groups, cfg.seed);
}

void cmd_gen_params(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
    EmscrParams p = build_from_config(cfg);
    fs::create_directories(dir);
    write_file_atomic(dir / "params.bin", serialize_params(cfg, p));
}

void cmd_encode(const std::filesystem::path& dir) {
    LoadedParams lp = load_params(dir);
    const EmscrParams& p = lp.params;
    for (std::uint32_t i = 1; i <= p.M; ++i)
        if (fs::exists(shard_path(dir, i, true)))
            throw UsageError("cannot encode while node " + std::to_string(i) +
                             " is marked failed");

    const Slice slice = config_slice(lp.config, p);
    std::vector<Shard> shards(p.M);
    for (std::uint32_t i = 1; i <= p.M; ++i) shards[i - 1].node = i;

    // Message symbols come from one seeded stream, consumed in ascending
    // (block, coordinate) order, so re-encoding reproduces every shard.
    std::mt19937_64 rng(lp.config.seed);
    const Field& f = p.field();
    for (const SliceBlock& sb : slice.blocks) {
        for (BIndex b : slice_block_coords(p.inner.pairs, sb)) {
            std::vector<Fe> message(p.M - p.r());
            for (Fe& mv : message) mv = Fe{rng() % f.order()};
            const std::vector<Fe> column = encode_coord(p, sb.block, b, message);
            for (std::uint32_t i = 1; i <= p.M; ++i)
                shards[i - 1].symbols[{sb.block, b}] = column[i - 1];
        }
    }
    for (std::uint32_t i = 1; i <= p.M; ++i)
        save_shard(shard_path(dir, i, false), shards[i - 1], lp.digest);
}

void cmd_fail(const std::filesystem::path& dir, std::uint32_t i1, std::uint32_t i2) {
    LoadedParams lp = load_params(dir);
    if (i1 == 0 || i2 == 0 || i1 > lp.params.M || i2 > lp.params.M)
        throw UsageError("failed node ids must lie in [1, M]");
    if (i1 == i2) throw UsageError("failed nodes must be distinct");
    for (std::uint32_t i : {i1, i2}) {
        const fs::path live = shard_path(dir, i, false);
        const fs::path failed = shard_path(dir, i, true);
        if (fs::exists(failed)) continue;
        if (!fs::exists(live))
            throw IoError("no shard to fail for node " + std::to_string(i));
        fs::rename(live, failed);
    }
}

void cmd_repair(const std::filesystem::path& dir) {
    LoadedParams lp = load_params(dir);
    const EmscrParams& p = lp.params;

    const std::vector<std::uint32_t> failed = scan_failed(dir, p.M);
    if (failed.size() != 2)
        throw UsageError("repair handles exactly two failed nodes, found " +
                         std::to_string(failed.size()));
    const std::uint32_t node1 = failed[0];
    const std::uint32_t node2 = failed[1];

    const Slice slice = config_slice(lp.config, p);

    std::map<std::uint32_t, Shard> survivors;
    for (std::uint32_t i = 1; i <= p.M; ++i) {
        if (i == node1 || i == node2) continue;
        survivors.emplace(i, load_shard(shard_path(dir, i, false), lp.digest));
    }
    auto fetch = [&](std::uint32_t node, std::uint32_t block, BIndex b) {
        const Shard& sh = survivors.at(node);
        auto it = sh.symbols.find({static_cast<std::uint16_t>(block), b});
        if (it == sh.symbols.end())
            throw IntegrityError("helper " + std::to_string(node) +
                                 " lacks a requested coordinate");
        return it->second;
    };
    const HelperRead reader = [&](const SymbolRequest& rq) {
        Fe v = fetch(rq.helper, rq.block, rq.b1);
        if (rq.b2) v = p.field().add(v, fetch(rq.helper, rq.block, *rq.b2));
        return v;
    };

    RepairResult res = cooperative_repair(p, node1, node2, slice, reader);

    // Every repaired coordinate must close the full parity system together
    // with the survivors; these reads are verification, not repair traffic.
    for (const SliceBlock& sb : slice.blocks) {
        for (BIndex b : slice_block_coords(p.inner.pairs, sb)) {
            std::vector<Fe> column(p.M);
            for (std::uint32_t i = 1; i <= p.M; ++i) {
                if (i == node1)
                    column[i - 1] = res.shard1.symbols.at({sb.block, b});
                else if (i == node2)
                    column[i - 1] = res.shard2.symbols.at({sb.block, b});
                else
                    column[i - 1] = fetch(i, sb.block, b);
            }
            if (!validate_coord(p, sb.block, b, column))
                throw IntegrityError("repaired data fails the parity checks; "
                                     "helper shards are inconsistent");
        }
    }

    save_shard(shard_path(dir, node1, false), res.shard1, lp.digest);
    save_shard(shard_path(dir, node2, false), res.shard2, lp.digest);
    write_file_atomic(dir / "transcript.txt",
                      to_bytes(format_transcript(lp.digest, node1, node2, res.transcript)));
}

std::string format_transcript(const Digest& params_digest, std::uint32_t node1,
                              std::uint32_t node2, const RepairTranscript& tx) {
    std::ostringstream out;
    out << "EMSCR-TRANSCRIPT 1\n";
    out << "params " << hex(params_digest) << "\n";
    out << "failed " << node1 << " " << node2 << "\n";
    out << "downloads " << tx.downloads.size() << "\n";
    for (const DownloadRecord& r : tx.downloads) {
        out << r.round << ' ' << r.replacement << ' ' << r.request.block << ' '
            << to_string(r.group_base.value) << ' ' << r.request.helper << ' '
            << r.request.subject << ' ' << to_string(r.request.b1.value);
        if (r.request.b2) out << ' ' << to_string(r.request.b2->value);
        out << '\n';
    }
    return out.str();
}

TranscriptFile parse_transcript(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next_line = [&]() {
        if (!std::getline(in, line)) throw IoError("transcript truncated");
        return trim(line);
    };

    if (next_line() != "EMSCR-TRANSCRIPT 1") throw IoError("not a transcript file");

    TranscriptFile tf;
    {
        std::istringstream ls(next_line());
        std::string key, digest;
        ls >> key >> digest;
        if (key != "params") throw IoError("transcript params line malformed");
        tf.params_digest = parse_hex_digest(digest);
    }
    {
        std::istringstream ls(next_line());
        std::string key, a, b;
        ls >> key >> a >> b;
        if (key != "failed" || a.empty() || b.empty())
            throw IoError("transcript failed line malformed");
        tf.node1 = narrow_u32(parse_u64(a, "failed node"), "failed node");
        tf.node2 = narrow_u32(parse_u64(b, "failed node"), "failed node");
    }
    std::uint64_t count = 0;
    {
        std::istringstream ls(next_line());
        std::string key, n;
        ls >> key >> n;
        if (key != "downloads" || n.empty())
            throw IoError("transcript downloads line malformed");
        count = parse_u64(n, "downloads");
    }
    for (std::uint64_t i = 0; i < count; ++i) {
        std::istringstream ls(next_line());
        std::string round, replacement, block, base, helper, subject, b1, b2;
        ls >> round >> replacement >> block >> base >> helper >> subject >> b1;
        if (b1.empty()) throw IoError("transcript record malformed");
        DownloadRecord rec;
        rec.round = static_cast<int>(parse_u64(round, "round"));
        rec.replacement = narrow_u32(parse_u64(replacement, "replacement"), "replacement");
        rec.group_base = BIndex{parse_u128(base)};
        rec.request.block = narrow_u32(parse_u64(block, "block"), "block");
        rec.request.helper = narrow_u32(parse_u64(helper, "helper"), "helper");
        rec.request.subject = narrow_u32(parse_u64(subject, "subject"), "subject");
        rec.request.b1 = BIndex{parse_u128(b1)};
        if (ls >> b2) rec.request.b2 = BIndex{parse_u128(b2)};
        tf.transcript.downloads.push_back(std::move(rec));
    }
    while (std::getline(in, line))
        if (!trim(line).empty()) throw IoError("transcript has trailing records");
    return tf;
}

BandwidthReport cmd_report(const std::filesystem::path& dir, std::ostream& human) {
    LoadedParams lp = load_params(dir);
    const EmscrParams& p = lp.params;

    const std::vector<std::uint8_t> tbytes = read_file(dir / "transcript.txt");
    const TranscriptFile tf = parse_transcript(std::string(tbytes.begin(), tbytes.end()));
    if (tf.params_digest != lp.digest)
        throw IntegrityError("transcript was produced under different parameters");

    std::vector<HelperPartition> parts;
    parts.reserve(p.N);
    for (std::uint32_t j = 1; j <= p.N; ++j)
        parts.push_back(partition_helpers(p, j, tf.node1, tf.node2));
    const Slice slice = config_slice(lp.config, p);

    const BandwidthReport rep = bandwidth_report(p, parts, slice, tf.transcript);
    const ScalingReport sc = scaling_report(lp.config.q, 1, lp.config.outer_k,
                                            lp.config.outer_n, lp.config.field_order);

    std::uint64_t blocks_distinct = 0, blocks_equal = 0;
    for (RepairCase c : rep.cases)
        (c == RepairCase::Distinct ? blocks_distinct : blocks_equal) += 1;

    std::ostringstream mach;
    mach << "rb_total = " << rep.rb_total.str() << '\n';
    mach << "rb_closed_form = " << rep.rb_closed_form.str() << '\n';
    mach << "rb_optimal = " << rep.rb_optimal.str() << '\n';
    mach << "eps_measured = " << rep.eps_measured.str() << '\n';
    mach << "eps_bound = " << rep.eps_bound.str() << '\n';
    mach << "helpers_P = " << rep.helpers_p << '\n';
    mach << "case_blocks_distinct = " << blocks_distinct << '\n';
    mach << "case_blocks_equal = " << blocks_equal << '\n';
    mach << "counts_match = " << (rep.counts_match ? 1 : 0) << '\n';
    mach << "lemma_floor_ok = " << (rep.lemma_floor_ok ? 1 : 0) << '\n';
    mach << "bound_ok = " << (rep.bound_ok ? 1 : 0) << '\n';
    mach << "delta = " << rep.delta.str() << '\n';
    mach << "m_nodes = " << rep.m_nodes << '\n';
    mach << "r = " << rep.r << '\n';
    mach << "helpers_floor = " << rep.m_nodes - rep.r << '\n';
    mach << "per_group_counts = " << line_joined(rep.measured_per_group) << '\n';
    mach << "min_field_order = " << sc.min_field_order << '\n';
    mach << "field_order = " << sc.field_order << '\n';
    mach << "field_ok = " << (sc.field_ok ? 1 : 0) << '\n';
    mach << "l_blocks = " << p.N << '\n';
    mach << "l_exponent_base3 = " << sc.l_exponent << '\n';
    mach << "log_m_coeff = " << sc.log_m_coeff << '\n';
    mach << "ratio_identity_ok = " << (sc.ratio_identity_ok ? 1 : 0) << '\n';
    write_file_atomic(dir / "report.txt", to_bytes(mach.str()));

    human << "repair of nodes " << tf.node1 << " and " << tf.node2 << ": "
          << blocks_distinct << " distinct-symbol blocks, " << blocks_equal
          << " equal-symbol blocks\n";
    human << "downloaded " << tf.transcript.total() << " symbols from "
          << rep.helpers_p << " helpers (floor " << rep.m_nodes - rep.r << ")\n";
    human << std::fixed << std::setprecision(4);
    human << "bandwidth " << rep.rb_total.str() << " blocks of l (closed form "
          << rep.rb_closed_form.str() << ", optimum " << rep.rb_optimal.str() << ")\n";
    human << "eps measured " << rep.eps_measured.str() << " (~"
          << rep.eps_measured.approx() << "), bound " << rep.eps_bound.str() << " (~"
          << rep.eps_bound.approx() << "): "
          << (rep.bound_ok ? "within bound" : "EXCEEDS BOUND") << '\n';
    human << "per-group counts " << (rep.counts_match ? "match" : "DO NOT match")
          << " the closed forms\n";
    human << "field order " << sc.field_order << " vs minimum " << sc.min_field_order
          << (sc.field_ok ? ": ok" : ": TOO SMALL") << '\n';
    return rep;
}

}  // namespace emscr
