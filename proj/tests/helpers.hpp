#pragma once

#include <map>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "emscr/emscr.hpp"
#include "emscr/repair.hpp"
#include "emscr/shardstore.hpp"

namespace emscr::testing {

// Reference instance used across the test suite: GF(4096) by x^12+x^3+1,
// eigenvalue subgroup of order 63, inner (7,2), outer RS(7,7,2), M = 49.
inline EmscrParams default_params() {
    Field f = make_field({.poly_mask = 0x1009});
    Subgroup sg = subgroup_of_order(f, 63);
    MscrParams inner = build_mscr(7, 2, f, sg);
    ScalarCodeSpec outer = build_rs(make_field({.prime = 7}), 7, 2);
    return build_emscr(inner, outer);
}

// Fully in-memory cluster over one slice: encodes random messages, keeps
// every node's symbols, and serves repair reads (single symbols or sums).
struct TestCluster {
    const EmscrParams* params = nullptr;
    std::map<NodeCoord, Fe> store;

    TestCluster(const EmscrParams& p, const Slice& slice, std::uint64_t seed)
        : params(&p) {
        const Field& f = p.field();
        std::mt19937_64 rng(seed);
        for (const SliceBlock& sb : slice.blocks) {
            for (BIndex b : slice_block_coords(p.inner.pairs, sb)) {
                std::vector<Fe> message(p.M - p.r());
                for (Fe& m : message) m = Fe{rng() % f.order()};
                std::vector<Fe> column = encode_coord(p, sb.block, b, message);
                for (std::uint32_t i = 1; i <= p.M; ++i)
                    store[{i, sb.block, b}] = column[i - 1];
            }
        }
    }

    Fe at(std::uint32_t node, std::uint32_t block, BIndex b) const {
        auto it = store.find({node, block, b});
        if (it == store.end()) throw std::out_of_range("missing test coordinate");
        return it->second;
    }

    // Serves round-1 requests the way a live helper would.
    HelperRead reader() const {
        return [this](const SymbolRequest& rq) {
            Fe v = at(rq.helper, rq.block, rq.b1);
            if (rq.b2) v = params->field().add(v, at(rq.helper, rq.block, *rq.b2));
            return v;
        };
    }
};

}  // namespace emscr::testing
