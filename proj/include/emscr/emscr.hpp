#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "emscr/mscr.hpp"
#include "emscr/scalarcode.hpp"

namespace emscr {

// Concatenated code: M = q^K nodes, one per outer codeword, each storing
// N blocks of 3^m coordinates.  Node i enters the parity equations of
// coordinate (j, b) with evaluation point sigma_i * lambda(a_ij, f(a_ij, b)),
// where a_i is the outer codeword of node i and the sigma_i lie in pairwise
// distinct cosets of the eigenvalue subgroup.
struct EmscrParams {
    MscrParams inner;
    ScalarCodeSpec outer;
    std::uint64_t M = 0;
    std::uint32_t N = 0;
    std::vector<Fe> sigma;                  // index i-1
    std::vector<OuterCodeword> codewords;   // index i-1

    std::uint32_t r() const { return inner.r; }
    const Field& field() const { return inner.field; }

    // Outer symbol a_ij of node i at block j (both 1-based).
    std::uint32_t symbol(std::uint32_t i, std::uint32_t j) const;
    Fe sigma_of(std::uint32_t i) const;
    Fe eval_point(std::uint32_t i, std::uint32_t j, BIndex b) const;
};

// One stored symbol's address.
struct NodeCoord {
    std::uint32_t node = 0;
    std::uint32_t block = 0;
    BIndex b;

    friend bool operator<(const NodeCoord& x, const NodeCoord& y) {
        if (x.node != y.node) return x.node < y.node;
        if (x.block != y.block) return x.block < y.block;
        return x.b < y.b;
    }
    friend bool operator==(const NodeCoord&, const NodeCoord&) = default;
};

// Requires inner.n == outer alphabet size, r >= 5, and enough subgroup
// cosets to give every node its own sigma.
EmscrParams build_emscr(const MscrParams& inner, const ScalarCodeSpec& outer);

// The r powers of node i's evaluation point at (j, b).
std::vector<Fe> node_column(const EmscrParams& p, std::uint32_t i, std::uint32_t j, BIndex b);

// Systematic encode of one coordinate: message of M-r symbols feeds nodes
// 1..M-r, the last r symbols solve the parity equations.
std::vector<Fe> encode_coord(const EmscrParams& p, std::uint32_t j, BIndex b,
                             std::span<const Fe> message);

// All r parity sums vanish over the full M-node coordinate.
bool validate_coord(const EmscrParams& p, std::uint32_t j, BIndex b,
                    std::span<const Fe> symbols);

// Recovers up to r erased node symbols of one coordinate.
std::map<std::uint32_t, Fe> erasure_decode_coord(const EmscrParams& p, std::uint32_t j,
                                                 BIndex b,
                                                 const std::map<std::uint32_t, Fe>& known,
                                                 const std::vector<std::uint32_t>& erased);

// Invertibility of the r x r solve matrix for an erased set A of size r.
bool mds_rank_check(const EmscrParams& p, const std::vector<std::uint32_t>& a_set,
                    std::uint32_t j, BIndex b);

}  // namespace emscr
