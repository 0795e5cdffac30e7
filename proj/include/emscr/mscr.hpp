#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "emscr/field.hpp"
#include "emscr/indexspace.hpp"

namespace emscr {

// Inner (n, k) vector code for two-node cooperative repair: d = k+1 helpers,
// l = 3^(n(n-1)/2) coordinates per node.  Coordinate b of node i enters the
// r = n-k parity equations with evaluation point lambda(i, f_parity(i, b)).
struct MscrParams {
    std::uint32_t n = 0;
    std::uint32_t k = 0;
    std::uint32_t r = 0;
    PairMap pairs;
    Field field;
    Subgroup subgroup;
    std::vector<Fe> lambda;  // 2n eigenvalues, laid out node-major

    Fe lambda_at(std::uint32_t i, std::uint32_t u) const;
};

// Eigenvalues are the first 2n subgroup elements in canonical (ascending)
// order.  Requires n > k >= 1, r >= 2 and a subgroup of size >= 2n.
MscrParams build_mscr(std::uint32_t n, std::uint32_t k, const Field& field,
                      const Subgroup& subgroup);

// Per-node symbols of one coordinate, index i-1.
using CoordVector = std::vector<Fe>;

// The r powers of node i's evaluation point at coordinate b.
std::vector<Fe> coord_column(const MscrParams& p, std::uint32_t i, BIndex b);

// Systematic encode of one coordinate: message feeds nodes 1..k, the last r
// symbols solve the parity equations.
CoordVector encode_coord(const MscrParams& p, BIndex b, std::span<const Fe> message);

// All r parity sums vanish.
bool validate_coord(const MscrParams& p, BIndex b, const CoordVector& symbols);

// Recovers up to r erased node symbols of one coordinate from the others.
// `known` must cover exactly the complement of `erased`.
std::map<std::uint32_t, Fe> erasure_decode_coord(const MscrParams& p, BIndex b,
                                                 const std::map<std::uint32_t, Fe>& known,
                                                 const std::vector<std::uint32_t>& erased);

}  // namespace emscr
