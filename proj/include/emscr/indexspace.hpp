#pragma once

#include <cstdint>
#include <vector>

#include "emscr/errors.hpp"
#include "emscr/rational.hpp"

namespace emscr {

// Index bookkeeping for a length-n inner code: the m = n(n-1)/2 unordered
// node pairs are numbered 1..m, and the per-node vectors carry l = 3^m
// coordinates addressed by m base-3 digits.
struct PairMap {
    std::uint32_t n = 0;
    std::uint32_t m = 0;
};

// n in [2, 64].  Coordinate materialization additionally needs m <= 62 so
// that coordinate values fit 128 bits; pair arithmetic alone has no such cap.
PairMap make_pair_map(std::uint32_t n);

// Position of the pair {i1, i2} (1 <= i1 < i2 <= n): (i2-1)(i2-2)/2 + i1.
std::uint32_t pair_index(const PairMap& pm, std::uint32_t i1, std::uint32_t i2);

// Coordinate index: digit at position p (1-based) is the coefficient of
// 3^(p-1).  Ordered and hashable by its integer value.
struct BIndex {
    uint128 value = 0;

    friend constexpr bool operator==(BIndex, BIndex) = default;
    friend constexpr bool operator<(BIndex a, BIndex b) { return a.value < b.value; }
    friend constexpr bool operator>(BIndex a, BIndex b) { return b < a; }
    friend constexpr bool operator<=(BIndex a, BIndex b) { return !(b < a); }
};

std::uint32_t digit(const PairMap& pm, BIndex b, std::uint32_t pos);
BIndex with_digit(const PairMap& pm, BIndex b, std::uint32_t pos, std::uint32_t d);

// Parity bit steering the eigenvalue choice of node i at coordinate b:
// the parity of  |{j < i : digit(g(j,i)) = 2}| + |{j > i : digit(g(i,j)) = 1}|.
std::uint32_t f_parity(const PairMap& pm, std::uint32_t i, BIndex b);

// `budget` distinct coordinates with digit 0 at position g_pos, sampled
// deterministically from the seed and returned ascending.  When fewer than
// `budget` such coordinates exist, all of them are returned.
std::vector<BIndex> group_bases(const PairMap& pm, std::uint32_t g_pos,
                                std::uint64_t budget, std::uint64_t seed);

}  // namespace emscr
