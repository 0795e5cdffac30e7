#include "emscr/indexspace.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <string>

namespace emscr {

namespace {

constexpr std::uint32_t kMaxDigits = 62;  // 3^62 < 2^128

void check_pos(const PairMap& pm, std::uint32_t pos) {
    if (pos < 1 || pos > pm.m) {
        throw Error("digit position " + std::to_string(pos) + " outside [1, " +
                    std::to_string(pm.m) + "]");
    }
    if (pm.m > kMaxDigits) {
        throw Error("index space with " + std::to_string(pm.m) +
                    " digits cannot be materialized in 128 bits");
    }
}

uint128 upow3(std::uint32_t e) {
    uint128 r = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
        r *= 3;
    }
    return r;
}

}  // namespace

PairMap make_pair_map(std::uint32_t n) {
    if (n < 2 || n > 64) {
        throw ConstructionError("pair map needs n in [2, 64], got " + std::to_string(n));
    }
    return {n, n * (n - 1) / 2};
}

std::uint32_t pair_index(const PairMap& pm, std::uint32_t i1, std::uint32_t i2) {
    if (!(1 <= i1 && i1 < i2 && i2 <= pm.n)) {
        throw Error("pair (" + std::to_string(i1) + ", " + std::to_string(i2) +
                    ") is not ordered within [1, " + std::to_string(pm.n) + "]");
    }
    return (i2 - 1) * (i2 - 2) / 2 + i1;
}

std::uint32_t digit(const PairMap& pm, BIndex b, std::uint32_t pos) {
    check_pos(pm, pos);
    return static_cast<std::uint32_t>(b.value / upow3(pos - 1) % 3);
}

BIndex with_digit(const PairMap& pm, BIndex b, std::uint32_t pos, std::uint32_t d) {
    check_pos(pm, pos);
    if (d > 2) {
        throw Error("trit value " + std::to_string(d) + " outside [0, 2]");
    }
    uint128 p = upow3(pos - 1);
    std::uint32_t old = static_cast<std::uint32_t>(b.value / p % 3);
    return {b.value - static_cast<uint128>(old) * p + static_cast<uint128>(d) * p};
}

std::uint32_t f_parity(const PairMap& pm, std::uint32_t i, BIndex b) {
    if (i < 1 || i > pm.n) {
        throw Error("node index " + std::to_string(i) + " outside [1, " +
                    std::to_string(pm.n) + "]");
    }
    std::uint32_t count = 0;
    for (std::uint32_t j = 1; j < i; ++j) {
        count += digit(pm, b, pair_index(pm, j, i)) == 2;
    }
    for (std::uint32_t j = i + 1; j <= pm.n; ++j) {
        count += digit(pm, b, pair_index(pm, i, j)) == 1;
    }
    return count & 1;
}

std::vector<BIndex> group_bases(const PairMap& pm, std::uint32_t g_pos,
                                std::uint64_t budget, std::uint64_t seed) {
    check_pos(pm, g_pos);
    if (budget == 0) {
        throw Error("group base budget must be positive");
    }

    std::vector<std::uint32_t> other;
    for (std::uint32_t p = 1; p <= pm.m; ++p) {
        if (p != g_pos) {
            other.push_back(p);
        }
    }

    // Exhaustive when the whole base set fits the budget.
    if (pm.m - 1 <= 40) {
        uint128 total = upow3(pm.m - 1);
        if (total <= budget) {
            std::vector<BIndex> all;
            all.reserve(static_cast<std::size_t>(total));
            for (uint128 c = 0; c < total; ++c) {
                uint128 rest = c;
                BIndex b{0};
                for (std::uint32_t p : other) {
                    b = with_digit(pm, b, p, static_cast<std::uint32_t>(rest % 3));
                    rest /= 3;
                }
                all.push_back(b);
            }
            std::sort(all.begin(), all.end());
            return all;
        }
    }

    std::mt19937_64 rng(seed);
    std::set<BIndex> picked;
    while (picked.size() < budget) {
        BIndex b{0};
        for (std::uint32_t p : other) {
            b = with_digit(pm, b, p, static_cast<std::uint32_t>(rng() % 3));
        }
        picked.insert(b);
    }
    return {picked.begin(), picked.end()};
}

}  // namespace emscr
