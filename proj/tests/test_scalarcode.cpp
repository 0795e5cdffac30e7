#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "emscr/scalarcode.hpp"

using namespace emscr;

namespace {

ScalarCodeSpec rs772() {
    return build_rs(make_field({.prime = 7}), 7, 2);
}

std::uint32_t distance(const OuterCodeword& a, const OuterCodeword& b) {
    std::uint32_t d = 0;
    for (std::size_t j = 0; j < a.symbols.size(); ++j) {
        d += a.symbols[j] != b.symbols[j];
    }
    return d;
}

}  // namespace

TEST_CASE("build_rs basics") {
    ScalarCodeSpec spec = rs772();
    CHECK(spec.M == 49);
    CHECK(spec.D == 6);
    CHECK(spec.delta() == Rat(6, 7));
    REQUIRE(spec.eval_points.size() == 7);
    CHECK(spec.eval_points[0] == Fe{0});
    CHECK(spec.eval_points[6] == Fe{6});

    ScalarCodeSpec rep = build_rs(make_field({.prime = 7}), 7, 7);
    CHECK(rep.D == 1);
    CHECK(rep.M == 823543);
}

TEST_CASE("build_rs rejects bad shapes") {
    Field f7 = make_field({.prime = 7});
    CHECK_THROWS_AS(build_rs(f7, 8, 2), ConstructionError);
    CHECK_THROWS_AS(build_rs(f7, 7, 0), ConstructionError);
    CHECK_THROWS_AS(build_rs(f7, 7, 8), ConstructionError);
}

TEST_CASE("codeword 1 is the zero polynomial") {
    ScalarCodeSpec spec = rs772();
    OuterCodeword cw = codeword(spec, 1);
    for (std::uint32_t s : cw.symbols) {
        CHECK(s == 1);
    }
    for (Fe m : cw.message) {
        CHECK(m == Fe{0});
    }
}

TEST_CASE("codeword indexing round-trips and symbols stay in range") {
    ScalarCodeSpec spec = rs772();
    std::set<std::vector<std::uint32_t>> seen;
    for (std::uint64_t i = 1; i <= spec.M; ++i) {
        OuterCodeword cw = codeword(spec, i);
        CHECK(codeword_index(spec, cw.message) == i);
        for (std::uint32_t s : cw.symbols) {
            CHECK(s >= 1);
            CHECK(s <= 7);
        }
        seen.insert(cw.symbols);
    }
    CHECK(seen.size() == spec.M);
    CHECK_THROWS_AS(codeword(spec, 0), Error);
    CHECK_THROWS_AS(codeword(spec, 50), Error);
}

TEST_CASE("exhaustive minimum distance equals 6") {
    ScalarCodeSpec spec = rs772();
    std::vector<OuterCodeword> all;
    for (std::uint64_t i = 1; i <= spec.M; ++i) {
        all.push_back(codeword(spec, i));
    }
    std::uint32_t dmin = spec.N;
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = i + 1; j < all.size(); ++j) {
            std::uint32_t d = distance(all[i], all[j]);
            CHECK(d >= 6);
            dmin = std::min(dmin, d);
        }
    }
    CHECK(dmin == 6);
}

TEST_CASE("every symbol value appears q^(K-1) times per position") {
    ScalarCodeSpec spec = rs772();
    for (std::uint32_t j = 0; j < spec.N; ++j) {
        std::vector<std::uint32_t> counts(8, 0);
        for (std::uint64_t i = 1; i <= spec.M; ++i) {
            ++counts[codeword(spec, i).symbols[j]];
        }
        for (std::uint32_t v = 1; v <= 7; ++v) {
            CHECK(counts[v] == 7);
        }
    }
}

TEST_CASE("full-weight codeword avoids node 1 everywhere") {
    ScalarCodeSpec spec = rs772();
    OuterCodeword w = full_weight_codeword(spec);
    for (std::uint32_t s : w.symbols) {
        CHECK(s == 2);  // constant-one polynomial
    }
}

TEST_CASE("companion differs from a1 everywhere and from a2 somewhere") {
    ScalarCodeSpec spec = rs772();
    for (std::uint64_t i1 : {1ull, 5ull, 23ull}) {
        for (std::uint64_t i2 : {2ull, 8ull, 49ull}) {
            if (i1 == i2) continue;
            OuterCodeword a1 = codeword(spec, i1);
            OuterCodeword a2 = codeword(spec, i2);
            OuterCodeword a3 = companion(spec, a1, a2);
            CHECK_FALSE(a3 == a1);
            CHECK_FALSE(a3 == a2);
            for (std::uint32_t j = 0; j < spec.N; ++j) {
                CHECK(a3.symbols[j] != a1.symbols[j]);
            }
            // companion is a codeword: its index reproduces it
            CHECK(codeword(spec, codeword_index(spec, a3.message)) == a3);
        }
    }
}

TEST_CASE("companion skips a2 when a2 sits on the scan line") {
    ScalarCodeSpec spec = rs772();
    OuterCodeword a1 = codeword(spec, 1);
    // a2 = a1 + 1*w, the first scan candidate
    OuterCodeword w = full_weight_codeword(spec);
    std::vector<Fe> m2(w.message);
    std::uint64_t i2 = codeword_index(spec, m2);
    OuterCodeword a2 = codeword(spec, i2);
    OuterCodeword a3 = companion(spec, a1, a2);
    CHECK_FALSE(a3 == a2);
    for (std::uint32_t j = 0; j < spec.N; ++j) {
        CHECK(a3.symbols[j] != a1.symbols[j]);
    }
}

TEST_CASE("companion requires distinct inputs") {
    ScalarCodeSpec spec = rs772();
    OuterCodeword a1 = codeword(spec, 3);
    CHECK_THROWS_AS(companion(spec, a1, a1), Error);
}
