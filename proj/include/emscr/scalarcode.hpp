#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "emscr/field.hpp"
#include "emscr/rational.hpp"

namespace emscr {

// One outer codeword: its symbols name inner-code nodes, so they live in
// [1, q] (field value plus one).  The message is the coefficient vector of
// the evaluated polynomial, constant term first.
struct OuterCodeword {
    std::vector<std::uint32_t> symbols;
    std::vector<Fe> message;

    bool operator==(const OuterCodeword& o) const { return symbols == o.symbols; }
};

// Reed-Solomon code over F_q, evaluation points 0..N-1, dimension K.
// Enumerates all M = q^K codewords by message rank.
struct ScalarCodeSpec {
    Field fq;
    std::uint32_t N = 0;
    std::uint32_t K = 0;
    std::uint32_t D = 0;     // N - K + 1
    std::uint64_t M = 0;     // q^K
    std::vector<Fe> eval_points;

    Rat delta() const { return Rat(D, N); }
};

// Requires N <= q and 1 <= K <= N.
ScalarCodeSpec build_rs(const Field& fq, std::uint32_t N, std::uint32_t K);

// Codeword `index` (1-based).  Messages are ordered lexicographically with
// the constant coefficient as the most significant digit, so index 1 is the
// zero message and its symbols are all 1.
OuterCodeword codeword(const ScalarCodeSpec& spec, std::uint64_t index);

// Inverse of `codeword` on the message.
std::uint64_t codeword_index(const ScalarCodeSpec& spec, std::span<const Fe> message);

// A codeword with no zero evaluation anywhere: the constant-one polynomial.
OuterCodeword full_weight_codeword(const ScalarCodeSpec& spec);

// A third codeword differing from a1 in every position and distinct from a2:
// a1 plus the smallest nonzero multiple of the full-weight codeword that
// misses a2.
OuterCodeword companion(const ScalarCodeSpec& spec, const OuterCodeword& a1,
                        const OuterCodeword& a2);

}  // namespace emscr
