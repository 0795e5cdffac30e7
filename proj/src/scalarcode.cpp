#include "emscr/scalarcode.hpp"

#include <string>

namespace emscr {

namespace {

constexpr std::uint64_t kMaxCodewords = 1ull << 20;

std::vector<std::uint32_t> evaluate(const ScalarCodeSpec& spec, std::span<const Fe> message) {
    std::vector<std::uint32_t> symbols(spec.N);
    for (std::uint32_t j = 0; j < spec.N; ++j) {
        // Horner, highest coefficient first
        Fe acc = spec.fq.zero();
        for (std::uint32_t t = spec.K; t-- > 0;) {
            acc = spec.fq.add(spec.fq.mul(acc, spec.eval_points[j]), message[t]);
        }
        symbols[j] = static_cast<std::uint32_t>(acc.v) + 1;
    }
    return symbols;
}

}  // namespace

ScalarCodeSpec build_rs(const Field& fq, std::uint32_t N, std::uint32_t K) {
    if (N > fq.order()) {
        throw ConstructionError("outer length " + std::to_string(N) +
                                " exceeds the alphabet size " + std::to_string(fq.order()));
    }
    if (K < 1 || K > N) {
        throw ConstructionError("outer dimension must lie in [1, N]");
    }

    ScalarCodeSpec spec;
    spec.fq = fq;
    spec.N = N;
    spec.K = K;
    spec.D = N - K + 1;
    spec.M = 1;
    for (std::uint32_t t = 0; t < K; ++t) {
        spec.M *= fq.order();
        if (spec.M > kMaxCodewords) {
            throw ConstructionError("codebook q^K too large to enumerate");
        }
    }
    spec.eval_points.reserve(N);
    for (std::uint32_t j = 0; j < N; ++j) {
        spec.eval_points.push_back(Fe{j});
    }
    return spec;
}

OuterCodeword codeword(const ScalarCodeSpec& spec, std::uint64_t index) {
    if (index < 1 || index > spec.M) {
        throw Error("codeword index " + std::to_string(index) + " outside [1, " +
                    std::to_string(spec.M) + "]");
    }
    std::uint64_t rank = index - 1;
    OuterCodeword cw;
    cw.message.assign(spec.K, spec.fq.zero());
    for (std::uint32_t t = spec.K; t-- > 0;) {
        cw.message[t] = Fe{rank % spec.fq.order()};
        rank /= spec.fq.order();
    }
    cw.symbols = evaluate(spec, cw.message);
    return cw;
}

std::uint64_t codeword_index(const ScalarCodeSpec& spec, std::span<const Fe> message) {
    if (message.size() != spec.K) {
        throw Error("message needs " + std::to_string(spec.K) + " symbols");
    }
    std::uint64_t rank = 0;
    for (std::uint32_t t = 0; t < spec.K; ++t) {
        rank = rank * spec.fq.order() + message[t].v;
    }
    return rank + 1;
}

OuterCodeword full_weight_codeword(const ScalarCodeSpec& spec) {
    OuterCodeword cw;
    cw.message.assign(spec.K, spec.fq.zero());
    cw.message[0] = spec.fq.one();
    cw.symbols = evaluate(spec, cw.message);
    return cw;
}

OuterCodeword companion(const ScalarCodeSpec& spec, const OuterCodeword& a1,
                        const OuterCodeword& a2) {
    if (a1 == a2) {
        throw Error("companion needs two distinct codewords");
    }
    OuterCodeword w = full_weight_codeword(spec);
    for (std::uint64_t c = 1; c < spec.fq.order(); ++c) {
        OuterCodeword a3;
        a3.message.resize(spec.K);
        for (std::uint32_t t = 0; t < spec.K; ++t) {
            a3.message[t] = spec.fq.add(a1.message[t], spec.fq.mul(Fe{c}, w.message[t]));
        }
        a3.symbols = evaluate(spec, a3.message);
        if (a3 == a2) {
            continue;
        }
        for (std::uint32_t j = 0; j < spec.N; ++j) {
            if (a3.symbols[j] == a1.symbols[j]) {
                throw Error("companion construction lost full weight");  // unreachable
            }
        }
        return a3;
    }
    throw Error("no companion codeword exists for this alphabet");
}

}  // namespace emscr
