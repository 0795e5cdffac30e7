#include "emscr/emscr.hpp"

#include <set>
#include <string>

#include "emscr/linalg.hpp"

namespace emscr {

std::uint32_t EmscrParams::symbol(std::uint32_t i, std::uint32_t j) const {
    if (i < 1 || i > M || j < 1 || j > N) {
        throw Error("node/block (" + std::to_string(i) + ", " + std::to_string(j) +
                    ") out of range");
    }
    return codewords[i - 1].symbols[j - 1];
}

Fe EmscrParams::sigma_of(std::uint32_t i) const {
    if (i < 1 || i > M) {
        throw Error("node " + std::to_string(i) + " out of range");
    }
    return sigma[i - 1];
}

Fe EmscrParams::eval_point(std::uint32_t i, std::uint32_t j, BIndex b) const {
    std::uint32_t a = symbol(i, j);
    Fe lam = inner.lambda_at(a, f_parity(inner.pairs, a, b));
    return inner.field.mul(sigma_of(i), lam);
}

EmscrParams build_emscr(const MscrParams& inner, const ScalarCodeSpec& outer) {
    if (inner.n != outer.fq.order()) {
        throw ConstructionError("inner length " + std::to_string(inner.n) +
                                " must equal the outer alphabet size " +
                                std::to_string(outer.fq.order()));
    }
    if (inner.r < 5) {
        throw ConstructionError("two-node repair needs redundancy r >= 5, got r = " +
                                std::to_string(inner.r));
    }
    if (inner.subgroup.order < 2ull * inner.n) {
        throw ConstructionError("subgroup too small for 2n distinct eigenvalues");
    }

    EmscrParams p;
    p.inner = inner;
    p.outer = outer;
    p.M = outer.M;
    p.N = outer.N;
    p.sigma = coset_representatives(inner.field, inner.subgroup, outer.M);
    p.codewords.reserve(outer.M);
    for (std::uint64_t i = 1; i <= outer.M; ++i) {
        p.codewords.push_back(codeword(outer, i));
    }
    return p;
}

std::vector<Fe> node_column(const EmscrParams& p, std::uint32_t i, std::uint32_t j, BIndex b) {
    Fe x = p.eval_point(i, j, b);
    std::vector<Fe> col(p.r());
    Fe pw = p.field().one();
    for (std::uint32_t t = 0; t < p.r(); ++t) {
        col[t] = pw;
        pw = p.field().mul(pw, x);
    }
    return col;
}

std::vector<Fe> encode_coord(const EmscrParams& p, std::uint32_t j, BIndex b,
                             std::span<const Fe> message) {
    std::uint64_t sys = p.M - p.r();
    if (message.size() != sys) {
        throw Error("message for one coordinate needs " + std::to_string(sys) + " symbols");
    }
    const Field& f = p.field();

    std::vector<Fe> out(p.M, f.zero());
    std::vector<Fe> rhs(p.r(), f.zero());
    for (std::uint64_t i = 0; i < sys; ++i) {
        out[i] = message[i];
        Fe x = p.eval_point(static_cast<std::uint32_t>(i + 1), j, b);
        Fe pw = f.one();
        for (std::uint32_t t = 0; t < p.r(); ++t) {
            rhs[t] = f.sub(rhs[t], f.mul(pw, message[i]));
            pw = f.mul(pw, x);
        }
    }

    std::vector<Fe> pts(p.r());
    for (std::uint32_t t = 0; t < p.r(); ++t) {
        pts[t] = p.eval_point(static_cast<std::uint32_t>(sys + 1 + t), j, b);
    }
    std::vector<Fe> parity = solve_square(f, vandermonde(f, pts, p.r()), rhs);
    for (std::uint32_t t = 0; t < p.r(); ++t) {
        out[sys + t] = parity[t];
    }
    return out;
}

bool validate_coord(const EmscrParams& p, std::uint32_t j, BIndex b,
                    std::span<const Fe> symbols) {
    if (symbols.size() != p.M) {
        throw Error("coordinate vector needs " + std::to_string(p.M) + " symbols");
    }
    const Field& f = p.field();
    std::vector<Fe> acc(p.r(), f.zero());
    for (std::uint64_t i = 0; i < p.M; ++i) {
        Fe x = p.eval_point(static_cast<std::uint32_t>(i + 1), j, b);
        Fe pw = f.one();
        for (std::uint32_t t = 0; t < p.r(); ++t) {
            acc[t] = f.add(acc[t], f.mul(pw, symbols[i]));
            pw = f.mul(pw, x);
        }
    }
    for (Fe a : acc) {
        if (a != f.zero()) {
            return false;
        }
    }
    return true;
}

std::map<std::uint32_t, Fe> erasure_decode_coord(const EmscrParams& p, std::uint32_t j,
                                                 BIndex b,
                                                 const std::map<std::uint32_t, Fe>& known,
                                                 const std::vector<std::uint32_t>& erased) {
    if (erased.size() > p.r()) {
        throw Error("cannot decode " + std::to_string(erased.size()) +
                    " erasures with redundancy " + std::to_string(p.r()));
    }
    std::set<std::uint32_t> erased_set(erased.begin(), erased.end());
    if (erased_set.size() != erased.size()) {
        throw Error("duplicate node in erased set");
    }
    if (known.size() + erased_set.size() != p.M) {
        throw Error("known and erased sets must partition the nodes");
    }
    for (std::uint32_t i : erased_set) {
        if (i < 1 || i > p.M) {
            throw Error("erased node " + std::to_string(i) + " out of range");
        }
        if (known.count(i)) {
            throw Error("node " + std::to_string(i) + " is both known and erased");
        }
    }

    const Field& f = p.field();
    std::size_t e = erased.size();
    std::vector<Fe> rhs(e, f.zero());
    for (auto& [i, c] : known) {
        Fe x = p.eval_point(i, j, b);
        Fe pw = f.one();
        for (std::size_t t = 0; t < e; ++t) {
            rhs[t] = f.sub(rhs[t], f.mul(pw, c));
            pw = f.mul(pw, x);
        }
    }

    std::vector<Fe> pts;
    pts.reserve(e);
    for (std::uint32_t i : erased_set) {
        pts.push_back(p.eval_point(i, j, b));
    }
    std::vector<Fe> sol = solve_square(f, vandermonde(f, pts, e), rhs);

    std::map<std::uint32_t, Fe> out;
    std::size_t idx = 0;
    for (std::uint32_t i : erased_set) {
        out[i] = sol[idx++];
    }
    return out;
}

bool mds_rank_check(const EmscrParams& p, const std::vector<std::uint32_t>& a_set,
                    std::uint32_t j, BIndex b) {
    if (a_set.size() != p.r()) {
        throw Error("rank check needs an erased set of exactly r nodes");
    }
    std::vector<Fe> pts;
    pts.reserve(a_set.size());
    for (std::uint32_t i : a_set) {
        pts.push_back(p.eval_point(i, j, b));
    }
    return invertible(p.field(), vandermonde(p.field(), pts, p.r()));
}

}  // namespace emscr
