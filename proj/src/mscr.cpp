#include "emscr/mscr.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "emscr/linalg.hpp"

namespace emscr {

Fe MscrParams::lambda_at(std::uint32_t i, std::uint32_t u) const {
    if (i < 1 || i > n || u > 1) {
        throw Error("eigenvalue index (" + std::to_string(i) + ", " + std::to_string(u) +
                    ") out of range");
    }
    return lambda[(i - 1) * 2 + u];
}

MscrParams build_mscr(std::uint32_t n, std::uint32_t k, const Field& field,
                      const Subgroup& subgroup) {
    if (k < 1) {
        throw ConstructionError("inner dimension k must be at least 1");
    }
    if (n <= k) {
        throw ConstructionError("inner length n must exceed k");
    }
    if (n - k < 2) {
        throw ConstructionError("inner redundancy r = n-k must be at least 2");
    }
    if (subgroup.order < 2ull * n) {
        throw ConstructionError("subgroup of order " + std::to_string(subgroup.order) +
                                " cannot supply " + std::to_string(2 * n) +
                                " distinct eigenvalues");
    }

    MscrParams p;
    p.n = n;
    p.k = k;
    p.r = n - k;
    p.pairs = make_pair_map(n);
    p.field = field;
    p.subgroup = subgroup;
    p.lambda.assign(subgroup.elements.begin(), subgroup.elements.begin() + 2 * n);
    return p;
}

std::vector<Fe> coord_column(const MscrParams& p, std::uint32_t i, BIndex b) {
    Fe x = p.lambda_at(i, f_parity(p.pairs, i, b));
    std::vector<Fe> col(p.r);
    Fe pw = p.field.one();
    for (std::uint32_t t = 0; t < p.r; ++t) {
        col[t] = pw;
        pw = p.field.mul(pw, x);
    }
    return col;
}

namespace {

std::vector<Fe> eval_points(const MscrParams& p, BIndex b) {
    std::vector<Fe> xs(p.n);
    for (std::uint32_t i = 1; i <= p.n; ++i) {
        xs[i - 1] = p.lambda_at(i, f_parity(p.pairs, i, b));
    }
    return xs;
}

}  // namespace

CoordVector encode_coord(const MscrParams& p, BIndex b, std::span<const Fe> message) {
    if (message.size() != p.k) {
        throw Error("message for one coordinate needs " + std::to_string(p.k) + " symbols");
    }
    std::vector<Fe> xs = eval_points(p, b);

    CoordVector out(p.n, p.field.zero());
    std::vector<Fe> rhs(p.r, p.field.zero());
    for (std::uint32_t i = 0; i < p.k; ++i) {
        out[i] = message[i];
        Fe pw = p.field.one();
        for (std::uint32_t t = 0; t < p.r; ++t) {
            rhs[t] = p.field.sub(rhs[t], p.field.mul(pw, message[i]));
            pw = p.field.mul(pw, xs[i]);
        }
    }

    std::vector<Fe> parity_points(xs.begin() + p.k, xs.end());
    std::vector<Fe> parity =
        solve_square(p.field, vandermonde(p.field, parity_points, p.r), rhs);
    std::copy(parity.begin(), parity.end(), out.begin() + p.k);
    return out;
}

bool validate_coord(const MscrParams& p, BIndex b, const CoordVector& symbols) {
    if (symbols.size() != p.n) {
        throw Error("coordinate vector needs " + std::to_string(p.n) + " symbols");
    }
    std::vector<Fe> xs = eval_points(p, b);
    for (std::uint32_t t = 0; t < p.r; ++t) {
        Fe acc = p.field.zero();
        for (std::uint32_t i = 0; i < p.n; ++i) {
            acc = p.field.add(acc, p.field.mul(p.field.pow(xs[i], t), symbols[i]));
        }
        if (acc != p.field.zero()) {
            return false;
        }
    }
    return true;
}

std::map<std::uint32_t, Fe> erasure_decode_coord(const MscrParams& p, BIndex b,
                                                 const std::map<std::uint32_t, Fe>& known,
                                                 const std::vector<std::uint32_t>& erased) {
    if (erased.size() > p.r) {
        throw Error("cannot decode " + std::to_string(erased.size()) +
                    " erasures with redundancy " + std::to_string(p.r));
    }
    std::set<std::uint32_t> erased_set(erased.begin(), erased.end());
    if (erased_set.size() != erased.size()) {
        throw Error("duplicate node in erased set");
    }
    for (std::uint32_t i = 1; i <= p.n; ++i) {
        bool have = known.count(i) > 0;
        bool gone = erased_set.count(i) > 0;
        if (have == gone) {
            throw Error("node " + std::to_string(i) +
                        " must be exactly one of known / erased");
        }
    }

    std::vector<Fe> xs = eval_points(p, b);
    std::size_t e = erased.size();

    // Syndromes of the known part over the first |erased| parity rows.
    std::vector<Fe> rhs(e, p.field.zero());
    for (auto& [i, c] : known) {
        Fe pw = p.field.one();
        for (std::size_t t = 0; t < e; ++t) {
            rhs[t] = p.field.sub(rhs[t], p.field.mul(pw, c));
            pw = p.field.mul(pw, xs[i - 1]);
        }
    }

    std::vector<Fe> pts;
    for (std::uint32_t i : erased_set) {
        pts.push_back(xs[i - 1]);
    }
    std::vector<Fe> sol = solve_square(p.field, vandermonde(p.field, pts, e), rhs);

    std::map<std::uint32_t, Fe> out;
    std::size_t idx = 0;
    for (std::uint32_t i : erased_set) {
        out[i] = sol[idx++];
    }
    return out;
}

}  // namespace emscr
