#include "emscr/field.hpp"

#include <algorithm>
#include <string>

namespace emscr {

namespace {

constexpr std::uint64_t kMaxOrder = 1ull << 32;

bool is_prime(std::uint64_t p) {
    if (p < 2) {
        return false;
    }
    for (std::uint64_t d = 2; d * d <= p; ++d) {
        if (p % d == 0) {
            return false;
        }
    }
    return true;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) {
                n /= d;
            }
        }
    }
    if (n > 1) {
        out.push_back(n);
    }
    return out;
}

unsigned degree_of(std::uint64_t mask) {
    unsigned d = 0;
    while (mask >> (d + 1)) {
        ++d;
    }
    return d;
}

std::string hex_string(std::uint64_t m) {
    const char* hex = "0123456789abcdef";
    std::string s;
    do {
        s.insert(s.begin(), hex[m & 15]);
        m >>= 4;
    } while (m);
    return s;
}

// Product of two GF(2)[x] polynomials given as bit masks.
std::uint64_t poly_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t r = 0;
    while (b) {
        if (b & 1) {
            r ^= a;
        }
        a <<= 1;
        b >>= 1;
    }
    return r;
}

// Remainder of a modulo m in GF(2)[x].
std::uint64_t poly_mod(std::uint64_t a, std::uint64_t m) {
    unsigned dm = degree_of(m);
    while (a >> dm) {
        unsigned da = degree_of(a);
        a ^= m << (da - dm);
    }
    return a;
}

std::uint64_t poly_mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return poly_mod(poly_mul(a, b), m);
}

// x^(2^e) mod m by iterated squaring.
std::uint64_t poly_x_pow_pow2(unsigned e, std::uint64_t m) {
    std::uint64_t r = 2;  // the polynomial x
    for (unsigned i = 0; i < e; ++i) {
        r = poly_mulmod(r, r, m);
    }
    return r;
}

std::uint64_t poly_gcd(std::uint64_t a, std::uint64_t b) {
    while (b) {
        std::uint64_t t = poly_mod(a, b);
        a = b;
        b = t;
    }
    return a;
}

// Rabin's irreducibility test over GF(2): f of degree d is irreducible iff
// x^(2^d) == x (mod f) and gcd(x^(2^(d/p)) - x, f) == 1 for every prime p | d.
bool poly_irreducible(std::uint64_t mask) {
    unsigned d = degree_of(mask);
    if (d == 0) {
        return false;
    }
    if (poly_x_pow_pow2(d, mask) != 2) {
        return false;
    }
    for (std::uint64_t p : prime_factors(d)) {
        std::uint64_t h = poly_x_pow_pow2(d / static_cast<unsigned>(p), mask) ^ 2u;
        if (poly_gcd(mask, h) != 1) {
            return false;
        }
    }
    return true;
}

}  // namespace

Fe Field::element(std::uint64_t v) const {
    if (v >= order_) {
        throw ConstructionError("element " + std::to_string(v) +
                                " out of range for field of order " + std::to_string(order_));
    }
    return {v};
}

Fe Field::add(Fe a, Fe b) const {
    if (binary()) {
        return {a.v ^ b.v};
    }
    std::uint64_t s = a.v + b.v;
    if (s >= prime_) {
        s -= prime_;
    }
    return {s};
}

Fe Field::neg(Fe a) const {
    if (binary() || a.v == 0) {
        return a;
    }
    return {prime_ - a.v};
}

Fe Field::sub(Fe a, Fe b) const { return add(a, neg(b)); }

Fe Field::mul(Fe a, Fe b) const {
    if (binary()) {
        return {poly_mulmod(a.v, b.v, poly_)};
    }
    return {static_cast<std::uint64_t>(static_cast<unsigned __int128>(a.v) * b.v % prime_)};
}

Fe Field::pow(Fe a, std::uint64_t e) const {
    Fe r = one();
    Fe base = a;
    while (e) {
        if (e & 1) {
            r = mul(r, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

Fe Field::inv(Fe a) const {
    if (a.v == 0) {
        throw Error("multiplicative inverse of zero");
    }
    return pow(a, order_ - 2);
}

Field make_field(const FieldSpec& spec) {
    if ((spec.prime == 0) == (spec.poly_mask == 0)) {
        throw ConstructionError("field spec must set exactly one of prime / poly_mask");
    }

    Field f;
    if (spec.prime != 0) {
        if (spec.prime >= kMaxOrder) {
            throw ConstructionError("prime modulus exceeds the supported 2^32 cap");
        }
        if (!is_prime(spec.prime)) {
            throw NotPrimeError("modulus " + std::to_string(spec.prime) + " is not prime");
        }
        f.prime_ = spec.prime;
        f.order_ = spec.prime;
    } else {
        unsigned d = degree_of(spec.poly_mask);
        if (d < 1 || d > 32) {
            throw ConstructionError("binary polynomial degree must be in [1, 32]");
        }
        if (!poly_irreducible(spec.poly_mask)) {
            throw ReduciblePolynomialError("polynomial mask 0x" + hex_string(spec.poly_mask) +
                                           " is reducible over GF(2)");
        }
        f.poly_ = spec.poly_mask;
        f.degree_ = d;
        f.order_ = 1ull << d;
    }

    // Smallest generator of the unit group: ascending candidate search with
    // the order test g^((q-1)/p) != 1 for every prime p dividing q-1.
    std::uint64_t n1 = f.order_ - 1;
    std::vector<std::uint64_t> ps = prime_factors(n1);
    for (std::uint64_t c = 2; c < f.order_; ++c) {
        Fe g{c};
        bool ok = true;
        for (std::uint64_t p : ps) {
            if (f.pow(g, n1 / p) == f.one()) {
                ok = false;
                break;
            }
        }
        if (ok) {
            f.gen_ = g;
            return f;
        }
    }
    throw GeneratorSearchError("no multiplicative generator found for order " +
                               std::to_string(f.order_));
}

bool Subgroup::contains(Fe x) const {
    return std::binary_search(elements.begin(), elements.end(), x);
}

Subgroup subgroup_of_order(const Field& field, std::uint64_t s) {
    std::uint64_t n1 = field.order() - 1;
    if (s == 0 || n1 % s != 0) {
        throw ConstructionError("subgroup order " + std::to_string(s) +
                                " does not divide " + std::to_string(n1));
    }
    Subgroup sg;
    sg.order = s;
    sg.generator = field.pow(field.generator(), n1 / s);
    sg.elements.reserve(s);
    Fe e = field.one();
    for (std::uint64_t i = 0; i < s; ++i) {
        sg.elements.push_back(e);
        e = field.mul(e, sg.generator);
    }
    std::sort(sg.elements.begin(), sg.elements.end());
    if (std::adjacent_find(sg.elements.begin(), sg.elements.end()) != sg.elements.end()) {
        throw ConstructionError("subgroup generator has order below " + std::to_string(s));
    }
    return sg;
}

std::vector<Fe> coset_representatives(const Field& field, const Subgroup& subgroup,
                                      std::uint64_t count) {
    std::uint64_t n1 = field.order() - 1;
    std::uint64_t ncosets = n1 / subgroup.order;
    if (count > ncosets) {
        throw ConstructionError("requested " + std::to_string(count) + " coset representatives, only " +
                                std::to_string(ncosets) + " cosets exist");
    }

    // Walk g^e for e = 0..q-2; elements share a coset exactly when their
    // exponents agree mod (number of cosets).  Keep the smallest member seen.
    std::vector<Fe> smallest(ncosets, Fe{0});
    std::vector<bool> seen(ncosets, false);
    Fe v = field.one();
    for (std::uint64_t e = 0; e < n1; ++e) {
        std::uint64_t cid = e % ncosets;
        if (!seen[cid] || v < smallest[cid]) {
            smallest[cid] = v;
            seen[cid] = true;
        }
        v = field.mul(v, field.generator());
    }
    std::sort(smallest.begin(), smallest.end());
    smallest.resize(count);
    return smallest;
}

}  // namespace emscr
