#pragma once

#include <cstdint>
#include <vector>

#include "emscr/errors.hpp"

namespace emscr {

// Element of a finite field, stored as its integer representative:
// a residue for prime fields, a polynomial bit string for GF(2^d).
struct Fe {
    std::uint64_t v = 0;

    friend constexpr bool operator==(Fe, Fe) = default;
    friend constexpr auto operator<=>(Fe, Fe) = default;
};

// Field description: exactly one of `prime` / `poly_mask` must be nonzero.
// `poly_mask` holds the coefficients of a binary irreducible polynomial,
// leading term included, so the degree is the position of the top bit.
struct FieldSpec {
    std::uint64_t prime = 0;
    std::uint64_t poly_mask = 0;
};

// Arithmetic in GF(p) or GF(2^d).  Immutable and cheap to copy; no tables.
// Default-constructed fields are empty placeholders; build via make_field.
class Field {
public:
    Field() = default;

    std::uint64_t order() const { return order_; }
    bool binary() const { return poly_ != 0; }
    std::uint64_t poly_mask() const { return poly_; }
    Fe generator() const { return gen_; }

    Fe zero() const { return {0}; }
    Fe one() const { return {1}; }

    // Range-checked element constructor.
    Fe element(std::uint64_t v) const;

    Fe add(Fe a, Fe b) const;
    Fe sub(Fe a, Fe b) const;
    Fe neg(Fe a) const;
    Fe mul(Fe a, Fe b) const;
    Fe inv(Fe a) const;
    Fe pow(Fe a, std::uint64_t e) const;

    bool operator==(const Field& o) const {
        return order_ == o.order_ && poly_ == o.poly_;
    }

private:
    friend Field make_field(const FieldSpec&);

    std::uint64_t order_ = 0;
    std::uint64_t prime_ = 0;   // nonzero for prime fields
    std::uint64_t poly_ = 0;    // nonzero for binary fields
    unsigned degree_ = 0;
    Fe gen_;
};

// Builds the field and finds its smallest multiplicative generator.
// Rejects composite moduli (NotPrimeError), reducible polynomials
// (ReduciblePolynomialError) and malformed specs (ConstructionError).
Field make_field(const FieldSpec& spec);

// Multiplicative subgroup of a given order with its elements materialized.
struct Subgroup {
    std::uint64_t order = 0;
    Fe generator;
    std::vector<Fe> elements;   // ascending by integer representative

    bool contains(Fe x) const;
};

// The unique subgroup of order s of the cyclic group of the field's units.
// s must divide order-1.
Subgroup subgroup_of_order(const Field& field, std::uint64_t s);

// `count` elements lying pairwise in distinct cosets of the subgroup.
// Deterministic: each coset is tagged by its smallest integer representative
// and cosets are taken in ascending order of that tag.
std::vector<Fe> coset_representatives(const Field& field, const Subgroup& subgroup,
                                      std::uint64_t count);

}  // namespace emscr
