#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "emscr/field.hpp"

namespace emscr {

// Dense row-major matrix over a finite field.
class FMatrix {
public:
    FMatrix() = default;
    FMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Fe& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const Fe& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Fe> data_;
};

// Solves A x = rhs for square A by partial-pivot elimination.
// Throws SingularMatrixError when no pivot can be found.
std::vector<Fe> solve_square(const Field& f, FMatrix a, std::vector<Fe> rhs);

// Rank of the matrix by elimination.
std::size_t rank(const Field& f, FMatrix a);

bool invertible(const Field& f, const FMatrix& a);

std::vector<Fe> mat_vec(const Field& f, const FMatrix& a, std::span<const Fe> x);

// Vandermonde matrix [points[c]^r] with `rows` power rows.
FMatrix vandermonde(const Field& f, std::span<const Fe> points, std::size_t rows);

}  // namespace emscr
