#include "emscr/linalg.hpp"

#include <string>

namespace emscr {

std::vector<Fe> solve_square(const Field& f, FMatrix a, std::vector<Fe> rhs) {
    std::size_t n = a.rows();
    if (a.cols() != n || rhs.size() != n) {
        throw Error("solve_square needs a square system, got " + std::to_string(a.rows()) +
                    "x" + std::to_string(a.cols()) + " with rhs " + std::to_string(rhs.size()));
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && a.at(pivot, col) == f.zero()) {
            ++pivot;
        }
        if (pivot == n) {
            throw SingularMatrixError("singular system at column " + std::to_string(col));
        }
        if (pivot != col) {
            for (std::size_t c = 0; c < n; ++c) {
                std::swap(a.at(pivot, c), a.at(col, c));
            }
            std::swap(rhs[pivot], rhs[col]);
        }
        Fe pinv = f.inv(a.at(col, col));
        for (std::size_t c = col; c < n; ++c) {
            a.at(col, c) = f.mul(a.at(col, c), pinv);
        }
        rhs[col] = f.mul(rhs[col], pinv);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a.at(r, col) == f.zero()) {
                continue;
            }
            Fe factor = a.at(r, col);
            for (std::size_t c = col; c < n; ++c) {
                a.at(r, c) = f.sub(a.at(r, c), f.mul(factor, a.at(col, c)));
            }
            rhs[r] = f.sub(rhs[r], f.mul(factor, rhs[col]));
        }
    }
    return rhs;
}

std::size_t rank(const Field& f, FMatrix a) {
    std::size_t r = 0;
    for (std::size_t col = 0; col < a.cols() && r < a.rows(); ++col) {
        std::size_t pivot = r;
        while (pivot < a.rows() && a.at(pivot, col) == f.zero()) {
            ++pivot;
        }
        if (pivot == a.rows()) {
            continue;
        }
        if (pivot != r) {
            for (std::size_t c = 0; c < a.cols(); ++c) {
                std::swap(a.at(pivot, c), a.at(r, c));
            }
        }
        Fe pinv = f.inv(a.at(r, col));
        for (std::size_t row = r + 1; row < a.rows(); ++row) {
            if (a.at(row, col) == f.zero()) {
                continue;
            }
            Fe factor = f.mul(a.at(row, col), pinv);
            for (std::size_t c = col; c < a.cols(); ++c) {
                a.at(row, c) = f.sub(a.at(row, c), f.mul(factor, a.at(r, c)));
            }
        }
        ++r;
    }
    return r;
}

bool invertible(const Field& f, const FMatrix& a) {
    return a.rows() == a.cols() && rank(f, a) == a.rows();
}

std::vector<Fe> mat_vec(const Field& f, const FMatrix& a, std::span<const Fe> x) {
    if (x.size() != a.cols()) {
        throw Error("mat_vec dimension mismatch");
    }
    std::vector<Fe> out(a.rows(), f.zero());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        Fe acc = f.zero();
        for (std::size_t c = 0; c < a.cols(); ++c) {
            acc = f.add(acc, f.mul(a.at(r, c), x[c]));
        }
        out[r] = acc;
    }
    return out;
}

FMatrix vandermonde(const Field& f, std::span<const Fe> points, std::size_t rows) {
    FMatrix m(rows, points.size());
    for (std::size_t c = 0; c < points.size(); ++c) {
        Fe p = f.one();
        for (std::size_t r = 0; r < rows; ++r) {
            m.at(r, c) = p;
            p = f.mul(p, points[c]);
        }
    }
    return m;
}

}  // namespace emscr
