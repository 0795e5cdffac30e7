#pragma once

#include <cstdint>
#include <string>

namespace emscr {

using int128 = __int128;
using uint128 = unsigned __int128;

std::string to_string(int128 v);
std::string to_string(uint128 v);

// 3^e as an exact 128-bit integer (e <= 80).
int128 ipow3(unsigned e);

// Exact rational on 128-bit integers, always reduced, denominator > 0.
// Wide enough for every bandwidth figure at the supported index sizes.
struct Rat {
    int128 num = 0;
    int128 den = 1;

    Rat() = default;
    Rat(int128 n) : num(n) {}
    Rat(int128 n, int128 d);

    Rat operator+(const Rat& o) const;
    Rat operator-(const Rat& o) const;
    Rat operator*(const Rat& o) const;
    Rat operator/(const Rat& o) const;
    Rat operator-() const { return {-num, den}; }

    bool operator==(const Rat& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rat& o) const { return !(*this == o); }
    bool operator<(const Rat& o) const;
    bool operator<=(const Rat& o) const { return *this < o || *this == o; }

    bool is_integer() const { return den == 1; }

    // "num/den", or just "num" for integers.
    std::string str() const;
    double approx() const;
};

}  // namespace emscr
