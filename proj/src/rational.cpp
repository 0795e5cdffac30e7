#include "emscr/rational.hpp"

#include <algorithm>
#include <stdexcept>

namespace emscr {

std::string to_string(uint128 v) {
    if (v == 0) {
        return "0";
    }
    std::string out;
    while (v > 0) {
        out.push_back(static_cast<char>('0' + static_cast<unsigned>(v % 10)));
        v /= 10;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string to_string(int128 v) {
    if (v < 0) {
        return "-" + to_string(static_cast<uint128>(-v));
    }
    return to_string(static_cast<uint128>(v));
}

int128 ipow3(unsigned e) {
    if (e > 80) {
        throw std::overflow_error("ipow3: exponent too large for 128 bits");
    }
    int128 r = 1;
    for (unsigned i = 0; i < e; ++i) {
        r *= 3;
    }
    return r;
}

namespace {

int128 gcd128(int128 a, int128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        int128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace

Rat::Rat(int128 n, int128 d) {
    if (d == 0) {
        throw std::domain_error("rational with zero denominator");
    }
    if (d < 0) {
        n = -n;
        d = -d;
    }
    int128 g = gcd128(n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num = n;
    den = d;
}

Rat Rat::operator+(const Rat& o) const { return {num * o.den + o.num * den, den * o.den}; }
Rat Rat::operator-(const Rat& o) const { return {num * o.den - o.num * den, den * o.den}; }
Rat Rat::operator*(const Rat& o) const { return {num * o.num, den * o.den}; }

Rat Rat::operator/(const Rat& o) const {
    if (o.num == 0) {
        throw std::domain_error("rational division by zero");
    }
    return {num * o.den, den * o.num};
}

bool Rat::operator<(const Rat& o) const { return num * o.den < o.num * den; }

std::string Rat::str() const {
    if (den == 1) {
        return to_string(num);
    }
    return to_string(num) + "/" + to_string(den);
}

double Rat::approx() const {
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace emscr
