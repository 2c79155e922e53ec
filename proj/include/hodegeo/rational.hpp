#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace hodegeo {

/// Exact rational with 64-bit numerator/denominator, always normalized
/// (den > 0, gcd(|num|, den) = 1). Arithmetic goes through 128-bit
/// intermediates and throws std::overflow_error if a result does not fit.
struct Rational {
    long long num = 0;
    long long den = 1;

    constexpr Rational() = default;
    Rational(long long n) : num(n), den(1) {}  // NOLINT: implicit by design
    Rational(long long n, long long d) { *this = make(n, d); }

    static Rational make(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 g = gcd128(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        constexpr __int128 lim = 0x7fffffffffffffffLL;
        if (n > lim || n < -lim || d > lim) throw std::overflow_error("rational overflow");
        Rational r;
        r.num = static_cast<long long>(n);
        r.den = static_cast<long long>(d);
        return r;
    }

    bool is_zero() const { return num == 0; }
    bool is_one() const { return num == 1 && den == 1; }
    bool is_integer() const { return den == 1; }
    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den,
                    static_cast<__int128>(a.den) * b.den);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make(static_cast<__int128>(a.num) * b.den - static_cast<__int128>(b.num) * a.den,
                    static_cast<__int128>(a.den) * b.den);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(static_cast<__int128>(a.num) * b.num, static_cast<__int128>(a.den) * b.den);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num == 0) throw std::domain_error("rational division by zero");
        return make(static_cast<__int128>(a.num) * b.den, static_cast<__int128>(a.den) * b.num);
    }
    Rational operator-() const { return make(-static_cast<__int128>(num), den); }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    /// Three-way compare without overflow.
    friend int cmp(const Rational& a, const Rational& b) {
        __int128 l = static_cast<__int128>(a.num) * b.den;
        __int128 r = static_cast<__int128>(b.num) * a.den;
        return l < r ? -1 : (l > r ? 1 : 0);
    }
    friend bool operator<(const Rational& a, const Rational& b) { return cmp(a, b) < 0; }

    /// Integer power; e may be negative when num != 0.
    Rational pow_int(long long e) const {
        if (e == 0) return Rational(1);
        Rational base = *this;
        if (e < 0) {
            if (num == 0) throw std::domain_error("zero to a negative power");
            base = Rational(den) / Rational(num);
            e = -e;
        }
        Rational acc(1);
        while (e > 0) {
            if (e & 1) acc = acc * base;
            base = (e > 1) ? base * base : base;
            e >>= 1;
        }
        return acc;
    }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

private:
    static __int128 gcd128(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a == 0 ? 1 : a;
    }
};

}  // namespace hodegeo
