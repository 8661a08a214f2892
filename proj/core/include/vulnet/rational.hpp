// rational.hpp -- exact fractions for edge weights and oracle arithmetic
#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace vulnet {

// Reduced fraction on int64. Edge weights and small-graph path lengths fit
// comfortably; anything that would overflow throws instead of wrapping.
class Rational {
public:
    constexpr Rational() = default;

    Rational(std::int64_t num, std::int64_t den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
        num_ = g ? num / g : num;
        den_ = g ? den / g : den;
    }

    static Rational from_int(std::int64_t v) { return Rational(v, 1); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        const __int128 n = static_cast<__int128>(a.num_) * b.den_ +
                           static_cast<__int128>(b.num_) * a.den_;
        const __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return from_wide(n, d);
    }

    friend Rational operator-(const Rational& a, const Rational& b) {
        const __int128 n = static_cast<__int128>(a.num_) * b.den_ -
                           static_cast<__int128>(b.num_) * a.den_;
        const __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return from_wide(n, d);
    }

    friend Rational operator*(const Rational& a, const Rational& b) {
        const __int128 n = static_cast<__int128>(a.num_) * b.num_;
        const __int128 d = static_cast<__int128>(a.den_) * b.den_;
        return from_wide(n, d);
    }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }

    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }

    friend bool operator<(const Rational& a, const Rational& b) {
        return static_cast<__int128>(a.num_) * b.den_ < static_cast<__int128>(b.num_) * a.den_;
    }

    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

private:
    static Rational from_wide(__int128 n, __int128 d) {
        if (d < 0) {
            n = -n;
            d = -d;
        }
        const __int128 g = gcd_wide(n < 0 ? -n : n, d);
        if (g) {
            n /= g;
            d /= g;
        }
        constexpr __int128 lo = INT64_MIN, hi = INT64_MAX;
        if (n < lo || n > hi || d > hi)
            throw std::overflow_error("Rational: value out of int64 range");
        Rational r;
        r.num_ = static_cast<std::int64_t>(n);
        r.den_ = static_cast<std::int64_t>(d);
        return r;
    }

    static __int128 gcd_wide(__int128 a, __int128 b) {
        while (b) {
            const __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace vulnet
