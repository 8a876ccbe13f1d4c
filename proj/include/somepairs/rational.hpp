#pragma once

#include <compare>
#include <string>

#include "somepairs/errors.hpp"

namespace somepairs {

// Exact rational over 64-bit integers, always stored reduced with den > 0.
// Intermediate products run in 128 bits; a result that does not fit back
// into 64 bits throws.
class Rational {
public:
    constexpr Rational() = default;
    constexpr Rational(long long value) : num_(value), den_(1) {}
    Rational(long long num, long long den) { assign(num, den); }

    long long num() const noexcept { return num_; }
    long long den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_ == 0; }
    bool is_integer() const noexcept { return den_ == 1; }

    double to_double() const {
        return static_cast<double>(num_) / static_cast<double>(den_);
    }

    // Serialized form, always "num/den".
    std::string str() const {
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return make(wide(a.num_) * b.den_ + wide(b.num_) * a.den_,
                    wide(a.den_) * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return make(wide(a.num_) * b.den_ - wide(b.num_) * a.den_,
                    wide(a.den_) * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return make(wide(a.num_) * b.num_, wide(a.den_) * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw Error("rational division by zero");
        return make(wide(a.num_) * b.den_, wide(a.den_) * b.num_);
    }
    Rational operator-() const { return make(-wide(num_), wide(den_)); }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) = default;

    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        wide lhs = wide(a.num_) * b.den_;
        wide rhs = wide(b.num_) * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

private:
    using wide = __int128;

    static wide wabs(wide v) { return v < 0 ? -v : v; }

    static wide wgcd(wide a, wide b) {
        while (b != 0) {
            wide t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static Rational make(wide num, wide den) {
        Rational r;
        r.assign_wide(num, den);
        return r;
    }

    void assign(long long num, long long den) { assign_wide(num, den); }

    void assign_wide(wide num, wide den) {
        if (den == 0) throw Error("rational with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        wide g = wgcd(wabs(num), den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
        constexpr wide lo = -wide(0x7fffffffffffffffLL) - 1;
        constexpr wide hi = wide(0x7fffffffffffffffLL);
        if (num < lo || num > hi || den > hi) throw Error("rational overflow");
        num_ = static_cast<long long>(num);
        den_ = static_cast<long long>(den);
    }

    long long num_ = 0;
    long long den_ = 1;
};

}  // namespace somepairs
