#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace deceptiplan {

// Exact rational arithmetic for costs and constraint evaluation.
// Magnitudes stay tiny (instance costs, big-M products), so int64 is plenty.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n) : num(n), den(1) {}
    Rational(long long n, long long d) : num(n), den(d) { normalize(); }

    void normalize() {
        if (den == 0) throw std::invalid_argument("rational with zero denominator");
        if (den < 0) { num = -num; den = -den; }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) { num /= g; den /= g; }
        if (num == 0) den = 1;
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num * b.den + b.num * a.den, a.den * b.den);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num * b.num, a.den * b.den);
    }
    Rational& operator+=(const Rational& o) { *this = *this + o; return *this; }
    Rational& operator-=(const Rational& o) { *this = *this - o; return *this; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return a.num * b.den < b.num * a.den;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }

    std::string str() const {
        if (den == 1) return std::to_string(num);
        return std::to_string(num) + "/" + std::to_string(den);
    }

    // Decimal rendering without precision loss when the denominator is 10^k-friendly,
    // falling back to num/den form. Used by the structured result schema.
    std::string decimal_str() const;

    // Accepts integers, decimals ("0.25") and fractions ("1/3").
    static Rational parse(const std::string& text);
};

// Nonnegative cost extended with a dedicated infinity. Arithmetic saturates;
// infinity is never a large finite sentinel.
struct Cost {
    bool infinite = false;
    Rational value;

    Cost() = default;
    Cost(Rational v) : infinite(false), value(v) {}
    static Cost inf() { Cost c; c.infinite = true; return c; }

    friend Cost operator+(const Cost& a, const Cost& b) {
        if (a.infinite || b.infinite) return inf();
        return Cost(a.value + b.value);
    }
    Cost& operator+=(const Cost& o) { *this = *this + o; return *this; }

    friend bool operator==(const Cost& a, const Cost& b) {
        if (a.infinite || b.infinite) return a.infinite == b.infinite;
        return a.value == b.value;
    }
    friend bool operator<(const Cost& a, const Cost& b) {
        if (a.infinite) return false;
        if (b.infinite) return true;
        return a.value < b.value;
    }
    friend bool operator<=(const Cost& a, const Cost& b) { return !(b < a); }

    std::string str() const { return infinite ? "inf" : value.decimal_str(); }
};

} // namespace deceptiplan
