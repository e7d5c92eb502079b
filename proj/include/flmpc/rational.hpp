#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace flmpc {

/// Exact rational on 64-bit numerator/denominator, normalized so that
/// den > 0 and gcd(|num|, den) = 1. Intermediates run through __int128 and
/// any result that cannot be renormalized into 64 bits throws; nothing is
/// ever rounded silently. Model weights, learning rates and labels all use
/// this type so cross-platform runs agree bit for bit.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(std::int64_t n) : num_(n), den_(1) {}
    Rational(std::int64_t n, std::int64_t d) { assign(n, d); }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }

    friend Rational operator+(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num_ * b.den_ + (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return from_wide(n, d);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        __int128 n = (__int128)a.num_ * b.den_ - (__int128)b.num_ * a.den_;
        __int128 d = (__int128)a.den_ * b.den_;
        return from_wide(n, d);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return from_wide((__int128)a.num_ * b.num_, (__int128)a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw std::domain_error("rational division by zero");
        return from_wide((__int128)a.num_ * b.den_, (__int128)a.den_ * b.num_);
    }
    Rational operator-() const { return Rational(-num_, den_); }

    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b) {
        return (__int128)a.num_ * b.den_ < (__int128)b.num_ * a.den_;
    }
    friend bool operator<=(const Rational& a, const Rational& b) { return !(b < a); }
    friend bool operator>(const Rational& a, const Rational& b) { return b < a; }
    friend bool operator>=(const Rational& a, const Rational& b) { return !(a < b); }

    Rational abs() const { return num_ < 0 ? -*this : *this; }

    /// Nearest integer, ties away from zero. This is the quantization rule
    /// for turning exact gradients into field elements.
    std::int64_t round_half_away() const {
        __int128 n = num_ < 0 ? -(__int128)num_ : (__int128)num_;
        __int128 q = (2 * n + den_) / ((__int128)2 * den_);
        return num_ < 0 ? (std::int64_t)-q : (std::int64_t)q;
    }

    /// Canonical text form, always "num/den" (e.g. "-3/4", "0/1").
    std::string str() const {
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

    /// Parses "num/den" or a bare integer "num".
    static Rational parse(const std::string& text) {
        std::size_t slash = text.find('/');
        try {
            if (slash == std::string::npos) {
                return Rational(parse_i64(text));
            }
            std::int64_t n = parse_i64(text.substr(0, slash));
            std::int64_t d = parse_i64(text.substr(slash + 1));
            return Rational(n, d);
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("not a rational: '" + text + "'");
        } catch (const std::out_of_range&) {
            throw std::invalid_argument("rational out of range: '" + text + "'");
        }
    }

private:
    void assign(std::int64_t n, std::int64_t d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) {
            if (n == INT64_MIN || d == INT64_MIN)
                throw std::overflow_error("rational overflow");
            n = -n;
            d = -d;
        }
        std::int64_t g = std::gcd(n < 0 ? -n : n, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        num_ = n;
        den_ = d;
    }

    static Rational from_wide(__int128 n, __int128 d) {
        if (d == 0) throw std::domain_error("rational with zero denominator");
        if (d < 0) {
            n = -n;
            d = -d;
        }
        __int128 an = n < 0 ? -n : n;
        __int128 g = wide_gcd(an, d);
        if (g > 1) {
            n /= g;
            d /= g;
        }
        if (n > INT64_MAX || n < INT64_MIN || d > INT64_MAX)
            throw std::overflow_error("rational overflow");
        Rational r;
        r.num_ = (std::int64_t)n;
        r.den_ = (std::int64_t)d;
        return r;
    }

    static __int128 wide_gcd(__int128 a, __int128 b) {
        while (b != 0) {
            __int128 t = a % b;
            a = b;
            b = t;
        }
        return a;
    }

    static std::int64_t parse_i64(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("empty integer");
        std::size_t pos = 0;
        long long v = std::stoll(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing junk");
        return (std::int64_t)v;
    }

    std::int64_t num_;
    std::int64_t den_;
};

using RationalVector = std::vector<Rational>;

inline std::string to_string(const Rational& r) { return r.str(); }

} // namespace flmpc
