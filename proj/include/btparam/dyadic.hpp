#pragma once

#include <cmath>
#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

#include "btparam/error.hpp"

namespace btparam {

// Exact non-negative dyadic rational num/2^exp. Kept canonical: num is odd, or
// the value is zero with exp == 0. The numerator is unbounded so repeated
// per-level rescaling never rounds.
class Dyadic {
public:
    using int_t = boost::multiprecision::cpp_int;

    Dyadic() : num_(0), exp_(0) {}

    Dyadic(int_t num, int exp) : num_(std::move(num)), exp_(exp) {
        if (num_ < 0 || exp_ < 0)
            fail(errc::invalid_argument, "dyadic: negative numerator or exponent");
        normalize();
    }

    static Dyadic zero() { return Dyadic(); }
    static Dyadic one() { return Dyadic(1, 0); }

    // 2^-k
    static Dyadic pow2(int k) {
        if (k < 0) fail(errc::invalid_argument, "dyadic: pow2 wants k >= 0");
        return Dyadic(1, k);
    }

    // Exact conversion; doubles are dyadic rationals. Only values in [0, 2)
    // appear here (circle parameters and interval lengths).
    static Dyadic from_double(double x) {
        if (!(x >= 0.0) || !std::isfinite(x))
            fail(errc::invalid_argument, "dyadic: from_double wants finite x >= 0");
        if (x == 0.0) return Dyadic();
        int e = 0;
        double m = std::frexp(x, &e);       // x = m * 2^e, m in [0.5, 1)
        auto mant = static_cast<std::uint64_t>(std::ldexp(m, 53));
        int exp = 53 - e;
        if (exp < 0) {                       // integral value with spare factors of 2
            return Dyadic(int_t(mant) << (-exp), 0);
        }
        return Dyadic(int_t(mant), exp);
    }

    const int_t& num() const { return num_; }
    int exp() const { return exp_; }
    bool is_zero() const { return num_ == 0; }

    Dyadic operator+(const Dyadic& o) const {
        int e = std::max(exp_, o.exp_);
        return Dyadic(scaled(e) + o.scaled(e), e);
    }

    Dyadic operator-(const Dyadic& o) const {
        int e = std::max(exp_, o.exp_);
        int_t a = scaled(e), b = o.scaled(e);
        if (a < b) fail(errc::invalid_argument, "dyadic: negative difference");
        return Dyadic(a - b, e);
    }

    Dyadic operator*(const Dyadic& o) const {
        return Dyadic(num_ * o.num_, exp_ + o.exp_);
    }

    bool operator==(const Dyadic& o) const {
        return exp_ == o.exp_ && num_ == o.num_;
    }
    bool operator!=(const Dyadic& o) const { return !(*this == o); }

    bool operator<(const Dyadic& o) const {
        int e = std::max(exp_, o.exp_);
        return scaled(e) < o.scaled(e);
    }
    bool operator>(const Dyadic& o) const { return o < *this; }
    bool operator<=(const Dyadic& o) const { return !(o < *this); }
    bool operator>=(const Dyadic& o) const { return !(*this < o); }

    double to_double() const {
        if (num_ == 0) return 0.0;
        // Peel the numerator down to <= 53 significant bits before converting so
        // huge exact values do not overflow the double conversion.
        long bits = static_cast<long>(boost::multiprecision::msb(num_)) + 1;
        if (bits <= 53)
            return std::ldexp(num_.convert_to<double>(), -exp_);
        long drop = bits - 53;
        int_t head = num_ >> drop;
        return std::ldexp(head.convert_to<double>(), static_cast<int>(drop) - exp_);
    }

    // True when to_double() loses nothing (<= 53 significant bits).
    bool double_exact() const {
        if (num_ == 0) return true;
        return boost::multiprecision::msb(num_) + 1 <= 53;
    }

    std::string str() const {
        return num_.str() + "/2^" + std::to_string(exp_);
    }

private:
    int_t scaled(int e) const { return num_ << (e - exp_); }

    void normalize() {
        if (num_ == 0) { exp_ = 0; return; }
        while (exp_ > 0 && (num_ & 1) == 0) {
            num_ >>= 1;
            --exp_;
        }
    }

    int_t num_;
    int exp_;
};

} // namespace btparam
