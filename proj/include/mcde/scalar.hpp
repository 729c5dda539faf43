#ifndef MCDE_SCALAR_HPP
#define MCDE_SCALAR_HPP

#include "mcde/errors.hpp"

#include <cstdint>
#include <string>

namespace mcde {

/// Exact rational over 64-bit integers. Always stored normalized:
/// gcd(num, den) == 1, den > 0, zero is 0/1. Every operation checks for
/// overflow through 128-bit intermediates and throws Errc::Overflow.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n) : num(n), den(1) {}
    Rational(std::int64_t n, std::int64_t d);

    bool is_zero() const { return num == 0; }
    bool is_one() const { return num == 1 && den == 1; }
    bool is_integer() const { return den == 1; }
    bool negative() const { return num < 0; }

    Rational operator-() const;
    Rational abs() const;

    friend Rational operator+(const Rational& a, const Rational& b);
    friend Rational operator-(const Rational& a, const Rational& b);
    friend Rational operator*(const Rational& a, const Rational& b);
    friend Rational operator/(const Rational& a, const Rational& b);
    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num == b.num && a.den == b.den;
    }
    friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
    friend bool operator<(const Rational& a, const Rational& b);
};

std::string render_rational(const Rational& r);

/// Gaussian rational a + b*i with exact rational parts. Coefficients and
/// commutation constants share this type; plain rationals have im == 0.
struct Scalar {
    Rational re;
    Rational im;

    Scalar() = default;
    Scalar(std::int64_t n) : re(n), im(0) {}
    Scalar(Rational r) : re(r), im(0) {}
    Scalar(Rational r, Rational i) : re(r), im(i) {}

    static Scalar zero() { return Scalar(0); }
    static Scalar one() { return Scalar(1); }

    bool is_zero() const { return re.is_zero() && im.is_zero(); }
    bool is_one() const { return re.is_one() && im.is_zero(); }
    bool is_real() const { return im.is_zero(); }

    Scalar operator-() const { return Scalar(-re, -im); }
    Scalar inverse() const;
    Scalar pow(std::uint64_t e) const;

    friend Scalar operator+(const Scalar& a, const Scalar& b) {
        return Scalar(a.re + b.re, a.im + b.im);
    }
    friend Scalar operator-(const Scalar& a, const Scalar& b) {
        return Scalar(a.re - b.re, a.im - b.im);
    }
    friend Scalar operator*(const Scalar& a, const Scalar& b) {
        return Scalar(a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re);
    }
    friend Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }
    friend bool operator==(const Scalar& a, const Scalar& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const Scalar& a, const Scalar& b) { return !(a == b); }
};

std::string render_scalar(const Scalar& s);

} // namespace mcde

#endif
