#include "mcde/scalar.hpp"

#include <numeric>

namespace mcde {

namespace {

using i64 = std::int64_t;
using i128 = __int128;

i64 checked(i128 v) {
    if (v > i128(INT64_MAX) || v < i128(INT64_MIN))
        throw EngineError(Errc::Overflow, "rational arithmetic overflow");
    return static_cast<i64>(v);
}

} // namespace

Rational::Rational(i64 n, i64 d) {
    if (d == 0)
        throw EngineError(Errc::Overflow, "zero denominator");
    if (d < 0) {
        n = checked(-i128(n));
        d = checked(-i128(d));
    }
    i64 g = std::gcd(n < 0 ? -n : n, d);
    if (g > 1) {
        n /= g;
        d /= g;
    }
    num = n;
    den = d;
}

Rational Rational::operator-() const { return Rational(checked(-i128(num)), den); }

Rational Rational::abs() const { return num < 0 ? -*this : *this; }

Rational operator+(const Rational& a, const Rational& b) {
    i128 n = i128(a.num) * b.den + i128(b.num) * a.den;
    i128 d = i128(a.den) * b.den;
    i128 g = std::gcd(n < 0 ? (i64)checked(-n) : (i64)checked(n), (i64)checked(d));
    if (g > 1) {
        n /= g;
        d /= g;
    }
    return Rational(checked(n), checked(d));
}

Rational operator-(const Rational& a, const Rational& b) { return a + (-b); }

Rational operator*(const Rational& a, const Rational& b) {
    // cross-reduce before multiplying to keep intermediates small
    i64 g1 = std::gcd(a.num < 0 ? -a.num : a.num, b.den);
    i64 g2 = std::gcd(b.num < 0 ? -b.num : b.num, a.den);
    i128 n = i128(a.num / g1) * (b.num / g2);
    i128 d = i128(a.den / g2) * (b.den / g1);
    return Rational(checked(n), checked(d));
}

Rational operator/(const Rational& a, const Rational& b) {
    if (b.is_zero())
        throw EngineError(Errc::Overflow, "division by zero");
    return a * Rational(b.den, b.num);
}

bool operator<(const Rational& a, const Rational& b) {
    return i128(a.num) * b.den < i128(b.num) * a.den;
}

std::string render_rational(const Rational& r) {
    std::string s = std::to_string(r.num);
    if (r.den != 1)
        s += "/" + std::to_string(r.den);
    return s;
}

Scalar Scalar::inverse() const {
    if (is_zero())
        throw EngineError(Errc::Overflow, "division by zero scalar");
    Rational n = re * re + im * im;
    return Scalar(re / n, -(im / n));
}

Scalar Scalar::pow(std::uint64_t e) const {
    Scalar acc = Scalar::one();
    Scalar base = *this;
    while (e > 0) {
        if (e & 1)
            acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

std::string render_scalar(const Scalar& s) {
    if (s.is_real())
        return render_rational(s.re);
    std::string out = "(";
    out += render_rational(s.re);
    out += s.im.negative() ? "-" : "+";
    out += render_rational(s.im.abs());
    out += "i)";
    return out;
}

} // namespace mcde
