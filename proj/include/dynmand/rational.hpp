#pragma once

/*
 * Exact scalar types shared across the library.
 *
 * Rat is an arbitrary-precision rational, always kept in lowest terms by
 * the backend. QComplex is a Gaussian rational used where a residual has
 * to be evaluated exactly at a point whose coordinates are IEEE doubles
 * (every finite double is a dyadic rational, so the embedding is exact).
 */

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace dynmand {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;
using Real50 = boost::multiprecision::cpp_bin_float_50;
using cplx = std::complex<double>;

inline Int rat_num(const Rat& q) { return boost::multiprecision::numerator(q); }
inline Int rat_den(const Rat& q) { return boost::multiprecision::denominator(q); }

inline double to_double(const Rat& q) { return q.convert_to<double>(); }
inline double to_double(const Real50& x) { return x.convert_to<double>(); }

/* Integer power with negative exponents allowed for nonzero base. */
inline Rat pow_rat(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (base == 0) {
        if (e > 0) return Rat(0);
        throw std::domain_error("pow_rat: zero base with negative exponent");
    }
    Rat b = base;
    unsigned long k = static_cast<unsigned long>(e < 0 ? -e : e);
    Rat acc(1);
    while (k) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
    }
    if (e < 0) acc = Rat(1) / acc;
    return acc;
}

inline bool is_integer(const Rat& q) { return rat_den(q) == 1; }

/* Exact rational value of a finite double. */
inline Rat rat_from_double(double x) {
    if (!std::isfinite(x)) throw std::domain_error("rat_from_double: non-finite input");
    if (x == 0.0) return Rat(0);
    int e = 0;
    double m = std::frexp(x, &e); /* x = m * 2^e, 0.5 <= |m| < 1 */
    long long mi = static_cast<long long>(std::ldexp(m, 53));
    e -= 53;
    Rat r(mi);
    if (e >= 0)
        r *= pow_rat(Rat(2), e);
    else
        r /= pow_rat(Rat(2), -e);
    return r;
}

/* Natural log of a positive integer, usable far past double range. */
inline double log_int(const Int& n) {
    if (n <= 0) throw std::domain_error("log_int: nonpositive argument");
    const unsigned bits = boost::multiprecision::msb(n);
    if (bits <= 900) return std::log(n.convert_to<double>());
    Int shifted = n >> (bits - 52);
    return std::log(shifted.convert_to<double>()) + (double)(bits - 52) * std::log(2.0);
}

/* log of a positive rational, overflow-safe. */
inline double log_rat(const Rat& q) {
    if (q <= 0) throw std::domain_error("log_rat: nonpositive argument");
    return log_int(rat_num(q)) - log_int(rat_den(q));
}

/* to_double that degrades to +/-inf instead of throwing on overflow. */
inline double to_double_safe(const Rat& q) {
    if (q == 0) return 0.0;
    double lg = log_int(rat_num(q) < 0 ? Int(-rat_num(q)) : rat_num(q)) - log_int(rat_den(q));
    if (lg > 700.0) return rat_num(q) < 0 ? -std::numeric_limits<double>::infinity()
                                          : std::numeric_limits<double>::infinity();
    if (lg < -745.0) return 0.0;
    return q.convert_to<double>();
}

inline std::string rat_str(const Rat& q) {
    if (is_integer(q)) return rat_num(q).str();
    return rat_num(q).str() + "/" + rat_den(q).str();
}

/* Gaussian rational, exact arithmetic in Q(i). */
struct QComplex {
    Rat re{0};
    Rat im{0};

    QComplex() = default;
    QComplex(Rat r, Rat i) : re(std::move(r)), im(std::move(i)) {}
    explicit QComplex(const Rat& r) : re(r), im(0) {}
    static QComplex from_cplx(cplx z) { return {rat_from_double(z.real()), rat_from_double(z.imag())}; }

    QComplex operator+(const QComplex& o) const { return {re + o.re, im + o.im}; }
    QComplex operator-(const QComplex& o) const { return {re - o.re, im - o.im}; }
    QComplex operator*(const QComplex& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    QComplex& operator+=(const QComplex& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    QComplex& operator*=(const QComplex& o) {
        *this = *this * o;
        return *this;
    }
    bool operator==(const QComplex& o) const { return re == o.re && im == o.im; }

    /* |z|^2, exact. */
    Rat norm2() const { return re * re + im * im; }
    /* |z| rounded to double, overflow-safe. */
    double abs_approx() const {
        Rat n2 = norm2();
        if (n2 == 0) return 0.0;
        return std::exp(0.5 * log_rat(n2));
    }
};

} // namespace dynmand
