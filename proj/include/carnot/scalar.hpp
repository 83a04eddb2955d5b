#pragma once

#include <gmpxx.h>

#include <string>

namespace carnot {

/// Exact arbitrary-precision rational scalar. All Lie-algebra and group
/// arithmetic is carried out over this type; floating point is confined to
/// metric and differentiation code.
using Rational = mpq_class;
using Integer = mpz_class;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<Rational> {
    static constexpr bool exact = true;
    static Rational zero() { return Rational(0); }
    static Rational one() { return Rational(1); }
    static Rational from_rational(const Rational& q) { return q; }
    static bool is_zero(const Rational& q) { return sgn(q) == 0; }
};

template <>
struct scalar_traits<double> {
    static constexpr bool exact = false;
    static double zero() { return 0.0; }
    static double one() { return 1.0; }
    static double from_rational(const Rational& q) { return q.get_d(); }
    static bool is_zero(double x) { return x == 0.0; }
};

inline double to_double(const Rational& q) { return q.get_d(); }
inline double to_double(double x) { return x; }

inline std::string to_string(const Rational& q) { return q.get_str(); }

/// base^e for small nonnegative integer exponents, exact for rational base.
template <class S>
S int_pow(const S& base, int e) {
    S acc = scalar_traits<S>::one();
    for (int i = 0; i < e; ++i) acc *= base;
    return acc;
}

inline Rational rational(long num, long den = 1) { return Rational(num, den); }

} // namespace carnot
