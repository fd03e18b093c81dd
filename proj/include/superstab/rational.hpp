#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <optional>
#include <stdexcept>

namespace superstab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("rational_from_double: non-finite input");
    return Rational(x);
}

inline double to_double(const Rational& q) { return static_cast<double>(q); }

inline bool is_integral(double x) {
    return std::isfinite(x) && x == std::floor(x) && std::abs(x) < 9.0e15;
}

// q^e with integer (possibly negative) exponent.
inline Rational rational_pow(const Rational& q, long e) {
    if (e == 0) return Rational(1);
    bool inv = e < 0;
    unsigned long k = static_cast<unsigned long>(inv ? -e : e);
    Rational base = q, acc(1);
    while (k) {
        if (k & 1ul) acc *= base;
        base *= base;
        k >>= 1;
    }
    if (inv) {
        if (acc == 0) throw std::domain_error("rational_pow: zero to negative power");
        acc = Rational(1) / acc;
    }
    return acc;
}

// Floor of the k-th root of a nonnegative integer (binary search).
BigInt integer_kth_root_floor(const BigInt& v, unsigned k);

// Exact k-th root of a nonnegative rational, if one exists.
std::optional<Rational> exact_kth_root(const Rational& q, unsigned k);

}  // namespace superstab
