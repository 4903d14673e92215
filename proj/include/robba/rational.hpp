#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <optional>
#include <string>

#include "errors.hpp"

namespace robba {

using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

/// p-adic valuation of a nonzero integer.
inline long vp(const Integer& n, long p) {
    if (n == 0) throw DivisionByZero("vp of zero integer");
    Integer tmp;
    return static_cast<long>(
        mpz_remove(tmp.backend().data(), n.backend().data(), Integer(p).backend().data()));
}

/// p-adic valuation of a nonzero rational.
inline long vp(const Rational& q, long p) {
    if (q == 0) throw DivisionByZero("vp of zero");
    return vp(numerator(q), p) - vp(denominator(q), p);
}

/// Valuation with +infinity for zero, encoded as std::nullopt.
inline std::optional<long> vp_opt(const Rational& q, long p) {
    if (q == 0) return std::nullopt;
    return vp(q, p);
}

inline Integer ipow(long base, unsigned long e) {
    Integer r;
    mpz_ui_pow_ui(r.backend().data(), static_cast<unsigned long>(base), e);
    return r;
}

/// p^e for e of either sign.
inline Rational qpow(long p, long e) {
    Integer n = ipow(p, static_cast<unsigned long>(e >= 0 ? e : -e));
    return e >= 0 ? Rational(n) : Rational(1, n);
}

inline Rational rpow(const Rational& base, long e) {
    if (e == 0) return Rational(1);
    if (base == 0) {
        if (e < 0) throw DivisionByZero("0^negative");
        return Rational(0);
    }
    Rational r = 1;
    Rational b = e > 0 ? base : Rational(1) / base;
    for (long i = 0; i < (e > 0 ? e : -e); ++i) r *= b;
    return r;
}

/// Unit part of q with respect to p: q / p^{vp(q)}.
inline Rational unit_part(const Rational& q, long p) {
    if (q == 0) throw DivisionByZero("unit part of zero");
    return q / qpow(p, vp(q, p));
}

/// Factorial as an exact integer.
inline Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.backend().data(), n);
    return r;
}

/// Binomial coefficient over Q for a rational upper argument.
inline Rational binomial(const Rational& a, unsigned long k) {
    Rational r = 1;
    for (unsigned long i = 0; i < k; ++i) r *= (a - Rational(i));
    return r / Rational(factorial(k));
}

/// Reduce q modulo p^k into [0, p^k); requires vp(denominator) = 0.
inline Integer mod_ppow(const Rational& q, long p, long k) {
    Integer pk = ipow(p, static_cast<unsigned long>(k));
    Integer num = numerator(q), den = denominator(q);
    Integer dinv;
    if (mpz_invert(dinv.backend().data(), den.backend().data(), pk.backend().data()) == 0)
        throw DivisionByZero("denominator not invertible mod p^k");
    Integer r = (num % pk) * dinv % pk;
    if (r < 0) r += pk;
    return r;
}

inline std::string to_string(const Rational& q) { return q.str(); }

inline Rational rational_from_string(const std::string& s) {
    try {
        Rational q(s);
        return q;
    } catch (const std::exception&) {
        throw ParseError("bad rational literal: " + s);
    }
}

} // namespace robba
