#pragma once

#include "rational.hpp"

namespace robba {

/// Finite window standing in for an annulus near the boundary of the open
/// unit disk: X-exponents in [kmin, kmax], t-expansions modulo t^T, levels
/// (cyclotomic layers) in [n0, n1], p-adic display budget P.
struct Profile {
    long p = 2;
    long P = 16;
    long kmin = -8;
    long kmax = 64;
    long T = 8;
    long n0 = 1;
    long n1 = 3;

    void validate() const {
        if (p < 2) throw ValidationError("profile: p must be a prime >= 2");
        if (n0 < 1 || n1 < n0) throw ValidationError("profile: need 1 <= n0 <= n1");
        if (kmin > 0 || kmax < 1) throw ValidationError("profile: window must contain [0, 1]");
        if (kmax < p * T) throw ValidationError("profile: need kmax >= p*T for level expansions");
        if (T < 1 || P < 1) throw ValidationError("profile: T and P must be positive");
    }

    long levels() const { return n1 - n0 + 1; }

    bool operator==(const Profile& o) const {
        return p == o.p && P == o.P && kmin == o.kmin && kmax == o.kmax && T == o.T &&
               n0 == o.n0 && n1 == o.n1;
    }

    /// Per-t-degree decay cost of level-n expansions: each extra t-power of
    /// image content may lose n + 1/(p-1) + 1/e(n) in valuation.
    Rational psi(long n) const {
        long e = 1;
        {
            long acc = p - 1;
            for (long i = 1; i < n; ++i) acc *= p;
            e = acc;
        }
        return Rational(n) + Rational(1, p - 1) + Rational(1, e);
    }

    Rational e_of(long n) const {
        long acc = p - 1;
        for (long i = 1; i < n; ++i) acc *= p;
        return Rational(acc);
    }
};

} // namespace robba
