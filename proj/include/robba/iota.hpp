#pragma once

#include <mutex>
#include <tuple>

#include "ring_ops.hpp"
#include "tseries.hpp"

namespace robba {

namespace detail {

using IotaKey = std::tuple<long, long, long, long, long, long, long, long>;

inline IotaKey iota_key(const Profile& pr, long n) {
    return {pr.p, pr.P, pr.kmin, pr.kmax, pr.T, pr.n0, pr.n1, n};
}

struct IotaTable {
    TSeries z;               // image of X
    std::map<long, TSeries> powers;
};

inline std::mutex& iota_mutex() {
    static std::mutex mu;
    return mu;
}
inline std::map<IotaKey, IotaTable>& iota_cache() {
    static std::map<IotaKey, IotaTable> c;
    return c;
}

inline IotaTable& iota_table(const Profile& pr, long n) {
    auto& cache = iota_cache();
    auto key = iota_key(pr, n);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    // X maps to (1+pi) exp(t/p^n) - 1
    TSeries z(pr.p, n, 0, pr.T);
    Cyclo one_plus_pi = Cyclo::from_rational(pr.p, n, 1) + Cyclo::uniformizer(pr.p, n);
    Rational pn = qpow(pr.p, -n);
    Rational fac = 1;
    Rational pw = 1;
    for (long j = 0; j < pr.T; ++j) {
        if (j > 0) { fac /= Rational(j); pw *= pn; }
        z.coeff(j) = one_plus_pi * (fac * pw);
    }
    z.coeff(0) = Cyclo::uniformizer(pr.p, n);
    IotaTable t;
    t.z = z;
    t.powers[0] = TSeries::constant(pr.p, n, Rational(1), pr.T);
    t.powers[1] = z;
    return cache.emplace(key, std::move(t)).first->second;
}

inline const TSeries& iota_power(const Profile& pr, long n, long k) {
    IotaTable& t = iota_table(pr, n);
    auto it = t.powers.find(k);
    if (it != t.powers.end()) return it->second;
    if (k > 0) {
        const TSeries& prev = iota_power(pr, n, k - 1);
        return t.powers.emplace(k, prev * t.z).first->second;
    }
    if (k == -1) return t.powers.emplace(-1, t.z.inverted().resized(0, pr.T)).first->second;
    const TSeries& prev = iota_power(pr, n, k + 1);
    const TSeries& zi = iota_power(pr, n, -1);
    return t.powers.emplace(k, (prev * zi).resized(0, pr.T)).first->second;
}

} // namespace detail

/// Localization at level n: substitute (1+zeta_{p^n}) exp(t/p^n) - 1 for X.
/// Bounds on content the element does not carry exactly become noise floors
/// on the output; a divergent bound at this level is a hard failure.
inline TSeries iota(const RElem& f, long n) {
    const Profile& pr = f.profile();
    if (n < pr.n0 || n > pr.n1) throw LevelOutOfWindow("level " + std::to_string(n));
    const Floor& tail = f.tail(n);
    if (tail.is_divergent())
        throw PrecisionExhausted("unknown content diverges at level " + std::to_string(n));
    std::lock_guard<std::mutex> lock(detail::iota_mutex());
    TSeries out(pr.p, n, 0, pr.T);
    for (const auto& [k, c] : f.coeffs())
        out = out + detail::iota_power(pr, n, k) * Cyclo::from_rational(pr.p, n, c);
    out = out.resized(0, pr.T);
    if (tail.kind == Floor::bounded) {
        for (long j = 0; j < pr.T; ++j)
            out.set_floor(j, tail.value - Rational(j) * pr.psi(n));
    }
    return out;
}

/// t-adic valuation of the level-n localization; unbounded means ">= T".
inline TValuation zero_order(const RElem& f, long n) { return iota(f, n).t_valuation(); }

/// Iwasawa logarithm of pi_n (log p = 0), exact when pi_n^e/p is torsion,
/// otherwise summed to the requested absolute precision.
inline Cyclo log_pi(long p, long n, long target) {
    static std::mutex mu;
    static std::map<std::tuple<long, long, long>, Cyclo> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto key = std::make_tuple(p, n, target);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    long e = cyclo_degree(p, n);
    Cyclo pi = Cyclo::uniformizer(p, n);
    Cyclo w = Cyclo::from_rational(p, n, 1);
    for (long i = 0; i < e; ++i) w = w * pi;
    w = w * Rational(1, p); // unit of the integer ring

    // split off the Teichmueller part; the residue lies in F_p
    Rational c0 = w.coeff(0).value();
    Integer r = mod_ppow(c0, p, 1);
    Cyclo u1 = w;
    if (r != 1) {
        if (p == 2) throw Error("internal: residue of a unit at p=2 must be 1");
        // Teichmueller lift of r in Z_p by iterated p-th powers
        long budget = target + 2 * e + 8;
        Integer pk = ipow(p, static_cast<unsigned long>(budget));
        Integer om = r;
        for (long i = 0; i < budget; ++i) {
            Integer nx = 1;
            for (long j = 0; j < p; ++j) nx = nx * om % pk;
            if (nx == om) break;
            om = nx;
        }
        Integer om_inv;
        if (mpz_invert(om_inv.backend().data(), om.backend().data(), pk.backend().data()) == 0)
            throw Error("internal: Teichmueller inverse");
        u1 = w * Rational(om_inv);
        // exact only when omega is rational; +-1 are, the rest are capped
        bool exact_om = (om == 1 || om == pk - 1);
        if (om == pk - 1) u1 = w * Rational(-1);
        if (!exact_om) {
            Cyclo capped(p, n);
            for (long i = 0; i < e; ++i)
                capped.coeff(i) = PAdic(p, u1.coeff(i).value(), budget);
            u1 = capped;
        }
    }

    // p-power torsion one-units have exact logarithm zero
    {
        Cyclo y = u1;
        Cyclo one = Cyclo::from_rational(p, n, 1);
        bool torsion = false;
        for (long i = 0; i <= n + 1 && !torsion; ++i) {
            if (y == one) torsion = true;
            Cyclo yp = y;
            for (long j = 1; j < p; ++j) yp = yp * y;
            y = yp;
        }
        if (y == one) torsion = true;
        if (torsion) {
            Cyclo zero(p, n);
            return cache.emplace(key, zero).first->second;
        }
    }

    Cyclo x = u1 - Cyclo::from_rational(p, n, 1);
    Rational delta = x.valuation();
    if (delta <= 0) throw Error("internal: log argument is not a one-unit");
    Cyclo acc(p, n);
    Cyclo xp = Cyclo::from_rational(p, n, 1);
    long m = 1;
    while (true) {
        Rational worst = Rational(m) * delta - Rational(m >= p ? vp(Integer(m), p) : 0);
        if (worst >= Rational(target + 4) && m > 1) break;
        xp = xp * x;
        Rational sign = (m % 2) ? Rational(1) : Rational(-1);
        acc = acc + xp * (sign / Rational(m));
        ++m;
        if (m > 64 * (target + 8) * e) throw PrecisionExhausted("log series converges too slowly");
    }
    Cyclo out(p, n);
    for (long i = 0; i < e; ++i) out.coeff(i) = PAdic(p, (acc.coeff(i) * Rational(1, e)).value(), target);
    return cache.emplace(key, out).first->second;
}

/// Level-n image of the formal logarithm of X:
/// log(pi_n) + log(1 + ((1+pi)exp(t/p^n) - 1 - pi)/pi), modulo t^T.
inline TSeries iota_log_x(const Profile& pr, long n, std::optional<long> target = std::nullopt) {
    long tgt = target.value_or(pr.P);
    Cyclo lam = log_pi(pr.p, n, tgt);
    TSeries z = [&] {
        std::lock_guard<std::mutex> lock(detail::iota_mutex());
        return detail::iota_table(pr, n).z;
    }();
    Cyclo pi = Cyclo::uniformizer(pr.p, n);
    TSeries h = (z - TSeries::constant(pr.p, n, Cyclo::from_rational(pr.p, n, 0) + pi, pr.T)) *
                pi.inverse();
    // h has positive t-adic valuation, so the log sum is finite mod t^T
    TSeries acc(pr.p, n, 0, pr.T);
    TSeries hp = TSeries::constant(pr.p, n, Rational(1), pr.T);
    for (long m = 1; m < pr.T; ++m) {
        hp = (hp * h).resized(0, pr.T);
        acc = acc + hp * Rational((m % 2) ? 1 : -1, m);
    }
    return (acc + TSeries::constant(pr.p, n, lam, pr.T)).resized(0, pr.T);
}

} // namespace robba
