#pragma once

#include "cyclotomic.hpp"
#include "robba_element.hpp"

namespace robba {

namespace detail {

/// f/g as a power series at X = 0 (g(0) != 0), exact up to the window top.
inline RElem series_divide_at_zero(const RElem& f, const RElem& g) {
    const Profile& pr = f.profile();
    if (g.coeff(0) == 0) throw NotInvertible("series division needs a unit constant term");
    RElem q(pr);
    Rational g0inv = Rational(1) / g.coeff(0);
    for (long k = 0; k <= pr.kmax; ++k) {
        Rational acc = f.coeff(k);
        for (long j = std::max<long>(1, k - g.support_max()); j <= k; ++j) {
            Rational gj = g.coeff(j);
            if (gj != 0) acc -= gj * q.coeff(k - j);
        }
        q.set_coeff(k, acc * g0inv);
    }
    return q;
}

} // namespace detail

inline RElem atom_x(const Profile& pr) { return RElem::monomial(pr, 1, 1); }

/// log(1+X) truncated to the window; the dropped tail is recorded per level.
inline RElem atom_t(const Profile& pr) {
    RElem t(pr);
    for (long k = 1; k <= pr.kmax; ++k)
        t.set_coeff(k, Rational((k % 2) ? 1 : -1, k));
    for (long n = pr.n0; n <= pr.n1; ++n) {
        Rational e = pr.e_of(n);
        std::optional<Rational> best;
        long span = 4 * e.convert_to<long>() + 16;
        for (long k = pr.kmax + 1; k <= pr.kmax + span; ++k) {
            Rational v = Rational(k) / e - Rational(vp(Integer(k), pr.p));
            if (!best || v < *best) best = v;
        }
        t.add_tail(n, Floor::make(*best));
    }
    return t;
}

/// phi^{n-1}(q) = ((1+X)^{p^n}-1)/((1+X)^{p^{n-1}}-1), windowed.
inline RElem atom_q_level(const Profile& pr, long n) {
    if (n < 1) throw LevelOutOfWindow("q requires level >= 1");
    Integer pn = ipow(pr.p, static_cast<unsigned long>(n));
    Integer pn1 = ipow(pr.p, static_cast<unsigned long>(n - 1));
    long deg = (pn - pn1).convert_to<long>();
    auto shifted = [&](const Integer& m) {
        // ((1+X)^m - 1)/X within the window
        RElem f(pr);
        Rational b = m; // C(m, 1)
        Integer kk = 1;
        for (long k = 0; k <= std::min<long>(pr.kmax, m.convert_to<long>() - 1); ++k) {
            f.set_coeff(k, b);
            b = b * Rational(m - kk) / Rational(kk + 1);
            kk += 1;
        }
        return f;
    };
    RElem q = detail::series_divide_at_zero(shifted(pn), shifted(pn1));
    if (deg > pr.kmax) {
        // remaining coefficients are integers
        for (long m = pr.n0; m <= pr.n1; ++m)
            q.add_tail(m, Floor::make(Rational(pr.kmax + 1) / pr.e_of(m)));
    }
    return q;
}

/// Even partial products of t: prod_{j=1..M} phi^{2j-1}(q)/p.
inline RElem atom_t_plus(const Profile& pr, long M) {
    if (M < 1) throw ValidationError("t_plus needs at least one factor");
    RElem f = RElem::constant(pr, 1);
    for (long j = 1; j <= M; ++j) f = f * (atom_q_level(pr, 2 * j) * Rational(1, pr.p));
    return f;
}

/// Odd partial products of t: prod_{j=1..M} phi^{2j-2}(q)/p.
inline RElem atom_t_minus(const Profile& pr, long M) {
    if (M < 1) throw ValidationError("t_minus needs at least one factor");
    RElem f = RElem::constant(pr, 1);
    for (long j = 1; j <= M; ++j) f = f * (atom_q_level(pr, 2 * j - 1) * Rational(1, pr.p));
    return f;
}

namespace detail {

/// Geometric inversion of f normalized at its X^k0 term. gap(n) must be the
/// level-n dominance margin of that term; levels with gap <= 0 come out
/// divergent. The remainder of the truncated iteration is recorded.
inline RElem invert_normalized(const RElem& f, long k0,
                               const std::vector<Rational>& gap,
                               const std::vector<bool>& converges) {
    const Profile& pr = f.profile();
    Rational lead = f.coeff(k0);
    RElem h = (f * (Rational(1) / lead)).x_shift(-k0) - RElem::constant(pr, 1);
    // number of terms needed for the target budget at the worst level
    Rational mingap;
    bool any = false;
    for (size_t i = 0; i < gap.size(); ++i) {
        if (!converges[i]) continue;
        if (!any || gap[i] < mingap) { mingap = gap[i]; any = true; }
    }
    if (!any) throw NotInvertible("normalization converges at no window level");
    long target = pr.P + 8;
    long M = 1;
    while (Rational(M) * mingap < Rational(target) && M < 64 * pr.P) ++M;
    RElem geo = RElem::constant(pr, 1);
    RElem hp = RElem::constant(pr, 1);
    for (long m = 1; m <= M; ++m) {
        hp = hp * (-h);
        geo = geo + hp;
    }
    RElem out = geo.x_shift(-k0) * (Rational(1) / lead);
    Rational vlead(vp(lead, pr.p));
    for (long n = pr.n0; n <= pr.n1; ++n) {
        size_t i = static_cast<size_t>(n - pr.n0);
        if (!converges[i]) {
            out.add_tail(n, Floor::bottom());
            continue;
        }
        // remainder sum_{m>M} (-h)^m, scaled by the normalizer
        out.add_tail(n, Floor::make(Rational(M + 1) * gap[i] - vlead -
                                    Rational(k0) / pr.e_of(n)));
    }
    out.mark_coeffs_fuzzy();
    return out;
}

/// Per-level dominance margins of the X^k0 term of f: min over other stored
/// terms of (v_j + j/e(n)) - (v_k0 + k0/e(n)).
inline void dominance_gaps(const RElem& f, long k0, std::vector<Rational>& gap,
                           std::vector<bool>& strict) {
    const Profile& pr = f.profile();
    gap.assign(static_cast<size_t>(pr.levels()), Rational(0));
    strict.assign(static_cast<size_t>(pr.levels()), true);
    Rational v0(vp(f.coeff(k0), pr.p));
    for (long n = pr.n0; n <= pr.n1; ++n) {
        size_t i = static_cast<size_t>(n - pr.n0);
        Rational e = pr.e_of(n);
        Rational base = v0 + Rational(k0) / e;
        std::optional<Rational> second;
        for (const auto& [j, c] : f.coeffs()) {
            if (j == k0) continue;
            Rational v = Rational(vp(c, pr.p)) + Rational(j) / e;
            if (!second || v < *second) second = v;
        }
        if (!second) { gap[i] = Rational(pr.P + 16); continue; }
        gap[i] = *second - base;
        if (gap[i] <= 0) strict[i] = false;
    }
}

} // namespace detail

/// Certified unit inversion: some term must strictly dominate the others at
/// every window level; otherwise NotAUnit with the offending level.
inline RElem invert_unit(const RElem& f) {
    const Profile& pr = f.profile();
    if (f.stored_zero()) throw NotAUnit("zero is not a unit");
    std::vector<Rational> gap;
    std::vector<bool> strict;
    for (const auto& [k0, c0] : f.coeffs()) {
        detail::dominance_gaps(f, k0, gap, strict);
        bool all = true;
        for (bool s : strict) all = all && s;
        if (all) {
            std::vector<bool> conv(strict.size(), true);
            return detail::invert_normalized(f, k0, gap, conv);
        }
    }
    // witness: the first level at which no term strictly dominates
    for (long n = pr.n0; n <= pr.n1; ++n) {
        bool dominated = false;
        for (const auto& [k0, c0] : f.coeffs()) {
            detail::dominance_gaps(f, k0, gap, strict);
            if (strict[static_cast<size_t>(n - pr.n0)]) { dominated = true; break; }
        }
        if (!dominated)
            throw NotAUnit("no dominant Newton term at level " + std::to_string(n) +
                           "; the element may vanish there");
    }
    throw NotAUnit("no single term dominates at every window level");
}

/// X -> (1+X)^p - 1. Coefficients are fixed (the coefficient field is Q_p).
inline RElem frobenius(const RElem& f) {
    const Profile& pr = f.profile();
    if (f.support_max() * pr.p > pr.kmax || f.support_min() * pr.p < pr.kmin)
        throw WindowOverflow("frobenius image leaves the window");
    RElem s(pr);
    {
        Rational b = pr.p;
        for (long k = 1; k <= pr.p; ++k) {
            s.set_coeff(k, b);
            b = b * Rational(pr.p - k) / Rational(k + 1);
        }
    }
    RElem out(pr);
    if (f.support_min() < 0) {
        // 1/phi(X) normalized at X^p; it diverges on the lowest layer
        std::vector<Rational> gap;
        std::vector<bool> strict;
        detail::dominance_gaps(s, pr.p, gap, strict);
        RElem sinv = detail::invert_normalized(s, pr.p, gap, strict);
        out = RElem::substitute(f, s, &sinv);
    } else {
        out = RElem::substitute(f, s, nullptr);
    }
    // the level ladder shifts down by one step
    for (long n = pr.n0; n <= pr.n1; ++n) {
        if (n > pr.n0) out.add_tail(n, f.tail(n - 1));
        else if (!f.tail(n).is_exact())
            out.add_tail(n, f.dropped_low() || f.coeffs_fuzzy() ? Floor::bottom() : f.tail(n));
    }
    if (f.coeffs_fuzzy()) out.mark_coeffs_fuzzy();
    return out;
}

/// X -> (1+X)^a - 1 for an integer exponent a prime to p.
inline RElem gamma_act(const RElem& f, long a) {
    const Profile& pr = f.profile();
    if (a % pr.p == 0) throw ValidationError("gamma exponent must be a unit at p");
    if (a == 1) return f;
    RElem s(pr);
    if (a >= 1) {
        if (f.support_max() * a > pr.kmax) throw WindowOverflow("gamma image leaves the window");
        Rational b = a;
        for (long k = 1; k <= std::min<long>(a, pr.kmax); ++k) {
            s.set_coeff(k, b);
            b = b * Rational(a - k) / Rational(k + 1);
        }
    } else {
        // (1+X)^a - 1 truncated; binomials are p-integral
        Rational b = a;
        Integer kk = 1;
        for (long k = 1; k <= pr.kmax; ++k) {
            s.set_coeff(k, b);
            b = b * Rational(Integer(a) - kk) / Rational(kk + 1);
            kk += 1;
        }
        for (long n = pr.n0; n <= pr.n1; ++n)
            s.add_tail(n, Floor::make(Rational(pr.kmax + 1) / pr.e_of(n)));
    }
    RElem out;
    if (f.support_min() < 0) {
        RElem sinv = invert_unit(s);
        out = RElem::substitute(f, s, &sinv);
    } else {
        out = RElem::substitute(f, s, nullptr);
    }
    // gamma preserves each layer
    for (long n = pr.n0; n <= pr.n1; ++n) out.add_tail(n, f.tail(n));
    if (f.coeffs_fuzzy()) out.mark_coeffs_fuzzy();
    return out;
}

/// X -> (1+X)^a - 1 for a p-adic unit exponent; binomials are truncated at
/// the exponent's precision and the loss is recorded.
inline RElem gamma_act(const RElem& f, const PAdic& a) {
    const Profile& pr = f.profile();
    if (a.exact() && denominator(a.value()) == 1 &&
        boost::multiprecision::abs(numerator(a.value())) < Integer(1) << 30)
        return gamma_act(f, numerator(a.value()).convert_to<long>());
    if (a.is_zero() || vp(a.value(), pr.p) != 0)
        throw ValidationError("gamma exponent must be a unit at p");
    RElem s(pr);
    Rational b = a.value();
    Integer kk = 1;
    for (long k = 1; k <= pr.kmax; ++k) {
        s.set_coeff(k, b);
        b = b * Rational(a.value() - Rational(kk)) / Rational(kk + 1);
        kk += 1;
    }
    long cap = a.abs_prec() ? *a.abs_prec() : pr.P;
    for (long n = pr.n0; n <= pr.n1; ++n) {
        // d binom(a,k) has valuation >= cap - v_p(k!)
        std::optional<Rational> worst;
        for (long k = 1; k <= pr.kmax; ++k) {
            Rational v = Rational(cap) - Rational(vp(factorial(static_cast<unsigned long>(k)), pr.p)) +
                         Rational(k) / pr.e_of(n);
            if (!worst || v < *worst) worst = v;
        }
        s.add_tail(n, Floor::make(*worst));
        s.add_tail(n, Floor::make(Rational(pr.kmax + 1) / pr.e_of(n)));
    }
    s.mark_coeffs_fuzzy();
    RElem out;
    if (f.support_min() < 0) {
        RElem sinv = invert_unit(s);
        out = RElem::substitute(f, s, &sinv);
    } else {
        out = RElem::substitute(f, s, nullptr);
    }
    for (long n = pr.n0; n <= pr.n1; ++n) out.add_tail(n, f.tail(n));
    out.mark_coeffs_fuzzy();
    return out;
}

enum class DeriveMode { partial, nabla };

/// partial: (1+X) d/dX; nabla: t * partial.
inline RElem derive(const RElem& f, DeriveMode mode) {
    RElem d = f.derive_partial();
    if (mode == DeriveMode::partial) return d;
    return atom_t(f.profile()) * d;
}

} // namespace robba
