#pragma once

#include <functional>
#include <sstream>
#include <vector>

#include "cyclotomic.hpp"

namespace robba {

/// Result of a t-adic valuation query on a truncated series.
struct TValuation {
    bool bounded = false; // false: no significant coefficient below the truncation
    long value = 0;
    bool exact = true;    // false when noise floors were consulted on skipped terms
};

/// Truncated Laurent series over K_n: coefficients for t^k, lo <= k < trunc.
///
/// Each coefficient carries an optional noise floor: the stored value differs
/// from the true one by something of valuation >= floor. Exact coefficients
/// have no floor. Floors come from window truncation on the X-side and
/// propagate through arithmetic.
class TSeries {
public:
    TSeries() : p_(2), n_(1), lo_(0), trunc_(0) {}
    TSeries(long p, long n, long lo, long trunc)
        : p_(p), n_(n), lo_(lo), trunc_(trunc),
          coeffs_(static_cast<size_t>(std::max<long>(0, trunc - lo)), Cyclo(p, n)),
          floors_(static_cast<size_t>(std::max<long>(0, trunc - lo))) {}

    static TSeries constant(long p, long n, const Cyclo& c, long trunc) {
        TSeries s(p, n, 0, trunc);
        s.coeff(0) = c;
        return s;
    }
    static TSeries constant(long p, long n, const Rational& c, long trunc) {
        return constant(p, n, Cyclo::from_rational(p, n, c), trunc);
    }
    /// c * t^k
    static TSeries monomial(long p, long n, const Cyclo& c, long k, long trunc) {
        TSeries s(p, n, std::min<long>(k, 0), trunc);
        s.coeff(k) = c;
        return s;
    }

    long prime() const { return p_; }
    long level() const { return n_; }
    long lo() const { return lo_; }
    long trunc() const { return trunc_; }
    long pole_order() const { return std::max<long>(0, -lo_); }

    bool in_range(long k) const { return k >= lo_ && k < trunc_; }
    const Cyclo& coeff(long k) const { return coeffs_[static_cast<size_t>(k - lo_)]; }
    Cyclo& coeff(long k) { return coeffs_[static_cast<size_t>(k - lo_)]; }
    const std::optional<Rational>& floor_at(long k) const {
        return floors_[static_cast<size_t>(k - lo_)];
    }
    void set_floor(long k, std::optional<Rational> f) {
        floors_[static_cast<size_t>(k - lo_)] = merge_floor(floors_[static_cast<size_t>(k - lo_)], f);
    }

    /// True when the coefficient at k is indistinguishable from zero.
    bool negligible(long k) const {
        if (!in_range(k)) return true;
        const Cyclo& c = coeff(k);
        if (c.is_zero()) return true;
        const auto& f = floor_at(k);
        if (!f) return false;
        return c.valuation() >= *f;
    }

    TValuation t_valuation() const {
        TValuation out;
        out.exact = true;
        for (long k = lo_; k < trunc_; ++k) {
            if (!negligible(k)) {
                out.bounded = true;
                out.value = k;
                return out;
            }
            if (!coeff(k).is_zero() || floor_at(k)) out.exact = false;
        }
        return out;
    }

    bool is_negligible() const {
        for (long k = lo_; k < trunc_; ++k)
            if (!negligible(k)) return false;
        return true;
    }

    TSeries resized(long lo, long trunc) const {
        TSeries s(p_, n_, lo, trunc);
        for (long k = std::max(lo, lo_); k < std::min(trunc, trunc_); ++k) {
            s.coeff(k) = coeff(k);
            s.floors_[static_cast<size_t>(k - lo)] = floor_at(k);
        }
        // forgetting stored coefficients is only allowed if they are negligible
        for (long k = lo_; k < std::min(lo, trunc_); ++k)
            if (!negligible(k))
                throw WindowOverflow("resize would drop a significant t-coefficient");
        return s;
    }

    TSeries shifted(long dk) const { // multiply by t^dk
        TSeries s = *this;
        s.lo_ += dk;
        s.trunc_ += dk;
        return s;
    }

    TSeries operator-() const {
        TSeries s = *this;
        for (auto& c : s.coeffs_) c = -c;
        return s;
    }

    friend TSeries operator+(const TSeries& a, const TSeries& b) {
        a.check(b);
        long lo = std::min(a.lo_, b.lo_);
        long tr = std::min(a.trunc_, b.trunc_);
        TSeries s(a.p_, a.n_, lo, tr);
        for (long k = lo; k < tr; ++k) {
            Cyclo c(a.p_, a.n_);
            std::optional<Rational> f;
            if (a.in_range(k)) { c = c + a.coeff(k); f = merge_floor(f, a.floor_at(k)); }
            if (b.in_range(k)) { c = c + b.coeff(k); f = merge_floor(f, b.floor_at(k)); }
            s.coeff(k) = c;
            s.floors_[static_cast<size_t>(k - lo)] = f;
        }
        return s;
    }
    friend TSeries operator-(const TSeries& a, const TSeries& b) { return a + (-b); }

    friend TSeries operator*(const TSeries& a, const TSeries& b) {
        a.check(b);
        long lo = a.lo_ + b.lo_;
        long tr = std::min(a.trunc_ + b.lo_, b.trunc_ + a.lo_);
        TSeries s(a.p_, a.n_, lo, tr);
        for (long i = a.lo_; i < a.trunc_; ++i) {
            bool azero = a.coeff(i).is_zero() && !a.floor_at(i);
            if (azero) continue;
            for (long j = b.lo_; j < b.trunc_; ++j) {
                long k = i + j;
                if (k < lo || k >= tr) continue;
                s.coeff(k) = s.coeff(k) + a.coeff(i) * b.coeff(j);
                s.set_floor(k, mul_floor(a.coeff(i), a.floor_at(i), b.coeff(j), b.floor_at(j)));
            }
        }
        return s;
    }

    friend TSeries operator*(const TSeries& a, const Cyclo& c) {
        TSeries s = a;
        for (long k = a.lo_; k < a.trunc_; ++k) {
            s.set_floor(k, mul_floor(a.coeff(k), a.floor_at(k), c, std::nullopt));
            s.coeff(k) = a.coeff(k) * c;
        }
        return s;
    }
    friend TSeries operator*(const TSeries& a, const Rational& c) {
        return a * Cyclo::from_rational(a.p_, a.n_, c);
    }

    /// Multiplicative inverse; the leading coefficient must be significant.
    TSeries inverted() const {
        TValuation v = t_valuation();
        if (!v.bounded)
            throw NotInvertible("series has no significant coefficient below the truncation");
        long val = v.value;
        const Cyclo lead = coeff(val);
        Cyclo lead_inv = lead.inverse();
        long rel = trunc_ - val; // known terms of the unit factor
        TSeries g(p_, n_, -val, -val + rel);
        // recursive long division: g_k = -lead^{-1} sum_{j>=1} u_j g_{k-j}
        std::vector<Cyclo> u(static_cast<size_t>(rel), Cyclo(p_, n_));
        std::vector<std::optional<Rational>> uf(static_cast<size_t>(rel));
        for (long j = 0; j < rel; ++j) {
            if (in_range(val + j)) {
                u[static_cast<size_t>(j)] = coeff(val + j);
                uf[static_cast<size_t>(j)] = floor_at(val + j);
            }
        }
        std::vector<Cyclo> gc(static_cast<size_t>(rel), Cyclo(p_, n_));
        std::vector<std::optional<Rational>> gf(static_cast<size_t>(rel));
        gc[0] = lead_inv;
        std::optional<Rational> f_leadinv;
        if (uf[0]) f_leadinv = *uf[0] - 2 * lead.valuation();
        gf[0] = f_leadinv;
        for (long k = 1; k < rel; ++k) {
            Cyclo acc(p_, n_);
            std::optional<Rational> fl;
            for (long j = 1; j <= k; ++j) {
                acc = acc + u[static_cast<size_t>(j)] * gc[static_cast<size_t>(k - j)];
                fl = merge_floor(fl, mul_floor(u[static_cast<size_t>(j)], uf[static_cast<size_t>(j)],
                                               gc[static_cast<size_t>(k - j)],
                                               gf[static_cast<size_t>(k - j)]));
            }
            gc[static_cast<size_t>(k)] = -(lead_inv * acc);
            gf[static_cast<size_t>(k)] = mul_floor(lead_inv, f_leadinv, acc, fl);
        }
        for (long k = 0; k < rel; ++k) {
            g.coeff(-val + k) = gc[static_cast<size_t>(k)];
            g.floors_[static_cast<size_t>(k)] = gf[static_cast<size_t>(k)];
        }
        return g;
    }

    /// t d/dt, coefficientwise exact.
    TSeries theta() const {
        TSeries s = *this;
        for (long k = lo_; k < trunc_; ++k) s.coeff(k) = s.coeff(k) * Rational(k);
        return s;
    }

    TSeries embed_up() const {
        TSeries s(p_, n_ + 1, lo_, trunc_);
        for (long k = lo_; k < trunc_; ++k) {
            s.coeff(k) = coeff(k).embed_up();
            s.floors_[static_cast<size_t>(k - lo_)] = floor_at(k);
        }
        return s;
    }

    /// Semilinear Galois action: zeta -> zeta^a on coefficients, t -> a t.
    TSeries galois(long a) const {
        TSeries s = *this;
        Rational ak = rpow(Rational(a), lo_);
        for (long k = lo_; k < trunc_; ++k) {
            s.coeff(k) = coeff(k).galois_twist(a) * ak;
            ak *= Rational(a);
        }
        return s;
    }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (long k = lo_; k < trunc_; ++k) {
            if (coeff(k).is_zero()) continue;
            if (!first) os << " + ";
            os << "(" << coeff(k).str() << ")";
            if (k != 0) os << "*t^" << k;
            first = false;
        }
        if (first) os << "0";
        os << " (mod t^" << trunc_ << ")";
        return os.str();
    }

    static std::optional<Rational> merge_floor(const std::optional<Rational>& a,
                                               const std::optional<Rational>& b) {
        if (!a) return b;
        if (!b) return a;
        return std::min(*a, *b);
    }

    /// Floor of the error of a product (a + da)(b + db) - ab.
    static std::optional<Rational> mul_floor(const Cyclo& a, const std::optional<Rational>& fa,
                                             const Cyclo& b, const std::optional<Rational>& fb) {
        std::optional<Rational> out;
        if (fb && !a.is_zero()) out = merge_floor(out, a.valuation() + *fb);
        if (fa && !b.is_zero()) out = merge_floor(out, *fa + b.valuation());
        if (fa && fb) out = merge_floor(out, *fa + *fb);
        return out;
    }

private:
    void check(const TSeries& b) const {
        if (p_ != b.p_ || n_ != b.n_) throw LevelMismatch("t-series level or prime mismatch");
    }

    long p_, n_, lo_, trunc_;
    std::vector<Cyclo> coeffs_;
    std::vector<std::optional<Rational>> floors_;
};

} // namespace robba
