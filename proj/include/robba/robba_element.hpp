#pragma once

#include <map>
#include <sstream>
#include <vector>

#include "profile.hpp"

namespace robba {

/// Lower bound on the valuation of content an element does not carry exactly.
struct Floor {
    enum Kind { exact, bounded, divergent };
    Kind kind = exact;
    Rational value;

    static Floor make(const Rational& v) { return Floor{bounded, v}; }
    static Floor none() { return Floor{exact, Rational(0)}; }
    static Floor bottom() { return Floor{divergent, Rational(0)}; }

    bool is_exact() const { return kind == exact; }
    bool is_divergent() const { return kind == divergent; }

    Floor& merge(const Floor& o) {
        if (o.kind == exact) return *this;
        if (kind == exact) { *this = o; return *this; }
        if (kind == divergent || o.kind == divergent) { kind = divergent; return *this; }
        value = std::min(value, o.value);
        return *this;
    }
    Floor shifted(const Rational& d) const {
        if (kind != bounded) return *this;
        return Floor{bounded, value + d};
    }
};

/// Laurent element of the window model of the Robba ring: exact rational
/// coefficients on X^k, k in [kmin, kmax], plus honesty bookkeeping.
///
/// `tail(n)` bounds, per level n, the size (valuation of the constant term of
/// the level-n localization, with the usual per-t-degree decay) of everything
/// the element does not carry exactly: coefficients dropped outside the
/// window and remainders of truncated series iterations. When such a
/// remainder may also perturb in-window coefficients, `coeffs_fuzzy()` is set
/// and coefficientwise reads are no longer exact.
class RElem {
public:
    RElem() = default;
    explicit RElem(const Profile& pr) : pr_(pr), tails_(static_cast<size_t>(pr.levels())) {}

    static RElem zero(const Profile& pr) { return RElem(pr); }
    static RElem constant(const Profile& pr, const Rational& c) {
        RElem f(pr);
        if (c != 0) f.coeffs_[0] = c;
        return f;
    }
    static RElem monomial(const Profile& pr, long k, const Rational& c) {
        if (k < pr.kmin || k > pr.kmax) throw WindowOverflow("monomial exponent outside window");
        RElem f(pr);
        if (c != 0) f.coeffs_[k] = c;
        return f;
    }

    const Profile& profile() const { return pr_; }
    const std::map<long, Rational>& coeffs() const { return coeffs_; }

    Rational coeff(long k) const {
        auto it = coeffs_.find(k);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }
    void set_coeff(long k, const Rational& c) {
        if (k < pr_.kmin || k > pr_.kmax) throw WindowOverflow("coefficient outside window");
        if (c == 0) coeffs_.erase(k);
        else coeffs_[k] = c;
    }

    bool stored_zero() const { return coeffs_.empty(); }
    long support_min() const { return coeffs_.empty() ? 0 : coeffs_.begin()->first; }
    long support_max() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }

    bool exact() const {
        for (const auto& f : tails_)
            if (!f.is_exact()) return false;
        return true;
    }
    bool coeffs_fuzzy() const { return coeffs_fuzzy_; }
    void mark_coeffs_fuzzy() { coeffs_fuzzy_ = true; }
    bool dropped_low() const { return neg_dropped_; }
    void mark_dropped_low() { neg_dropped_ = true; }

    const Floor& tail(long n) const { return tails_[idx(n)]; }
    void add_tail(long n, const Floor& f) { tails_[idx(n)].merge(f); }
    void add_tail_all(const Floor& f) {
        for (auto& t : tails_) t.merge(f);
    }

    /// Register a coefficient dropped outside the window.
    void drop(long k, const Rational& c) {
        if (c == 0) return;
        if (k < pr_.kmin) neg_dropped_ = true;
        Rational v = Rational(vp(c, pr_.p));
        for (long n = pr_.n0; n <= pr_.n1; ++n)
            tails_[idx(n)].merge(Floor::make(v + Rational(k) / pr_.e_of(n)));
    }

    /// min over stored coefficients of v_p(c) + k/e(n); nullopt when zero.
    std::optional<Rational> level_mass(long n) const {
        std::optional<Rational> out;
        for (const auto& [k, c] : coeffs_) {
            Rational v = Rational(vp(c, pr_.p)) + Rational(k) / pr_.e_of(n);
            if (!out || v < *out) out = v;
        }
        return out;
    }

    RElem operator-() const {
        RElem r = *this;
        for (auto& [k, c] : r.coeffs_) c = -c;
        return r;
    }

    friend RElem operator+(const RElem& a, const RElem& b) {
        a.check(b);
        RElem r = a;
        for (const auto& [k, c] : b.coeffs_) r.set_coeff(k, r.coeff(k) + c);
        for (size_t i = 0; i < r.tails_.size(); ++i) r.tails_[i].merge(b.tails_[i]);
        r.coeffs_fuzzy_ = a.coeffs_fuzzy_ || b.coeffs_fuzzy_;
        r.neg_dropped_ = a.neg_dropped_ || b.neg_dropped_;
        return r;
    }
    friend RElem operator-(const RElem& a, const RElem& b) { return a + (-b); }

    friend RElem operator*(const RElem& a, const Rational& s) {
        if (s == 0) return RElem(a.pr_);
        RElem r = a;
        for (auto& [k, c] : r.coeffs_) c *= s;
        Rational vs(vp(s, a.pr_.p));
        for (auto& t : r.tails_) t = t.shifted(vs);
        return r;
    }
    friend RElem operator*(const Rational& s, const RElem& a) { return a * s; }

    friend RElem operator*(const RElem& a, const RElem& b) {
        a.check(b);
        RElem r(a.pr_);
        std::map<long, Rational> acc;
        for (const auto& [i, ci] : a.coeffs_)
            for (const auto& [j, cj] : b.coeffs_) acc[i + j] += ci * cj;
        for (const auto& [k, c] : acc) {
            if (k < a.pr_.kmin || k > a.pr_.kmax) r.drop(k, c);
            else r.set_coeff(k, c);
        }
        // cross terms with unknown content
        for (long n = a.pr_.n0; n <= a.pr_.n1; ++n) {
            Floor& t = r.tails_[a.idx(n)];
            const Floor& ta = a.tails_[a.idx(n)];
            const Floor& tb = b.tails_[a.idx(n)];
            auto am = a.level_mass(n);
            auto bm = b.level_mass(n);
            if (!ta.is_exact()) {
                if (ta.is_divergent()) t.merge(Floor::bottom());
                else if (bm) t.merge(Floor::make(ta.value + *bm));
            }
            if (!tb.is_exact()) {
                if (tb.is_divergent()) t.merge(Floor::bottom());
                else if (am) t.merge(Floor::make(tb.value + *am));
            }
            if (ta.kind == Floor::bounded && tb.kind == Floor::bounded)
                t.merge(Floor::make(ta.value + tb.value));
        }
        r.coeffs_fuzzy_ = a.coeffs_fuzzy_ || b.coeffs_fuzzy_;
        r.neg_dropped_ = a.neg_dropped_ || b.neg_dropped_;
        return r;
    }

    /// X^dk * this; drops are recorded.
    RElem x_shift(long dk) const {
        RElem r(pr_);
        for (const auto& [k, c] : coeffs_) {
            long kk = k + dk;
            if (kk < pr_.kmin || kk > pr_.kmax) r.drop(kk, c);
            else r.set_coeff(kk, c);
        }
        for (long n = pr_.n0; n <= pr_.n1; ++n)
            r.tails_[idx(n)].merge(tails_[idx(n)].shifted(Rational(dk) / pr_.e_of(n)));
        r.coeffs_fuzzy_ = coeffs_fuzzy_;
        r.neg_dropped_ = r.neg_dropped_ || neg_dropped_;
        return r;
    }

    /// (1+X) df/dX; exact on stored coefficients.
    RElem derive_partial() const {
        RElem r(pr_);
        for (const auto& [k, c] : coeffs_) {
            Rational d = c * Rational(k);
            if (d == 0) continue;
            long klo = k - 1;
            if (klo >= pr_.kmin) r.set_coeff(klo, r.coeff(klo) + d);
            else r.drop(klo, d);
            r.set_coeff(k, r.coeff(k) + d);
        }
        // degree factors do not lower valuations
        for (size_t i = 0; i < tails_.size(); ++i) r.tails_[i].merge(tails_[i]);
        r.coeffs_fuzzy_ = coeffs_fuzzy_;
        r.neg_dropped_ = r.neg_dropped_ || neg_dropped_;
        return r;
    }

    /// Substitute S for X on the stored coefficients: sum a_k S^k.
    /// Negative powers need the caller to pass S^{-1}. The caller transports
    /// the input's own tail bounds (the level shift depends on S).
    static RElem substitute(const RElem& f, const RElem& s, const RElem* s_inv) {
        RElem out(f.pr_);
        if (f.coeffs_.empty()) return out;
        long lo = f.support_min();
        long hi = f.support_max();
        if (hi >= 1) {
            RElem acc(f.pr_);
            for (long k = hi; k >= 1; --k) {
                Rational c = f.coeff(k);
                if (c != 0) acc = acc + constant(f.pr_, c);
                acc = acc * s;
            }
            out = out + acc;
        }
        if (Rational c0 = f.coeff(0); c0 != 0) out = out + constant(f.pr_, c0);
        if (lo <= -1) {
            if (!s_inv) throw NotInvertible("substitution needs an inverse image for negative powers");
            RElem pw = *s_inv;
            for (long k = -1; k >= lo; --k) {
                Rational c = f.coeff(k);
                if (c != 0) out = out + pw * c;
                if (k > lo) pw = pw * (*s_inv);
            }
        }
        return out;
    }

    friend bool operator==(const RElem& a, const RElem& b) {
        a.check(b);
        return (a - b).stored_zero();
    }

    /// min over window exponents of v_p(a_k - b_k); nullopt when stored
    /// coefficients agree exactly.
    static std::optional<Rational> disagreement(const RElem& a, const RElem& b) {
        RElem d = a - b;
        std::optional<Rational> out;
        for (const auto& [k, c] : d.coeffs_) {
            Rational v(vp(c, a.pr_.p));
            if (!out || v < *out) out = v;
        }
        return out;
    }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (const auto& [k, c] : coeffs_) {
            if (!first) os << " + ";
            os << "(" << c.str() << ")";
            if (k != 0) os << "*X^" << k;
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

    void check(const RElem& b) const {
        if (!(pr_ == b.pr_)) throw ProfileMismatch("window profiles differ");
    }

private:
    size_t idx(long n) const { return static_cast<size_t>(n - pr_.n0); }

    Profile pr_;
    std::map<long, Rational> coeffs_;
    std::vector<Floor> tails_;
    bool coeffs_fuzzy_ = false;
    bool neg_dropped_ = false;
};

} // namespace robba
