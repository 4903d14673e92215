#pragma once

#include <map>
#include <mutex>
#include <sstream>
#include <vector>

#include "linalg.hpp"
#include "padic.hpp"

namespace robba {

/// Ramification degree e(n) = p^{n-1}(p-1) of Q_p(zeta_{p^n}) / Q_p.
inline long cyclo_degree(long p, long n) {
    long e = p - 1;
    for (long i = 1; i < n; ++i) e *= p;
    return e;
}

namespace detail {

/// (1+Y)^m - 1 as integer coefficients.
inline std::vector<Integer> binomial_shift_poly(long p, long n) {
    Integer m = ipow(p, static_cast<unsigned long>(n));
    unsigned long deg = m.convert_to<unsigned long>();
    std::vector<Integer> c(deg + 1);
    Integer b = 1;
    for (unsigned long k = 0; k <= deg; ++k) {
        c[k] = b;
        b = b * (m - k) / Integer(k + 1);
    }
    c[0] -= 1;
    return c;
}

/// Exact division of integer polynomials (remainder must vanish).
inline std::vector<Integer> poly_divide_exact(std::vector<Integer> num,
                                              const std::vector<Integer>& den) {
    std::vector<Integer> q(num.size() - den.size() + 1);
    for (size_t i = q.size(); i-- > 0;) {
        Integer f = num[i + den.size() - 1] / den.back();
        q[i] = f;
        for (size_t j = 0; j < den.size(); ++j) num[i + j] -= f * den[j];
    }
    return q;
}

struct CycloTables {
    std::vector<Rational> minpoly;          // monic, degree e
    std::vector<std::vector<Rational>> red; // pi^(e+k) reduced, k = 0..e-2
};

/// Minimal polynomial of pi_n = zeta_{p^n} - 1 over Q_p, with reduction
/// rows for products; memoized.
inline const CycloTables& cyclo_tables(long p, long n) {
    static std::mutex mu;
    static std::map<std::pair<long, long>, CycloTables> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find({p, n});
    if (it != cache.end()) return it->second;

    std::vector<Integer> q;
    if (n == 1) {
        q = binomial_shift_poly(p, 1);
        std::vector<Integer> y = {Integer(0), Integer(1)};
        q = poly_divide_exact(q, y);
    } else {
        q = poly_divide_exact(binomial_shift_poly(p, n), binomial_shift_poly(p, n - 1));
    }
    CycloTables t;
    t.minpoly.assign(q.size(), Rational(0));
    for (size_t i = 0; i < q.size(); ++i) t.minpoly[i] = Rational(q[i]);

    long e = cyclo_degree(p, n);
    // pi^e reduced is minus the sub-leading part of the minimal polynomial;
    // higher powers follow by multiplying through by pi.
    std::vector<Rational> cur(static_cast<size_t>(e));
    for (long i = 0; i < e; ++i) cur[static_cast<size_t>(i)] = -t.minpoly[static_cast<size_t>(i)];
    for (long k = 0; k <= e - 2; ++k) {
        t.red.push_back(cur);
        std::vector<Rational> next(static_cast<size_t>(e), Rational(0));
        Rational top = cur[static_cast<size_t>(e - 1)];
        for (long i = e - 1; i > 0; --i) next[static_cast<size_t>(i)] = cur[static_cast<size_t>(i - 1)];
        if (top != 0)
            for (long i = 0; i < e; ++i)
                next[static_cast<size_t>(i)] -= top * t.minpoly[static_cast<size_t>(i)];
        cur = next;
    }
    return cache.emplace(std::make_pair(p, n), std::move(t)).first->second;
}

} // namespace detail

/// Element of K_n = Q_p(zeta_{p^n}) on the power basis of pi_n = zeta_{p^n}-1.
class Cyclo {
public:
    Cyclo() : p_(2), n_(1), coeffs_(1, PAdic(2, 0)) {}

    Cyclo(long p, long n) : p_(p), n_(n), coeffs_(static_cast<size_t>(cyclo_degree(p, n)), PAdic(p, 0)) {}

    static Cyclo from_rational(long p, long n, const Rational& c,
                               std::optional<long> prec = std::nullopt) {
        Cyclo x(p, n);
        x.coeffs_[0] = PAdic(p, c, prec);
        return x;
    }

    static Cyclo uniformizer(long p, long n) {
        Cyclo x(p, n);
        if (x.degree() == 1) {
            // pi_1 for p = 2 is -2; otherwise the basis has genuine degree
            const auto& t = detail::cyclo_tables(p, n);
            x.coeffs_[0] = PAdic(p, -t.minpoly[0]);
        } else {
            x.coeffs_[1] = PAdic(p, 1);
        }
        return x;
    }

    long prime() const { return p_; }
    long level() const { return n_; }
    long degree() const { return static_cast<long>(coeffs_.size()); }
    const std::vector<PAdic>& coeffs() const { return coeffs_; }
    PAdic& coeff(long i) { return coeffs_[static_cast<size_t>(i)]; }
    const PAdic& coeff(long i) const { return coeffs_[static_cast<size_t>(i)]; }

    bool is_zero() const {
        for (const auto& c : coeffs_)
            if (!c.is_zero()) return false;
        return true;
    }

    /// Valuation normalized by v(p) = 1: min_i v_p(c_i) + i/e.
    Rational valuation() const {
        long e = degree();
        std::optional<Rational> best;
        std::optional<Rational> zero_floor; // what a capped zero could hide
        for (long i = 0; i < e; ++i) {
            const PAdic& c = coeffs_[static_cast<size_t>(i)];
            if (c.is_zero()) {
                if (c.abs_prec())
                    zero_floor = zero_floor
                                     ? std::min(*zero_floor, Rational(*c.abs_prec()) + Rational(i, e))
                                     : Rational(*c.abs_prec()) + Rational(i, e);
                continue;
            }
            Rational v = Rational(*c.valuation()) + Rational(i, e);
            if (!best || v < *best) best = v;
        }
        if (!best) throw IndeterminateZero("all coefficients vanish at precision");
        if (zero_floor && *zero_floor < *best)
            throw IndeterminateZero("capped coefficient could dominate the valuation");
        return *best;
    }

    Cyclo operator-() const {
        Cyclo r = *this;
        for (auto& c : r.coeffs_) c = -c;
        return r;
    }

    friend Cyclo operator+(const Cyclo& a, const Cyclo& b) {
        a.check(b);
        Cyclo r = a;
        for (size_t i = 0; i < r.coeffs_.size(); ++i) r.coeffs_[i] = r.coeffs_[i] + b.coeffs_[i];
        return r;
    }
    friend Cyclo operator-(const Cyclo& a, const Cyclo& b) { return a + (-b); }

    friend Cyclo operator*(const Cyclo& a, const Cyclo& b) {
        a.check(b);
        long e = a.degree();
        const auto& tables = detail::cyclo_tables(a.p_, a.n_);
        std::vector<PAdic> prod(static_cast<size_t>(2 * e - 1), PAdic(a.p_, 0));
        for (long i = 0; i < e; ++i) {
            if (a.coeffs_[static_cast<size_t>(i)].is_zero() && a.coeffs_[static_cast<size_t>(i)].exact())
                continue;
            for (long j = 0; j < e; ++j)
                prod[static_cast<size_t>(i + j)] =
                    prod[static_cast<size_t>(i + j)] +
                    a.coeffs_[static_cast<size_t>(i)] * b.coeffs_[static_cast<size_t>(j)];
        }
        Cyclo r(a.p_, a.n_);
        for (long i = 0; i < e; ++i) r.coeffs_[static_cast<size_t>(i)] = prod[static_cast<size_t>(i)];
        for (long k = 0; k < e - 1; ++k) {
            const PAdic& c = prod[static_cast<size_t>(e + k)];
            if (c.is_zero() && c.exact()) continue;
            for (long i = 0; i < e; ++i)
                r.coeffs_[static_cast<size_t>(i)] =
                    r.coeffs_[static_cast<size_t>(i)] +
                    c * PAdic(a.p_, tables.red[static_cast<size_t>(k)][static_cast<size_t>(i)]);
        }
        return r;
    }

    friend Cyclo operator*(const Cyclo& a, const Rational& s) {
        Cyclo r = a;
        for (auto& c : r.coeffs_) c = c * PAdic(a.p_, s);
        return r;
    }
    friend Cyclo operator*(const Rational& s, const Cyclo& a) { return a * s; }

    Cyclo inverse() const {
        if (is_zero()) throw DivisionByZero("inverse of zero cyclotomic element");
        long e = degree();
        // linear solve against the minimal polynomial: columns are pi^j * x
        QMatrix m(e, e);
        Cyclo col = *this;
        Cyclo pi = uniformizer(p_, n_);
        for (long j = 0; j < e; ++j) {
            for (long i = 0; i < e; ++i) m(i, j) = col.coeffs_[static_cast<size_t>(i)].value();
            if (j + 1 < e) col = col * pi;
        }
        QVector rhs(e);
        rhs.setZero();
        rhs(0) = 1;
        auto sol = solve(m, rhs);
        if (!sol) throw NotInvertible("cyclotomic inverse: singular multiplication matrix");
        Cyclo r(p_, n_);
        std::optional<long> cap;
        for (const auto& c : coeffs_)
            if (c.abs_prec()) cap = cap ? std::min(*cap, *c.abs_prec()) : *c.abs_prec();
        if (cap) {
            long shift = 2 * (1 + static_cast<long>(boost::multiprecision::abs(
                                      numerator(valuation()) / denominator(valuation()))
                                      .convert_to<long>()));
            *cap -= shift;
            if (*cap <= 0) throw PrecisionExhausted("cyclotomic inverse has no justified digit");
        }
        for (long i = 0; i < e; ++i) r.coeffs_[static_cast<size_t>(i)] = PAdic(p_, (*sol)(i), cap);
        return r;
    }

    /// Image under the embedding K_n -> K_{n+1}, pi_n = (1+pi_{n+1})^p - 1.
    Cyclo embed_up() const {
        Cyclo pi_up = uniformizer(p_, n_ + 1);
        Cyclo img = Cyclo::from_rational(p_, n_ + 1, 0);
        // (1+pi)^p - 1 at the higher level
        Cyclo base = Cyclo::from_rational(p_, n_ + 1, 1) + pi_up;
        Cyclo pw = Cyclo::from_rational(p_, n_ + 1, 1);
        for (long i = 0; i < p_; ++i) pw = pw * base;
        img = pw - Cyclo::from_rational(p_, n_ + 1, 1);
        // Horner on our coefficients
        Cyclo acc(p_, n_ + 1);
        for (long i = degree(); i-- > 0;) {
            acc = acc * img;
            acc.coeffs_[0] = acc.coeffs_[0] + coeffs_[static_cast<size_t>(i)];
        }
        return acc;
    }

    /// Galois twist zeta -> zeta^a: substitute pi -> (1+pi)^a - 1.
    Cyclo galois_twist(long a) const {
        Cyclo pi = uniformizer(p_, n_);
        Cyclo one = Cyclo::from_rational(p_, n_, 1);
        Cyclo base = one + pi;
        Cyclo img = one;
        long aa = a % ipow(p_, static_cast<unsigned long>(n_)).convert_to<long>();
        if (aa < 0) aa += ipow(p_, static_cast<unsigned long>(n_)).convert_to<long>();
        for (long i = 0; i < aa; ++i) img = img * base;
        img = img - one;
        Cyclo acc(p_, n_);
        for (long i = degree(); i-- > 0;) {
            acc = acc * img;
            acc.coeffs_[0] = acc.coeffs_[0] + coeffs_[static_cast<size_t>(i)];
        }
        return acc;
    }

    friend bool operator==(const Cyclo& a, const Cyclo& b) {
        a.check(b);
        for (size_t i = 0; i < a.coeffs_.size(); ++i)
            if (!(a.coeffs_[i] == b.coeffs_[i])) return false;
        return true;
    }

    std::string str() const {
        std::ostringstream os;
        bool first = true;
        for (long i = 0; i < degree(); ++i) {
            const PAdic& c = coeffs_[static_cast<size_t>(i)];
            if (c.is_zero()) continue;
            if (!first) os << " + ";
            os << "(" << c.value().str() << ")";
            if (i == 1) os << "*pi";
            if (i > 1) os << "*pi^" << i;
            first = false;
        }
        if (first) os << "0";
        return os.str();
    }

private:
    void check(const Cyclo& b) const {
        if (p_ != b.p_ || n_ != b.n_) throw LevelMismatch("cyclotomic level or prime mismatch");
    }

    long p_, n_;
    std::vector<PAdic> coeffs_;
};

} // namespace robba
