#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace robba {

using QMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using QVector = Eigen::Matrix<Rational, Eigen::Dynamic, 1>;

/// In-place reduced row echelon form; returns the pivot columns.
inline std::vector<int> rref(QMatrix& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols() && row < m.rows(); ++col) {
        int piv = -1;
        for (int r = row; r < m.rows(); ++r)
            if (m(r, col) != 0) { piv = r; break; }
        if (piv < 0) continue;
        m.row(piv).swap(m.row(row));
        Rational inv = Rational(1) / m(row, col);
        for (int c = col; c < m.cols(); ++c) m(row, c) *= inv;
        for (int r = 0; r < m.rows(); ++r) {
            if (r == row || m(r, col) == 0) continue;
            Rational f = m(r, col);
            for (int c = col; c < m.cols(); ++c) m(r, c) -= f * m(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline int rank(const QMatrix& m) {
    QMatrix c = m;
    return static_cast<int>(rref(c).size());
}

/// Kernel basis as matrix columns (empty matrix when trivial).
inline QMatrix kernel(const QMatrix& m) {
    QMatrix r = m;
    std::vector<int> piv = rref(r);
    std::vector<int> free_cols;
    for (int c = 0; c < m.cols(); ++c)
        if (std::find(piv.begin(), piv.end(), c) == piv.end()) free_cols.push_back(c);
    QMatrix ker(m.cols(), static_cast<int>(free_cols.size()));
    ker.setZero();
    for (int j = 0; j < static_cast<int>(free_cols.size()); ++j) {
        int fc = free_cols[j];
        ker(fc, j) = 1;
        for (int i = 0; i < static_cast<int>(piv.size()); ++i) ker(piv[i], j) = -r(i, fc);
    }
    return ker;
}

/// Solve A x = b exactly; nullopt when inconsistent.
inline std::optional<QVector> solve(const QMatrix& a, const QVector& b) {
    QMatrix aug(a.rows(), a.cols() + 1);
    aug.leftCols(a.cols()) = a;
    aug.col(a.cols()) = b;
    std::vector<int> piv = rref(aug);
    if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
    QVector x(a.cols());
    x.setZero();
    for (int i = 0; i < static_cast<int>(piv.size()); ++i) x(piv[i]) = aug(i, a.cols());
    return x;
}

inline Rational determinant(const QMatrix& m) {
    QMatrix a = m;
    int n = static_cast<int>(a.rows());
    Rational det = 1;
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a(r, col) != 0) { piv = r; break; }
        if (piv < 0) return Rational(0);
        if (piv != col) { a.row(piv).swap(a.row(col)); det = -det; }
        det *= a(col, col);
        Rational inv = Rational(1) / a(col, col);
        for (int r = col + 1; r < n; ++r) {
            if (a(r, col) == 0) continue;
            Rational f = a(r, col) * inv;
            for (int c = col; c < n; ++c) a(r, c) -= f * a(col, c);
        }
    }
    return det;
}

inline QMatrix inverse(const QMatrix& m) {
    int n = static_cast<int>(m.rows());
    QMatrix aug(n, 2 * n);
    aug.leftCols(n) = m;
    aug.rightCols(n).setIdentity();
    std::vector<int> piv = rref(aug);
    if (static_cast<int>(piv.size()) < n) throw NotInvertible("singular matrix");
    return aug.rightCols(n);
}

/// True when v lies in the column span of basis.
inline bool in_span(const QMatrix& basis, const QVector& v) {
    if (basis.cols() == 0) return v.isZero();
    QMatrix aug(basis.rows(), basis.cols() + 1);
    aug.leftCols(basis.cols()) = basis;
    aug.col(basis.cols()) = v;
    return rank(aug) == rank(basis);
}

/// Column-span basis in reduced form.
inline QMatrix span_basis(const QMatrix& m) {
    QMatrix t = m.transpose();
    std::vector<int> piv = rref(t);
    QMatrix out(m.rows(), static_cast<int>(piv.size()));
    for (int i = 0; i < static_cast<int>(piv.size()); ++i) out.col(i) = t.row(i).transpose();
    return out;
}

/// Basis of the intersection of two column spans.
inline QMatrix intersect_spans(const QMatrix& a, const QMatrix& b) {
    if (a.cols() == 0 || b.cols() == 0) return QMatrix(a.rows(), 0);
    QMatrix joint(a.rows(), a.cols() + b.cols());
    joint.leftCols(a.cols()) = a;
    joint.rightCols(b.cols()) = -b;
    QMatrix ker = kernel(joint);
    QMatrix vecs(a.rows(), ker.cols());
    for (int j = 0; j < ker.cols(); ++j)
        vecs.col(j) = a * ker.col(j).head(a.cols());
    return span_basis(vecs);
}

inline QMatrix sum_spans(const QMatrix& a, const QMatrix& b) {
    QMatrix joint(a.rows(), a.cols() + b.cols());
    joint.leftCols(a.cols()) = a;
    joint.rightCols(b.cols()) = b;
    return span_basis(joint);
}

/// Characteristic polynomial coefficients c_0..c_n of det(tI - M),
/// by the Faddeev-LeVerrier recursion.
inline std::vector<Rational> char_poly(const QMatrix& m) {
    int n = static_cast<int>(m.rows());
    std::vector<Rational> c(static_cast<size_t>(n) + 1);
    c[n] = 1;
    QMatrix mk = QMatrix::Zero(n, n);
    QMatrix id = QMatrix::Identity(n, n);
    for (int k = 1; k <= n; ++k) {
        mk = m * mk + c[n - k + 1] * id;
        QMatrix prod = m * mk;
        Rational tr = 0;
        for (int i = 0; i < n; ++i) tr += prod(i, i);
        c[n - k] = -tr / Rational(k);
    }
    return c;
}

/// All rational roots (with multiplicity) of a polynomial with rational
/// coefficients c_0 + c_1 t + ... ; remaining_degree reports what is left
/// unfactored.
struct RationalRoots {
    std::vector<std::pair<Rational, int>> roots;
    int remaining_degree = 0;
};

inline RationalRoots rational_roots(std::vector<Rational> c) {
    RationalRoots out;
    while (c.size() > 1 && c.back() == 0) c.pop_back();
    // strip t^k factor
    size_t shift = 0;
    while (shift < c.size() - 1 && c[shift] == 0) ++shift;
    if (shift > 0) {
        out.roots.emplace_back(Rational(0), static_cast<int>(shift));
        c.erase(c.begin(), c.begin() + static_cast<long>(shift));
    }
    auto eval = [&](const Rational& x) {
        Rational v = 0;
        for (size_t i = c.size(); i-- > 0;) v = v * x + c[i];
        return v;
    };
    auto deflate = [&](const Rational& r) {
        std::vector<Rational> q(c.size() - 1);
        Rational carry = c.back();
        for (size_t i = c.size() - 1; i-- > 0;) {
            q[i] = carry;
            carry = c[i] + carry * r;
        }
        c = q;
    };
    // clear denominators, then divisor search on the integer model
    while (c.size() > 1) {
        Integer den = 1;
        for (const auto& q : c) den = boost::multiprecision::lcm(den, denominator(q));
        std::vector<Integer> ic;
        ic.reserve(c.size());
        for (const auto& q : c) ic.push_back(numerator(q * Rational(den)));
        Integer a0 = boost::multiprecision::abs(ic.front());
        Integer an = boost::multiprecision::abs(ic.back());
        bool found = false;
        // candidate roots r/s with r | a0 and s | an
        std::vector<Integer> rs, ss;
        for (Integer d = 1; d * d <= a0; ++d)
            if (a0 % d == 0) { rs.push_back(d); rs.push_back(a0 / d); }
        if (a0 == 0) rs.push_back(0);
        for (Integer d = 1; d * d <= an; ++d)
            if (an % d == 0) { ss.push_back(d); ss.push_back(an / d); }
        for (const auto& r : rs) {
            for (const auto& s : ss) {
                for (int sign : {1, -1}) {
                    Rational cand = Rational(r * sign, s);
                    if (eval(cand) == 0) {
                        int mult = 0;
                        while (c.size() > 1 && eval(cand) == 0) { deflate(cand); ++mult; }
                        out.roots.emplace_back(cand, mult);
                        found = true;
                        break;
                    }
                }
                if (found) break;
            }
            if (found) break;
        }
        if (!found) break;
    }
    out.remaining_degree = static_cast<int>(c.size()) - 1;
    return out;
}

/// Slopes of the lower Newton polygon of c_0 + ... + c_n t^n at the prime p:
/// returns the multiset of valuations of the roots (counted with length).
inline std::vector<std::pair<Rational, int>> newton_polygon_root_valuations(
    const std::vector<Rational>& c, long p) {
    std::vector<std::pair<long, Rational>> pts; // (i, vp(c_i)) for c_i != 0
    for (size_t i = 0; i < c.size(); ++i)
        if (c[i] != 0) pts.emplace_back(static_cast<long>(i), Rational(vp(c[i], p)));
    std::vector<std::pair<Rational, int>> out;
    if (pts.size() < 2) return out;
    // lower convex hull from left to right
    std::vector<std::pair<long, Rational>> hull;
    for (const auto& pt : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull[hull.size() - 1];
            // keep hull lower-convex: slope(a,b) must stay < slope(a,pt)
            if ((b.second - a.second) * Rational(pt.first - a.first) >=
                (pt.second - a.second) * Rational(b.first - a.first))
                hull.pop_back();
            else
                break;
        }
        hull.push_back(pt);
    }
    for (size_t i = 0; i + 1 < hull.size(); ++i) {
        long run = hull[i + 1].first - hull[i].first;
        Rational rise = hull[i + 1].second - hull[i].second;
        // roots of valuation -slope, multiplicity = run
        out.emplace_back(-rise / Rational(run), static_cast<int>(run));
    }
    return out;
}

} // namespace robba
