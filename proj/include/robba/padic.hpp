#pragma once

#include <limits>
#include <optional>
#include <sstream>

#include "rational.hpp"

namespace robba {

/// Element of Q_p known modulo p^A for an absolute precision A, or exactly.
///
/// The representative is stored as an exact rational so that arithmetic on
/// exactly-known inputs stays exact; the precision field only caps what the
/// value is asserted to be. Standard propagation rules apply:
/// add: min of absolute precisions; mul: min(v(x)+A(y), v(y)+A(x));
/// inv: A - 2 v(x). An operation whose result would carry no justified digit
/// raises PrecisionExhausted.
class PAdic {
public:
    PAdic() : p_(2), value_(0) {}
    PAdic(long p, Rational value, std::optional<long> abs_prec = std::nullopt)
        : p_(p), value_(std::move(value)), prec_(abs_prec) {
        if (prec_ && value_ != 0 && vp(value_, p_) >= *prec_) value_ = 0;
    }

    long prime() const { return p_; }
    const Rational& value() const { return value_; }
    bool exact() const { return !prec_.has_value(); }
    std::optional<long> abs_prec() const { return prec_; }

    bool is_zero() const { return value_ == 0; }
    /// True when the value cannot be distinguished from zero, exactly or at precision.
    bool zero_at_precision() const { return value_ == 0; }

    /// Valuation; nullopt encodes +infinity (the exact zero).
    std::optional<long> valuation() const {
        if (value_ == 0) {
            if (prec_) throw IndeterminateZero("value vanishes at precision " + std::to_string(*prec_));
            return std::nullopt;
        }
        return vp(value_, p_);
    }

    /// Unit digits: value / p^v reduced mod p^k.
    Integer unit_digits(long k) const {
        if (value_ == 0) throw DivisionByZero("no unit part of zero");
        if (prec_ && vp(value_, p_) + k > *prec_)
            throw PrecisionExhausted("only " + std::to_string(*prec_ - vp(value_, p_)) +
                                     " unit digits are justified");
        return mod_ppow(unit_part(value_, p_), p_, k);
    }

    /// Digits of the unit part that the precision budget justifies.
    long relative_prec_or(long budget) const {
        if (value_ == 0) return 0;
        long v = vp(value_, p_);
        return prec_ ? *prec_ - v : budget;
    }

    PAdic operator-() const { return PAdic(p_, -value_, prec_); }

    friend PAdic operator+(const PAdic& a, const PAdic& b) {
        check_same(a, b);
        return PAdic(a.p_, a.value_ + b.value_, min_prec(a.prec_, b.prec_));
    }
    friend PAdic operator-(const PAdic& a, const PAdic& b) { return a + (-b); }

    friend PAdic operator*(const PAdic& a, const PAdic& b) {
        check_same(a, b);
        std::optional<long> prec;
        if (a.prec_ || b.prec_) {
            if (a.value_ == 0 || b.value_ == 0) {
                prec = min_prec(a.prec_, b.prec_); // conservative for capped zeros
            } else {
                long va = vp(a.value_, a.p_), vb = vp(b.value_, b.p_);
                long pa = a.prec_ ? *a.prec_ : std::numeric_limits<long>::max() / 2;
                long pb = b.prec_ ? *b.prec_ : std::numeric_limits<long>::max() / 2;
                prec = std::min(va + pb, vb + pa);
            }
        }
        return PAdic(a.p_, a.value_ * b.value_, prec);
    }

    PAdic inverse() const {
        if (value_ == 0) throw DivisionByZero("inverse of zero");
        std::optional<long> prec;
        if (prec_) {
            long v = vp(value_, p_);
            prec = *prec_ - 2 * v;
            if (*prec <= 0)
                throw PrecisionExhausted("inverse would carry no justified digit");
        }
        return PAdic(p_, Rational(1) / value_, prec);
    }

    friend bool operator==(const PAdic& a, const PAdic& b) {
        check_same(a, b);
        auto prec = min_prec(a.prec_, b.prec_);
        Rational d = a.value_ - b.value_;
        if (d == 0) return true;
        return prec && vp(d, a.p_) >= *prec;
    }

    std::string str() const {
        std::ostringstream os;
        os << value_.str();
        if (prec_) os << " + O(" << p_ << "^" << *prec_ << ")";
        return os.str();
    }

private:
    static void check_same(const PAdic& a, const PAdic& b) {
        if (a.p_ != b.p_) throw LevelMismatch("mixed primes in p-adic arithmetic");
    }
    static std::optional<long> min_prec(const std::optional<long>& a, const std::optional<long>& b) {
        if (!a) return b;
        if (!b) return a;
        return std::min(*a, *b);
    }

    long p_;
    Rational value_;
    std::optional<long> prec_;
};

} // namespace robba
