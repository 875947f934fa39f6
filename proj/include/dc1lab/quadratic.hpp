#pragma once

#include <compare>
#include <string>

#include "dc1lab/rational.hpp"

namespace dc1lab::systems {

// Element a + b*sqrt(5) of the real quadratic field Q(sqrt5), with exact
// rational coefficients. Ordering agrees with the real embedding and is
// decided by sign cases plus the comparison a^2 vs 5 b^2; no floating
// point anywhere. sqrt(5) is irrational, so a + b*sqrt5 = 0 iff a = b = 0,
// and coefficient equality is field equality.
class QuadraticNumber {
public:
    QuadraticNumber() : a_(0), b_(0) {}
    /*implicit*/ QuadraticNumber(Rational a) : a_(std::move(a)), b_(0) {}
    /*implicit*/ QuadraticNumber(long a) : a_(a), b_(0) {}
    QuadraticNumber(Rational a, Rational b) : a_(std::move(a)), b_(std::move(b)) {}

    static QuadraticNumber sqrt5() { return QuadraticNumber(Rational(0), Rational(1)); }
    // (sqrt5 - 1)/2, the golden rotation angle in [0,1).
    static QuadraticNumber golden() {
        return QuadraticNumber(Rational(-1, 2), Rational(1, 2));
    }

    const Rational& a() const { return a_; }
    const Rational& b() const { return b_; }
    bool is_rational() const { return sgn(b_) == 0; }
    const Rational& rational_value() const {
        if (!is_rational()) throw precondition_error("quadratic number is irrational");
        return a_;
    }

    int sign() const {
        const int sa = sgn(a_);
        const int sb = sgn(b_);
        if (sb == 0) return sa;
        if (sa == 0) return sb;
        if (sa == sb) return sa;
        // opposite signs: compare |a| vs |b|*sqrt5 via squares
        const Rational lhs = a_ * a_;
        const Rational rhs = 5 * b_ * b_;
        const int c = cmp(lhs, rhs);
        if (c == 0) return 0;  // unreachable for nonzero rationals; kept for safety
        return c > 0 ? sa : sb;
    }

    bool is_zero() const { return sgn(a_) == 0 && sgn(b_) == 0; }

    QuadraticNumber operator-() const { return {-a_, -b_}; }
    QuadraticNumber conjugate() const { return {a_, -b_}; }

    QuadraticNumber& operator+=(const QuadraticNumber& o) {
        a_ += o.a_;
        b_ += o.b_;
        return *this;
    }
    QuadraticNumber& operator-=(const QuadraticNumber& o) {
        a_ -= o.a_;
        b_ -= o.b_;
        return *this;
    }
    friend QuadraticNumber operator+(QuadraticNumber x, const QuadraticNumber& y) {
        return x += y;
    }
    friend QuadraticNumber operator-(QuadraticNumber x, const QuadraticNumber& y) {
        return x -= y;
    }
    friend QuadraticNumber operator*(const QuadraticNumber& x, const QuadraticNumber& y) {
        // (a + b s)(c + d s) = ac + 5bd + (ad + bc) s
        return {x.a_ * y.a_ + 5 * x.b_ * y.b_, x.a_ * y.b_ + x.b_ * y.a_};
    }
    friend QuadraticNumber operator*(const Rational& c, const QuadraticNumber& x) {
        return {c * x.a_, c * x.b_};
    }
    QuadraticNumber inverse() const {
        // 1/(a + b s) = (a - b s) / (a^2 - 5 b^2)
        if (is_zero()) throw precondition_error("division by zero quadratic number");
        const Rational norm = a_ * a_ - 5 * b_ * b_;
        return {a_ / norm, -b_ / norm};
    }
    friend QuadraticNumber operator/(const QuadraticNumber& x, const QuadraticNumber& y) {
        return x * y.inverse();
    }

    friend bool operator==(const QuadraticNumber& x, const QuadraticNumber& y) {
        return x.a_ == y.a_ && x.b_ == y.b_;
    }
    friend bool operator!=(const QuadraticNumber& x, const QuadraticNumber& y) {
        return !(x == y);
    }
    friend bool operator<(const QuadraticNumber& x, const QuadraticNumber& y) {
        return (x - y).sign() < 0;
    }
    friend bool operator<=(const QuadraticNumber& x, const QuadraticNumber& y) {
        return (x - y).sign() <= 0;
    }
    friend bool operator>(const QuadraticNumber& x, const QuadraticNumber& y) {
        return y < x;
    }
    friend bool operator>=(const QuadraticNumber& x, const QuadraticNumber& y) {
        return y <= x;
    }

    QuadraticNumber abs() const { return sign() < 0 ? -*this : *this; }

    void negate() {
        a_ = -a_;
        b_ = -b_;
    }
    void abs_in_place() {
        if (sign() < 0) negate();
    }

    // Exact floor. Estimates b*sqrt5 with the integer square root of 5*num(b)^2
    // (error < 1/den(b)), then fixes up with sign tests.
    Integer floor() const {
        if (is_rational()) return floor_rational(a_);
        Integer bn = b_.get_num();
        const Integer& bd = b_.get_den();
        Integer s;
        mpz_abs(bn.get_mpz_t(), bn.get_mpz_t());
        mpz_mul(s.get_mpz_t(), bn.get_mpz_t(), bn.get_mpz_t());
        mpz_mul_ui(s.get_mpz_t(), s.get_mpz_t(), 5);
        mpz_sqrt(s.get_mpz_t(), s.get_mpz_t());  // s = isqrt(5*bn^2)
        Rational root(s, bd);
        root.canonicalize();
        if (sgn(b_) < 0) root = -root;
        Integer n = floor_rational(a_ + root);
        while ((*this - QuadraticNumber(Rational(n))).sign() < 0) --n;
        while ((*this - QuadraticNumber(Rational(n + 1))).sign() >= 0) ++n;
        return n;
    }

    // Fractional part in [0,1).
    QuadraticNumber mod1() const {
        return *this - QuadraticNumber(Rational(floor()));
    }

    std::string str() const {
        if (is_rational()) return a_.get_str();
        return a_.get_str() + "+" + b_.get_str() + "*r5";
    }

private:
    Rational a_, b_;
};

inline QuadraticNumber min(const QuadraticNumber& x, const QuadraticNumber& y) {
    return x <= y ? x : y;
}
inline QuadraticNumber max(const QuadraticNumber& x, const QuadraticNumber& y) {
    return x >= y ? x : y;
}

// In-place x = (x + angle) mod 1 for x, angle in [0,1); sized for tight orbit
// loops (the wrap needs at most one subtraction).
inline void add_mod1(QuadraticNumber& x, const QuadraticNumber& angle,
                     QuadraticNumber& scratch) {
    static const QuadraticNumber one{Rational(1)};
    x += angle;
    scratch = x;
    scratch -= one;
    if (scratch.sign() >= 0) x = scratch;
}

}  // namespace dc1lab::systems
