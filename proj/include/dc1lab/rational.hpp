#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "dc1lab/errors.hpp"

namespace dc1lab {

// Exact rational numbers. GMP keeps values canonical (reduced, positive
// denominator), so equality is value equality.
using Integer = mpz_class;
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw precondition_error("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// mpz/mpq lack long long overloads; on this platform long is 64-bit.
inline Integer make_integer(long long v) { return Integer(static_cast<long>(v)); }
inline Rational rational_of(long long v) { return Rational(static_cast<long>(v)); }

// 2^k for k possibly negative.
inline Rational pow2(long k) {
    Rational r(1);
    if (k >= 0) {
        mpz_ui_pow_ui(r.get_num_mpz_t(), 2, static_cast<unsigned long>(k));
    } else {
        mpz_ui_pow_ui(r.get_den_mpz_t(), 2, static_cast<unsigned long>(-k));
    }
    return r;
}

inline Integer floor_rational(const Rational& r) {
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
    return q;
}

// Nearest integer, half-up. Used for checkpoint grids.
inline Integer round_rational(const Rational& r) {
    return floor_rational(r + Rational(1, 2));
}

// Parses "p", "-p/q" etc. Rejects anything else (no decimals, no floats).
inline Rational parse_rational(const std::string& text) {
    Rational r;
    if (text.empty() || mpq_set_str(r.get_mpq_t(), text.c_str(), 10) != 0)
        throw parse_error("not a rational: '" + text + "'");
    if (mpz_sgn(r.get_den_mpz_t()) == 0)
        throw parse_error("zero denominator: '" + text + "'");
    r.canonicalize();
    return r;
}

inline std::string to_string(const Rational& r) { return r.get_str(); }

inline uint64_t to_u64(const Integer& z) {
    if (z < 0 || !z.fits_ulong_p()) throw precondition_error("integer out of u64 range");
    return static_cast<uint64_t>(z.get_ui());
}

}  // namespace dc1lab
