#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <string_view>

namespace cochain {

using Natural = mpz_class;
using Rational = mpq_class;

/// Canonical "p/q" rendering: lowest terms, sign on the numerator, q >= 1.
std::string to_string(const Rational& r);
std::string to_string(const Natural& n);

/// Accepts "p/q" or a bare integer "p". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);
Natural parse_natural(std::string_view text);

/// 2^-k as an exact rational.
Rational pow2_neg(unsigned k);

/// num * 2^-k.
Rational dyadic(const Natural& num, unsigned k);

/// The dyadic with denominator 2^bits nearest to x (ties away from zero).
Rational round_to_dyadic(double x, unsigned bits);

/// Smallest dyadic with denominator 2^bits that is >= x.
Rational ceil_to_dyadic(double x, unsigned bits);

/// floor(sqrt(n)) for n >= 0.
Natural isqrt(const Natural& n);

/// Rational a with |sqrt(s) - a| < 2^-k, for s >= 0.
Rational sqrt_approx(const Rational& s, unsigned k);

/// Truncating conversion; relative error below 2^-52 for values in the normal range.
inline double to_double(const Rational& r) { return r.get_d(); }

}  // namespace cochain
