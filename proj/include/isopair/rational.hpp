#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace isopair {

/// Arbitrary-precision integers and canonical (reduced, positive denominator) rationals.
using Integer = mpz_class;
using Rational = mpq_class;

Rational make_rational(long num, long den = 1);
Rational make_rational(const Integer& num, const Integer& den);

/// Parses "p", "-p" or "p/q". Throws std::invalid_argument on malformed input or q = 0.
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);
std::string to_string(const Integer& z);

/// Correctly rounded up to 1 ulp (truncating conversion of the exact value).
double to_double(const Rational& q);

inline bool is_integer(const Rational& q) { return q.get_den() == 1; }

}  // namespace isopair
