#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "isopair/polynomial.hpp"

namespace isopair {

/// Raised when a rational function is evaluated at a zero of its denominator.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Exact element of Q(n, h) in canonical form: numerator and denominator coprime, the
/// denominator's lexicographically leading coefficient (n > h) equal to 1, zero as 0/1.
/// Equal functions have identical representations.
class RationalFunction {
 public:
  RationalFunction() : den_(Rational(1)) {}
  RationalFunction(Rational c);  // NOLINT(google-explicit-constructor)
  RationalFunction(long c) : RationalFunction(Rational(c)) {}  // NOLINT
  RationalFunction(BiPoly num);  // NOLINT(google-explicit-constructor)
  /// Normalizes num/den. Throws std::domain_error if den is zero.
  RationalFunction(BiPoly num, BiPoly den);

  static RationalFunction n() { return RationalFunction(BiPoly::n()); }
  static RationalFunction h() { return RationalFunction(BiPoly::h()); }

  const BiPoly& numerator() const { return num_; }
  const BiPoly& denominator() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant_in_n() const { return num_.is_constant_in_n() && den_.is_constant_in_n(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  /// Value of a constant function. Throws std::logic_error otherwise.
  Rational constant_value() const;

  RationalFunction& operator+=(const RationalFunction& o);
  RationalFunction& operator-=(const RationalFunction& o);
  RationalFunction& operator*=(const RationalFunction& o);
  RationalFunction& operator/=(const RationalFunction& o);

  friend RationalFunction operator+(RationalFunction a, const RationalFunction& b) { return a += b; }
  friend RationalFunction operator-(RationalFunction a, const RationalFunction& b) { return a -= b; }
  friend RationalFunction operator*(RationalFunction a, const RationalFunction& b) { return a *= b; }
  friend RationalFunction operator/(RationalFunction a, const RationalFunction& b) { return a /= b; }
  friend RationalFunction operator-(const RationalFunction& a);
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator<(const RationalFunction& a, const RationalFunction& b);

  /// f(n + delta, h).
  RationalFunction shift_n(long delta) const;
  /// f(value, h) as a function of h alone. Throws PoleError if the denominator vanishes
  /// identically there.
  RationalFunction eval_n(const Rational& value) const;
  /// f(n, value). Throws PoleError if the denominator vanishes identically there.
  RationalFunction subs_h(const Rational& value) const;
  /// Exact value at (n, h). Throws PoleError naming the point.
  Rational eval(const Rational& n, const Rational& h) const;

  struct NDegree;
  /// deg_n(num) - deg_n(den) and the ratio of the leading n-coefficients.
  /// Throws std::domain_error for the zero function.
  NDegree degree_n() const;

  /// f(replacement, h); replacement is a rational function in (n, h).
  RationalFunction compose_n(const RationalFunction& replacement) const;

  /// Canonical text, parseable by parse_rational_function. Variable names can be overridden
  /// for display (e.g. a spectral variable in place of n).
  std::string str(const std::string& nvar = "n", const std::string& hvar = "h") const;

 private:
  struct Raw {};
  RationalFunction(BiPoly num, BiPoly den, Raw) : num_(std::move(num)), den_(std::move(den)) {}
  void normalize();

  BiPoly num_;
  BiPoly den_;
};

struct RationalFunction::NDegree {
  int degree;
  RationalFunction leading;  // function of h alone
};

/// Builds a canonical rational function; alias of the two-argument constructor.
RationalFunction rf_normalize(const BiPoly& num, const BiPoly& den);

/// Parses the canonical text form (and any expression in n, h with + - * / ^ and parentheses).
/// Throws ParseError (see expression.hpp) on malformed input.
RationalFunction parse_rational_function(std::string_view text);

inline std::string to_string(const RationalFunction& f) { return f.str(); }

}  // namespace isopair
