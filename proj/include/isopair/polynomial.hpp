#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "isopair/rational.hpp"

namespace isopair {

/// Dense univariate polynomial over Q in the highest weight h; coeffs()[i] multiplies h^i.
/// Always trimmed: the zero polynomial has no coefficients.
class UPoly {
 public:
  UPoly() = default;
  UPoly(Rational c);  // NOLINT(google-explicit-constructor)
  explicit UPoly(std::vector<Rational> coeffs);

  static UPoly variable();

  bool is_zero() const { return c_.empty(); }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  const Rational& lc() const { return c_.back(); }
  const std::vector<Rational>& coeffs() const { return c_; }
  Rational coeff(int i) const;
  bool is_constant() const { return c_.size() <= 1; }

  Rational eval(const Rational& h) const;

  UPoly& operator+=(const UPoly& o);
  UPoly& operator-=(const UPoly& o);
  UPoly& operator*=(const Rational& s);

  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
  friend UPoly operator-(UPoly a) { return a *= Rational(-1); }
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  friend UPoly operator*(UPoly a, const Rational& s) { return a *= s; }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }
  friend bool operator<(const UPoly& a, const UPoly& b);

  /// Euclidean division over Q. Throws std::domain_error on division by zero.
  std::pair<UPoly, UPoly> divrem(const UPoly& d) const;
  UPoly monic() const;

 private:
  void trim();
  std::vector<Rational> c_;
};

/// Monic gcd; gcd(0, 0) = 0.
UPoly gcd(const UPoly& a, const UPoly& b);

/// Rational roots of p with multiplicity, ascending. Throws std::domain_error for p = 0.
std::vector<Rational> rational_roots(const UPoly& p);

std::string to_string(const UPoly& p, const std::string& var = "h");

/// Polynomial in (n, h) over Q, stored recursively as a polynomial in n with UPoly (in h)
/// coefficients. Monomials order lexicographically with n > h.
class BiPoly {
 public:
  using Monomial = std::pair<int, int>;  // (n exponent, h exponent)

  BiPoly() = default;
  BiPoly(Rational c);  // NOLINT(google-explicit-constructor)
  BiPoly(UPoly c);     // NOLINT(google-explicit-constructor)
  explicit BiPoly(std::vector<UPoly> coeffs);
  /// Builds from a sparse term map.
  static BiPoly from_terms(const std::map<Monomial, Rational>& terms);

  static BiPoly n();
  static BiPoly h();

  bool is_zero() const { return c_.empty(); }
  int degree_n() const { return static_cast<int>(c_.size()) - 1; }
  int degree_h() const;
  /// Coefficient of n^i as a polynomial in h.
  const UPoly& coeff_n(int i) const;
  const std::vector<UPoly>& coeffs() const { return c_; }
  const UPoly& lc_n() const { return c_.back(); }
  /// Rational coefficient of the lexicographically leading monomial.
  const Rational& lex_lc() const { return c_.back().lc(); }
  bool is_constant_in_n() const { return c_.size() <= 1; }
  bool is_constant() const { return c_.size() <= 1 && (c_.empty() || c_[0].is_constant()); }

  std::map<Monomial, Rational> terms() const;

  /// p(n + delta, h).
  BiPoly shift_n(const Integer& delta) const;
  /// p(value, h) as a polynomial in h.
  UPoly eval_n(const Rational& value) const;
  /// p(n, value).
  BiPoly subs_h(const Rational& value) const;
  Rational eval(const Rational& n, const Rational& h) const;
  /// p(replacement, h).
  BiPoly compose_n(const BiPoly& replacement) const;

  BiPoly& operator+=(const BiPoly& o);
  BiPoly& operator-=(const BiPoly& o);
  BiPoly& operator*=(const Rational& s);
  BiPoly& operator*=(const UPoly& s);

  friend BiPoly operator+(BiPoly a, const BiPoly& b) { return a += b; }
  friend BiPoly operator-(BiPoly a, const BiPoly& b) { return a -= b; }
  friend BiPoly operator-(BiPoly a) { return a *= Rational(-1); }
  friend BiPoly operator*(const BiPoly& a, const BiPoly& b);
  friend BiPoly operator*(BiPoly a, const Rational& s) { return a *= s; }
  friend bool operator==(const BiPoly& a, const BiPoly& b) { return a.c_ == b.c_; }
  friend bool operator<(const BiPoly& a, const BiPoly& b);

  /// Content in Q[h]: monic gcd of the n-coefficients.
  UPoly content() const;
  /// Exact division by a polynomial in h. Throws std::domain_error if not exact.
  BiPoly exact_div(const UPoly& d) const;
  /// Exact division in Q[n, h]. Throws std::domain_error if d does not divide *this.
  BiPoly exact_div(const BiPoly& d) const;
  /// Pseudo-remainder with respect to n.
  BiPoly prem(const BiPoly& d) const;

 private:
  void trim();
  std::vector<UPoly> c_;
};

/// Gcd in Q[n, h], normalized so that the lexicographically leading coefficient is 1.
BiPoly gcd(const BiPoly& a, const BiPoly& b);

/// Expanded rendering, monomials in descending lex order, e.g. "n^2+2*n*h-1/2".
std::string to_string(const BiPoly& p, const std::string& nvar = "n", const std::string& hvar = "h");

}  // namespace isopair
