#include "isopair/verma_context.hpp"

#include <algorithm>
#include <set>

namespace isopair {

bool is_admissible_weight(const Rational& h) {
  const Rational two_h = h * 2;
  return !(is_integer(two_h) && two_h <= 0);
}

VermaContext VermaContext::numeric(const Rational& h) {
  if (!is_admissible_weight(h)) throw std::domain_error("inadmissible highest weight h=" + to_string(h));
  return VermaContext(h);
}

RationalFunction VermaContext::specialize(const RationalFunction& f) const {
  return weight_ ? f.subs_h(*weight_) : f;
}

bool VermaContext::singular_at(const RationalFunction& f, long n) const {
  if (f.denominator().is_constant_in_n() && !weight_) {
    // A pure function of h has no integer poles in n.
    return false;
  }
  const UPoly d = f.denominator().eval_n(Rational(n));
  if (weight_) return d.eval(*weight_) == 0;
  if (d.is_zero()) return true;
  if (d.degree() <= 0) return false;
  for (const auto& r : rational_roots(d))
    if (is_admissible_weight(r)) return true;
  return false;
}

std::vector<long> VermaContext::integer_poles(const RationalFunction& f, long scan_limit) const {
  std::set<long> out;
  const BiPoly& den = f.denominator();
  if (den.is_constant_in_n()) return {};
  auto add_integer_roots = [&](const UPoly& in_n) {
    if (in_n.is_zero() || in_n.degree() <= 0) return;
    for (const auto& r : rational_roots(in_n))
      if (is_integer(r) && r >= 0) out.insert(r.get_num().get_si());
  };
  if (weight_) {
    std::vector<Rational> c;
    for (const auto& hc : den.coeffs()) c.push_back(hc.eval(*weight_));
    add_integer_roots(UPoly(std::move(c)));
    return {out.begin(), out.end()};
  }
  // Identically vanishing in h: common integer roots of the h-coefficients (as polynomials in n).
  const int dh = den.degree_h();
  UPoly common;
  for (int j = 0; j <= dh; ++j) {
    std::vector<Rational> c;
    for (const auto& hc : den.coeffs()) c.push_back(hc.coeff(j));
    common = gcd(common, UPoly(std::move(c)));
  }
  add_integer_roots(common);
  for (long n = 0; n < scan_limit; ++n)
    if (singular_at(f, n)) out.insert(n);
  return {out.begin(), out.end()};
}

}  // namespace isopair
