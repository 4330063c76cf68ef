#include "isopair/shapovalov.hpp"

#include <algorithm>

namespace isopair {

RationalFunction weight_ratio(long s, const VermaContext& ctx) {
  if (s < 0) return ctx.specialize(RationalFunction(1) / weight_ratio(-s).shift_n(s));
  const RationalFunction n = RationalFunction::n();
  const RationalFunction two_h = RationalFunction::h() * Rational(2);
  RationalFunction acc(1);
  for (long j = 1; j <= s; ++j) acc *= (n + Rational(j)) * (n + two_h + Rational(j - 1));
  return ctx.specialize(acc);
}

Rational weight_ratio_at(long s, long n, const Rational& h) {
  if (n < 0 || n + s < 0) throw std::domain_error("weight ratio outside the module");
  // w(n+s)/w(n) = prod over the steps between the two degrees.
  Rational acc(1);
  const long lo = std::min(n, n + s), hi = std::max(n, n + s);
  for (long m = lo; m < hi; ++m) acc *= Rational(m + 1) * (Rational(m) + 2 * h);
  if (acc == 0) throw PoleError("degenerate Shapovalov norm at h=" + to_string(h));
  return s >= 0 ? acc : Rational(1 / acc);
}

}  // namespace isopair
