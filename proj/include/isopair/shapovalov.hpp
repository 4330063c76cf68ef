#pragma once

#include "isopair/rational_function.hpp"
#include "isopair/verma_context.hpp"

namespace isopair {

/// Exact ratio w(n+s)/w(n) of Shapovalov norms w(n) = |z^n|^2 = n! (2h)(2h+1)...(2h+n-1).
/// The recurrence w(n+1) = (n+1)(n+2h) w(n) is the one forced by making z and (xi+2h)d/dz
/// mutually adjoint. Only ratios appear in exact computations; w(n) itself is never formed.
RationalFunction weight_ratio(long s, const VermaContext& ctx = VermaContext::symbolic());

/// w(n+s)/w(n) at concrete n >= 0, n+s >= 0 and h. Exact and pole-free for admissible h.
Rational weight_ratio_at(long s, long n, const Rational& h);

}  // namespace isopair
