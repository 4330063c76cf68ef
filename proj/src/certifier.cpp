#include "isopair/certifier.hpp"

#include <algorithm>
#include <climits>

namespace isopair {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::kZero: return "zero";
    case Verdict::kTraceClass: return "trace-class";
    case Verdict::kHilbertSchmidt: return "hilbert-schmidt";
    case Verdict::kBoundedNotCompact: return "bounded-not-compact";
    case Verdict::kUnbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

Verdict verdict_for_delta(int delta) {
  if (delta >= 1) return Verdict::kUnbounded;
  if (delta == 0) return Verdict::kBoundedNotCompact;
  if (delta == -1) return Verdict::kHilbertSchmidt;
  return Verdict::kTraceClass;
}

std::vector<Rational> distinct(std::vector<Rational> roots) {
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  return roots;
}

}  // namespace

TermClass classify_term(const ShiftTerm& term, const VermaContext& ctx) {
  TermClass out;
  out.offset = term.offset;
  out.exceptional_poly = UPoly(Rational(1));
  if (term.stable.is_zero()) {
    out.delta = INT_MIN;
    out.verdict = Verdict::kZero;
    return out;
  }
  const auto deg = term.stable.degree_n();
  // |w(n+s)/w(n)|^(1/2) grows like n^s; without an inner product only raw coefficients count.
  out.delta = deg.degree + (ctx.unitarizable() ? static_cast<int>(term.offset) : 0);
  out.verdict = verdict_for_delta(out.delta);
  out.leading = deg.leading;
  const UPoly num = deg.leading.numerator().coeff_n(0);
  if (!num.is_constant()) {
    out.exceptional_poly = num.monic();
    out.exceptional_roots = distinct(rational_roots(num));
  }
  return out;
}

std::optional<RationalFunction> scalar_part(const ShiftOperator& a) {
  const ShiftTerm* diag = a.term(0);
  if (!diag) return std::nullopt;
  if (diag->stable.is_zero()) return RationalFunction();
  const auto deg = diag->stable.degree_n();
  if (deg.degree > 0) return std::nullopt;
  if (deg.degree < 0) return RationalFunction();
  return deg.leading;
}

ClassCertificate certify(const ShiftOperator& a, bool modulo_scalars) {
  ClassCertificate cert;
  cert.modulo_scalars = modulo_scalars;
  cert.inner_product = a.context().unitarizable();
  ShiftOperator rest = a;
  if (modulo_scalars) {
    cert.scalar_part = scalar_part(a);
    if (cert.scalar_part && !cert.scalar_part->is_zero())
      rest = a - op_scale(op_identity(a.context()), *cert.scalar_part);
  }
  bool stable_nonzero = false;
  for (const auto& [s, t] : rest.terms()) {
    TermClass tc = classify_term(t, a.context());
    if (t.stable.is_zero()) {
      cert.terms.push_back(std::move(tc));
      continue;
    }
    stable_nonzero = true;
    cert.verdict = std::max(cert.verdict, tc.verdict);
    if (!tc.exceptional_poly.is_constant()) {
      const UPoly g = gcd(cert.exceptional_h_poly, tc.exceptional_poly);
      cert.exceptional_h_poly = cert.exceptional_h_poly * tc.exceptional_poly.divrem(g).first;
    }
    cert.terms.push_back(std::move(tc));
  }
  cert.finite_rank = !rest.is_zero() && !stable_nonzero;
  if (!cert.exceptional_h_poly.is_constant())
    cert.exceptional_h_roots = distinct(rational_roots(cert.exceptional_h_poly));
  return cert;
}

}  // namespace isopair
