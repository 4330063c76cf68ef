#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isopair/shift_operator.hpp"

namespace isopair {

/// Operator classes, ordered from strongest to weakest. For banded operators with rational
/// coefficients compactness and the Hilbert-Schmidt property coincide.
enum class Verdict { kZero, kTraceClass, kHilbertSchmidt, kBoundedNotCompact, kUnbounded };

/// "zero", "trace-class", "hilbert-schmidt", "bounded-not-compact", "unbounded".
std::string to_string(Verdict v);

/// Asymptotic class of one weighted shift. Orthonormal matrix elements behave like n^delta.
struct TermClass {
  long offset = 0;
  int delta = 0;
  Verdict verdict = Verdict::kZero;
  /// Leading coefficient of the stable form in n, a function of h.
  RationalFunction leading;
  /// Numerator of `leading` (monic in h) and its rational roots: weights where the degree drops.
  UPoly exceptional_poly;
  std::vector<Rational> exceptional_roots;
};

/// Classifies the stable coefficient; boundary entries are finite-rank and never matter here.
/// A term whose stable part is zero is classified zero with delta = INT_MIN.
TermClass classify_term(const ShiftTerm& term, const VermaContext& ctx);

struct ClassCertificate {
  Verdict verdict = Verdict::kZero;
  bool modulo_scalars = false;
  std::optional<RationalFunction> scalar_part;
  std::vector<TermClass> terms;
  /// Product of the distinct per-term exceptional polynomials and its sorted distinct roots.
  UPoly exceptional_h_poly = UPoly(Rational(1));
  std::vector<Rational> exceptional_h_roots;
  /// The remainder has zero stable part but nonzero boundary entries. Such a remainder is a
  /// finite-rank perturbation and the verdict stays zero; callers wanting the strict reading
  /// check this flag.
  bool finite_rank = false;
  /// False outside the unitarizable range: delta then comes from raw monomial coefficients and
  /// the verdict is only meaningful as compact / not compact.
  bool inner_product = true;

  bool compact() const { return verdict <= Verdict::kHilbertSchmidt; }
};

/// Limit of the diagonal stable coefficient as n grows: the ratio of leading coefficients at
/// degree 0, zero below. None if there is no diagonal term or it grows with n.
std::optional<RationalFunction> scalar_part(const ShiftOperator& a);

/// Certifies the class of A, optionally after subtracting scalar_part(A) times the identity.
/// The verdict is the weakest over the stable parts of the remaining terms.
ClassCertificate certify(const ShiftOperator& a, bool modulo_scalars = false);

}  // namespace isopair
