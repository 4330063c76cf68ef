#pragma once

#include <map>
#include <string>
#include <vector>

#include "isopair/rational_function.hpp"
#include "isopair/verma_context.hpp"

namespace isopair {

/// One weighted shift z^n -> c(n) z^(n + offset) on the monomial basis of the Verma module.
///
/// `stable` is authoritative for n >= threshold. Below it, `boundary` overrides the stable
/// coefficient wherever the operational value differs from it or the stable form has a pole
/// (for some admissible h when h is symbolic). Boundary values are functions of h alone.
/// The effective value is 0 whenever n + offset < 0.
struct ShiftTerm {
  long offset = 0;
  RationalFunction stable;
  std::map<long, RationalFunction> boundary;
  long threshold = 0;

  /// Effective coefficient at degree n >= 0. Never throws for a validated term.
  RationalFunction value(long n) const;

  friend bool operator==(const ShiftTerm&, const ShiftTerm&) = default;
};

/// Input to op_make: an offset, a stable coefficient and optional boundary overrides.
struct TermSpec {
  long offset = 0;
  RationalFunction stable;
  std::map<long, RationalFunction> boundary = {};
};

/// Finite sum of weighted shifts with distinct offsets, all tied to one VermaContext.
/// Products follow operational semantics: (AB) z^n = A (B z^n), with a zero image absorbing.
class ShiftOperator {
 public:
  explicit ShiftOperator(VermaContext ctx = VermaContext::symbolic()) : ctx_(std::move(ctx)) {}

  const VermaContext& context() const { return ctx_; }
  const std::map<long, ShiftTerm>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// nullptr if there is no term at that offset.
  const ShiftTerm* term(long offset) const;
  long max_abs_offset() const;

  /// Coefficient of z^(n+offset) in the image of z^n; 0 if there is no such term.
  RationalFunction value(long offset, long n) const;

  /// One line per term: "offset s: coeff [boundary n=k: v, ...]"; "0" for the zero operator.
  std::string str() const;

  friend bool operator==(const ShiftOperator& a, const ShiftOperator& b) {
    return a.ctx_ == b.ctx_ && a.terms_ == b.terms_;
  }

  friend ShiftOperator op_make(const std::vector<TermSpec>& terms, const VermaContext& ctx);
  friend ShiftOperator op_add(const ShiftOperator& a, const ShiftOperator& b);
  friend ShiftOperator op_scale(const ShiftOperator& a, const RationalFunction& lambda);
  friend ShiftOperator op_compose(const ShiftOperator& a, const ShiftOperator& b);
  friend ShiftOperator op_adjoint(const ShiftOperator& a);

 private:
  VermaContext ctx_;
  std::map<long, ShiftTerm> terms_;
};

/// Validates and canonicalizes. Throws PoleError naming n for a pole at an integer n >= 0 that
/// is not shielded by a boundary entry; std::invalid_argument for repeated offsets.
ShiftOperator op_make(const std::vector<TermSpec>& terms, const VermaContext& ctx);
ShiftOperator op_add(const ShiftOperator& a, const ShiftOperator& b);
/// lambda must not depend on n.
ShiftOperator op_scale(const ShiftOperator& a, const RationalFunction& lambda);
ShiftOperator op_compose(const ShiftOperator& a, const ShiftOperator& b);
ShiftOperator op_commutator(const ShiftOperator& a, const ShiftOperator& b);
/// Adjoint for the Shapovalov form. Throws std::domain_error outside the unitarizable regime.
ShiftOperator op_adjoint(const ShiftOperator& a);

/// Image of sum_n v[n] z^n; coefficients are functions of h.
std::vector<RationalFunction> op_apply_vector(const ShiftOperator& a, const std::vector<RationalFunction>& v);

/// The identity operator and a diagonal operator with the given stable coefficient.
ShiftOperator op_identity(const VermaContext& ctx);
ShiftOperator op_diagonal(const RationalFunction& c, const VermaContext& ctx);

inline ShiftOperator operator+(const ShiftOperator& a, const ShiftOperator& b) { return op_add(a, b); }
inline ShiftOperator operator-(const ShiftOperator& a, const ShiftOperator& b) {
  return op_add(a, op_scale(b, RationalFunction(-1)));
}
inline ShiftOperator operator*(const ShiftOperator& a, const ShiftOperator& b) { return op_compose(a, b); }
inline ShiftOperator operator*(const RationalFunction& lambda, const ShiftOperator& a) { return op_scale(a, lambda); }

}  // namespace isopair
