#pragma once

#include <optional>
#include <string>

#include "isopair/rational_function.hpp"

namespace isopair {

/// Highest weight h of the Verma module: symbolic (generic admissible, h > 0 assumed) or a
/// concrete rational. Admissible means 2h is not a nonpositive integer; unitarizable means h > 0.
class VermaContext {
 public:
  static VermaContext symbolic() { return VermaContext(std::nullopt); }
  /// Throws std::domain_error if h is not admissible.
  static VermaContext numeric(const Rational& h);

  bool is_symbolic() const { return !weight_; }
  const std::optional<Rational>& weight() const { return weight_; }
  bool unitarizable() const { return !weight_ || *weight_ > 0; }

  /// Substitutes h in numeric contexts; identity for symbolic ones.
  RationalFunction specialize(const RationalFunction& f) const;

  /// True if f has a pole at the integer n for some admissible value of h (numeric: at h).
  bool singular_at(const RationalFunction& f, long n) const;

  /// Sorted integer poles n >= 0 of f. Exact for numeric contexts and for poles where the
  /// denominator vanishes identically in h; admissible-h poles are searched on [0, scan_limit).
  std::vector<long> integer_poles(const RationalFunction& f, long scan_limit) const;

  std::string str() const { return weight_ ? to_string(*weight_) : "symbolic"; }

  friend bool operator==(const VermaContext& a, const VermaContext& b) { return a.weight_ == b.weight_; }

 private:
  explicit VermaContext(std::optional<Rational> w) : weight_(std::move(w)) {}
  std::optional<Rational> weight_;
};

/// 2h is not a nonpositive integer.
bool is_admissible_weight(const Rational& h);

}  // namespace isopair
