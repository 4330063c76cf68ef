#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "isopair/isotopic.hpp"

namespace isopair {

/// Scale of the shift maps: paper sends g_i to g_{i+k}; half sends it to g_{i+k} / 2.
enum class Normalization { kPaper, kHalf };
std::string to_string(Normalization n);
/// "paper" or "half"; std::invalid_argument otherwise.
Normalization parse_normalization(std::string_view text);

/// R_x for an isotope generator x: acts on the other family by an index shift.
struct RMatrixMap {
  Generator isotope;
  Normalization normalization = Normalization::kPaper;
  Rational scalar() const;
  int acted_family() const { return 1 - isotope.family; }
};

/// Linear extension of the shift action. std::invalid_argument on family mismatch.
ElementCombo r_apply(const RMatrixMap& r, const ElementCombo& a);
/// Witt algebra bracket [g_i, g_j] = (i - j) g_{i+j} inside one family.
ElementCombo witt_bracket(const ElementCombo& a, const ElementCombo& b);

/// ([R g_i, g_j] + [g_i, R g_j]) - [g_i, g_j]_{x}, with x the isotope of index k and g the family.
ElementCombo r_identity_defect(const PairPresentation& p, long i, long j, long k, Normalization n, int family = 0);
/// (R_{x_i} R_{x_j} - R_{x_{i+j}}) applied to g_l, x in the other family.
ElementCombo r_multiplicativity_defect(long i, long j, long l, Normalization n, int family = 0);

struct MybeResult {
  /// [Ra, Rb] - R([Ra, b] + [a, Rb]) + constant * [a, b]
  ElementCombo defect;
  /// [Ra, Rb] - R([Ra, b] + [a, Rb]) + R^2([a, b])
  ElementCombo compensated;
};
MybeResult mybe_defect(long i, long j, long k, Normalization n, const Rational& constant = Rational(1), int family = 0);

enum class RDefectKind { kIdentity, kMultiplicativity, kMybe, kCompensated };
std::string to_string(RDefectKind k);
/// "identity", "multiplicativity", "mybe", "compensated"; std::invalid_argument otherwise.
RDefectKind parse_rdefect_kind(std::string_view text);

struct RDefectRow {
  int family = 0;
  std::vector<long> tuple;
  ElementCombo value;
};

/// Sweep over both families and all index tuples in [-K, K]; rows hold the nonzero values in
/// lexicographic (family, tuple) order.
struct RDefectSweep {
  RDefectKind kind;
  Normalization normalization;
  long K = 0;
  Rational constant{1};
  std::vector<std::string> variables;
  long checked = 0;
  std::vector<RDefectRow> nonzero;
};

RDefectSweep r_defect_sweep(const PairPresentation& p, RDefectKind kind, long K, Normalization n,
                            const Rational& mybe_constant = Rational(1));

}  // namespace isopair
