#pragma once

#include <optional>
#include <string>
#include <vector>

#include "isopair/certifier.hpp"
#include "isopair/shift_operator.hpp"

namespace isopair {

/// Generators of the Witt isotopic pair: e_k spans V1, f_k spans V2.
enum class WittFamily { kE, kF };

struct WittGenerator {
  WittFamily family = WittFamily::kE;
  long index = 0;

  friend bool operator==(const WittGenerator&, const WittGenerator&) = default;
  friend auto operator<=>(const WittGenerator&, const WittGenerator&) = default;
};

/// "e2", "f-1".
std::string to_string(const WittGenerator& g);

/// The spin-2 (e) and spin-1 (f) tensor operators on C[z], with xi = z d/dz acting as n:
///   e_k  -> (xi + (k+1)h) d^k,                     f_k  -> d^k                       (k >= 0)
///   e_-k -> z^k (xi + (k+1)h) / (xi+2h)...(xi+2h+k-1), f_-k -> z^k / (xi+2h)...(xi+2h+k-1)
ShiftOperator rep_generator(WittFamily family, long k, const VermaContext& ctx);
inline ShiftOperator rep_generator(const WittGenerator& g, const VermaContext& ctx) {
  return rep_generator(g.family, g.index, ctx);
}

/// Chart 1: e_i (i >= -1), f_i (i >= 0). Chart 2: e_i (i <= 1), f_i (i <= 0).
bool in_chart(int chart, const WittGenerator& g);
/// Smallest chart containing every element, if any.
std::optional<int> chart_of(const std::vector<WittGenerator>& elements);

/// Operator assigned by a chart's own formula. Chart 1 sends e_-1 to the sl2 lowering z,
/// chart 2 sends e_1 to the Shapovalov adjoint of its e_-1; every other generator uses
/// rep_generator. Throws std::invalid_argument if g is not in the chart.
ShiftOperator chart_formula(int chart, const WittGenerator& g, const VermaContext& ctx);

enum class RepSide { kT1, kT2 };

/// Representation identity defect
///   T1(X)T2(A)T1(Y) - T1(Y)T2(A)T1(X) - T1([X,Y]_A)   (side T1, X, Y in V1, A in V2)
/// and its dual for side T2. The zero operator means the identity holds. The orientation makes
/// the T1 defect with A = f_0 coincide with witt_deviation.
/// Throws std::invalid_argument on a family mismatch.
ShiftOperator rep_identity_defect(RepSide side, const WittGenerator& x, const WittGenerator& y,
                                  const WittGenerator& a, const VermaContext& ctx);

/// Witt isotopic bracket on generators: (i-j) times the generator of index i+j+k.
WittGenerator witt_target(const WittGenerator& x, const WittGenerator& y, const WittGenerator& a);

struct RepDefect {
  RepSide side = RepSide::kT1;
  WittGenerator x, y, a;
  std::optional<int> chart;  // none for cross-chart triples
  ShiftOperator defect;
  std::optional<ClassCertificate> certificate;  // cross-chart, nonzero defects only
};

struct ComposedRepReport {
  long K = 0;
  std::string context;
  long in_chart_checked = 0;
  std::vector<RepDefect> in_chart_failures;
  long cross_chart_checked = 0;
  /// Nonzero cross-chart defects with their modulo-scalars certificates.
  std::vector<RepDefect> cross_chart_defects;

  bool ok() const { return in_chart_failures.empty(); }
};

/// Checks every same-chart triple with indices in [-K, K] for both identities, and classifies
/// the cross-chart defects. Sorted by (side, x, y, a); computed in parallel.
/// Throws std::invalid_argument for K < 2.
ComposedRepReport verify_composed_representation(long K, const VermaContext& ctx, bool include_cross_chart = true);

struct OverlapEntry {
  WittGenerator generator;
  ShiftOperator chart1;
  ShiftOperator chart2;
  bool equal = false;
};

struct OverlapReport {
  std::vector<OverlapEntry> entries;
  bool ok() const;
};

/// Compares chart_formula(1, g) with chart_formula(2, g) for g in {e_-1, e_0, e_1, f_0}.
OverlapReport chart_overlap_consistency(const VermaContext& ctx);

/// [T1(e_i), T1(e_j)] - (i-j) T1(e_{i+j}).
ShiftOperator witt_deviation(long i, long j, const VermaContext& ctx);

struct LbProbe {
  ShiftOperator pq, qp, commutator;
  ClassCertificate certificate;
};

/// P = T2(f_1), Q = T2(f_-1).
LbProbe lb_probe(const VermaContext& ctx);

struct NonlinearSl2Probe {
  long k = 0;
  /// [T1(e_0), T1(e_k)] = -k T1(e_k) and [T1(e_0), T1(e_-k)] = k T1(e_-k).
  bool raising_ok = false;
  bool lowering_ok = false;
  /// Diagonal [T1(e_k), T1(e_-k)] in n.
  ShiftOperator diagonal;
  /// Closure function in lambda = n + h, stored with lambda in the n slot.
  RationalFunction phi;
  /// Degrees n where the boundary value differs from phi(n + h).
  std::vector<long> boundary_exceptions;

  std::string phi_str() const { return phi.str("lambda"); }
};

/// Throws std::invalid_argument for k < 1; std::logic_error if the commutator is not diagonal.
NonlinearSl2Probe nonlinear_sl2_probe(long k, const VermaContext& ctx);

}  // namespace isopair
