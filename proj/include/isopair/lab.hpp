#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "isopair/rational.hpp"

namespace isopair {

using Complex = std::complex<double>;

/// Finite combination sum a_k e_k of Witt generators with complex coefficients.
struct GeneratorCombo {
  std::vector<std::pair<long, Complex>> terms;

  /// True when a_{-k} = -conj(a_k) for all k, i.e. the represented operator is anti-Hermitian
  /// (T1(e_k)* = T1(e_-k)) and i times it is self-adjoint.
  bool reality() const;
  /// Witt bracket sum a_k b_l (k - l) e_{k+l}, merged by index.
  GeneratorCombo bracket(const GeneratorCombo& o) const;
  GeneratorCombo scaled(Complex c) const;
  long max_offset() const;
};

/// Orthonormal-basis N x N truncation of sum a_k T1(e_k) at weight h.
Eigen::MatrixXcd combo_truncation(const GeneratorCombo& x, long N, const Rational& h);

/// exp(t M) by Eigen's scaling-and-squaring Pade exponential. std::overflow_error on non-finite output.
Eigen::MatrixXcd matexp(const Eigen::MatrixXcd& m, Complex t = 1.0);
/// Term-wise Taylor sum of exp(M) with the given number of terms; the validation reference.
Eigen::MatrixXcd taylor_exp(const Eigen::MatrixXcd& m, int terms = 50);

struct FlowSpec {
  GeneratorCombo generator;
  Complex t = 0.0;
  long N = 64;
  Rational h{1};
};

struct FlowResult {
  Eigen::MatrixXcd matrix;
  long edge_width = 0;  // max |offset| of the generator
};

/// matexp(t * truncation of the generator).
FlowResult flow(const FlowSpec& spec);

/// Frobenius norm of the leading M x M block.
double window_norm(const Eigen::MatrixXcd& m, long M);

struct DeviationCurve {
  std::string window;  // e.g. "leading 16x16"
  std::vector<std::pair<long, double>> points;
  /// Last two points agree to 5% relative or 1e-8 absolute.
  bool converged() const;
  /// CSV with header "N,value", 17 significant digits.
  std::string csv() const;
};

/// HS norm of (U*U - I) on the leading M x M block for each N in the schedule.
DeviationCurve unitarity_deviation(const FlowSpec& spec, const std::vector<long>& schedule, long M);

/// ||exp((t+s)X) - exp(tX) exp(sX)||_F on the full truncation.
double monoassociativity_check(const FlowSpec& spec, Complex t, Complex s);

/// SL(2,R) element with Gauss parameters: g = exp(a E_-1) exp(b E_0) exp(c E_1).
struct MobiusWord {
  Eigen::Matrix2d g;
  double a = 0, b = 0, c = 0;

  static MobiusWord from_gauss(double a, double b, double c);
  /// std::domain_error unless det g = 1 (to 1e-12) and g(0,0) > 0.
  static MobiusWord from_matrix(const Eigen::Matrix2d& g);
  MobiusWord operator*(const MobiusWord& o) const { return from_matrix(g * o.g); }
  MobiusWord inverse() const { return from_matrix(g.inverse()); }
};

/// 2 x 2 realization of e_-1, e_0, e_1 with [E_i, E_j] = (i - j) E_{i+j}.
Eigen::Matrix2d mobius_generator(int k);
/// exp(a T1(e_-1)) exp(b T1(e_0)) exp(c T1(e_1)) on the N x N truncation.
Eigen::MatrixXcd mobius_truncation(const MobiusWord& w, long N, const Rational& h);

struct GroupDefect {
  DeviationCurve curve;
  std::vector<Complex> phases;  // least-squares scalar lambda per N
};

/// ||T(w1) T(w2) - lambda T(w1 w2)|| on the leading M x M block, lambda fitted by least squares.
GroupDefect group_defect_mobius(const MobiusWord& w1, const MobiusWord& w2, const std::vector<long>& schedule, long M,
                                const Rational& h);

struct ScalingReport {
  std::vector<double> ts, defects;
  double exponent = 0;   // least-squares slope of log d against log t; +inf when all d vanish
  Complex scalar = 0.0;  // scalar correction added to Z
};

/// d(t) = ||exp(tX)exp(tY)exp(-tX)exp(-tY) - exp(t^2 Z)|| on the leading M x M block, with
/// Z = truncation of T1([X, Y]) plus the scalar parts of the generator deviations.
ScalingReport commutator_flow_scaling(const GeneratorCombo& x, const GeneratorCombo& y, const std::vector<double>& ts,
                                      long N, long M, const Rational& h);

struct SemigroupReport {
  double product_error = 0;             // max entry of A(q1)A(q2) - A(q1 q2)
  std::vector<double> singular_values;  // of A(q1), descending
  double ratio_error = 0;               // max |sigma_{n+1}/sigma_n - |q1||
  double cr_residual = 0;               // max entry of the d/d(conj tau) finite difference
};

/// A(q) = q^{T1(e0)}: product law, singular-value decay and holomorphy of exp(tau T1(e_k)) A(q1) in tau.
SemigroupReport semigroup_probe(Complex q1, Complex q2, long k, Complex tau, long N, const Rational& h,
                                double step = 1e-4);

/// q^{T1(e0)} = diag(q^{n+h}) on the N x N truncation, principal branch.
Eigen::MatrixXcd semigroup_element(Complex q, long N, const Rational& h);

/// Column 0 of T (the image of the highest vector) normalized so its first nonzero entry is 1.
std::vector<Complex> orbit_coefficients(const Eigen::MatrixXcd& t);

}  // namespace isopair
