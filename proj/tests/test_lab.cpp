#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <random>

#include "isopair/lab.hpp"

namespace isopair {
namespace {

const Complex I(0.0, 1.0);

// Oracle: plain power-series exponential, summed until terms are negligible.
Eigen::MatrixXcd series_exp(const Eigen::MatrixXcd& m) {
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(m.rows(), m.cols()), term = sum;
  for (int j = 1; j < 200; ++j) {
    term = (term * m).eval() / static_cast<double>(j);
    sum += term;
    if (term.norm() < 1e-300) break;
  }
  return sum;
}

// Oracle: Shapovalov norm squared w(n) = n! (2h)(2h+1)...(2h+n-1).
double w(long n, double h) {
  double r = 1;
  for (long j = 0; j < n; ++j) r *= (j + 1) * (2 * h + j);
  return r;
}

TEST(Matexp, TaylorValidation) {
  std::mt19937 rng(17);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 40; ++trial) {
    const long N = 1 + trial % 8;
    Eigen::MatrixXcd m(N, N);
    for (long r = 0; r < N; ++r)
      for (long c = 0; c < N; ++c) m(r, c) = Complex(g(rng), g(rng));
    m *= (0.5 + 4.5 * (trial % 10) / 9.0) / m.norm();
    EXPECT_LE((matexp(m) - taylor_exp(m, 50)).norm(), 1e-12);
    EXPECT_LE((matexp(m) - series_exp(m)).norm(), 1e-12);
  }
}

TEST(Matexp, Examples) {
  EXPECT_LE((matexp(Eigen::MatrixXcd::Zero(5, 5)) - Eigen::MatrixXcd::Identity(5, 5)).norm(), 0.0);
  Eigen::VectorXcd d(4);
  d << 0.5, -1.0, Complex(0.0, 2.0), Complex(1.0, -1.0);
  const Eigen::MatrixXcd e = matexp(d.asDiagonal().toDenseMatrix(), 0.7);
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(std::abs(e(i, i) - std::exp(0.7 * d(i))), 0.0, 1e-14);
  // T1(e1) lowers degree, so its truncation is nilpotent and the series terminates.
  const Eigen::MatrixXcd n = combo_truncation(GeneratorCombo{{{1, 1.0}}}, 8, Rational(1));
  Eigen::MatrixXcd finite = Eigen::MatrixXcd::Identity(8, 8), term = finite;
  for (int j = 1; j < 8; ++j) {
    term = (term * n).eval() / static_cast<double>(j);
    finite += term;
  }
  EXPECT_LE((matexp(n) - finite).norm(), 1e-12 * finite.norm());
  Eigen::MatrixXcd huge = Eigen::MatrixXcd::Identity(2, 2) * 1e6;
  EXPECT_THROW(matexp(huge), std::overflow_error);
}

TEST(Flow, RotationIsDiagonalPhases) {
  const auto f = flow(FlowSpec{GeneratorCombo{{{0, I}}}, 0.3, 16, Rational(3, 2)});
  for (long n = 0; n < 16; ++n) EXPECT_NEAR(std::abs(f.matrix(n, n) - std::exp(I * 0.3 * (n + 1.5))), 0.0, 1e-13);
  EXPECT_NEAR((f.matrix - Eigen::MatrixXcd(f.matrix.diagonal().asDiagonal())).norm(), 0.0, 1e-14);
  EXPECT_EQ(f.edge_width, 0);
  const auto id = flow(FlowSpec{GeneratorCombo{{{2, I}, {-2, I}}}, 0.0, 12, Rational(1)});
  EXPECT_LE((id.matrix - Eigen::MatrixXcd::Identity(12, 12)).norm(), 0.0);
}

TEST(Flow, SymmetricGeneratorIsUnitaryOnWindow) {
  const GeneratorCombo x{{{1, I}, {-1, I}}};
  EXPECT_TRUE(x.reality());
  EXPECT_FALSE((GeneratorCombo{{{1, 1.0}, {-1, 1.0}}}).reality());
  const auto f = flow(FlowSpec{x, 0.3, 64, Rational(1)});
  EXPECT_EQ(f.edge_width, 1);
  const Eigen::MatrixXcd d = f.matrix.adjoint() * f.matrix - Eigen::MatrixXcd::Identity(64, 64);
  EXPECT_LE(window_norm(d, 32), 1e-10);
}

TEST(Unitarity, Curves) {
  const auto rot = unitarity_deviation(FlowSpec{GeneratorCombo{{{0, I}}}, 0.4, 0, Rational(1)}, {16, 32}, 8);
  for (const auto& [N, v] : rot.points) EXPECT_LE(v, 1e-14);
  const FlowSpec s{GeneratorCombo{{{2, I}, {-2, I}}}, 0.2, 0, Rational(1)};
  const auto c = unitarity_deviation(s, {64, 128, 256}, 16);
  ASSERT_EQ(c.points.size(), 3u);
  EXPECT_LE(c.points.back().second, 1e-8);
  EXPECT_TRUE(c.converged());
  FlowSpec s2 = s;
  s2.t = 0.4;
  EXPECT_LE(unitarity_deviation(s2, {64, 128}, 16).points.back().second, 1e-8);
  EXPECT_THROW(unitarity_deviation(FlowSpec{GeneratorCombo{{{1, 1.0}}}, 0.1, 0, Rational(1)}, {8}, 4),
               std::invalid_argument);
  EXPECT_THROW(unitarity_deviation(s, {64, 32}, 16), std::invalid_argument);
}

TEST(DeviationCurve, ConvergenceAndCsv) {
  DeviationCurve c{"leading 4x4", {{8, 1.0}, {16, 1.04}}};
  EXPECT_TRUE(c.converged());
  c.points.back().second = 1.2;
  EXPECT_FALSE(c.converged());
  c.points = {{8, 3e-9}, {16, 1e-12}};
  EXPECT_TRUE(c.converged());
  EXPECT_EQ(c.csv(), "N,value\n8,3e-09\n16,9.9999999999999998e-13\n");
}

TEST(Monoassociativity, Residuals) {
  const FlowSpec s{GeneratorCombo{{{1, I}, {-1, I}}}, 0.0, 64, Rational(1)};
  EXPECT_EQ(monoassociativity_check(s, 0.0, 0.0), 0.0);
  EXPECT_LE(monoassociativity_check(s, 0.1, 0.2), 1e-10);
  const FlowSpec z{GeneratorCombo{{{1, Complex(0.3, 0.2)}, {0, Complex(-0.5, 0.1)}, {-1, Complex(0.1, -0.4)}}}, 0.0, 32,
                   Rational(2)};
  const Complex ray = std::polar(1.0, 0.3);
  EXPECT_LE(monoassociativity_check(z, 0.05 * ray, 0.08 * ray), 1e-10);
}

TEST(Mobius, RealizationMatchesBracket) {
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) {
      const Eigen::Matrix2d c = mobius_generator(i) * mobius_generator(j) - mobius_generator(j) * mobius_generator(i);
      const Eigen::Matrix2d expect = (i + j >= -1 && i + j <= 1) ? Eigen::Matrix2d((i - j) * mobius_generator(i + j))
                                                                  : Eigen::Matrix2d(Eigen::Matrix2d::Zero());
      EXPECT_LE((c - expect).norm(), 0.0);
    }
  // The truncated generators obey the same relations away from the edge.
  const long N = 24, M = 12;
  const auto T = [&](long k) { return combo_truncation(GeneratorCombo{{{k, 1.0}}}, N, Rational(3, 2)); };
  for (int i = -1; i <= 1; ++i)
    for (int j = -1; j <= 1; ++j) {
      if (i + j < -1 || i + j > 1) continue;
      const Eigen::MatrixXcd c = T(i) * T(j) - T(j) * T(i) - static_cast<double>(i - j) * T(i + j);
      EXPECT_LE(window_norm(c, M), 1e-11);
    }
}

TEST(Mobius, GaussFactorization) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const auto w = MobiusWord::from_gauss(a, b, c);
    // Oracle: product of 2x2 exponentials.
    const Eigen::Matrix2d ea = (a * mobius_generator(-1)).exp(), eb = (b * mobius_generator(0)).exp(),
                          ec = (c * mobius_generator(1)).exp();
    EXPECT_LE((w.g - ea * eb * ec).norm(), 1e-12);
    const auto back = MobiusWord::from_matrix(w.g);
    EXPECT_NEAR(back.a, a, 1e-12);
    EXPECT_NEAR(back.b, b, 1e-12);
    EXPECT_NEAR(back.c, c, 1e-12);
  }
  Eigen::Matrix2d flip;
  flip << -1, 0, 0, -1;
  EXPECT_THROW(MobiusWord::from_matrix(flip), std::domain_error);
}

TEST(Mobius, GroupDefect) {
  const auto w1 = MobiusWord::from_gauss(0.1, 0.2, -0.15), w2 = MobiusWord::from_gauss(-0.05, 0.1, 0.12);
  const auto g = group_defect_mobius(w1, w2, {64, 128, 256}, 16, Rational(1));
  EXPECT_LE(g.curve.points.back().second, 1e-6);
  for (const auto& l : g.phases) EXPECT_NEAR(std::abs(l), 1.0, 1e-8);
  const auto inv = group_defect_mobius(w1, w1.inverse(), {32, 64}, 16, Rational(1));
  EXPECT_LE(inv.curve.points.back().second, 1e-9);
  EXPECT_NEAR(std::abs(inv.phases.back() - 1.0), 0.0, 1e-9);
  const auto r1 = MobiusWord::from_gauss(0, 0.3, 0), r2 = MobiusWord::from_gauss(0, -0.7, 0);
  const auto rot = group_defect_mobius(r1, r2, {16, 32}, 16, Rational(2));
  EXPECT_LE(rot.curve.points.back().second, 1e-12);
}

TEST(CommutatorScaling, InChartAndCrossChart) {
  const std::vector<double> ts = {0.02, 0.04, 0.08, 0.16};
  const GeneratorCombo x{{{1, I}, {-1, I}}}, y{{{0, 2.0 * I}}};
  const auto r = commutator_flow_scaling(x, y, ts, 96, 16, Rational(1));
  EXPECT_GE(r.exponent, 2.7);
  EXPECT_LE(r.exponent, 3.3);
  const auto same = commutator_flow_scaling(x, x, ts, 48, 16, Rational(1));
  for (double d : same.defects) EXPECT_LE(d, 1e-13);
  // Across charts the Hilbert-Schmidt deviation of the bracket contributes at order t^2,
  // which dominates for small t.
  const GeneratorCombo x2{{{2, I}, {-2, I}}}, y3{{{3, I}, {-3, I}}};
  const auto cross = commutator_flow_scaling(x2, y3, {1e-4, 2e-4, 4e-4, 8e-4}, 96, 16, Rational(2));
  EXPECT_LT(cross.exponent, 2.3);
}

TEST(CommutatorScaling, ScalarCorrectionVanishesForDecayingDeviations) {
  // The diagonal deviations [T(e_k), T(e_-k)] - 2k T(e_0) decay in n, so no scalar is added.
  for (long k = 2; k <= 4; ++k) {
    const auto r = commutator_flow_scaling(GeneratorCombo{{{k, 1.0}}}, GeneratorCombo{{{-k, 1.0}}}, {0.01, 0.02}, 24, 8,
                                           Rational(5, 2));
    EXPECT_EQ(r.scalar, Complex(0.0));
  }
}

TEST(Semigroup, Probe) {
  const auto r = semigroup_probe(0.5, 0.5, 1, Complex(0.1, 0.05), 32, Rational(1));
  EXPECT_LE(r.product_error, 1e-12);
  EXPECT_LE(r.ratio_error, 1e-10);
  EXPECT_LE(r.cr_residual, 1e-6);
  ASSERT_EQ(r.singular_values.size(), 32u);
  EXPECT_NEAR(r.singular_values.front(), 0.5, 1e-15);  // (1/2)^(0 + h)
  const auto c = semigroup_probe(Complex(0.3, 0.4), Complex(-0.2, 0.5), 2, Complex(0.05, -0.02), 24, Rational(5, 2));
  EXPECT_LE(c.product_error, 1e-12);
  EXPECT_LE(c.ratio_error, 1e-10);
  EXPECT_LE(c.cr_residual, 1e-6);
  EXPECT_THROW(semigroup_element(1.5, 4, Rational(1)), std::domain_error);
}

TEST(Orbit, Coefficients) {
  const auto rot = orbit_coefficients(flow(FlowSpec{GeneratorCombo{{{0, I}}}, 0.7, 8, Rational(1)}).matrix);
  EXPECT_NEAR(std::abs(rot[0] - 1.0), 0.0, 1e-15);
  for (std::size_t n = 1; n < rot.size(); ++n) EXPECT_EQ(rot[n], Complex(0.0));
  const auto id = orbit_coefficients(Eigen::MatrixXcd::Identity(5, 5));
  EXPECT_EQ(id, (std::vector<Complex>{1.0, 0.0, 0.0, 0.0, 0.0}));
  const double a = 0.1;
  const auto z = orbit_coefficients(flow(FlowSpec{GeneratorCombo{{{-1, 1.0}}}, a, 8, Rational(1)}).matrix);
  double fact = 1;
  for (long n = 0; n < 8; ++n) {
    if (n > 0) fact *= n;
    EXPECT_NEAR(z[n].real(), std::pow(a, n) * std::sqrt(w(n, 1.0)) / fact, 1e-14) << n;
  }
  EXPECT_NEAR(z[1].real(), 0.1 * std::sqrt(2.0), 1e-15);
  const auto mob = orbit_coefficients(mobius_truncation(MobiusWord::from_gauss(a, 0, 0), 8, Rational(1)));
  for (long n = 0; n < 8; ++n) EXPECT_NEAR(std::abs(mob[n] - z[n]), 0.0, 1e-14);
}

}  // namespace
}  // namespace isopair
