#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "isopair/shapovalov.hpp"
#include "isopair/shift_operator.hpp"
#include "isopair/truncation.hpp"
#include "isopair/verma.hpp"
#include "oracle.hpp"

namespace isopair {
namespace {

RationalFunction rf(const char* text) { return parse_rational_function(text); }

const VermaContext kSym = VermaContext::symbolic();

ShiftOperator E(long k, const VermaContext& ctx = kSym) { return rep_generator(WittFamily::kE, k, ctx); }
ShiftOperator F(long k, const VermaContext& ctx = kSym) { return rep_generator(WittFamily::kF, k, ctx); }

const std::vector<Rational> kOracleWeights = {make_rational(1, 3), Rational(1), make_rational(7, 2)};

// Compares the leading (N - K) block of the monomial truncation against an oracle matrix.
void expect_matches_oracle(const ShiftOperator& op, const oracle::Matrix& m, const Rational& h, long K) {
  const long N = static_cast<long>(m.size());
  const auto ours = op_truncate_monomial(op, N, h);
  for (long r = 0; r < N - K; ++r)
    for (long c = 0; c < N - K; ++c)
      EXPECT_EQ(ours[r][c], m[r][c]) << "h=" << to_string(h) << " entry (" << r << "," << c << ")";
}

TEST(OpMake, DerivativeVanishesOnConstants) {
  const auto a = op_make({{-1, RationalFunction::n()}}, kSym);
  EXPECT_TRUE(a.value(-1, 0).is_zero());
  EXPECT_EQ(a.value(-1, 4), RationalFunction(4));
}

TEST(OpMake, RaisingAtHalfWeight) {
  const auto ctx = VermaContext::numeric(make_rational(1, 2));
  const auto a = op_make({{1, rf("1/(n+2*h)")}}, ctx);
  EXPECT_EQ(a.value(1, 0), RationalFunction(1));
}

TEST(OpMake, UnshieldedPoleIsRejected) {
  try {
    op_make({{1, rf("1/(n-3)")}}, kSym);
    FAIL() << "expected a pole error";
  } catch (const PoleError& e) {
    EXPECT_NE(std::string(e.what()).find("n=3"), std::string::npos) << e.what();
  }
  // A boundary entry at n=3 shields it.
  EXPECT_NO_THROW(op_make({{1, rf("1/(n-3)"), {{3, RationalFunction(5)}}}}, kSym));
}

TEST(OpMake, RepeatedOffsetIsRejected) {
  EXPECT_THROW(op_make({{1, RationalFunction(1)}, {1, RationalFunction(2)}}, kSym), std::invalid_argument);
}

TEST(OpValue, Examples) {
  EXPECT_TRUE(F(1).value(-1, 0).is_zero());
  EXPECT_EQ(E(2).value(-2, 5), rf("20*(3+3*h)"));
  EXPECT_TRUE(E(2).value(7, 3).is_zero());
}

TEST(OpAdd, Examples) {
  const auto a = E(3) + F(-2);
  EXPECT_TRUE((a + op_scale(a, RationalFunction(-1))).is_zero());
  const auto sum = E(0) + F(0);
  ASSERT_EQ(sum.terms().size(), 1u);
  EXPECT_EQ(sum.term(0)->stable, rf("n+h+1"));
  const auto scaled = op_scale(F(0), rf("2*h"));
  EXPECT_EQ(scaled.term(0)->stable, rf("2*h"));
  EXPECT_THROW(op_scale(F(0), rf("n")), std::invalid_argument);
}

TEST(OpCompose, LobachevskiiBerezinProducts) {
  const auto pq = F(1) * F(-1);
  ASSERT_EQ(pq.terms().size(), 1u);
  EXPECT_EQ(pq.term(0)->stable, rf("(n+1)/(n+2*h)"));
  EXPECT_TRUE(pq.term(0)->boundary.empty());

  const auto qp = F(-1) * F(1);
  EXPECT_EQ(qp.term(0)->stable, rf("n/(n-1+2*h)"));
  // 2h = 1 would make the stable form 0/0 at n = 0; the operational value is 0.
  ASSERT_EQ(qp.term(0)->boundary.count(0), 1u);
  EXPECT_TRUE(qp.term(0)->boundary.at(0).is_zero());

  for (const auto& h : kOracleWeights) {
    const auto ctx = VermaContext::numeric(h);
    expect_matches_oracle(F(1, ctx) * F(-1, ctx), oracle::mul(oracle::generator('f', 1, 12, h),
                                                              oracle::generator('f', -1, 12, h)), h, 1);
    expect_matches_oracle(F(-1, ctx) * F(1, ctx), oracle::mul(oracle::generator('f', -1, 12, h),
                                                              oracle::generator('f', 1, 12, h)), h, 1);
  }
}

TEST(OpCompose, ZeroOverZeroAtLowDegrees) {
  const auto ctx = VermaContext::numeric(Rational(1));
  const auto a = E(-2, ctx) * E(2, ctx);
  const ShiftTerm* t = a.term(0);
  ASSERT_NE(t, nullptr);
  EXPECT_TRUE(a.value(0, 0).is_zero());
  EXPECT_TRUE(a.value(0, 1).is_zero());
  EXPECT_EQ(a.value(0, 4), t->stable.eval_n(Rational(4)));
  const Rational h(1);
  expect_matches_oracle(a, oracle::mul(oracle::generator('e', -2, 12, h), oracle::generator('e', 2, 12, h)), h, 2);
}

TEST(OpCommutator, Examples) {
  EXPECT_EQ(op_commutator(E(1), E(-1)), op_scale(E(0), RationalFunction(2)));
  EXPECT_TRUE(op_commutator(E(3), E(3)).is_zero());
  const auto c = op_commutator(F(1), F(-1));
  EXPECT_EQ(c.term(0)->stable, rf("(2*h-1)/((n+2*h)*(n-1+2*h))"));
  for (const auto& h : kOracleWeights) {
    const auto ctx = VermaContext::numeric(h);
    const auto p = oracle::generator('f', 1, 12, h), q = oracle::generator('f', -1, 12, h);
    expect_matches_oracle(op_commutator(F(1, ctx), F(-1, ctx)), oracle::add(oracle::mul(p, q), oracle::mul(q, p), -1),
                          h, 1);
    const auto e1 = oracle::generator('e', 1, 12, h), em1 = oracle::generator('e', -1, 12, h);
    expect_matches_oracle(op_commutator(E(1, ctx), E(-1, ctx)),
                          oracle::add(oracle::mul(e1, em1), oracle::mul(em1, e1), -1), h, 1);
  }
}

TEST(OpAdjoint, Examples) {
  EXPECT_EQ(op_adjoint(F(1)), F(-1));
  EXPECT_EQ(op_adjoint(E(2)), E(-2));
  const auto d = op_diagonal(rf("n+h"), kSym);
  EXPECT_EQ(op_adjoint(d), d);
  EXPECT_THROW(op_adjoint(F(1, VermaContext::numeric(make_rational(-1, 3)))), std::domain_error);
}

TEST(OpAdjoint, TransposeOracle) {
  // In the orthonormal basis the adjoint is the transpose (all entries are real for h > 0).
  for (const auto& h : kOracleWeights) {
    const auto ctx = VermaContext::numeric(h);
    for (const auto& [fam, k] : std::vector<std::pair<char, long>>{{'f', 1}, {'e', 2}, {'e', 3}, {'f', 2}}) {
      const auto op = rep_generator(fam == 'e' ? WittFamily::kE : WittFamily::kF, k, ctx);
      const auto adj = op_truncate(op_adjoint(op), 12, h).entries;
      const auto ref = oracle::orthonormal(oracle::generator(fam, k, 12, h), h);
      for (int r = 0; r < 12; ++r)
        for (int c = 0; c < 12; ++c) EXPECT_NEAR(std::abs(adj(r, c) - ref[c][r]), 0.0, 1e-9 * (1 + std::abs(ref[c][r])));
    }
  }
}

TEST(OpTruncate, Examples) {
  const auto t = op_truncate(F(-1, VermaContext::numeric(Rational(1))), 3, Rational(1)).entries;
  EXPECT_NEAR(t(1, 0).real(), std::sqrt(2.0) / 2, 1e-15);
  EXPECT_NEAR(t(2, 1).real(), std::sqrt(6.0) / 3, 1e-15);
  EXPECT_EQ(t(0, 0), std::complex<double>(0, 0));

  const auto d = op_truncate(E(0, VermaContext::numeric(Rational(1))), 2, Rational(1)).entries;
  EXPECT_EQ(d(0, 0).real(), 1.0);
  EXPECT_EQ(d(1, 1).real(), 2.0);
  EXPECT_EQ(d(0, 1), std::complex<double>(0, 0));

  EXPECT_TRUE(op_truncate(ShiftOperator(kSym), 4, Rational(1)).entries.isZero());
  EXPECT_THROW(op_truncate(F(1), 4, Rational(0)), std::domain_error);
  EXPECT_THROW(op_truncate(F(1), 0, Rational(1)), std::domain_error);
}

TEST(OpTruncate, CsvExport) {
  const auto csv = truncation_csv(op_truncate(E(0, VermaContext::numeric(Rational(1))), 2, Rational(1)));
  EXPECT_EQ(csv, "row,col,real,imag\n0,0,1,0\n1,1,2,0\n");
}

TEST(OpApplyVector, Examples) {
  // d/dz z^2 = 2z
  auto v = op_apply_vector(F(1), {RationalFunction(0), RationalFunction(0), RationalFunction(1)});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_TRUE(v[0].is_zero());
  EXPECT_EQ(v[1], RationalFunction(2));
  // e_-1 sends 1 to z.
  v = op_apply_vector(E(-1), {RationalFunction(1)});
  ASSERT_EQ(v.size(), 2u);
  EXPECT_EQ(v[1], RationalFunction(1));
  EXPECT_TRUE(op_apply_vector(E(2), {}).empty());
}

TEST(WeightRatio, Examples) {
  EXPECT_EQ(weight_ratio(1), rf("(n+1)*(n+2*h)"));
  EXPECT_EQ(weight_ratio(0), RationalFunction(1));
  EXPECT_EQ(weight_ratio(-1), rf("1/(n*(n-1+2*h))"));
}

TEST(WeightRatio, CocycleProperty) {
  for (long s1 = -4; s1 <= 4; ++s1)
    for (long s2 = -4; s2 <= 4; ++s2)
      EXPECT_EQ(weight_ratio(s1 + s2), weight_ratio(s1).shift_n(s2) * weight_ratio(s2)) << s1 << "," << s2;
}

TEST(WeightRatio, MatchesNormOracle) {
  for (const auto& h : kOracleWeights)
    for (long s = -3; s <= 3; ++s)
      for (long n = std::max(0L, -s); n < 8; ++n)
        EXPECT_EQ(weight_ratio_at(s, n, h), oracle::norm2(n + s, h) / oracle::norm2(n, h));
}

// Random operators built from generators, sums and scalings.
class RandomOps {
 public:
  RandomOps(unsigned seed, VermaContext ctx) : rng_(seed), ctx_(std::move(ctx)) {}

  ShiftOperator generator() {
    std::uniform_int_distribution<long> k(-3, 3);
    std::bernoulli_distribution fam(0.5);
    return rep_generator(fam(rng_) ? WittFamily::kE : WittFamily::kF, k(rng_), ctx_);
  }

  ShiftOperator next() {
    std::uniform_int_distribution<int> shape(0, 3);
    std::uniform_int_distribution<long> c(-3, 3);
    switch (shape(rng_)) {
      case 0: return generator();
      case 1: return generator() + op_scale(generator(), RationalFunction(c(rng_)));
      case 2: return generator() * generator();
      default: return op_scale(generator(), RationalFunction(c(rng_) == 0 ? 1 : c(rng_)));
    }
  }

 private:
  std::mt19937 rng_;
  VermaContext ctx_;
};

void expect_canonical(const ShiftOperator& a) {
  for (const auto& [s, t] : a.terms()) {
    EXPECT_EQ(s, t.offset);
    EXPECT_FALSE(t.stable.is_zero() && t.boundary.empty());
    for (const auto& [n, v] : t.boundary) {
      EXPECT_LT(n, t.threshold);
      if (n + s < 0) EXPECT_TRUE(v.is_zero());
      if (!a.context().singular_at(t.stable, n)) EXPECT_NE(v, t.stable.eval_n(Rational(n)));
    }
    for (long n = 0; n < 4; ++n)
      if (n + s < 0) EXPECT_TRUE(t.value(n).is_zero());
    for (long n = std::max(0L, -s); n < t.threshold + 6; ++n) EXPECT_NO_THROW(t.value(n));
  }
}

TEST(ShiftOperatorProperties, AssociativityIncludingBoundaries) {
  for (const auto& ctx : {kSym, VermaContext::numeric(Rational(1)), VermaContext::numeric(make_rational(1, 2))}) {
    RandomOps gen(11, ctx);
    for (int trial = 0; trial < 25; ++trial) {
      const auto a = gen.next(), b = gen.next(), c = gen.next();
      const auto left = (a * b) * c;
      EXPECT_EQ(left, a * (b * c)) << ctx.str() << "\n" << a.str() << "\n" << b.str() << "\n" << c.str();
      expect_canonical(left);
    }
  }
}

TEST(ShiftOperatorProperties, TruncationOfProductsMatchesMatrixProducts) {
  for (const auto& h : kOracleWeights) {
    const auto ctx = VermaContext::numeric(h);
    RandomOps gen(23, ctx);
    const long N = 14;
    for (int trial = 0; trial < 20; ++trial) {
      const auto a = gen.next(), b = gen.next();
      const long K = a.max_abs_offset() + b.max_abs_offset();
      const auto ma = op_truncate_monomial(a, N, h), mb = op_truncate_monomial(b, N, h);
      const auto prod = oracle::mul(ma, mb);
      expect_matches_oracle(a * b, prod, h, K);
    }
  }
}

TEST(ShiftOperatorProperties, AdjointInvolutionAndAntiMultiplicativity) {
  RandomOps gen(5, kSym);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = gen.next(), b = gen.next();
    EXPECT_EQ(op_adjoint(op_adjoint(a)), a) << a.str();
    EXPECT_EQ(op_adjoint(a * b), op_adjoint(b) * op_adjoint(a)) << a.str() << "\n" << b.str();
  }
}

TEST(ShiftOperatorProperties, CanonicalAfterEveryOperation) {
  RandomOps gen(99, VermaContext::numeric(make_rational(1, 2)));
  for (int trial = 0; trial < 30; ++trial) {
    const auto a = gen.next(), b = gen.next();
    expect_canonical(a + b);
    expect_canonical(a * b);
    expect_canonical(op_commutator(a, b));
    expect_canonical(op_adjoint(a));
  }
}

TEST(ShiftOperatorText, Rendering) {
  EXPECT_EQ(ShiftOperator(kSym).str(), "0");
  EXPECT_EQ(F(-1).str(), "offset 1: 1/(n+2*h)");
  EXPECT_EQ((F(-1) * F(1)).str(), "offset 0: n/(n+2*h-1) [boundary n=0: 0]");
}

}  // namespace
}  // namespace isopair
