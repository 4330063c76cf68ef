#include "isopair/lab.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include <fmt/format.h>

#include "isopair/certifier.hpp"
#include "isopair/parallel.hpp"
#include "isopair/truncation.hpp"
#include "isopair/verma.hpp"

namespace isopair {

bool GeneratorCombo::reality() const {
  std::map<long, Complex> a;
  for (const auto& [k, c] : terms) a[k] += c;
  for (const auto& [k, c] : a) {
    const auto it = a.find(-k);
    const Complex partner = it == a.end() ? Complex(0.0) : it->second;
    if (std::abs(partner + std::conj(c)) > 1e-15 * (1.0 + std::abs(c))) return false;
  }
  return true;
}

GeneratorCombo GeneratorCombo::bracket(const GeneratorCombo& o) const {
  std::map<long, Complex> acc;
  for (const auto& [k, a] : terms)
    for (const auto& [l, b] : o.terms) acc[k + l] += a * b * static_cast<double>(k - l);
  GeneratorCombo out;
  for (const auto& [k, c] : acc)
    if (c != Complex(0.0)) out.terms.emplace_back(k, c);
  return out;
}

GeneratorCombo GeneratorCombo::scaled(Complex c) const {
  GeneratorCombo out = *this;
  for (auto& t : out.terms) t.second *= c;
  return out;
}

long GeneratorCombo::max_offset() const {
  long m = 0;
  for (const auto& t : terms) m = std::max(m, std::labs(t.first));
  return m;
}

Eigen::MatrixXcd combo_truncation(const GeneratorCombo& x, long N, const Rational& h) {
  const auto ctx = VermaContext::numeric(h);
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(N, N);
  for (const auto& [k, c] : x.terms) m += c * op_truncate(rep_generator(WittFamily::kE, k, ctx), N, h).entries;
  return m;
}

Eigen::MatrixXcd matexp(const Eigen::MatrixXcd& m, Complex t) {
  const Eigen::MatrixXcd scaled = t * m;
  Eigen::MatrixXcd out = scaled.exp();
  if (!out.allFinite()) throw std::overflow_error("matexp: non-finite result");
  return out;
}

Eigen::MatrixXcd taylor_exp(const Eigen::MatrixXcd& m, int terms) {
  const auto n = m.rows();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
  for (int j = 1; j < terms; ++j) {
    term = term * m / static_cast<double>(j);
    sum += term;
  }
  return sum;
}

FlowResult flow(const FlowSpec& spec) {
  return {matexp(combo_truncation(spec.generator, spec.N, spec.h), spec.t), spec.generator.max_offset()};
}

double window_norm(const Eigen::MatrixXcd& m, long M) {
  const long w = std::min<long>(M, m.rows());
  return m.topLeftCorner(w, w).norm();
}

bool DeviationCurve::converged() const {
  if (points.size() < 2) return false;
  const double a = points[points.size() - 2].second, b = points.back().second;
  const double abs_change = std::fabs(b - a);
  if (abs_change <= 1e-8) return true;
  return abs_change <= 0.05 * std::max(std::fabs(a), std::fabs(b));
}

std::string DeviationCurve::csv() const {
  std::string out = "N,value\n";
  for (const auto& [n, v] : points) out += fmt::format("{},{:.17g}\n", n, v);
  return out;
}

namespace {

DeviationCurve run_schedule(const std::vector<long>& schedule, long M, const std::function<double(long)>& value) {
  if (!std::is_sorted(schedule.begin(), schedule.end()) ||
      std::adjacent_find(schedule.begin(), schedule.end()) != schedule.end())
    throw std::invalid_argument("N schedule must be strictly increasing");
  DeviationCurve c;
  c.window = fmt::format("leading {}x{}", M, M);
  c.points.resize(schedule.size());
  parallel_for(schedule.size(), [&](std::size_t i) { c.points[i] = {schedule[i], value(schedule[i])}; });
  return c;
}

}  // namespace

DeviationCurve unitarity_deviation(const FlowSpec& spec, const std::vector<long>& schedule, long M) {
  if (!spec.generator.reality()) throw std::invalid_argument("unitarity_deviation: generator is not anti-Hermitian");
  return run_schedule(schedule, M, [&](long N) {
    FlowSpec s = spec;
    s.N = N;
    const Eigen::MatrixXcd u = flow(s).matrix;
    const Eigen::MatrixXcd d = u.adjoint() * u - Eigen::MatrixXcd::Identity(N, N);
    return window_norm(d, M);
  });
}

double monoassociativity_check(const FlowSpec& spec, Complex t, Complex s) {
  const Eigen::MatrixXcd x = combo_truncation(spec.generator, spec.N, spec.h);
  return (matexp(x, t + s) - matexp(x, t) * matexp(x, s)).norm();
}

MobiusWord MobiusWord::from_gauss(double a, double b, double c) {
  MobiusWord w;
  w.a = a;
  w.b = b;
  w.c = c;
  const double p = std::exp(-b / 2);
  w.g << p, p * c, -a * p, -a * p * c + 1 / p;
  return w;
}

MobiusWord MobiusWord::from_matrix(const Eigen::Matrix2d& g) {
  if (std::fabs(g.determinant() - 1) > 1e-12) throw std::domain_error("Mobius word must have determinant 1");
  if (!(g(0, 0) > 0)) throw std::domain_error("Mobius word is not Gauss decomposable");
  MobiusWord w;
  w.g = g;
  w.a = -g(1, 0) / g(0, 0);
  w.b = -2 * std::log(g(0, 0));
  w.c = g(0, 1) / g(0, 0);
  return w;
}

Eigen::Matrix2d mobius_generator(int k) {
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  switch (k) {
    case -1:
      m(1, 0) = -1;
      break;
    case 0:
      m(0, 0) = -0.5;
      m(1, 1) = 0.5;
      break;
    case 1:
      m(0, 1) = 1;
      break;
    default:
      throw std::invalid_argument("mobius_generator: k must be -1, 0 or 1");
  }
  return m;
}

Eigen::MatrixXcd mobius_truncation(const MobiusWord& w, long N, const Rational& h) {
  const auto gen = [&](long k) { return combo_truncation(GeneratorCombo{{{k, 1.0}}}, N, h); };
  return matexp(gen(-1), w.a) * matexp(gen(0), w.b) * matexp(gen(1), w.c);
}

GroupDefect group_defect_mobius(const MobiusWord& w1, const MobiusWord& w2, const std::vector<long>& schedule, long M,
                                const Rational& h) {
  const MobiusWord w12 = w1 * w2;
  GroupDefect out;
  out.phases.resize(schedule.size());
  std::map<long, std::size_t> slot;
  for (std::size_t i = 0; i < schedule.size(); ++i) slot[schedule[i]] = i;
  out.curve = run_schedule(schedule, M, [&](long N) {
    const long m = std::min(M, N);
    const Eigen::MatrixXcd lhs = (mobius_truncation(w1, N, h) * mobius_truncation(w2, N, h)).topLeftCorner(m, m);
    const Eigen::MatrixXcd rhs = mobius_truncation(w12, N, h).topLeftCorner(m, m);
    const double rr = rhs.squaredNorm();
    const Complex lambda = rr == 0 ? Complex(1.0) : (rhs.adjoint() * lhs).trace() / rr;
    out.phases[slot.at(N)] = lambda;
    return (lhs - lambda * rhs).norm();
  });
  return out;
}

ScalingReport commutator_flow_scaling(const GeneratorCombo& x, const GeneratorCombo& y, const std::vector<double>& ts,
                                      long N, long M, const Rational& h) {
  ScalingReport r;
  r.ts = ts;
  const auto ctx = VermaContext::numeric(h);
  for (const auto& [k, a] : x.terms)
    for (const auto& [l, b] : y.terms) {
      const auto sp = scalar_part(witt_deviation(k, l, ctx));
      if (sp && !sp->is_zero()) r.scalar += a * b * to_double(sp->constant_value());
    }
  const Eigen::MatrixXcd X = combo_truncation(x, N, h), Y = combo_truncation(y, N, h);
  const Eigen::MatrixXcd Z = combo_truncation(x.bracket(y), N, h) + r.scalar * Eigen::MatrixXcd::Identity(N, N);
  r.defects.resize(ts.size());
  parallel_for(ts.size(), [&](std::size_t i) {
    const double t = ts[i];
    const Eigen::MatrixXcd g = matexp(X, t) * matexp(Y, t) * matexp(X, -t) * matexp(Y, -t);
    r.defects[i] = window_norm(g - matexp(Z, t * t), M);
  });
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(r.defects[i] > 0) || !(ts[i] > 0)) continue;
    const double lx = std::log(ts[i]), ly = std::log(r.defects[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n == 0) {
    r.exponent = std::numeric_limits<double>::infinity();
  } else if (n == 1) {
    r.exponent = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  }
  return r;
}

Eigen::MatrixXcd semigroup_element(Complex q, long N, const Rational& h) {
  if (!(std::abs(q) < 1)) throw std::domain_error("semigroup element needs |q| < 1");
  const double hd = to_double(h);
  const Complex lq = std::log(q);
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(N, N);
  for (long n = 0; n < N; ++n) a(n, n) = std::exp((static_cast<double>(n) + hd) * lq);
  return a;
}

SemigroupReport semigroup_probe(Complex q1, Complex q2, long k, Complex tau, long N, const Rational& h, double step) {
  SemigroupReport r;
  const Eigen::MatrixXcd a1 = semigroup_element(q1, N, h), a2 = semigroup_element(q2, N, h);
  r.product_error = (a1 * a2 - semigroup_element(q1 * q2, N, h)).cwiseAbs().maxCoeff();

  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a1);
  const Eigen::VectorXd sv = svd.singularValues();
  r.singular_values.assign(sv.data(), sv.data() + sv.size());
  for (Eigen::Index i = 0; i + 1 < sv.size(); ++i)
    r.ratio_error = std::max(r.ratio_error, std::fabs(sv(i + 1) / sv(i) - std::abs(q1)));

  const Eigen::MatrixXcd e = combo_truncation(GeneratorCombo{{{k, 1.0}}}, N, h);
  const auto F = [&](Complex z) -> Eigen::MatrixXcd { return matexp(e, z) * a1; };
  const Complex I(0.0, 1.0);
  const Eigen::MatrixXcd dx = (F(tau + step) - F(tau - step)) / (2 * step);
  const Eigen::MatrixXcd dy = (F(tau + I * step) - F(tau - I * step)) / (2 * step);
  r.cr_residual = (0.5 * (dx + I * dy)).cwiseAbs().maxCoeff();
  return r;
}

std::vector<Complex> orbit_coefficients(const Eigen::MatrixXcd& t) {
  std::vector<Complex> v(static_cast<std::size_t>(t.rows()));
  for (Eigen::Index r = 0; r < t.rows(); ++r) v[r] = t(r, 0);
  const auto first = std::find_if(v.begin(), v.end(), [](Complex c) { return c != Complex(0.0); });
  if (first == v.end()) return v;
  const Complex s = *first;
  for (auto& c : v) c /= s;
  return v;
}

}  // namespace isopair
