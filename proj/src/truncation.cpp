#include "isopair/truncation.hpp"

#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "isopair/shapovalov.hpp"

namespace isopair {

namespace {

Rational value_at(const ShiftTerm& t, long n, const Rational& h) {
  const RationalFunction v = t.value(n);
  return v.is_constant() ? v.constant_value() : v.subs_h(h).constant_value();
}

void check_args(const ShiftOperator& a, long N, const Rational& h) {
  if (N < 1) throw std::domain_error("truncation size must be positive");
  if (!is_admissible_weight(h)) throw std::domain_error("inadmissible highest weight h=" + to_string(h));
  const auto& w = a.context().weight();
  if (w && *w != h)
    throw std::invalid_argument("operator built at h=" + to_string(*w) + ", truncated at h=" + to_string(h));
}

}  // namespace

DenseTruncation op_truncate(const ShiftOperator& a, long N, const Rational& h) {
  check_args(a, N, h);
  DenseTruncation out{h, Eigen::MatrixXcd::Zero(N, N)};
  for (const auto& [s, t] : a.terms()) {
    for (long n = std::max(0L, -s); n < N && n + s < N; ++n) {
      const Rational v = value_at(t, n, h);
      if (v == 0) continue;
      const Rational sq = v * v * weight_ratio_at(s, n, h);
      const double mag = std::sqrt(std::fabs(to_double(sq)));
      const double sign = v > 0 ? 1.0 : -1.0;
      // A negative norm ratio only occurs outside the unitarizable range.
      out.entries(n + s, n) = sq > 0 ? std::complex<double>(sign * mag, 0.0) : std::complex<double>(0.0, sign * mag);
    }
  }
  return out;
}

std::vector<std::vector<Rational>> op_truncate_monomial(const ShiftOperator& a, long N, const Rational& h) {
  check_args(a, N, h);
  std::vector<std::vector<Rational>> out(N, std::vector<Rational>(N, Rational(0)));
  for (const auto& [s, t] : a.terms())
    for (long n = std::max(0L, -s); n < N && n + s < N; ++n) out[n + s][n] = value_at(t, n, h);
  return out;
}

std::string truncation_csv(const DenseTruncation& t) {
  std::string out = "row,col,real,imag\n";
  for (Eigen::Index r = 0; r < t.entries.rows(); ++r)
    for (Eigen::Index c = 0; c < t.entries.cols(); ++c) {
      const auto z = t.entries(r, c);
      if (z == std::complex<double>(0.0, 0.0)) continue;
      out += fmt::format("{},{},{:.17g},{:.17g}\n", r, c, z.real(), z.imag());
    }
  return out;
}

}  // namespace isopair
