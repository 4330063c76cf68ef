#pragma once

#include <Eigen/Dense>
#include <string>

#include "isopair/shift_operator.hpp"

namespace isopair {

/// N x N complex matrix of an operator in the orthonormal Shapovalov basis
/// u_n = z^n / |z^n| at a concrete weight h.
struct DenseTruncation {
  Rational h;
  Eigen::MatrixXcd entries;

  Eigen::Index size() const { return entries.rows(); }
};

/// entry(n+s, n) = value(A, s, n) * sqrt(w(n+s)/w(n)) for 0 <= n, n+s < N. Each entry is
/// converted from its exact square, so the error is at most about one ulp.
/// Throws std::domain_error for inadmissible h or N < 1; std::invalid_argument if A lives in a
/// different numeric context.
DenseTruncation op_truncate(const ShiftOperator& a, long N, const Rational& h);

/// Exact truncation in the monomial basis {z^n}: entry(n+s, n) = value(A, s, n).
std::vector<std::vector<Rational>> op_truncate_monomial(const ShiftOperator& a, long N, const Rational& h);

/// CSV with header "row,col,real,imag", nonzero entries in row-major order.
std::string truncation_csv(const DenseTruncation& t);

}  // namespace isopair
