#include "isopair/rational_function.hpp"

#include "isopair/expression.hpp"

namespace isopair {

RationalFunction::RationalFunction(Rational c) : num_(std::move(c)), den_(Rational(1)) {}

RationalFunction::RationalFunction(BiPoly num) : num_(std::move(num)), den_(Rational(1)) {}

RationalFunction::RationalFunction(BiPoly num, BiPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw std::domain_error("rational function with zero denominator");
  normalize();
}

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = BiPoly(Rational(1));
    return;
  }
  if (!den_.is_constant()) {
    BiPoly g = gcd(num_, den_);
    if (!g.is_constant()) {
      num_ = num_.exact_div(g);
      den_ = den_.exact_div(g);
    }
  }
  const Rational lc = den_.lex_lc();
  if (lc != 1) {
    const Rational inv = 1 / lc;
    num_ *= inv;
    den_ *= inv;
  }
}

Rational RationalFunction::constant_value() const {
  if (!is_constant()) throw std::logic_error("rational function is not constant: " + str());
  const Rational n = num_.is_zero() ? Rational(0) : num_.lex_lc();
  return n / den_.lex_lc();
}

RationalFunction& RationalFunction::operator+=(const RationalFunction& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    if (!den_.is_constant()) normalize();
    else if (num_.is_zero()) den_ = BiPoly(Rational(1));
    return *this;
  }
  // a/b + c/d with g = gcd(b, d): (a*(d/g) + c*(b/g)) / (b*(d/g)).
  const BiPoly g = gcd(den_, o.den_);
  const BiPoly bd = den_.exact_div(g);
  const BiPoly dd = o.den_.exact_div(g);
  num_ = num_ * dd + o.num_ * bd;
  den_ = den_ * dd;
  normalize();
  return *this;
}

RationalFunction& RationalFunction::operator-=(const RationalFunction& o) { return *this += -o; }

RationalFunction operator-(const RationalFunction& a) {
  return RationalFunction(-a.num_, a.den_, RationalFunction::Raw{});
}

RationalFunction& RationalFunction::operator*=(const RationalFunction& o) {
  if (is_zero()) return *this;
  if (o.is_zero()) return *this = RationalFunction();
  if (is_polynomial() && o.is_polynomial()) {
    num_ = num_ * o.num_ * Rational(1 / (den_.lex_lc() * o.den_.lex_lc()));
    den_ = BiPoly(Rational(1));
    return *this;
  }
  // Cross-cancel before multiplying.
  const BiPoly g1 = gcd(num_, o.den_);
  const BiPoly g2 = gcd(o.num_, den_);
  num_ = num_.exact_div(g1) * o.num_.exact_div(g2);
  den_ = den_.exact_div(g2) * o.den_.exact_div(g1);
  const Rational lc = den_.lex_lc();
  if (lc != 1) {
    const Rational inv = 1 / lc;
    num_ *= inv;
    den_ *= inv;
  }
  return *this;
}

RationalFunction& RationalFunction::operator/=(const RationalFunction& o) {
  if (o.is_zero()) throw std::domain_error("division by the zero rational function");
  return *this *= RationalFunction(o.den_, o.num_);
}

bool operator<(const RationalFunction& a, const RationalFunction& b) {
  if (a.num_ < b.num_) return true;
  if (b.num_ < a.num_) return false;
  return a.den_ < b.den_;
}

RationalFunction RationalFunction::shift_n(long delta) const {
  if (delta == 0 || is_constant_in_n()) return *this;
  // A shift preserves coprimality; only the leading coefficient is unchanged too.
  return RationalFunction(num_.shift_n(Integer(delta)), den_.shift_n(Integer(delta)), Raw{});
}

RationalFunction RationalFunction::eval_n(const Rational& value) const {
  UPoly d = den_.eval_n(value);
  if (d.is_zero()) throw PoleError("pole at n=" + to_string(value) + " of " + str());
  return RationalFunction(BiPoly(num_.eval_n(value)), BiPoly(std::move(d)));
}

RationalFunction RationalFunction::subs_h(const Rational& value) const {
  BiPoly d = den_.subs_h(value);
  if (d.is_zero()) throw PoleError("pole at h=" + to_string(value) + " of " + str());
  return RationalFunction(num_.subs_h(value), std::move(d));
}

Rational RationalFunction::eval(const Rational& n, const Rational& h) const {
  const Rational d = den_.eval(n, h);
  if (d == 0) throw PoleError("pole at (n=" + to_string(n) + ", h=" + to_string(h) + ") of " + str());
  return num_.eval(n, h) / d;
}

RationalFunction::NDegree RationalFunction::degree_n() const {
  if (is_zero()) throw std::domain_error("degree of the zero rational function");
  return {num_.degree_n() - den_.degree_n(), RationalFunction(BiPoly(num_.lc_n()), BiPoly(den_.lc_n()))};
}

namespace {

bool single_term(const BiPoly& p) { return p.terms().size() == 1; }

}  // namespace

std::string RationalFunction::str(const std::string& nvar, const std::string& hvar) const {
  std::string num = to_string(num_, nvar, hvar);
  if (den_.is_constant()) return num;
  if (!single_term(num_)) num = "(" + num + ")";
  return num + "/(" + to_string(den_, nvar, hvar) + ")";
}

RationalFunction RationalFunction::compose_n(const RationalFunction& replacement) const {
  // Horner over the field keeps everything canonical.
  auto horner = [&](const BiPoly& p) {
    RationalFunction acc;
    for (int i = p.degree_n(); i >= 0; --i) {
      acc *= replacement;
      acc += RationalFunction(BiPoly(p.coeff_n(i)));
    }
    return acc;
  };
  return horner(num_) / horner(den_);
}

RationalFunction rf_normalize(const BiPoly& num, const BiPoly& den) { return RationalFunction(num, den); }

RationalFunction parse_rational_function(std::string_view text) {
  return parse_expression<RationalFunction>(text, [](std::string_view name, SourcePos pos) {
    if (name == "n") return RationalFunction::n();
    if (name == "h") return RationalFunction::h();
    throw ParseError(pos, "unknown variable '" + std::string(name) + "'");
  });
}

}  // namespace isopair
