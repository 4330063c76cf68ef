#include "isopair/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace isopair {

// ---------------------------------------------------------------------------
// UPoly

UPoly::UPoly(Rational c) {
  if (c != 0) c_.push_back(std::move(c));
}

UPoly::UPoly(std::vector<Rational> coeffs) : c_(std::move(coeffs)) { trim(); }

UPoly UPoly::variable() { return UPoly(std::vector<Rational>{Rational(0), Rational(1)}); }

void UPoly::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

Rational UPoly::coeff(int i) const {
  if (i < 0 || i >= static_cast<int>(c_.size())) return Rational(0);
  return c_[i];
}

Rational UPoly::eval(const Rational& h) const {
  Rational acc(0);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * h + *it;
  return acc;
}

UPoly& UPoly::operator+=(const UPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

UPoly& UPoly::operator-=(const UPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

UPoly& UPoly::operator*=(const Rational& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& x : c_) x *= s;
  return *this;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Rational> out(a.c_.size() + b.c_.size() - 1, Rational(0));
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] += a.c_[i] * b.c_[j];
  }
  return UPoly(std::move(out));
}

bool operator<(const UPoly& a, const UPoly& b) {
  if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
  for (std::size_t i = a.c_.size(); i-- > 0;) {
    if (a.c_[i] != b.c_[i]) return a.c_[i] < b.c_[i];
  }
  return false;
}

std::pair<UPoly, UPoly> UPoly::divrem(const UPoly& d) const {
  if (d.is_zero()) throw std::domain_error("polynomial division by zero");
  if (degree() < d.degree()) return {UPoly(), *this};
  std::vector<Rational> r = c_;
  std::vector<Rational> q(c_.size() - d.c_.size() + 1, Rational(0));
  const Rational inv_lc = 1 / d.lc();
  for (int k = static_cast<int>(q.size()) - 1; k >= 0; --k) {
    Rational t = r[k + d.degree()] * inv_lc;
    if (t == 0) continue;
    q[k] = t;
    for (int j = 0; j <= d.degree(); ++j) r[k + j] -= t * d.c_[j];
  }
  return {UPoly(std::move(q)), UPoly(std::move(r))};
}

UPoly UPoly::monic() const {
  if (is_zero()) return {};
  return *this * Rational(1 / lc());
}

UPoly gcd(const UPoly& a, const UPoly& b) {
  UPoly x = a, y = b;
  while (!y.is_zero()) {
    UPoly r = x.divrem(y).second;
    x = std::move(y);
    y = std::move(r);
  }
  return x.monic();
}

namespace {

std::vector<Integer> divisors(Integer m) {
  if (m < 0) m = -m;
  std::vector<std::pair<Integer, int>> factors;
  for (Integer p = 2; p * p <= m; ++p) {
    if (p > 2000000) {
      if (mpz_probab_prime_p(m.get_mpz_t(), 30) == 0)
        throw std::domain_error("rational_roots: coefficient too large to factor");
      break;
    }
    int e = 0;
    while (m % p == 0) {
      m /= p;
      ++e;
    }
    if (e > 0) factors.emplace_back(p, e);
  }
  if (m > 1) factors.emplace_back(m, 1);
  std::vector<Integer> out{Integer(1)};
  for (const auto& [p, e] : factors) {
    std::size_t base = out.size();
    Integer pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  return out;
}

}  // namespace

namespace {

UPoly derivative(const UPoly& p) {
  std::vector<Rational> d;
  for (int i = 1; i <= p.degree(); ++i) d.push_back(p.coeff(i) * i);
  return UPoly(std::move(d));
}

// Candidate rational roots of a squarefree monic polynomial of degree >= 3. Real roots are
// located numerically (companion matrix); any rational root has a denominator dividing the
// leading coefficient of the integer form, so rounding x*q for each such q recovers it.
// Candidates are verified exactly by the caller.
std::vector<Rational> numeric_candidates(const UPoly& sq) {
  const int d = sq.degree();
  Integer lcm = 1;
  for (const auto& c : sq.coeffs()) mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), c.get_den_mpz_t());
  const auto dens = divisors(lcm);
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(d, d);
  for (int i = 1; i < d; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) companion(i, d - 1) = -to_double(sq.coeff(i));
  const Eigen::VectorXcd ev = companion.eigenvalues();
  std::vector<Rational> out;
  for (Eigen::Index k = 0; k < ev.size(); ++k) {
    const double x = ev[k].real();
    if (std::fabs(ev[k].imag()) > 1e-6 * (1.0 + std::fabs(x))) continue;
    for (const auto& q : dens) {
      const double qd = q.get_d();
      const Integer p(std::lround(x * qd));
      for (int dp = -1; dp <= 1; ++dp) out.push_back(make_rational(Integer(p + dp), q));
    }
  }
  return out;
}

}  // namespace

std::vector<Rational> rational_roots(const UPoly& p) {
  if (p.is_zero()) throw std::domain_error("rational_roots of the zero polynomial");
  std::vector<Rational> roots;
  UPoly rest = p.monic();
  // Zero roots.
  while (rest.degree() > 0 && rest.coeff(0) == 0) {
    roots.emplace_back(0);
    rest = rest.divrem(UPoly::variable()).first;
  }
  if (rest.degree() <= 0) return roots;
  const UPoly sq = rest.divrem(gcd(rest, derivative(rest))).first.monic();
  std::vector<Rational> cands;
  if (sq.degree() == 1) {
    cands.push_back(-sq.coeff(0));
  } else if (sq.degree() == 2) {
    // x^2 + b x + c: rational roots iff the discriminant is a rational square.
    const Rational b = sq.coeff(1), c = sq.coeff(0);
    const Rational disc = b * b - 4 * c;
    if (disc >= 0) {
      Integer num(disc.get_num()), den(disc.get_den());
      if (mpz_perfect_square_p(num.get_mpz_t()) && mpz_perfect_square_p(den.get_mpz_t())) {
        mpz_sqrt(num.get_mpz_t(), num.get_mpz_t());
        mpz_sqrt(den.get_mpz_t(), den.get_mpz_t());
        const Rational r = make_rational(num, den);
        cands.push_back((-b + r) / 2);
        cands.push_back((-b - r) / 2);
      }
    }
  } else {
    cands = numeric_candidates(sq);
  }
  std::sort(cands.begin(), cands.end());
  cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
  for (const auto& r : cands) {
    const UPoly lin(std::vector<Rational>{-r, Rational(1)});
    while (rest.degree() > 0 && rest.eval(r) == 0) {
      roots.push_back(r);
      rest = rest.divrem(lin).first;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

namespace {

void append_term(std::string& out, const Rational& c, const std::string& mono) {
  std::string term;
  if (mono.empty()) {
    term = to_string(c);
  } else if (c == 1) {
    term = mono;
  } else if (c == -1) {
    term = "-" + mono;
  } else {
    term = to_string(c) + "*" + mono;
  }
  if (!out.empty() && term.front() != '-') out += '+';
  out += term;
}

std::string power(const std::string& var, int e) {
  if (e == 0) return {};
  if (e == 1) return var;
  return var + "^" + std::to_string(e);
}

}  // namespace

std::string to_string(const UPoly& p, const std::string& var) {
  if (p.is_zero()) return "0";
  std::string out;
  for (int i = p.degree(); i >= 0; --i) {
    if (p.coeffs()[i] == 0) continue;
    append_term(out, p.coeffs()[i], power(var, i));
  }
  return out;
}

// ---------------------------------------------------------------------------
// BiPoly

BiPoly::BiPoly(Rational c) {
  if (c != 0) c_.emplace_back(std::move(c));
}

BiPoly::BiPoly(UPoly c) {
  if (!c.is_zero()) c_.push_back(std::move(c));
}

BiPoly::BiPoly(std::vector<UPoly> coeffs) : c_(std::move(coeffs)) { trim(); }

BiPoly BiPoly::from_terms(const std::map<Monomial, Rational>& terms) {
  std::vector<UPoly> c;
  for (const auto& [m, v] : terms) {
    if (m.first < 0 || m.second < 0) throw std::invalid_argument("negative exponent");
    if (static_cast<int>(c.size()) <= m.first) c.resize(m.first + 1);
    std::vector<Rational> mono(m.second + 1, Rational(0));
    mono[m.second] = v;
    c[m.first] += UPoly(std::move(mono));
  }
  return BiPoly(std::move(c));
}

BiPoly BiPoly::n() { return BiPoly(std::vector<UPoly>{UPoly(), UPoly(Rational(1))}); }
BiPoly BiPoly::h() { return BiPoly(UPoly::variable()); }

void BiPoly::trim() {
  while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
}

int BiPoly::degree_h() const {
  int d = -1;
  for (const auto& c : c_) d = std::max(d, c.degree());
  return d;
}

const UPoly& BiPoly::coeff_n(int i) const {
  static const UPoly zero;
  if (i < 0 || i >= static_cast<int>(c_.size())) return zero;
  return c_[i];
}

std::map<BiPoly::Monomial, Rational> BiPoly::terms() const {
  std::map<Monomial, Rational> out;
  for (int i = 0; i < static_cast<int>(c_.size()); ++i) {
    const auto& hc = c_[i].coeffs();
    for (int j = 0; j < static_cast<int>(hc.size()); ++j)
      if (hc[j] != 0) out.emplace(Monomial{i, j}, hc[j]);
  }
  return out;
}

BiPoly BiPoly::shift_n(const Integer& delta) const {
  if (delta == 0 || c_.size() <= 1) return *this;
  // Horner in (n + delta).
  const BiPoly lin(std::vector<UPoly>{UPoly(Rational(delta)), UPoly(Rational(1))});
  BiPoly acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * lin;
    acc += BiPoly(*it);
  }
  return acc;
}

UPoly BiPoly::eval_n(const Rational& value) const {
  UPoly acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc *= value;
    acc += *it;
  }
  return acc;
}

BiPoly BiPoly::subs_h(const Rational& value) const {
  std::vector<UPoly> out;
  out.reserve(c_.size());
  for (const auto& c : c_) out.emplace_back(c.eval(value));
  return BiPoly(std::move(out));
}

Rational BiPoly::eval(const Rational& n, const Rational& h) const { return eval_n(n).eval(h); }

BiPoly BiPoly::compose_n(const BiPoly& replacement) const {
  BiPoly acc;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    acc = acc * replacement;
    acc += BiPoly(*it);
  }
  return acc;
}

BiPoly& BiPoly::operator+=(const BiPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

BiPoly& BiPoly::operator-=(const BiPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

BiPoly& BiPoly::operator*=(const Rational& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& c : c_) c *= s;
  return *this;
}

BiPoly& BiPoly::operator*=(const UPoly& s) {
  if (s.is_zero()) {
    c_.clear();
    return *this;
  }
  for (auto& c : c_) c = c * s;
  return *this;
}

BiPoly operator*(const BiPoly& a, const BiPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<UPoly> out(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) {
      if (b.c_[j].is_zero()) continue;
      out[i + j] += a.c_[i] * b.c_[j];
    }
  }
  return BiPoly(std::move(out));
}

bool operator<(const BiPoly& a, const BiPoly& b) {
  if (a.c_.size() != b.c_.size()) return a.c_.size() < b.c_.size();
  for (std::size_t i = a.c_.size(); i-- > 0;) {
    if (a.c_[i] < b.c_[i]) return true;
    if (b.c_[i] < a.c_[i]) return false;
  }
  return false;
}

UPoly BiPoly::content() const {
  UPoly g;
  for (const auto& c : c_) {
    g = gcd(g, c);
    if (g.degree() == 0) break;
  }
  return g;
}

BiPoly BiPoly::exact_div(const UPoly& d) const {
  if (d.is_zero()) throw std::domain_error("division by zero polynomial");
  std::vector<UPoly> out;
  out.reserve(c_.size());
  for (const auto& c : c_) {
    auto [q, r] = c.divrem(d);
    if (!r.is_zero()) throw std::domain_error("inexact polynomial division");
    out.push_back(std::move(q));
  }
  return BiPoly(std::move(out));
}

BiPoly BiPoly::exact_div(const BiPoly& d) const {
  if (d.is_zero()) throw std::domain_error("division by zero polynomial");
  if (d.is_constant_in_n()) return exact_div(d.c_[0]);
  BiPoly r = *this;
  std::vector<UPoly> q;
  while (!r.is_zero()) {
    const int s = r.degree_n() - d.degree_n();
    if (s < 0) throw std::domain_error("inexact polynomial division");
    auto [t, rem] = r.lc_n().divrem(d.lc_n());
    if (!rem.is_zero()) throw std::domain_error("inexact polynomial division");
    if (static_cast<int>(q.size()) <= s) q.resize(s + 1);
    q[s] += t;
    std::vector<UPoly> shifted(s + 1);
    shifted[s] = t;
    const int before = r.degree_n();
    r -= d * BiPoly(std::move(shifted));
    if (!r.is_zero() && r.degree_n() >= before) throw std::domain_error("inexact polynomial division");
  }
  return BiPoly(std::move(q));
}

BiPoly BiPoly::prem(const BiPoly& d) const {
  if (d.is_zero()) throw std::domain_error("pseudo-remainder by zero polynomial");
  const int k = d.degree_n();
  const UPoly& lc = d.lc_n();
  BiPoly r = *this;
  int e = degree_n() - k + 1;
  while (!r.is_zero() && r.degree_n() >= k) {
    const int s = r.degree_n() - k;
    std::vector<UPoly> mono(s + 1);
    mono[s] = r.lc_n();
    r *= lc;
    r -= d * BiPoly(std::move(mono));
    --e;
  }
  for (; e > 0; --e) r *= lc;
  return r;
}

namespace {

BiPoly lex_monic(BiPoly p) {
  if (p.is_zero()) return p;
  return p * Rational(1 / p.lex_lc());
}

BiPoly primitive_part(const BiPoly& p) {
  const UPoly c = p.content();
  if (c.degree() <= 0) return lex_monic(p);
  return lex_monic(p.exact_div(c));
}

}  // namespace

namespace {

// Gcd of primitive polynomials by subresultant-free primitive PRS. Reference path, used when
// interpolation fails its divisibility check.
BiPoly gcd_prs(BiPoly x, BiPoly y) {
  if (x.degree_n() < y.degree_n()) std::swap(x, y);
  while (true) {
    if (y.degree_n() == 0) return BiPoly(Rational(1));
    BiPoly r = x.prem(y);
    if (r.is_zero()) return y;
    x = std::move(y);
    y = primitive_part(r);
  }
}

UPoly image_at(const BiPoly& p, const Rational& h0) {
  std::vector<Rational> c;
  c.reserve(p.coeffs().size());
  for (const auto& hc : p.coeffs()) c.push_back(hc.eval(h0));
  return UPoly(std::move(c));
}

UPoly interpolate(const std::vector<Rational>& xs, const std::vector<Rational>& ys) {
  // Newton divided differences, then expansion.
  std::vector<Rational> dd = ys;
  const std::size_t m = xs.size();
  for (std::size_t j = 1; j < m; ++j)
    for (std::size_t i = m - 1; i >= j; --i) {
      dd[i] = (dd[i] - dd[i - 1]) / (xs[i] - xs[i - j]);
      if (i == j) break;
    }
  UPoly acc(dd[m - 1]);
  for (std::size_t k = m - 1; k-- > 0;) {
    acc = acc * UPoly(std::vector<Rational>{-xs[k], Rational(1)});
    acc += UPoly(dd[k]);
  }
  return acc;
}

bool divides(const BiPoly& g, const BiPoly& p) { return p.prem(g).is_zero(); }

// Brown-style dense interpolation in h: gcds of images at h = 0, 1, -1, 2, ... scaled by the
// gcd of the leading coefficients, interpolated and checked by pseudo-division.
BiPoly gcd_interp(const BiPoly& a, const BiPoly& b) {
  const UPoly gamma = gcd(a.lc_n(), b.lc_n());
  const int bound = std::min(a.degree_h(), b.degree_h()) + std::max(gamma.degree(), 0);
  std::vector<Rational> xs;
  std::vector<UPoly> images;
  int best_deg = std::min(a.degree_n(), b.degree_n()) + 1;
  for (long step = 0; step < 4 * (bound + 4); ++step) {
    const Rational h0((step % 2 == 0) ? step / 2 : -(step + 1) / 2);
    if (a.lc_n().eval(h0) == 0 || b.lc_n().eval(h0) == 0) continue;
    UPoly g = gcd(image_at(a, h0), image_at(b, h0));
    if (g.degree() == 0) return BiPoly(Rational(1));
    if (g.degree() > best_deg) continue;
    if (g.degree() < best_deg) {
      best_deg = g.degree();
      xs.clear();
      images.clear();
    }
    xs.push_back(h0);
    images.push_back(g * gamma.eval(h0));
    if (static_cast<int>(xs.size()) == bound + 1) {
      std::vector<UPoly> coeffs;
      for (int i = 0; i <= best_deg; ++i) {
        std::vector<Rational> ys;
        ys.reserve(xs.size());
        for (const auto& im : images) ys.push_back(im.coeff(i));
        coeffs.push_back(interpolate(xs, ys));
      }
      BiPoly cand = primitive_part(BiPoly(std::move(coeffs)));
      if (cand.degree_n() == best_deg && divides(cand, a) && divides(cand, b)) return cand;
      break;
    }
  }
  return gcd_prs(a, b);
}

}  // namespace

BiPoly gcd(const BiPoly& a, const BiPoly& b) {
  if (a.is_zero()) return lex_monic(b);
  if (b.is_zero()) return lex_monic(a);
  if (a.is_constant() || b.is_constant()) return BiPoly(Rational(1));
  const UPoly gc = gcd(a.content(), b.content());
  if (a.is_constant_in_n() || b.is_constant_in_n()) return BiPoly(gc);
  BiPoly g = gcd_interp(primitive_part(a), primitive_part(b));
  g *= gc;
  return lex_monic(g);
}

std::string to_string(const BiPoly& p, const std::string& nvar, const std::string& hvar) {
  if (p.is_zero()) return "0";
  std::string out;
  const auto& c = p.coeffs();
  for (int i = p.degree_n(); i >= 0; --i) {
    const auto& hc = c[i].coeffs();
    for (int j = static_cast<int>(hc.size()) - 1; j >= 0; --j) {
      if (hc[j] == 0) continue;
      std::string mono = power(nvar, i);
      const std::string hp = power(hvar, j);
      if (!hp.empty()) mono = mono.empty() ? hp : mono + "*" + hp;
      append_term(out, hc[j], mono);
    }
  }
  return out;
}

}  // namespace isopair
