#include "isopair/isotopic.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <stdexcept>

#include "isopair/parallel.hpp"

namespace isopair {

// ---------------------------------------------------------------- AffineForm

AffineForm AffineForm::variable(int v) {
  AffineForm a;
  a.coeffs_.assign(static_cast<std::size_t>(v) + 1, 0);
  a.coeffs_[v] = 1;
  return a;
}

AffineForm::AffineForm(long constant, std::vector<long> coeffs) : constant_(constant), coeffs_(std::move(coeffs)) {
  trim();
}

void AffineForm::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

long AffineForm::coeff(int v) const { return v < num_vars() ? coeffs_[v] : 0; }

long AffineForm::eval(std::span<const long> x) const {
  if (x.size() < coeffs_.size()) throw std::invalid_argument("AffineForm::eval: too few variables");
  long s = constant_;
  for (std::size_t v = 0; v < coeffs_.size(); ++v) s += coeffs_[v] * x[v];
  return s;
}

AffineForm AffineForm::substitute(const std::vector<AffineForm>& forms) const {
  if (forms.size() < coeffs_.size()) throw std::invalid_argument("AffineForm::substitute: too few forms");
  AffineForm out(constant_);
  for (std::size_t v = 0; v < coeffs_.size(); ++v) out = out + forms[v] * coeffs_[v];
  return out;
}

IndexPoly AffineForm::to_poly() const {
  IndexPoly p{Rational(constant_)};
  for (int v = 0; v < num_vars(); ++v) p += IndexPoly::variable(v) * IndexPoly(coeffs_[v]);
  return p;
}

std::string AffineForm::str(const std::vector<std::string>& names) const {
  std::string out;
  auto append = [&](long c, const std::string& body) {
    if (c == 0) return;
    const long m = std::labs(c);
    std::string t = body.empty() ? std::to_string(m) : (m == 1 ? body : std::to_string(m) + "*" + body);
    if (out.empty()) {
      out = (c < 0 ? "-" : "") + t;
    } else {
      out += (c < 0 ? " - " : " + ") + t;
    }
  };
  for (int v = 0; v < num_vars(); ++v) append(coeffs_[v], names.at(v));
  append(constant_, "");
  return out.empty() ? "0" : out;
}

AffineForm AffineForm::operator+(const AffineForm& o) const {
  std::vector<long> c(std::max(coeffs_.size(), o.coeffs_.size()), 0);
  for (std::size_t v = 0; v < c.size(); ++v) c[v] = coeff(static_cast<int>(v)) + o.coeff(static_cast<int>(v));
  return AffineForm(constant_ + o.constant_, std::move(c));
}

AffineForm AffineForm::operator-(const AffineForm& o) const { return *this + o * -1; }

AffineForm AffineForm::operator*(long c) const {
  std::vector<long> cs = coeffs_;
  for (auto& x : cs) x *= c;
  return AffineForm(constant_ * c, std::move(cs));
}

// ---------------------------------------------------------------- IndexPoly

namespace {

void trim(IndexPoly::Exponents& e) {
  while (!e.empty() && e.back() == 0) e.pop_back();
}

int degree(const IndexPoly::Exponents& e) { return std::accumulate(e.begin(), e.end(), 0); }

}  // namespace

IndexPoly::IndexPoly(Rational c) {
  if (c != 0) terms_.emplace(Exponents{}, std::move(c));
}

IndexPoly IndexPoly::variable(int v) {
  IndexPoly p;
  Exponents e(static_cast<std::size_t>(v) + 1, 0);
  e[v] = 1;
  p.terms_.emplace(std::move(e), Rational(1));
  return p;
}

void IndexPoly::add_term(Exponents e, const Rational& c) {
  if (c == 0) return;
  trim(e);
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(std::move(e), c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

bool IndexPoly::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty()); }

int IndexPoly::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, degree(e));
  return d;
}

int IndexPoly::degree_in(int v) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, v < static_cast<int>(e.size()) ? e[v] : 0);
  return d;
}

int IndexPoly::num_vars() const {
  int n = 0;
  for (const auto& [e, c] : terms_) n = std::max(n, static_cast<int>(e.size()));
  return n;
}

Rational IndexPoly::eval(std::span<const long> x) const {
  Rational s(0);
  for (const auto& [e, c] : terms_) {
    if (e.size() > x.size()) throw std::invalid_argument("IndexPoly::eval: too few variables");
    Integer m(1);
    for (std::size_t v = 0; v < e.size(); ++v) {
      Integer p;
      mpz_pow_ui(p.get_mpz_t(), Integer(x[v]).get_mpz_t(), static_cast<unsigned long>(e[v]));
      m *= p;
    }
    s += c * Rational(m);
  }
  return s;
}

IndexPoly IndexPoly::substitute(const std::vector<IndexPoly>& polys) const {
  IndexPoly out;
  for (const auto& [e, c] : terms_) {
    if (e.size() > polys.size()) throw std::invalid_argument("IndexPoly::substitute: too few polynomials");
    IndexPoly t(c);
    for (std::size_t v = 0; v < e.size(); ++v)
      for (int k = 0; k < e[v]; ++k) t *= polys[v];
    out += t;
  }
  return out;
}

IndexPoly IndexPoly::substitute(const std::vector<AffineForm>& forms) const {
  std::vector<IndexPoly> polys;
  polys.reserve(forms.size());
  for (const auto& f : forms) polys.push_back(f.to_poly());
  return substitute(polys);
}

IndexPoly IndexPoly::swapped(int a, int b) const {
  const int n = std::max({num_vars(), a + 1, b + 1});
  std::vector<IndexPoly> vars;
  for (int v = 0; v < n; ++v) vars.push_back(variable(v == a ? b : v == b ? a : v));
  return substitute(vars);
}

std::optional<AffineForm> IndexPoly::as_affine() const {
  if (total_degree() > 1) return std::nullopt;
  long constant = 0;
  std::vector<long> coeffs(num_vars(), 0);
  for (const auto& [e, c] : terms_) {
    if (!is_integer(c) || !c.get_num().fits_slong_p()) return std::nullopt;
    const long v = c.get_num().get_si();
    if (e.empty()) {
      constant = v;
    } else {
      coeffs[e.size() - 1] = v;
    }
  }
  return AffineForm(constant, std::move(coeffs));
}

std::optional<IndexPoly> IndexPoly::linear_cofactor(int v) const {
  IndexPoly out;
  for (const auto& [e, c] : terms_) {
    if (static_cast<int>(e.size()) <= v || e[v] != 1) return std::nullopt;
    Exponents r = e;
    r[v] = 0;
    out.add_term(std::move(r), c);
  }
  if (out.is_zero()) return std::nullopt;
  return out;
}

std::string IndexPoly::str(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<Exponents, Rational>> ordered(terms_.begin(), terms_.end());
  std::stable_sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    const int da = degree(a.first), db = degree(b.first);
    if (da != db) return da > db;
    const std::size_t n = std::max(a.first.size(), b.first.size());
    for (std::size_t v = 0; v < n; ++v) {
      const int ea = v < a.first.size() ? a.first[v] : 0;
      const int eb = v < b.first.size() ? b.first[v] : 0;
      if (ea != eb) return ea > eb;
    }
    return false;
  });
  std::string out;
  for (const auto& [e, c] : ordered) {
    std::string mono;
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += names.at(v);
      if (e[v] > 1) mono += "^" + std::to_string(e[v]);
    }
    const Rational m = abs(c);
    std::string t;
    if (mono.empty()) {
      t = to_string(m);
    } else if (m == 1) {
      t = mono;
    } else {
      t = to_string(m) + "*" + mono;
    }
    if (out.empty()) {
      out = (c < 0 ? "-" : "") + t;
    } else {
      out += (c < 0 ? " - " : " + ") + t;
    }
  }
  return out;
}

IndexPoly& IndexPoly::operator+=(const IndexPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

IndexPoly& IndexPoly::operator-=(const IndexPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, Rational(-c));
  return *this;
}

IndexPoly& IndexPoly::operator*=(const IndexPoly& o) {
  IndexPoly out;
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e(std::max(ea.size(), eb.size()), 0);
      for (std::size_t v = 0; v < ea.size(); ++v) e[v] += ea[v];
      for (std::size_t v = 0; v < eb.size(); ++v) e[v] += eb[v];
      out.add_term(std::move(e), Rational(ca * cb));
    }
  *this = std::move(out);
  return *this;
}

IndexPoly& IndexPoly::operator/=(const IndexPoly& o) {
  if (!o.is_constant() || o.is_zero()) throw std::domain_error("division by a non-constant or zero index polynomial");
  const Rational d = o.terms_.begin()->second;
  for (auto& [e, c] : terms_) c /= d;
  return *this;
}

IndexPoly IndexPoly::operator-() const { return IndexPoly(0) - *this; }

// ---------------------------------------------------------------- PairPresentation

PairPresentation PairPresentation::unchecked(std::string name, std::array<std::string, 2> families,
                                             std::array<IsoRule, 2> rules) {
  PairPresentation p;
  p.name_ = std::move(name);
  p.families_ = std::move(families);
  p.rules_ = std::move(rules);
  if (p.families_[0] == p.families_[1]) throw std::invalid_argument("family names must differ");
  return p;
}

PairPresentation::PairPresentation(std::string name, std::array<std::string, 2> families,
                                   std::array<IsoRule, 2> rules)
    : PairPresentation(unchecked(std::move(name), std::move(families), std::move(rules))) {
  const std::string v = antisymmetry_violation();
  if (!v.empty()) throw std::invalid_argument(v);
}

std::string PairPresentation::antisymmetry_violation() const {
  const std::vector<std::string> names = {"i", "j", "k"};
  for (int f = 0; f < 2; ++f) {
    const IsoRule& r = rules_[f];
    if (r.coefficient.num_vars() > 3 || r.target.num_vars() > 3)
      return "rule for family " + families_[f] + " uses more than three index variables";
    const IndexPoly sum = r.coefficient + r.coefficient.swapped(0, 1);
    if (!sum.is_zero())
      return "antisymmetry violated for family " + families_[f] + ": c(i,j,k) + c(j,i,k) = " + sum.str(names);
    const AffineForm sw = r.target.substitute({AffineForm::variable(1), AffineForm::variable(0), AffineForm::variable(2)});
    if (sw != r.target)
      return "target of family " + families_[f] + " is not symmetric in the bracketed indices: " + r.target.str(names);
  }
  return {};
}

int PairPresentation::family_index(const std::string& name) const {
  for (int f = 0; f < 2; ++f)
    if (families_[f] == name) return f;
  return -1;
}

PairPresentation PairPresentation::witt() {
  const IsoRule r{IndexPoly::variable(0) - IndexPoly::variable(1), AffineForm(0, {1, 1, 1})};
  return PairPresentation("witt", {"e", "f"}, {r, r});
}

PairPresentation PairPresentation::abelian() {
  const IsoRule r{IndexPoly(0), AffineForm(0, {1, 1, 1})};
  return PairPresentation("abelian", {"e", "f"}, {r, r});
}

// ---------------------------------------------------------------- ElementCombo

ElementCombo ElementCombo::gen(int family, long index, Rational c) {
  ElementCombo e;
  e.add({family, index}, c);
  return e;
}

std::optional<int> ElementCombo::family() const {
  if (terms_.empty()) return std::nullopt;
  const int f = terms_.begin()->first.family;
  for (const auto& [g, c] : terms_)
    if (g.family != f) throw std::invalid_argument("element mixes both families");
  return f;
}

Rational ElementCombo::coeff(int family, long index) const {
  const auto it = terms_.find({family, index});
  return it == terms_.end() ? Rational(0) : it->second;
}

void ElementCombo::add(const Generator& g, const Rational& c) {
  if (c == 0) return;
  auto it = terms_.find(g);
  if (it == terms_.end()) {
    terms_.emplace(g, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

ElementCombo& ElementCombo::operator+=(const ElementCombo& o) {
  for (const auto& [g, c] : o.terms_) add(g, c);
  return *this;
}

ElementCombo& ElementCombo::operator-=(const ElementCombo& o) {
  for (const auto& [g, c] : o.terms_) add(g, Rational(-c));
  return *this;
}

ElementCombo ElementCombo::scaled(const Rational& c) const {
  ElementCombo out;
  for (const auto& [g, x] : terms_) out.add(g, Rational(x * c));
  return out;
}

std::string ElementCombo::str(const std::array<std::string, 2>& names) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [g, c] : terms_) {
    const std::string gen = names.at(g.family) + std::to_string(g.index);
    const Rational m = abs(c);
    const std::string t = m == 1 ? gen : to_string(m) + "*" + gen;
    if (out.empty()) {
      out = (c < 0 ? "-" : "") + t;
    } else {
      out += (c < 0 ? " - " : " + ") + t;
    }
  }
  return out;
}

// ---------------------------------------------------------------- isobracket

namespace {

// Structure constant of one generator triple: coefficient and target index.
std::pair<Rational, long> bracket_gen(const IsoRule& r, long i, long j, long k) {
  const long x[3] = {i, j, k};
  return {r.coefficient.eval(x), r.target.eval(x)};
}

}  // namespace

ElementCombo isobracket(const PairPresentation& p, const ElementCombo& x, const ElementCombo& y,
                        const ElementCombo& a) {
  const auto fx = x.family(), fy = y.family(), fa = a.family();
  if (fx && fy && *fx != *fy) throw std::invalid_argument("isobracket: bracketed elements lie in different families");
  const auto f = fx ? fx : fy;
  if (f && fa && *f == *fa) throw std::invalid_argument("isobracket: isotope must lie in the other family");
  ElementCombo out;
  if (!f || !fa) return out;
  const IsoRule& r = p.rule(*f);
  for (const auto& [gx, cx] : x.terms())
    for (const auto& [gy, cy] : y.terms())
      for (const auto& [ga, ca] : a.terms()) {
        const auto [c, t] = bracket_gen(r, gx.index, gy.index, ga.index);
        out.add({*f, t}, Rational(c * cx * cy * ca));
      }
  return out;
}

// ---------------------------------------------------------------- axiom verification

std::string to_string(Regime r) { return r == Regime::kPolynomialIdentity ? "polynomial-identity" : "window"; }

bool DefectReport::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.defects.empty(); });
}

Regime DefectReport::regime() const {
  const bool poly =
      std::all_of(checks.begin(), checks.end(), [](const AxiomCheck& c) { return c.polynomial_identity; });
  return poly ? Regime::kPolynomialIdentity : Regime::kWindow;
}

std::size_t DefectReport::defect_count() const {
  std::size_t n = 0;
  for (const auto& c : checks) n += c.defects.size();
  return n;
}

namespace {

// Symbolic element: target affine form -> coefficient polynomial in the identity's variables.
using SymbolicSum = std::map<AffineForm, IndexPoly>;

struct SymElem {
  IndexPoly coeff;
  AffineForm index;
};

// Symbolic [x, y]_a with all three given as single generators with symbolic index and coefficient.
SymElem sym_bracket(const IsoRule& r, const SymElem& x, const SymElem& y, const SymElem& a) {
  const std::vector<AffineForm> args = {x.index, y.index, a.index};
  return {x.coeff * y.coeff * a.coeff * r.coefficient.substitute(args), r.target.substitute(args)};
}

SymElem sym_var(int v) { return {IndexPoly(1), AffineForm::variable(v)}; }

void accumulate(SymbolicSum& s, const SymElem& e, const Rational& sign) {
  s[e.index] += e.coeff * IndexPoly(sign);
}

// Numeric counterpart over a cached coefficient table.
class RuleTable {
 public:
  RuleTable(const IsoRule& r, long bound) : rule_(r), bound_(bound) {
    const long side = 2 * bound + 1;
    if (side * side * side <= 4'000'000) {
      cache_.reserve(static_cast<std::size_t>(side * side * side));
      for (long i = -bound; i <= bound; ++i)
        for (long j = -bound; j <= bound; ++j)
          for (long k = -bound; k <= bound; ++k) cache_.push_back(bracket_gen(r, i, j, k));
    }
  }

  std::pair<Rational, long> operator()(long i, long j, long k) const {
    if (!cache_.empty() && std::labs(i) <= bound_ && std::labs(j) <= bound_ && std::labs(k) <= bound_) {
      const long side = 2 * bound_ + 1;
      return cache_[static_cast<std::size_t>(((i + bound_) * side + (j + bound_)) * side + (k + bound_))];
    }
    return bracket_gen(rule_, i, j, k);
  }

 private:
  const IsoRule& rule_;
  long bound_;
  std::vector<std::pair<Rational, long>> cache_;
};

// Bound on |target| for arguments bounded by b.
long target_bound(const AffineForm& t, long b) {
  long s = std::labs(t.constant());
  for (int v = 0; v < t.num_vars(); ++v) s += std::labs(t.coeff(v)) * b;
  return s;
}

using NumericSum = std::vector<std::pair<long, Rational>>;

void add_numeric(NumericSum& s, long index, const Rational& c) {
  if (c == 0) return;
  for (auto& [i, x] : s)
    if (i == index) {
      x += c;
      return;
    }
  s.emplace_back(index, c);
}

ElementCombo to_combo(int family, const NumericSum& s) {
  ElementCombo out;
  for (const auto& [i, c] : s) out.add({family, i}, c);
  return out;
}

// Runs body(tuple) over all tuples in [-K, K]^dims in lexicographic order, in parallel over the
// leading index, and concatenates the defects deterministically.
AxiomCheck sweep(const std::string& identity, std::vector<std::string> variables, long K,
                 const std::function<std::optional<ElementCombo>(std::span<const long>)>& body) {
  const std::size_t dims = variables.size();
  const long side = 2 * K + 1;
  std::vector<std::vector<Defect>> per_lead(static_cast<std::size_t>(side));
  parallel_for(static_cast<std::size_t>(side), [&](std::size_t lead) {
    std::vector<long> t(dims, -K);
    t[0] = static_cast<long>(lead) - K;
    while (true) {
      if (auto d = body(t)) per_lead[lead].push_back({identity, t, std::move(*d)});
      std::size_t pos = dims - 1;
      while (pos >= 1 && t[pos] == K) t[pos--] = -K;
      if (pos == 0) return;
      ++t[pos];
    }
  });
  AxiomCheck out;
  out.identity = identity;
  out.variables = std::move(variables);
  out.checked = 1;
  for (std::size_t d = 0; d < dims; ++d) out.checked *= side;
  for (auto& v : per_lead)
    for (auto& d : v) out.defects.push_back(std::move(d));
  return out;
}

void finish_symbolic(AxiomCheck& check, const SymbolicSum& s, const std::string& family) {
  for (const auto& [target, coeff] : s)
    if (!coeff.is_zero())
      check.symbolic_residuals.push_back(family + "(" + target.str(check.variables) + "): " + coeff.str(check.variables));
  check.polynomial_identity = check.symbolic_residuals.empty();
}

AxiomCheck jacobi_family(const PairPresentation& p, int f, long K) {
  const IsoRule& r = p.rule(f);
  const std::string id = "jacobi-" + p.family_name(f);
  const long b1 = std::max(K, target_bound(r.target, K));
  const RuleTable table(r, b1);
  // Variables i, j, l (family f) and isotope index k.
  auto check = sweep(id, {"i", "j", "l", "k"}, K, [&](std::span<const long> x) -> std::optional<ElementCombo> {
    const long i = x[0], j = x[1], l = x[2], k = x[3];
    NumericSum s;
    const long cyc[3][3] = {{i, j, l}, {j, l, i}, {l, i, j}};
    for (const auto& c : cyc) {
      const auto [c1, t1] = table(c[0], c[1], k);
      if (c1 == 0) continue;
      const auto [c2, t2] = table(t1, c[2], k);
      add_numeric(s, t2, Rational(c1 * c2));
    }
    ElementCombo e = to_combo(f, s);
    if (e.is_zero()) return std::nullopt;
    return e;
  });
  SymbolicSum sym;
  const SymElem I = sym_var(0), J = sym_var(1), L = sym_var(2), Kv = sym_var(3);
  const SymElem cyc[3][3] = {{I, J, L}, {J, L, I}, {L, I, J}};
  for (const auto& c : cyc) accumulate(sym, sym_bracket(r, sym_bracket(r, c[0], c[1], Kv), c[2], Kv), Rational(1));
  finish_symbolic(check, sym, p.family_name(f));
  return check;
}

// [X,Y]_{[A,B]_Z} - 1/2 (sum of six iterated brackets) with X, Y, Z in family f and A, B in the other.
AxiomCheck compat_family(const PairPresentation& p, int f, long K) {
  const int g = 1 - f;
  const IsoRule& rf = p.rule(f);
  const IsoRule& rg = p.rule(g);
  const std::string id = "compat-" + p.family_name(f);
  const long bf = std::max(K, target_bound(rf.target, K));
  const long bg = std::max(K, target_bound(rg.target, K));
  const RuleTable tf(rf, std::max(bf, bg)), tg(rg, K);
  const Rational half = make_rational(1, 2);
  auto check = sweep(id, {"x", "y", "z", "a", "b"}, K, [&](std::span<const long> v) -> std::optional<ElementCombo> {
    const long X = v[0], Y = v[1], Z = v[2], A = v[3], B = v[4];
    NumericSum s;
    const auto [cab, tab] = tg(A, B, Z);
    if (cab != 0) {
      const auto [c, t] = tf(X, Y, tab);
      add_numeric(s, t, Rational(cab * c));
    }
    const long triples[3][3] = {{X, Z, Y}, {X, Y, Z}, {Z, Y, X}};
    for (const auto& q : triples) {
      for (int swap = 0; swap < 2; ++swap) {
        const long U = swap ? B : A, W = swap ? A : B;
        const auto [c1, t1] = tf(q[0], q[1], U);
        if (c1 == 0) continue;
        const auto [c2, t2] = tf(t1, q[2], W);
        add_numeric(s, t2, Rational((swap ? half : Rational(-half)) * c1 * c2));
      }
    }
    ElementCombo e = to_combo(f, s);
    if (e.is_zero()) return std::nullopt;
    return e;
  });
  SymbolicSum sym;
  const SymElem X = sym_var(0), Y = sym_var(1), Z = sym_var(2), A = sym_var(3), B = sym_var(4);
  accumulate(sym, sym_bracket(rf, X, Y, sym_bracket(rg, A, B, Z)), Rational(1));
  const SymElem triples[3][3] = {{X, Z, Y}, {X, Y, Z}, {Z, Y, X}};
  for (const auto& q : triples) {
    accumulate(sym, sym_bracket(rf, sym_bracket(rf, q[0], q[1], A), q[2], B), Rational(-half));
    accumulate(sym, sym_bracket(rf, sym_bracket(rf, q[0], q[1], B), q[2], A), half);
  }
  finish_symbolic(check, sym, p.family_name(f));
  return check;
}

}  // namespace

DefectReport verify_jacobi(const PairPresentation& p, long K) {
  if (K < 1) throw std::invalid_argument("verify_jacobi: K must be at least 1");
  DefectReport r;
  r.K = K;
  for (int f = 0; f < 2; ++f) r.checks.push_back(jacobi_family(p, f, K));
  return r;
}

DefectReport verify_compatibility(const PairPresentation& p, long K) {
  if (K < 1) throw std::invalid_argument("verify_compatibility: K must be at least 1");
  DefectReport r;
  r.K = K;
  for (int f = 0; f < 2; ++f) r.checks.push_back(compat_family(p, f, K));
  return r;
}

// ---------------------------------------------------------------- composites

IndexRange IndexRange::intersect(const IndexRange& o) const {
  IndexRange r;
  r.lo = !lo ? o.lo : !o.lo ? lo : std::max(*lo, *o.lo);
  r.hi = !hi ? o.hi : !o.hi ? hi : std::min(*hi, *o.hi);
  return r;
}

std::string IndexRange::str() const {
  if (empty()) return "empty";
  return (lo ? "[" + std::to_string(*lo) : std::string("(-inf")) + ", " + (hi ? std::to_string(*hi) + "]" : std::string("inf)"));
}

std::vector<CompositeChart> witt_charts() {
  CompositeChart c1{"one", {IndexRange{-1, std::nullopt}, IndexRange{0, std::nullopt}}};
  CompositeChart c2{"two", {IndexRange{std::nullopt, 1}, IndexRange{std::nullopt, 0}}};
  return {c1, c2};
}

namespace {

std::vector<long> window_members(const IndexRange& r, long K) {
  std::vector<long> out;
  for (long i = -K; i <= K; ++i)
    if (r.contains(i)) out.push_back(i);
  return out;
}

// Brackets of window members of a subpair that leave it.
std::vector<ClosureFailure> closure_failures(const PairPresentation& p, const std::array<IndexRange, 2>& ranges,
                                             std::size_t chart, long K) {
  std::vector<ClosureFailure> out;
  for (int f = 0; f < 2; ++f) {
    const auto mf = window_members(ranges[f], K);
    const auto mg = window_members(ranges[1 - f], K);
    for (long i : mf)
      for (long j : mf)
        for (long k : mg) {
          const auto [c, t] = bracket_gen(p.rule(f), i, j, k);
          if (c != 0 && !ranges[f].contains(t))
            out.push_back({chart, {f, i}, {f, j}, {1 - f, k}, ElementCombo::gen(f, t, c)});
        }
  }
  return out;
}

}  // namespace

CompositeReport verify_composite(const PairPresentation& p, const std::vector<CompositeChart>& charts, long K) {
  if (charts.empty()) throw std::invalid_argument("verify_composite: at least one chart required");
  CompositeReport rep;
  rep.K = K;
  rep.charts = charts;
  for (std::size_t c = 0; c < charts.size(); ++c) {
    auto fails = closure_failures(p, charts[c].ranges, c, K);
    for (auto& x : fails) rep.closure_failures.push_back(std::move(x));
  }
  rep.closed = rep.closure_failures.empty();

  for (int f = 0; f < 2; ++f)
    for (long i = -K; i <= K; ++i) {
      const Generator g{f, i};
      if (std::none_of(charts.begin(), charts.end(), [&](const CompositeChart& c) { return c.contains(g); }))
        rep.uncovered.push_back(g);
    }
  rep.dense = rep.uncovered.empty();

  std::vector<std::size_t> parent(charts.size());
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::size_t(std::size_t)> root = [&](std::size_t x) { return parent[x] == x ? x : parent[x] = root(parent[x]); };
  for (std::size_t a = 0; a < charts.size(); ++a)
    for (std::size_t b = a + 1; b < charts.size(); ++b) {
      ChartIntersection in;
      in.a = a;
      in.b = b;
      bool nonempty = false;
      for (int f = 0; f < 2; ++f) {
        in.ranges[f] = charts[a].ranges[f].intersect(charts[b].ranges[f]);
        in.members[f] = window_members(in.ranges[f], K);
        nonempty = nonempty || !in.ranges[f].empty();
      }
      in.closed = closure_failures(p, in.ranges, a, K).empty();
      if (!in.closed) rep.coherent = false;
      if (nonempty) parent[root(a)] = root(b);
      rep.intersections.push_back(std::move(in));
    }
  for (std::size_t c = 1; c < charts.size(); ++c)
    if (root(c) != root(0)) rep.connected = false;
  return rep;
}

// ---------------------------------------------------------------- geometric pair

std::string Gaussian::str() const {
  if (im == 0) return to_string(re);
  const std::string imag = (im == 1 ? "" : im == -1 ? "-" : to_string(im)) + "i";
  if (re == 0) return imag;
  return "(" + to_string(re) + (im > 0 ? "+" : "") + imag + ")";
}

FourierField FourierField::e(long k, Basis) {
  FourierField v(Kind::kVectorField);
  v.add(k, Gaussian::I());
  return v;
}

FourierField FourierField::f(long k, Basis basis) {
  FourierField u(Kind::kFunction);
  u.add(k, basis == Basis::kPaper ? Gaussian::I() : Gaussian(Rational(1)));
  return u;
}

void FourierField::add(long mode, const Gaussian& c) {
  if (c.is_zero()) return;
  auto it = modes_.find(mode);
  if (it == modes_.end()) {
    modes_.emplace(mode, c);
  } else {
    it->second = it->second + c;
    if (it->second.is_zero()) modes_.erase(it);
  }
}

FourierField FourierField::scaled(const Gaussian& c) const {
  FourierField out(kind_);
  for (const auto& [m, x] : modes_) out.add(m, x * c);
  return out;
}

FourierField FourierField::operator+(const FourierField& o) const {
  if (kind_ != o.kind_) throw std::invalid_argument("FourierField: adding a function and a vector field");
  FourierField out = *this;
  for (const auto& [m, x] : o.modes_) out.add(m, x);
  return out;
}

FourierField FourierField::operator-(const FourierField& o) const { return *this + o.scaled(Gaussian(Rational(-1))); }

std::string FourierField::str() const {
  std::string body;
  for (const auto& [m, c] : modes_) {
    if (!body.empty()) body += " + ";
    body += c.str() + "*w^" + std::to_string(m);
  }
  if (body.empty()) body = "0";
  return kind_ == Kind::kVectorField ? "(" + body + ") d/dt" : body;
}

namespace {

FourierField product(const FourierField& a, const FourierField& b, FourierField::Kind kind) {
  FourierField out(kind);
  for (const auto& [ma, ca] : a.modes())
    for (const auto& [mb, cb] : b.modes()) out.add(ma + mb, ca * cb);
  return out;
}

}  // namespace

FourierField derivative(const FourierField& f) {
  FourierField out(f.kind());
  for (const auto& [m, c] : f.modes()) out.add(m, c * Gaussian(Rational(0), Rational(m)));
  return out;
}

FourierField lie_derivative(const FourierField& v, const FourierField& f) {
  if (v.kind() != FourierField::Kind::kVectorField || f.kind() != FourierField::Kind::kFunction)
    throw std::invalid_argument("lie_derivative: expects a vector field and a function");
  return product(v, derivative(f), FourierField::Kind::kFunction);
}

FourierField lie_bracket(const FourierField& v1, const FourierField& v2) {
  if (v1.kind() != FourierField::Kind::kVectorField || v2.kind() != FourierField::Kind::kVectorField)
    throw std::invalid_argument("lie_bracket: expects vector fields");
  const auto vf = FourierField::Kind::kVectorField;
  return product(v1, derivative(v2), vf) - product(v2, derivative(v1), vf);
}

FourierField geometric_isobracket(const FourierField& a1, const FourierField& a2, const FourierField& iso) {
  using K = FourierField::Kind;
  if (a1.kind() != a2.kind() || iso.kind() == a1.kind())
    throw std::invalid_argument("geometric_isobracket: bracketed fields must share a kind and the isotope the other");
  if (a1.kind() == K::kVectorField) {
    return product(lie_derivative(a1, iso), a2, K::kVectorField) - product(lie_derivative(a2, iso), a1, K::kVectorField) +
           product(iso, lie_bracket(a1, a2), K::kVectorField);
  }
  return product(lie_derivative(iso, a2), a1, K::kFunction) - product(lie_derivative(iso, a1), a2, K::kFunction);
}

}  // namespace isopair
