#pragma once

#include <array>
#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "isopair/rational.hpp"

namespace isopair {

class IndexPoly;

/// Integer affine form c0 + sum c_v x_v in index variables x_0, x_1, ...
class AffineForm {
 public:
  AffineForm() = default;
  explicit AffineForm(long constant) : constant_(constant) {}
  static AffineForm variable(int v);
  AffineForm(long constant, std::vector<long> coeffs);

  long constant() const { return constant_; }
  /// Coefficient of x_v (0 beyond the stored range).
  long coeff(int v) const;
  int num_vars() const { return static_cast<int>(coeffs_.size()); }

  long eval(std::span<const long> x) const;
  /// Replaces x_v by forms[v].
  AffineForm substitute(const std::vector<AffineForm>& forms) const;
  IndexPoly to_poly() const;
  /// "i + j + k", "i - 2*j + 1", "0".
  std::string str(const std::vector<std::string>& names) const;

  AffineForm operator+(const AffineForm& o) const;
  AffineForm operator-(const AffineForm& o) const;
  AffineForm operator*(long c) const;
  bool operator==(const AffineForm&) const = default;
  auto operator<=>(const AffineForm&) const = default;

 private:
  void trim();
  long constant_ = 0;
  std::vector<long> coeffs_;  // trailing zeros trimmed
};

/// Polynomial over Q in index variables x_0, x_1, ...; canonical sparse form.
class IndexPoly {
 public:
  using Exponents = std::vector<int>;  // trailing zeros trimmed

  IndexPoly() = default;
  IndexPoly(Rational c);                                 // NOLINT(google-explicit-constructor)
  IndexPoly(long c) : IndexPoly(Rational(c)) {}          // NOLINT(google-explicit-constructor)
  static IndexPoly variable(int v);

  const std::map<Exponents, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  /// Total degree; -1 for the zero polynomial.
  int total_degree() const;
  /// Degree in a single variable; -1 for zero.
  int degree_in(int v) const;
  int num_vars() const;

  Rational eval(std::span<const long> x) const;
  /// Replaces x_v by polys[v].
  IndexPoly substitute(const std::vector<IndexPoly>& polys) const;
  IndexPoly substitute(const std::vector<AffineForm>& forms) const;
  IndexPoly swapped(int a, int b) const;
  /// The affine form if degree <= 1 with integer coefficients.
  std::optional<AffineForm> as_affine() const;
  /// Quotient by x_v when every term contains x_v exactly once.
  std::optional<IndexPoly> linear_cofactor(int v) const;
  /// Graded order (degree first, then lexicographic with x_0 largest), e.g. "i^2 - 2*i*j + 1/2".
  std::string str(const std::vector<std::string>& names) const;

  IndexPoly& operator+=(const IndexPoly& o);
  IndexPoly& operator-=(const IndexPoly& o);
  IndexPoly& operator*=(const IndexPoly& o);
  /// Division by a nonzero constant; std::domain_error otherwise.
  IndexPoly& operator/=(const IndexPoly& o);
  friend IndexPoly operator+(IndexPoly a, const IndexPoly& b) { return a += b; }
  friend IndexPoly operator-(IndexPoly a, const IndexPoly& b) { return a -= b; }
  friend IndexPoly operator*(IndexPoly a, const IndexPoly& b) { return a *= b; }
  friend IndexPoly operator/(IndexPoly a, const IndexPoly& b) { return a /= b; }
  IndexPoly operator-() const;
  bool operator==(const IndexPoly&) const = default;

 private:
  void add_term(Exponents e, const Rational& c);
  std::map<Exponents, Rational> terms_;
};

/// One isocommutator rule: [g_i, g_j]_{h_k} = coefficient(i, j, k) * g_{target(i, j, k)}, variables 0, 1, 2.
struct IsoRule {
  IndexPoly coefficient;
  AffineForm target;
  bool operator==(const IsoRule&) const = default;
};

/// Index-parameterized isotopic pair: two families, family 1 - f being the isotope family of f.
class PairPresentation {
 public:
  /// Validates antisymmetry of each rule; std::invalid_argument on violation.
  PairPresentation(std::string name, std::array<std::string, 2> families, std::array<IsoRule, 2> rules);
  /// Skips the antisymmetry check; for deliberately broken presentations.
  static PairPresentation unchecked(std::string name, std::array<std::string, 2> families,
                                    std::array<IsoRule, 2> rules);

  static PairPresentation witt();
  static PairPresentation abelian();

  const std::string& name() const { return name_; }
  const std::array<std::string, 2>& families() const { return families_; }
  const std::string& family_name(int f) const { return families_.at(f); }
  const IsoRule& rule(int f) const { return rules_.at(f); }
  /// Family index by name, or -1.
  int family_index(const std::string& name) const;
  /// Empty when antisymmetric; otherwise a description of the violation.
  std::string antisymmetry_violation() const;

 private:
  PairPresentation() = default;
  std::string name_;
  std::array<std::string, 2> families_;
  std::array<IsoRule, 2> rules_;
};

struct Generator {
  int family = 0;
  long index = 0;
  auto operator<=>(const Generator&) const = default;
};

/// Finite formal sum of generators with nonzero rational coefficients.
class ElementCombo {
 public:
  ElementCombo() = default;
  static ElementCombo gen(int family, long index, Rational c = Rational(1));

  const std::map<Generator, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// The common family of all terms; nullopt when empty; std::invalid_argument when mixed.
  std::optional<int> family() const;
  Rational coeff(int family, long index) const;
  void add(const Generator& g, const Rational& c);

  ElementCombo& operator+=(const ElementCombo& o);
  ElementCombo& operator-=(const ElementCombo& o);
  friend ElementCombo operator+(ElementCombo a, const ElementCombo& b) { return a += b; }
  friend ElementCombo operator-(ElementCombo a, const ElementCombo& b) { return a -= b; }
  ElementCombo scaled(const Rational& c) const;
  bool operator==(const ElementCombo&) const = default;

  /// "2*e3 - 1/2*f-1", "0"; family names from the array.
  std::string str(const std::array<std::string, 2>& names) const;

 private:
  std::map<Generator, Rational> terms_;
};

/// Bilinear isocommutator [x, y]_a. std::invalid_argument on family mismatch.
ElementCombo isobracket(const PairPresentation& p, const ElementCombo& x, const ElementCombo& y,
                        const ElementCombo& a);

enum class Regime { kPolynomialIdentity, kWindow };
std::string to_string(Regime r);

struct Defect {
  std::string identity;     // "jacobi-e", "compat-e", ...
  std::vector<long> tuple;  // witness indices in the identity's variable order
  ElementCombo value;
};

/// Result of one axiom family over the index window |.| <= K.
struct AxiomCheck {
  std::string identity;
  std::vector<std::string> variables;
  long checked = 0;
  std::vector<Defect> defects;
  /// True when the identity holds symbolically in the index variables.
  bool polynomial_identity = false;
  /// Grouped-by-target symbolic residuals that do not vanish, as text.
  std::vector<std::string> symbolic_residuals;
};

struct DefectReport {
  long K = 0;
  std::vector<AxiomCheck> checks;
  bool ok() const;
  /// Polynomial identity iff every check holds symbolically.
  Regime regime() const;
  std::size_t defect_count() const;
};

/// Cyclic Jacobi sums of each family's bracket with isotope index k, all |i|,|j|,|l|,|k| <= K.
DefectReport verify_jacobi(const PairPresentation& p, long K);
/// Both six-term compatibility identities on all generator tuples with indices <= K.
DefectReport verify_compatibility(const PairPresentation& p, long K);

/// Closed index interval; missing ends are unbounded.
struct IndexRange {
  std::optional<long> lo, hi;
  bool contains(long i) const { return (!lo || i >= *lo) && (!hi || i <= *hi); }
  bool empty() const { return lo && hi && *lo > *hi; }
  IndexRange intersect(const IndexRange& o) const;
  /// "[-1, inf)", "(-inf, 1]", "[0, 0]", "empty".
  std::string str() const;
  bool operator==(const IndexRange&) const = default;
};

struct CompositeChart {
  std::string name;
  std::array<IndexRange, 2> ranges;  // per family; unbounded by default
  bool contains(const Generator& g) const { return ranges.at(g.family).contains(g.index); }
  bool operator==(const CompositeChart&) const = default;
};

struct ChartIntersection {
  std::size_t a = 0, b = 0;
  std::array<IndexRange, 2> ranges;
  std::array<std::vector<long>, 2> members;  // within the window
  bool closed = true;
};

struct ClosureFailure {
  std::size_t chart = 0;
  Generator x, y, a;
  ElementCombo value;
};

struct CompositeReport {
  long K = 0;
  std::vector<CompositeChart> charts;
  std::vector<ClosureFailure> closure_failures;
  std::vector<Generator> uncovered;
  std::vector<ChartIntersection> intersections;  // all pairs a < b
  bool closed = true, dense = true, connected = true, coherent = true;
  bool ok() const { return closed && dense && connected && coherent; }
};

/// Closure, density, connectedness and overlap coherence of the charts over the window |.| <= K.
CompositeReport verify_composite(const PairPresentation& p, const std::vector<CompositeChart>& charts, long K);
/// The two Witt charts: e_i (i >= -1), f_i (i >= 0) and e_i (i <= 1), f_i (i <= 0).
std::vector<CompositeChart> witt_charts();

/// Gaussian rational re + im*i.
struct Gaussian {
  Rational re, im;
  Gaussian() = default;
  Gaussian(Rational r, Rational i = Rational(0)) : re(std::move(r)), im(std::move(i)) {}  // NOLINT
  static Gaussian I() { return {Rational(0), Rational(1)}; }
  bool is_zero() const { return re == 0 && im == 0; }
  Gaussian operator+(const Gaussian& o) const { return {re + o.re, im + o.im}; }
  Gaussian operator-(const Gaussian& o) const { return {re - o.re, im - o.im}; }
  Gaussian operator*(const Gaussian& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
  bool operator==(const Gaussian& o) const { return re == o.re && im == o.im; }
  std::string str() const;
};

/// Finite Laurent series in w = e^{it}, as a function or as the vector field (series) * d/dt.
class FourierField {
 public:
  enum class Kind { kFunction, kVectorField };
  /// Basis conventions: unit takes f_k = e^{ikt}; paper takes f_k = i e^{ikt}. Both use e_k = i e^{ikt} d/dt.
  enum class Basis { kUnit, kPaper };

  explicit FourierField(Kind kind) : kind_(kind) {}
  static FourierField e(long k, Basis basis = Basis::kUnit);
  static FourierField f(long k, Basis basis = Basis::kUnit);

  Kind kind() const { return kind_; }
  const std::map<long, Gaussian>& modes() const { return modes_; }
  void add(long mode, const Gaussian& c);
  FourierField scaled(const Gaussian& c) const;
  FourierField operator+(const FourierField& o) const;
  FourierField operator-(const FourierField& o) const;
  bool is_zero() const { return modes_.empty(); }
  bool operator==(const FourierField& o) const { return kind_ == o.kind_ && modes_ == o.modes_; }
  std::string str() const;

 private:
  Kind kind_;
  std::map<long, Gaussian> modes_;
};

/// d/dt of a series: w^m -> i m w^m.
FourierField derivative(const FourierField& f);
/// Lie derivative of a function along a vector field.
FourierField lie_derivative(const FourierField& v, const FourierField& f);
/// Lie bracket of vector fields.
FourierField lie_bracket(const FourierField& v1, const FourierField& v2);
/// [v1, v2]_f for vector fields with a function isotope, or [f1, f2]_v for functions with a
/// vector-field isotope. std::invalid_argument on kind mismatch.
FourierField geometric_isobracket(const FourierField& a1, const FourierField& a2, const FourierField& iso);

}  // namespace isopair
