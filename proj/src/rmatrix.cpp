#include "isopair/rmatrix.hpp"

#include <stdexcept>

namespace isopair {

std::string to_string(Normalization n) { return n == Normalization::kPaper ? "paper" : "half"; }

Normalization parse_normalization(std::string_view text) {
  if (text == "paper") return Normalization::kPaper;
  if (text == "half") return Normalization::kHalf;
  throw std::invalid_argument("unknown normalization '" + std::string(text) + "'");
}

Rational RMatrixMap::scalar() const { return normalization == Normalization::kPaper ? Rational(1) : make_rational(1, 2); }

ElementCombo r_apply(const RMatrixMap& r, const ElementCombo& a) {
  const auto f = a.family();
  if (f && *f != r.acted_family()) throw std::invalid_argument("r_apply: element lies in the isotope's family");
  ElementCombo out;
  for (const auto& [g, c] : a.terms()) out.add({g.family, g.index + r.isotope.index}, Rational(c * r.scalar()));
  return out;
}

ElementCombo witt_bracket(const ElementCombo& a, const ElementCombo& b) {
  const auto fa = a.family(), fb = b.family();
  if (fa && fb && *fa != *fb) throw std::invalid_argument("witt_bracket: elements lie in different families");
  ElementCombo out;
  for (const auto& [ga, ca] : a.terms())
    for (const auto& [gb, cb] : b.terms()) out.add({ga.family, ga.index + gb.index}, Rational(ca * cb * (ga.index - gb.index)));
  return out;
}

ElementCombo r_identity_defect(const PairPresentation& p, long i, long j, long k, Normalization n, int family) {
  const RMatrixMap r{{1 - family, k}, n};
  const auto a = ElementCombo::gen(family, i), b = ElementCombo::gen(family, j);
  const ElementCombo lhs = witt_bracket(r_apply(r, a), b) + witt_bracket(a, r_apply(r, b));
  return lhs - isobracket(p, a, b, ElementCombo::gen(1 - family, k));
}

ElementCombo r_multiplicativity_defect(long i, long j, long l, Normalization n, int family) {
  const int iso = 1 - family;
  const RMatrixMap ri{{iso, i}, n}, rj{{iso, j}, n}, rij{{iso, i + j}, n};
  const auto a = ElementCombo::gen(family, l);
  return r_apply(ri, r_apply(rj, a)) - r_apply(rij, a);
}

MybeResult mybe_defect(long i, long j, long k, Normalization n, const Rational& constant, int family) {
  const RMatrixMap r{{1 - family, k}, n};
  const auto a = ElementCombo::gen(family, i), b = ElementCombo::gen(family, j);
  const ElementCombo ra = r_apply(r, a), rb = r_apply(r, b);
  const ElementCombo common = witt_bracket(ra, rb) - r_apply(r, witt_bracket(ra, b) + witt_bracket(a, rb));
  const ElementCombo ab = witt_bracket(a, b);
  return {common + ab.scaled(constant), common + r_apply(r, r_apply(r, ab))};
}

std::string to_string(RDefectKind k) {
  switch (k) {
    case RDefectKind::kIdentity:
      return "identity";
    case RDefectKind::kMultiplicativity:
      return "multiplicativity";
    case RDefectKind::kMybe:
      return "mybe";
    case RDefectKind::kCompensated:
      return "compensated";
  }
  return "";
}

RDefectKind parse_rdefect_kind(std::string_view text) {
  for (auto k : {RDefectKind::kIdentity, RDefectKind::kMultiplicativity, RDefectKind::kMybe, RDefectKind::kCompensated})
    if (to_string(k) == text) return k;
  throw std::invalid_argument("unknown defect kind '" + std::string(text) + "'");
}

RDefectSweep r_defect_sweep(const PairPresentation& p, RDefectKind kind, long K, Normalization n,
                            const Rational& mybe_constant) {
  RDefectSweep s{kind, n, K, mybe_constant, {}, 0, {}};
  s.variables = kind == RDefectKind::kMultiplicativity ? std::vector<std::string>{"i", "j", "l"}
                                                        : std::vector<std::string>{"i", "j", "k"};
  for (int f = 0; f < 2; ++f)
    for (long x = -K; x <= K; ++x)
      for (long y = -K; y <= K; ++y)
        for (long z = -K; z <= K; ++z) {
          ElementCombo v;
          switch (kind) {
            case RDefectKind::kIdentity:
              v = r_identity_defect(p, x, y, z, n, f);
              break;
            case RDefectKind::kMultiplicativity:
              v = r_multiplicativity_defect(x, y, z, n, f);
              break;
            case RDefectKind::kMybe:
              v = mybe_defect(x, y, z, n, mybe_constant, f).defect;
              break;
            case RDefectKind::kCompensated:
              v = mybe_defect(x, y, z, n, mybe_constant, f).compensated;
              break;
          }
          ++s.checked;
          if (!v.is_zero()) s.nonzero.push_back({f, {x, y, z}, std::move(v)});
        }
  return s;
}

}  // namespace isopair
