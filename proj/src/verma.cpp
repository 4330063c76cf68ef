#include "isopair/verma.hpp"

#include <map>
#include <stdexcept>

#include "isopair/parallel.hpp"
#include "isopair/shapovalov.hpp"

namespace isopair {

std::string to_string(const WittGenerator& g) {
  return (g.family == WittFamily::kE ? "e" : "f") + std::to_string(g.index);
}

namespace {

const RationalFunction& n_var() {
  static const RationalFunction n = RationalFunction::n();
  return n;
}
const RationalFunction& h_var() {
  static const RationalFunction h = RationalFunction::h();
  return h;
}

// n (n-1) ... (n-k+1)
RationalFunction falling(long k) {
  RationalFunction p(1);
  for (long j = 0; j < k; ++j) p *= n_var() - RationalFunction(j);
  return p;
}

// (n+2h) (n+2h+1) ... (n+2h+k-1)
RationalFunction rising_2h(long k) {
  RationalFunction p(1);
  for (long j = 0; j < k; ++j) p *= n_var() + RationalFunction(2) * h_var() + RationalFunction(j);
  return p;
}

}  // namespace

ShiftOperator rep_generator(WittFamily family, long k, const VermaContext& ctx) {
  RationalFunction c;
  if (k >= 0) {
    c = falling(k);
    if (family == WittFamily::kE) c *= n_var() - RationalFunction(k) + RationalFunction(k + 1) * h_var();
    return op_make({{-k, c}}, ctx);
  }
  const long m = -k;
  c = RationalFunction(1) / rising_2h(m);
  if (family == WittFamily::kE) c *= n_var() + RationalFunction(m + 1) * h_var();
  return op_make({{m, c}}, ctx);
}

bool in_chart(int chart, const WittGenerator& g) {
  const bool e = g.family == WittFamily::kE;
  if (chart == 1) return e ? g.index >= -1 : g.index >= 0;
  if (chart == 2) return e ? g.index <= 1 : g.index <= 0;
  return false;
}

std::optional<int> chart_of(const std::vector<WittGenerator>& elements) {
  for (int chart : {1, 2}) {
    bool all = true;
    for (const auto& g : elements) all = all && in_chart(chart, g);
    if (all) return chart;
  }
  return std::nullopt;
}

ShiftOperator chart_formula(int chart, const WittGenerator& g, const VermaContext& ctx) {
  if (!in_chart(chart, g))
    throw std::invalid_argument(to_string(g) + " is not in chart " + std::to_string(chart));
  if (chart == 1 && g == WittGenerator{WittFamily::kE, -1}) return op_make({{1, RationalFunction(1)}}, ctx);
  if (chart == 2 && g == WittGenerator{WittFamily::kE, 1}) {
    // Transport the chart's own e_-1 through the Shapovalov form: c*(m) = c(m-1) w(m)/w(m-1).
    const ShiftOperator lower = chart_formula(2, {WittFamily::kE, -1}, ctx);
    const ShiftTerm& t = *lower.term(1);
    return op_make({{-1, t.stable.shift_n(-1) * weight_ratio(1, ctx).shift_n(-1)}}, ctx);
  }
  return rep_generator(g, ctx);
}

WittGenerator witt_target(const WittGenerator& x, const WittGenerator& y, const WittGenerator& a) {
  if (x.family != y.family || a.family == x.family)
    throw std::invalid_argument("isobracket [" + to_string(x) + ", " + to_string(y) + "]_" + to_string(a) +
                                " mixes families");
  return {x.family, x.index + y.index + a.index};
}

namespace {

using GeneratorCache = std::map<WittGenerator, ShiftOperator>;

void check_side(RepSide side, const WittGenerator& x, const WittGenerator& y, const WittGenerator& a) {
  const WittFamily inner = side == RepSide::kT1 ? WittFamily::kE : WittFamily::kF;
  if (x.family != inner || y.family != inner || a.family == inner)
    throw std::invalid_argument("rep_identity_defect: generators do not match the identity side");
}

void fill(GeneratorCache& cache, const WittGenerator& x, const WittGenerator& y, const WittGenerator& a,
          const VermaContext& ctx) {
  for (const auto& g : {x, y, a, witt_target(x, y, a)})
    if (cache.count(g) == 0) cache.emplace(g, rep_generator(g, ctx));
}

// All four generators must already be in the cache.
ShiftOperator defect_with(const GeneratorCache& cache, const WittGenerator& x, const WittGenerator& y,
                          const WittGenerator& a) {
  const ShiftOperator& tx = cache.at(x);
  const ShiftOperator& ty = cache.at(y);
  const ShiftOperator& ta = cache.at(a);
  ShiftOperator out = tx * ta * ty - ty * ta * tx;
  const long coeff = x.index - y.index;
  if (coeff != 0) out = out - op_scale(cache.at(witt_target(x, y, a)), RationalFunction(coeff));
  return out;
}

}  // namespace

ShiftOperator rep_identity_defect(RepSide side, const WittGenerator& x, const WittGenerator& y,
                                  const WittGenerator& a, const VermaContext& ctx) {
  check_side(side, x, y, a);
  GeneratorCache cache;
  fill(cache, x, y, a, ctx);
  return defect_with(cache, x, y, a);
}

ComposedRepReport verify_composed_representation(long K, const VermaContext& ctx, bool include_cross_chart) {
  if (K < 2) throw std::invalid_argument("verify_composed_representation needs K >= 2");
  struct Task {
    RepSide side;
    WittGenerator x, y, a;
    std::optional<int> chart;
  };
  std::vector<Task> tasks;
  for (RepSide side : {RepSide::kT1, RepSide::kT2}) {
    const WittFamily inner = side == RepSide::kT1 ? WittFamily::kE : WittFamily::kF;
    const WittFamily outer = side == RepSide::kT1 ? WittFamily::kF : WittFamily::kE;
    for (long i = -K; i <= K; ++i)
      for (long j = -K; j < i; ++j)
        for (long k = -K; k <= K; ++k) {
          const WittGenerator x{inner, i}, y{inner, j}, a{outer, k};
          const auto chart = chart_of({x, y, a});
          if (chart || include_cross_chart) tasks.push_back({side, x, y, a, chart});
        }
  }

  // Warm the generator cache serially; workers then only read it.
  GeneratorCache shared;
  for (const auto& t : tasks) fill(shared, t.x, t.y, t.a, ctx);

  std::vector<std::optional<RepDefect>> results(tasks.size());
  parallel_for(tasks.size(), [&](std::size_t idx) {
    const Task& t = tasks[idx];
    ShiftOperator d = defect_with(shared, t.x, t.y, t.a);
    if (d.is_zero()) return;
    RepDefect r{t.side, t.x, t.y, t.a, t.chart, std::move(d), std::nullopt};
    if (!t.chart) r.certificate = certify(r.defect, true);
    results[idx] = std::move(r);
  });

  ComposedRepReport report;
  report.K = K;
  report.context = ctx.str();
  for (std::size_t idx = 0; idx < tasks.size(); ++idx) {
    (tasks[idx].chart ? report.in_chart_checked : report.cross_chart_checked) += 1;
    if (!results[idx]) continue;
    if (tasks[idx].chart)
      report.in_chart_failures.push_back(std::move(*results[idx]));
    else
      report.cross_chart_defects.push_back(std::move(*results[idx]));
  }
  return report;
}

bool OverlapReport::ok() const {
  for (const auto& e : entries)
    if (!e.equal) return false;
  return !entries.empty();
}

OverlapReport chart_overlap_consistency(const VermaContext& ctx) {
  OverlapReport report;
  for (const WittGenerator g : {WittGenerator{WittFamily::kE, -1}, WittGenerator{WittFamily::kE, 0},
                                WittGenerator{WittFamily::kE, 1}, WittGenerator{WittFamily::kF, 0}}) {
    OverlapEntry e{g, chart_formula(1, g, ctx), chart_formula(2, g, ctx)};
    e.equal = e.chart1 == e.chart2;
    report.entries.push_back(std::move(e));
  }
  return report;
}

ShiftOperator witt_deviation(long i, long j, const VermaContext& ctx) {
  const ShiftOperator a = rep_generator(WittFamily::kE, i, ctx);
  const ShiftOperator b = rep_generator(WittFamily::kE, j, ctx);
  ShiftOperator out = op_commutator(a, b);
  if (i != j) out = out - op_scale(rep_generator(WittFamily::kE, i + j, ctx), RationalFunction(i - j));
  return out;
}

LbProbe lb_probe(const VermaContext& ctx) {
  const ShiftOperator p = rep_generator(WittFamily::kF, 1, ctx);
  const ShiftOperator q = rep_generator(WittFamily::kF, -1, ctx);
  LbProbe out{p * q, q * p, ShiftOperator(ctx), {}};
  out.commutator = out.pq - out.qp;
  out.certificate = certify(out.commutator, false);
  return out;
}

NonlinearSl2Probe nonlinear_sl2_probe(long k, const VermaContext& ctx) {
  if (k < 1) throw std::invalid_argument("nonlinear_sl2_probe needs k >= 1");
  const ShiftOperator e0 = rep_generator(WittFamily::kE, 0, ctx);
  const ShiftOperator up = rep_generator(WittFamily::kE, k, ctx);
  const ShiftOperator down = rep_generator(WittFamily::kE, -k, ctx);
  NonlinearSl2Probe out;
  out.k = k;
  out.raising_ok = op_commutator(e0, up) == op_scale(up, RationalFunction(-k));
  out.lowering_ok = op_commutator(e0, down) == op_scale(down, RationalFunction(k));
  out.diagonal = op_commutator(up, down);
  for (const auto& [s, t] : out.diagonal.terms())
    if (s != 0) throw std::logic_error("[e_k, e_-k] has a term at offset " + std::to_string(s));
  const ShiftTerm* d = out.diagonal.term(0);
  if (!d) return out;
  // The spectrum of T1(e_0) is lambda = n + h, so n = lambda - h.
  out.phi = d->stable.compose_n(ctx.specialize(n_var() - h_var()));
  for (const auto& [n, v] : d->boundary) {
    bool same = false;
    try {
      same = d->stable.eval_n(Rational(n)) == v;
    } catch (const PoleError&) {
    }
    if (!same) out.boundary_exceptions.push_back(n);
  }
  return out;
}

}  // namespace isopair
