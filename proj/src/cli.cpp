#include "isopair/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <stdexcept>

#include <fmt/format.h>

#include "isopair/certifier.hpp"
#include "isopair/expression.hpp"
#include "isopair/lab.hpp"
#include "isopair/pair_spec.hpp"
#include "isopair/rmatrix.hpp"
#include "isopair/verma.hpp"

namespace isopair {

namespace {

// Scalar-or-operator value for the certify expression language.
class OpValue {
 public:
  OpValue(Rational c) : scalar_(RationalFunction(c)) {}  // NOLINT(google-explicit-constructor)
  static OpValue scalar(RationalFunction f) {
    OpValue v(Rational(0));
    v.scalar_ = std::move(f);
    return v;
  }
  static OpValue op(ShiftOperator a) {
    OpValue v(Rational(0));
    v.scalar_.reset();
    v.op_ = std::move(a);
    return v;
  }

  ShiftOperator to_operator(const VermaContext& ctx) const {
    return op_ ? *op_ : op_scale(op_identity(ctx), *scalar_);
  }

  OpValue& operator+=(const OpValue& o) { return combine(o, 1); }
  OpValue& operator-=(const OpValue& o) { return combine(o, -1); }
  OpValue& operator*=(const OpValue& o) {
    if (scalar_ && o.scalar_) {
      *scalar_ *= *o.scalar_;
    } else if (scalar_) {
      *this = op(op_scale(*o.op_, *scalar_));
    } else if (o.scalar_) {
      op_ = op_scale(*op_, *o.scalar_);
    } else {
      op_ = op_compose(*op_, *o.op_);
    }
    return *this;
  }
  OpValue& operator/=(const OpValue& o) {
    if (!o.scalar_) throw std::domain_error("division by an operator");
    if (o.scalar_->is_zero()) throw std::domain_error("division by zero");
    const RationalFunction inv = RationalFunction(1) / *o.scalar_;
    if (scalar_) {
      *scalar_ *= inv;
    } else {
      op_ = op_scale(*op_, inv);
    }
    return *this;
  }
  friend OpValue operator-(OpValue a, const OpValue& b) { return a -= b; }

 private:
  OpValue& combine(const OpValue& o, int sign) {
    const RationalFunction s(sign);
    if (scalar_ && o.scalar_) {
      *scalar_ += s * *o.scalar_;
      return *this;
    }
    const VermaContext ctx = op_ ? op_->context() : o.op_->context();
    *this = op(op_add(to_operator(ctx), op_scale(o.to_operator(ctx), s)));
    return *this;
  }

  std::optional<RationalFunction> scalar_;
  std::optional<ShiftOperator> op_;
};

long parse_integer_argument(TokenStream& ts) {
  ts.expect_symbol("(");
  const SourcePos pos = ts.peek().pos;
  const IndexPoly p = parse_expression<IndexPoly>(ts, [](std::string_view name, SourcePos at) -> IndexPoly {
    throw ParseError(at, "unexpected identifier '" + std::string(name) + "' in generator index");
  });
  ts.expect_symbol(")");
  const auto a = p.as_affine();
  if (!a) throw ParseError(pos, "generator index must be an integer");
  return a->constant();
}

// ---------------------------------------------------------------- JSON helpers

std::string gen_name(const PairPresentation& p, const Generator& g) {
  return p.family_name(g.family) + std::to_string(g.index);
}

std::string side_name(RepSide s) { return s == RepSide::kT1 ? "T1" : "T2"; }

Json rationals(const std::vector<Rational>& v) {
  Json a = Json::array();
  for (const auto& q : v) a.push_back(to_string(q));
  return a;
}

Json certificate_json(const ClassCertificate& c) {
  Json terms = Json::array();
  for (const auto& t : c.terms) {
    Json j;
    j["offset"] = t.offset;
    j["delta"] = t.verdict == Verdict::kZero ? Json(nullptr) : Json(t.delta);
    j["verdict"] = to_string(t.verdict);
    j["leading"] = t.leading.str();
    j["exceptional_poly"] = to_string(t.exceptional_poly);
    j["exceptional_roots"] = rationals(t.exceptional_roots);
    terms.push_back(std::move(j));
  }
  Json j;
  j["verdict"] = to_string(c.verdict);
  j["modulo_scalars"] = c.modulo_scalars;
  j["scalar_part"] = c.scalar_part ? Json(c.scalar_part->str()) : Json(nullptr);
  j["terms"] = std::move(terms);
  j["exceptional_h_poly"] = to_string(c.exceptional_h_poly);
  j["exceptional_h_roots"] = rationals(c.exceptional_h_roots);
  j["finite_rank"] = c.finite_rank;
  j["inner_product"] = c.inner_product;
  return j;
}

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

// Shared parameters of every subcommand.
struct Common {
  std::string format = "json";
  std::string out;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--format", c.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
  app->add_option("--out", c.out, "write the report to PATH instead of stdout");
}

// Defect listing with a cap: "defects" holds at most `limit` entries (0 = all).
void cap_list(Json& result, Json list, long limit) {
  const auto total = static_cast<long>(list.size());
  result["defect_count"] = total;
  if (limit > 0 && total > limit) list.erase(list.begin() + limit, list.end());
  result["truncated"] = limit > 0 && total > limit;
  result["defects"] = std::move(list);
}

PairSpec load_spec(const std::string& path) {
  if (path.empty()) return witt_pair_spec();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_pair_spec(ss.str());
  } catch (const ParseError& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::vector<long> parse_long_list(const std::string& text, const char* what) {
  std::vector<long> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    long x = 0;
    try {
      x = std::stol(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument(std::string("malformed ") + what + ": '" + text + "'");
    v.push_back(x);
  }
  if (v.empty()) throw std::invalid_argument(std::string("empty ") + what);
  return v;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw std::invalid_argument(std::string("malformed ") + what + ": '" + text + "'");
    v.push_back(x);
  }
  if (v.empty()) throw std::invalid_argument(std::string("empty ") + what);
  return v;
}

// "re" or "re,im".
Complex parse_complex(const std::string& text) {
  const auto v = parse_double_list(text, "complex number");
  if (v.size() > 2) throw std::invalid_argument("malformed complex number: '" + text + "'");
  return {v[0], v.size() == 2 ? v[1] : 0.0};
}

Rational numeric_weight(const std::string& text) {
  const VermaContext ctx = parse_weight(text);
  if (ctx.is_symbolic()) throw std::invalid_argument("the lab needs a numeric --h");
  if (!ctx.unitarizable()) throw std::domain_error("the lab needs h > 0");
  return *ctx.weight();
}

// i (e_k + e_-k), or 2i e_0 for k = 0.
GeneratorCombo symmetric_generator(long k) {
  const Complex i(0.0, 1.0);
  return GeneratorCombo{{{k, i}, {-k, i}}};
}

// ---------------------------------------------------------------- commands

Report cmd_verify_pair(const std::string& spec_path, long K, long limit) {
  const PairSpec spec = load_spec(spec_path);
  const auto& p = spec.pair;
  Report r;
  r.command = "verify-pair";
  r.parameters = Json{{"spec", spec_path.empty() ? "builtin:witt" : spec_path}, {"pair", p.name()}, {"K", K}};
  DefectReport all = verify_jacobi(p, K);
  const DefectReport comp = verify_compatibility(p, K);
  all.checks.insert(all.checks.end(), comp.checks.begin(), comp.checks.end());
  for (const auto& a : all.checks) {
    Check c;
    c.id = a.identity;
    c.inputs = Json{{"K", K}, {"variables", a.variables}};
    c.pass = a.defects.empty();
    Json list = Json::array();
    for (const auto& d : a.defects) list.push_back(Json{{"tuple", d.tuple}, {"value", d.value.str(p.families())}});
    c.result = Json{{"checked", a.checked},
                    {"regime", to_string(a.polynomial_identity ? Regime::kPolynomialIdentity : Regime::kWindow)},
                    {"symbolic_residuals", a.symbolic_residuals}};
    cap_list(c.result, std::move(list), limit);
    c.text = fmt::format("{} tuples, {} defects, regime {}", a.checked, a.defects.size(),
                         c.result["regime"].get<std::string>());
    r.checks.push_back(std::move(c));
  }
  r.parameters["regime"] = to_string(all.regime());
  return r;
}

Report cmd_verify_composite(const std::string& spec_path, long K) {
  const PairSpec spec = load_spec(spec_path);
  if (spec.charts.empty()) throw std::invalid_argument("the spec declares no charts");
  const auto& p = spec.pair;
  const CompositeReport cr = verify_composite(p, spec.charts, K);
  Report r;
  r.command = "verify-composite";
  Json charts = Json::array();
  for (const auto& c : spec.charts) charts.push_back(c.name);
  r.parameters = Json{{"spec", spec_path.empty() ? "builtin:witt" : spec_path}, {"pair", p.name()}, {"K", K}, {"charts", charts}};
  const Json inputs = Json{{"K", K}};

  Json failures = Json::array();
  for (const auto& f : cr.closure_failures)
    failures.push_back(Json{{"chart", spec.charts[f.chart].name},
                            {"x", gen_name(p, f.x)},
                            {"y", gen_name(p, f.y)},
                            {"a", gen_name(p, f.a)},
                            {"value", f.value.str(p.families())}});
  Check closure{"closure", inputs, cr.closed, Json::object(), ""};
  cap_list(closure.result, failures, 0);
  closure.text = fmt::format("{} closure failures", cr.closure_failures.size());

  Json uncovered = Json::array();
  for (const auto& g : cr.uncovered) uncovered.push_back(gen_name(p, g));
  Check dense{"density", inputs, cr.dense, Json{{"uncovered", uncovered}},
              fmt::format("{} uncovered generators in the window", cr.uncovered.size())};

  Json inter = Json::array();
  for (const auto& x : cr.intersections) {
    Json ranges = Json::object();
    for (int f = 0; f < 2; ++f) ranges[p.family_name(f)] = x.ranges[f].str();
    inter.push_back(Json{{"charts", Json::array({spec.charts[x.a].name, spec.charts[x.b].name})},
                         {"ranges", ranges},
                         {"generators", x.members[0].size() + x.members[1].size()},
                         {"closed", x.closed}});
  }
  Check connected{"connectedness", inputs, cr.connected, Json{{"intersections", inter}},
                  cr.connected ? "chart intersection graph is connected" : "chart intersection graph is disconnected"};
  Check coherent{"coherence", inputs, cr.coherent, Json{{"intersections", inter}},
                 cr.coherent ? "every intersection is a closed subpair" : "some intersection is not closed"};
  r.checks = {closure, dense, connected, coherent};
  return r;
}

Report cmd_verify_rep(long K, const std::string& h, bool cross, long limit) {
  const VermaContext ctx = parse_weight(h);
  const ComposedRepReport rep = verify_composed_representation(K, ctx, cross);
  Report r;
  r.command = "verify-rep";
  r.parameters = Json{{"K", K}, {"h", ctx.str()}, {"cross_chart", cross}};
  const Json inputs = Json{{"K", K}, {"h", ctx.str()}};

  const auto defect_row = [](const RepDefect& d) {
    Json j{{"side", side_name(d.side)}, {"x", to_string(d.x)}, {"y", to_string(d.y)}, {"a", to_string(d.a)}};
    if (d.chart) j["chart"] = *d.chart;
    j["defect"] = d.defect.str();
    if (d.certificate) j["certificate"] = certificate_json(*d.certificate);
    return j;
  };

  Json fails = Json::array();
  for (const auto& d : rep.in_chart_failures) fails.push_back(defect_row(d));
  Check in{"in-chart", inputs, rep.ok(), Json{{"checked", rep.in_chart_checked}}, ""};
  cap_list(in.result, fails, limit);
  in.text = fmt::format("{} same-chart triples, {} defects", rep.in_chart_checked, rep.in_chart_failures.size());
  r.checks.push_back(in);

  const OverlapReport ov = chart_overlap_consistency(ctx);
  Json entries = Json::array();
  for (const auto& e : ov.entries)
    entries.push_back(Json{{"generator", to_string(e.generator)}, {"chart1", e.chart1.str()}, {"chart2", e.chart2.str()},
                           {"equal", e.equal}});
  r.checks.push_back(Check{"chart-overlap", Json{{"h", ctx.str()}}, ov.ok(), Json{{"entries", entries}},
                           ov.ok() ? "chart formulas agree on the overlap" : "chart formulas disagree on the overlap"});

  if (ctx.unitarizable()) {
    Json bad = Json::array();
    for (long k = 1; k <= K; ++k)
      for (WittFamily f : {WittFamily::kE, WittFamily::kF})
        if (!(op_adjoint(rep_generator(f, k, ctx)) == rep_generator(f, -k, ctx)))
          bad.push_back(to_string(WittGenerator{f, k}));
    const bool pass = bad.empty();
    r.checks.push_back(Check{"adjoint-symmetry", inputs, pass, Json{{"failures", bad}},
                             fmt::format("adjoint of T(g_k) is T(g_-k) for 1 <= k <= {}: {}", K, pass ? "yes" : "no")});
  }

  if (cross) {
    Json rows = Json::array();
    long noncompact = 0;
    for (const auto& d : rep.cross_chart_defects) {
      if (!d.certificate->compact()) ++noncompact;
      rows.push_back(defect_row(d));
    }
    Check c{"cross-chart", inputs, noncompact == 0, Json{{"checked", rep.cross_chart_checked}}, ""};
    cap_list(c.result, rows, limit);
    c.result["noncompact"] = noncompact;
    c.text = fmt::format("{} cross-chart triples, {} nonzero defects, {} not compact modulo scalars",
                         rep.cross_chart_checked, rep.cross_chart_defects.size(), noncompact);
    r.checks.push_back(c);
  }
  return r;
}

struct RmatrixOptions {
  std::string spec;
  std::string defect = "identity";
  std::string normalization = "paper";
  long K = 4;
  std::string constant = "1";
};

Report cmd_rmatrix(const RmatrixOptions& o, long limit) {
  const PairSpec spec = load_spec(o.spec);
  const auto& p = spec.pair;
  const RDefectKind kind = parse_rdefect_kind(o.defect);
  const Normalization n = parse_normalization(o.normalization);
  const Rational constant = parse_rational(o.constant);
  const RDefectSweep s = r_defect_sweep(p, kind, o.K, n, constant);
  Report r;
  r.command = "rmatrix";
  r.parameters = Json{{"spec", o.spec.empty() ? "builtin:witt" : o.spec},
                      {"defect", to_string(kind)},
                      {"normalization", to_string(n)},
                      {"K", o.K}};
  if (kind == RDefectKind::kMybe) r.parameters["mybe_constant"] = to_string(constant);
  std::string table = "family";
  for (const auto& v : s.variables) table += "," + v;
  table += ",defect\n";
  std::array<Json, 2> lists = {Json::array(), Json::array()};
  for (const auto& row : s.nonzero) {
    const std::string value = row.value.str(p.families());
    lists[row.family].push_back(Json{{"tuple", row.tuple}, {"value", value}});
    table += p.family_name(row.family);
    for (long t : row.tuple) table += "," + std::to_string(t);
    table += "," + value + "\n";
  }
  for (int f = 0; f < 2; ++f) {
    Check c;
    c.id = to_string(kind) + "-" + p.family_name(f);
    c.inputs = Json{{"K", o.K}, {"normalization", to_string(n)}, {"variables", s.variables}};
    c.pass = lists[f].empty();
    c.result = Json{{"checked", s.checked / 2}};
    c.text = fmt::format("{} tuples, {} nonzero defects ({} normalization)", s.checked / 2, lists[f].size(), to_string(n));
    cap_list(c.result, std::move(lists[f]), limit);
    r.checks.push_back(std::move(c));
  }
  r.table = std::move(table);
  return r;
}

Report cmd_certify(const std::string& expr, const std::string& h, bool modulo, const std::string& expect) {
  const VermaContext ctx = parse_weight(h);
  const ShiftOperator a = parse_operator_expression(expr, ctx);
  const ClassCertificate cert = certify(a, modulo);
  Report r;
  r.command = "certify";
  r.parameters = Json{{"op", expr}, {"h", ctx.str()}, {"modulo_scalars", modulo}};
  Check c;
  c.id = "certify";
  c.inputs = Json{{"op", expr}, {"h", ctx.str()}};
  c.result = Json{{"operator", a.str()}, {"certificate", certificate_json(cert)}};
  c.text = "verdict " + to_string(cert.verdict);
  if (!expect.empty()) {
    c.inputs["expect"] = expect;
    c.pass = to_string(cert.verdict) == expect;
    if (!c.pass) c.text += " (expected " + expect + ")";
  }
  r.checks.push_back(std::move(c));
  return r;
}

Report cmd_deviation(std::optional<long> i, std::optional<long> j, long K, const std::string& h) {
  const VermaContext ctx = parse_weight(h);
  if (i.has_value() != j.has_value()) throw std::invalid_argument("--i and --j go together");
  std::vector<std::pair<long, long>> pairs;
  if (i) {
    pairs.emplace_back(*i, *j);
  } else {
    for (long a = -K; a <= K; ++a)
      for (long b = -K; b <= K; ++b) pairs.emplace_back(a, b);
  }
  Report r;
  r.command = "deviation";
  r.parameters = i ? Json{{"i", *i}, {"j", *j}, {"h", ctx.str()}} : Json{{"K", K}, {"h", ctx.str()}};
  std::string table = "i,j,verdict,deviation\n";
  for (const auto& [a, b] : pairs) {
    const ShiftOperator d = witt_deviation(a, b, ctx);
    Check c;
    c.id = fmt::format("deviation({},{})", a, b);
    c.inputs = Json{{"i", a}, {"j", b}, {"h", ctx.str()}};
    std::string verdict = "zero";
    if (d.is_zero()) {
      c.result = Json{{"deviation", "0"}};
      c.text = "zero";
    } else {
      const bool diagonal = a + b == 0;
      const ClassCertificate cert = certify(d, diagonal);
      verdict = to_string(cert.verdict);
      c.pass = cert.compact();
      c.result = Json{{"deviation", d.str()}, {"certificate", certificate_json(cert)}};
      c.text = (diagonal ? "scalar + " : "") + verdict;
      if (cert.scalar_part) c.text += ", scalar " + cert.scalar_part->str();
    }
    std::string dev = d.str();
    std::replace(dev.begin(), dev.end(), '\n', ';');
    table += fmt::format("{},{},{},\"{}\"\n", a, b, verdict, dev);
    r.checks.push_back(std::move(c));
  }
  r.table = std::move(table);
  return r;
}

// ---------------------------------------------------------------- lab

struct LabOptions {
  std::string h = "1";
  std::string schedule = "32,64,128,256";
  long window = 16;
  double t = 0.2;
  double s = 0.3;
  long k = 2;
  long l = 0;
  long N = 0;  // 0 = experiment default
  std::string ts = "0.02,0.04,0.08,0.16";
  double min_exponent = 2.7;
  std::string w1 = "0.1,0.2,-0.15", w2 = "-0.05,0.1,0.12";
  std::string q1 = "0.5", q2 = "0.5", tau = "0.1,0.05";
  double a = 0.1;
};

Json curve_json(const DeviationCurve& c) {
  Json pts = Json::array();
  for (const auto& [n, v] : c.points) pts.push_back(Json{{"N", n}, {"value", v}});
  return Json{{"window", c.window}, {"points", pts}, {"converged", c.converged()}};
}

MobiusWord parse_word(const std::string& text) {
  const auto v = parse_double_list(text, "Gauss parameters");
  if (v.size() != 3) throw std::invalid_argument("Gauss parameters need three values a,b,c");
  return MobiusWord::from_gauss(v[0], v[1], v[2]);
}

Report cmd_lab(const std::string& experiment, const LabOptions& o) {
  const Rational h = numeric_weight(o.h);
  Report r;
  r.command = "lab " + experiment;
  r.floating = true;
  r.parameters = Json{{"h", to_string(h)}};
  const auto N_or = [&](long dflt) { return o.N > 0 ? o.N : dflt; };

  if (experiment == "matexp") {
    const long nmax = N_or(8);
    r.parameters.update(Json{{"k", o.k}, {"t", o.t}, {"N", nmax}});
    double worst = 0;
    std::string table = "N,value\n";
    Json pts = Json::array();
    for (long n = 1; n <= nmax; ++n) {
      const Eigen::MatrixXcd x = o.t * combo_truncation(symmetric_generator(o.k), n, h);
      const Eigen::MatrixXcd ref = taylor_exp(x);
      const double err = (matexp(x) - ref).norm() / ref.norm();
      worst = std::max(worst, err);
      pts.push_back(Json{{"N", n}, {"value", err}});
      table += fmt::format("{},{:.17g}\n", n, err);
    }
    r.checks.push_back(Check{"matexp-taylor", Json{{"tolerance", 1e-12}}, worst <= 1e-12, Json{{"points", pts}},
                             fmt::format("max relative error {:.3g} against the Taylor sum", worst)});
    r.table = table;
  } else if (experiment == "unitarity") {
    const auto schedule = parse_long_list(o.schedule, "N schedule");
    r.parameters.update(Json{{"k", o.k}, {"t", o.t}, {"N_schedule", schedule}, {"window", o.window}});
    const DeviationCurve c = unitarity_deviation(FlowSpec{symmetric_generator(o.k), o.t, 0, h}, schedule, o.window);
    const double last = c.points.back().second;
    r.checks.push_back(Check{"unitarity", Json{{"tolerance", 1e-8}}, last <= 1e-8, curve_json(c),
                             fmt::format("window deviation {:.3g} at N = {}", last, c.points.back().first)});
    r.table = c.csv();
  } else if (experiment == "mobius") {
    const auto schedule = parse_long_list(o.schedule, "N schedule");
    r.parameters.update(Json{{"w1", o.w1}, {"w2", o.w2}, {"N_schedule", schedule}, {"window", o.window}});
    const GroupDefect g = group_defect_mobius(parse_word(o.w1), parse_word(o.w2), schedule, o.window, h);
    double phase_err = 0;
    Json phases = Json::array();
    for (const auto& l : g.phases) {
      phase_err = std::max(phase_err, std::fabs(std::abs(l) - 1));
      phases.push_back(complex_json(l));
    }
    const double last = g.curve.points.back().second;
    Json res = curve_json(g.curve);
    res["phases"] = phases;
    r.checks.push_back(Check{"mobius-group-defect", Json{{"tolerance", 1e-6}, {"phase_tolerance", 1e-8}},
                             last <= 1e-6 && phase_err <= 1e-8, res,
                             fmt::format("defect {:.3g} at N = {}, max ||lambda| - 1| = {:.3g}", last,
                                         g.curve.points.back().first, phase_err)});
    r.table = g.curve.csv();
  } else if (experiment == "monoassoc") {
    const long n = N_or(64);
    r.parameters.update(Json{{"k", o.k}, {"t", o.t}, {"s", o.s}, {"N", n}});
    const double res = monoassociativity_check(FlowSpec{symmetric_generator(o.k), 0.0, n, h}, o.t, o.s);
    r.checks.push_back(Check{"monoassociativity", Json{{"tolerance", 1e-10}}, res <= 1e-10, Json{{"residual", res}},
                             fmt::format("residual {:.3g}", res)});
  } else if (experiment == "commutator") {
    const long n = N_or(96);
    const auto ts = parse_double_list(o.ts, "t list");
    r.parameters.update(Json{{"k", o.k}, {"l", o.l}, {"ts", ts}, {"N", n}, {"window", o.window}});
    const ScalingReport s =
        commutator_flow_scaling(symmetric_generator(o.k), symmetric_generator(o.l), ts, n, o.window, h);
    std::string table = "t,value\n";
    for (std::size_t i = 0; i < ts.size(); ++i) table += fmt::format("{:.17g},{:.17g}\n", ts[i], s.defects[i]);
    r.checks.push_back(Check{"commutator-scaling", Json{{"min_exponent", o.min_exponent}}, s.exponent >= o.min_exponent,
                             Json{{"defects", s.defects}, {"exponent", s.exponent}, {"scalar", complex_json(s.scalar)}},
                             fmt::format("fitted exponent {:.4g}", s.exponent)});
    r.table = table;
  } else if (experiment == "semigroup") {
    const long n = N_or(32);
    const Complex q1 = parse_complex(o.q1), q2 = parse_complex(o.q2), tau = parse_complex(o.tau);
    r.parameters.update(Json{{"q1", complex_json(q1)}, {"q2", complex_json(q2)}, {"k", o.k}, {"tau", complex_json(tau)}, {"N", n}});
    const SemigroupReport s = semigroup_probe(q1, q2, o.k, tau, n, h);
    r.checks.push_back(Check{"semigroup-product", Json{{"tolerance", 1e-12}}, s.product_error <= 1e-12,
                             Json{{"error", s.product_error}}, fmt::format("product error {:.3g}", s.product_error)});
    r.checks.push_back(Check{"singular-value-ratio", Json{{"tolerance", 1e-10}}, s.ratio_error <= 1e-10,
                             Json{{"error", s.ratio_error}, {"singular_values", s.singular_values}},
                             fmt::format("ratio error {:.3g}", s.ratio_error)});
    r.checks.push_back(Check{"holomorphy", Json{{"tolerance", 1e-6}}, s.cr_residual <= 1e-6,
                             Json{{"residual", s.cr_residual}}, fmt::format("Cauchy-Riemann residual {:.3g}", s.cr_residual)});
  } else if (experiment == "orbit") {
    const long n = N_or(8);
    r.parameters.update(Json{{"a", o.a}, {"N", n}});
    const auto z = orbit_coefficients(flow(FlowSpec{GeneratorCombo{{{-1, 1.0}}}, o.a, n, h}).matrix);
    // a^n sqrt(n! (2h)_n) / n!
    const double hd = to_double(h);
    double worst = 0, ratio = 1;
    Json pts = Json::array();
    std::string table = "n,value\n";
    for (long m = 0; m < n; ++m) {
      if (m > 0) ratio *= o.a * std::sqrt((2 * hd + m - 1) / m);
      worst = std::max(worst, std::abs(z[m] - ratio));
      pts.push_back(complex_json(z[m]));
      table += fmt::format("{},{:.17g}\n", m, z[m].real());
    }
    r.checks.push_back(Check{"orbit-coefficients", Json{{"tolerance", 1e-12}}, worst <= 1e-12, Json{{"coefficients", pts}},
                             fmt::format("max deviation from the closed form {:.3g}", worst)});
    r.table = table;
  } else {
    throw std::invalid_argument("unknown lab experiment '" + experiment + "'");
  }
  return r;
}

Report cmd_emit_tables(const std::string& dir, long K) {
  if (dir.empty()) throw std::invalid_argument("emit-tables needs --out DIR");
  std::filesystem::create_directories(dir);
  Report r;
  r.command = "emit-tables";
  r.parameters = Json{{"out", dir}, {"K", K}};
  const auto write = [&](const std::string& name, const std::string& body) {
    const auto path = std::filesystem::path(dir) / name;
    std::ofstream f(path, std::ios::binary);
    f << body;
    if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
    r.checks.push_back(Check{"table:" + name, Json{{"K", K}}, true, Json{{"bytes", body.size()}}, path.string()});
  };
  for (RDefectKind kind : {RDefectKind::kIdentity, RDefectKind::kMultiplicativity, RDefectKind::kMybe, RDefectKind::kCompensated})
    for (Normalization n : {Normalization::kPaper, Normalization::kHalf}) {
      RmatrixOptions o;
      o.defect = to_string(kind);
      o.normalization = to_string(n);
      o.K = K;
      const Report t = cmd_rmatrix(o, 0);
      const std::string stem = "rmatrix-" + o.defect + "-" + o.normalization;
      write(stem + ".csv", *t.table);
      write(stem + ".json", emit_report(t, Format::kJson));
    }
  const Report d = cmd_deviation(std::nullopt, std::nullopt, K, "symbolic");
  write("deviation-symbolic.csv", *d.table);
  write("deviation-symbolic.json", emit_report(d, Format::kJson));
  return r;
}

void write_output(const Report& r, const Common& c, std::ostream& out) {
  const std::string body = emit_report(r, parse_format(c.format));
  if (c.out.empty()) {
    out << body;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  f << body;
  if (!f) throw std::runtime_error("cannot write '" + c.out + "'");
}

}  // namespace

VermaContext parse_weight(const std::string& text) {
  if (text == "symbolic") return VermaContext::symbolic();
  return VermaContext::numeric(parse_rational(text));
}

ShiftOperator parse_operator_expression(std::string_view text, const VermaContext& ctx) {
  TokenStream ts(tokenize(text));
  const RationalFunction hv = ctx.specialize(parse_rational_function("h"));
  const OpValue v = parse_expression<OpValue>(ts, [&](std::string_view name, SourcePos at) -> OpValue {
    if (name == "e" || name == "f") {
      const long k = parse_integer_argument(ts);
      return OpValue::op(rep_generator(name == "e" ? WittFamily::kE : WittFamily::kF, k, ctx));
    }
    if (name == "id") return OpValue::op(op_identity(ctx));
    if (name == "h") return OpValue::scalar(hv);
    throw ParseError(at, "unknown symbol '" + std::string(name) + "'");
  });
  if (!ts.at_end()) ts.fail("unexpected token '" + ts.peek().text + "'");
  return v.to_operator(ctx);
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, Report* report) {
  CLI::App app{"Exact verification of isotopic pairs, their Verma representations and HS certificates", "isopair"};
  app.set_help_flag("--help", "print this help and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  Common common;
  std::string spec, h = "symbolic";
  long k_pair = 6, k_comp = 8, k_rep = 5, k_dev = 4, k_tab = 4;
  long limit = 200;
  Report result;

  const auto add_limit = [&](CLI::App* s) {
    s->add_option("--max-defects", limit, "list at most this many defects per check (0 = all)")->capture_default_str();
  };

  auto* vp = app.add_subcommand("verify-pair", "Jacobi and compatibility identities of a pair");
  vp->add_option("--spec", spec, "pair spec file (default: built-in Witt pair)");
  vp->add_option("--K", k_pair, "index window")->capture_default_str();
  add_common(vp, common);
  add_limit(vp);

  auto* vc = app.add_subcommand("verify-composite", "closure, density, connectedness and coherence of the charts");
  vc->add_option("--spec", spec, "pair spec file (default: built-in Witt pair)");
  vc->add_option("--K", k_comp, "index window")->capture_default_str();
  add_common(vc, common);

  bool cross = false;
  auto* vr = app.add_subcommand("verify-rep", "composed representation identities, overlaps and adjoint symmetry");
  vr->add_option("--K", k_rep, "index window")->capture_default_str();
  vr->add_option("--h", h, "highest weight: a rational or 'symbolic'")->capture_default_str();
  vr->add_flag("--cross-chart", cross, "also certify cross-chart defects");
  add_common(vr, common);
  add_limit(vr);

  RmatrixOptions ro;
  auto* rm = app.add_subcommand("rmatrix", "r-matrix identity, multiplicativity and modified Yang-Baxter defects");
  rm->add_option("--spec", ro.spec, "pair spec file (default: built-in Witt pair)");
  rm->add_option("--defect", ro.defect, "identity, multiplicativity, mybe or compensated")
      ->check(CLI::IsMember({"identity", "multiplicativity", "mybe", "compensated"}))
      ->capture_default_str();
  rm->add_option("--normalization", ro.normalization, "paper or half")
      ->check(CLI::IsMember({"paper", "half"}))
      ->capture_default_str();
  rm->add_option("--K", ro.K, "index window")->capture_default_str();
  rm->add_option("--mybe-constant", ro.constant, "rational constant of the Yang-Baxter term")->capture_default_str();
  add_common(rm, common);
  add_limit(rm);

  std::string op, expect;
  bool modulo = false;
  auto* ce = app.add_subcommand("certify", "operator class certificate");
  ce->add_option("--op", op, "expression over e(k), f(k), id, h and rationals")->required();
  ce->add_option("--h", h, "highest weight: a rational or 'symbolic'")->capture_default_str();
  ce->add_flag("--modulo-scalars", modulo, "subtract the scalar part first");
  ce->add_option("--expect", expect, "expected verdict; a mismatch is a failure")
      ->check(CLI::IsMember({"zero", "trace-class", "hilbert-schmidt", "bounded-not-compact", "unbounded"}));
  add_common(ce, common);

  std::optional<long> di, dj;
  auto* dv = app.add_subcommand("deviation", "Witt deviations [T(e_i), T(e_j)] - (i-j) T(e_{i+j}) and their classes");
  dv->add_option("--i", di, "first index (with --j)");
  dv->add_option("--j", dj, "second index (with --i)");
  dv->add_option("--K", k_dev, "sweep window when no indices are given")->capture_default_str();
  dv->add_option("--h", h, "highest weight: a rational or 'symbolic'")->capture_default_str();
  add_common(dv, common);

  LabOptions lo;
  auto* lab = app.add_subcommand("lab", "floating-point truncation experiments");
  lab->require_subcommand(1);
  const std::vector<std::pair<std::string, std::string>> experiments = {
      {"matexp", "matrix exponential against the Taylor sum"},
      {"unitarity", "unitarity deviation of exp(t X) on a window"},
      {"mobius", "Mobius group defect on a window"},
      {"monoassoc", "exp((t+s)X) against exp(tX) exp(sX)"},
      {"commutator", "small-t scaling of the group commutator"},
      {"semigroup", "diagonal semigroup product law, singular values and holomorphy"},
      {"orbit", "orbit coefficients of the highest vector under exp(a e_-1)"}};
  std::string experiment;
  for (const auto& [name, help] : experiments) {
    auto* x = lab->add_subcommand(name, help);
    x->callback([&experiment, n = name] { experiment = n; });
    x->add_option("--h", lo.h, "numeric highest weight")->capture_default_str();
    x->add_option("--N-schedule", lo.schedule, "comma-separated increasing truncation sizes")->capture_default_str();
    x->add_option("--window", lo.window, "leading block size")->capture_default_str();
    x->add_option("--N", lo.N, "truncation size");
    x->add_option("--t", lo.t, "flow time")->capture_default_str();
    x->add_option("--s", lo.s, "second flow time")->capture_default_str();
    x->add_option("--k", lo.k, "generator X = i(e_k + e_-k)")->capture_default_str();
    x->add_option("--l", lo.l, "generator Y = i(e_l + e_-l)")->capture_default_str();
    x->add_option("--ts", lo.ts, "comma-separated flow times")->capture_default_str();
    x->add_option("--min-exponent", lo.min_exponent, "required scaling exponent")->capture_default_str();
    x->add_option("--w1", lo.w1, "Gauss parameters a,b,c")->capture_default_str();
    x->add_option("--w2", lo.w2, "Gauss parameters a,b,c")->capture_default_str();
    x->add_option("--q1", lo.q1, "semigroup parameter re[,im]")->capture_default_str();
    x->add_option("--q2", lo.q2, "semigroup parameter re[,im]")->capture_default_str();
    x->add_option("--tau", lo.tau, "flow parameter re[,im]")->capture_default_str();
    x->add_option("--a", lo.a, "orbit parameter")->capture_default_str();
    add_common(x, common);
  }

  auto* et = app.add_subcommand("emit-tables", "write r-matrix and deviation tables as CSV and JSON");
  std::string table_dir;
  et->add_option("--out", table_dir, "output directory")->required();
  et->add_option("--K", k_tab, "index window")->capture_default_str();

  std::vector<std::string> argv_store = {"isopair"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*vp) {
      result = cmd_verify_pair(spec, k_pair, limit);
    } else if (*vc) {
      result = cmd_verify_composite(spec, k_comp);
    } else if (*vr) {
      result = cmd_verify_rep(k_rep, h, cross, limit);
    } else if (*rm) {
      result = cmd_rmatrix(ro, limit);
    } else if (*ce) {
      result = cmd_certify(op, h, modulo, expect);
    } else if (*dv) {
      result = cmd_deviation(di, dj, k_dev, h);
    } else if (*lab) {
      result = cmd_lab(experiment, lo);
    } else {
      result = cmd_emit_tables(table_dir, k_tab);
    }
    if (!*et) write_output(result, common, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (*et) out << emit_report(result, Format::kText);
  if (report) *report = result;
  return result.ok() ? kExitPass : kExitDefect;
}

}  // namespace isopair
