#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "isopair/cli.hpp"
#include "isopair/expression.hpp"
#include "isopair/pair_spec.hpp"
#include "isopair/report.hpp"
#include "isopair/verma.hpp"

namespace isopair {
namespace {

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const std::filesystem::path kGolden = std::filesystem::path(ISOPAIR_DATA_DIR) / "witt.ipair";

struct RunResult {
  int code;
  std::string out, err;
};

RunResult run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_command(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path temp_file(const std::string& name, const std::string& body) {
  const auto p = std::filesystem::temp_directory_path() / ("isopair_test_" + name);
  std::ofstream(p, std::ios::binary) << body;
  return p;
}

bool same_spec(const PairSpec& a, const PairSpec& b) {
  return a.pair.name() == b.pair.name() && a.pair.families() == b.pair.families() && a.pair.rule(0) == b.pair.rule(0) &&
         a.pair.rule(1) == b.pair.rule(1) && a.charts == b.charts;
}

// ---------------------------------------------------------------- parser

TEST(PairSpecParser, GoldenFileIsTheWittPair) {
  const PairSpec s = parse_pair_spec(read_file(kGolden));
  EXPECT_TRUE(same_spec(s, witt_pair_spec()));
  const IsoRule expected{IndexPoly::variable(0) - IndexPoly::variable(1), AffineForm(0, {1, 1, 1})};
  EXPECT_EQ(s.pair.rule(0), expected);
  EXPECT_EQ(s.pair.rule(1), expected);
  ASSERT_EQ(s.charts.size(), 2u);
  EXPECT_EQ(s.charts[0].ranges[0].lo, -1);
  EXPECT_EQ(s.charts[0].ranges[1].lo, 0);
  EXPECT_EQ(s.charts[1].ranges[0].hi, 1);
  EXPECT_EQ(s.charts[1].ranges[1].hi, 0);
}

TEST(PairSpecParser, GoldenRoundTripIsByteIdentical) {
  const std::string text = read_file(kGolden);
  EXPECT_EQ(emit_pair_spec(parse_pair_spec(text)), text);
  EXPECT_EQ(emit_pair_spec(witt_pair_spec()), text);
}

TEST(PairSpecParser, AcceptsFreeLayoutAndOtherNames) {
  const std::string text =
      "// comment\npair w{family a indexed by Z;family b indexed by Z;\n"
      "iso[b(p),b(q)|a(r)]=(p-q)*b(r+q+p);iso [a(x), a(y) | b(z)] = -(y - x)*a(z+y+x);\n"
      "chart c { a: x >= 2; a: x >= 0; b: y <= 3; }}";
  const PairSpec s = parse_pair_spec(text);
  EXPECT_EQ(s.pair.families(), (std::array<std::string, 2>{"a", "b"}));
  EXPECT_EQ(s.pair.rule(0), PairPresentation::witt().rule(0));
  EXPECT_EQ(s.pair.rule(1), PairPresentation::witt().rule(1));
  ASSERT_EQ(s.charts.size(), 1u);
  EXPECT_EQ(s.charts[0].ranges[0].lo, 2);  // repeated bounds intersect
  EXPECT_FALSE(s.charts[0].ranges[0].hi);
  EXPECT_EQ(s.charts[0].ranges[1].hi, 3);
  EXPECT_TRUE(same_spec(parse_pair_spec(emit_pair_spec(s)), s));
}

TEST(PairSpecParser, OmittedFamilyIsUnrestrictedInChart) {
  const PairSpec s = parse_pair_spec(
      "pair w { family e indexed by Z; family f indexed by Z;"
      " iso [e(i), e(j) | f(k)] = (i - j) * e(i + j + k); iso [f(i), f(j) | e(k)] = (i - j) * f(i + j + k);"
      " chart c { e: i >= 0; } }");
  EXPECT_EQ(s.charts[0].ranges[1], IndexRange{});
}

ParseError parse_error(const std::string& text) {
  try {
    parse_pair_spec(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no error for: " << text;
  return ParseError({}, "");
}

const std::string kHeader = "pair w {\n  family e indexed by Z;\n  family f indexed by Z;\n";
const std::string kIsoF = "  iso [f(i), f(j) | e(k)] = (i - j) * f(i + j + k);\n";

TEST(PairSpecParser, Errors) {
  EXPECT_NE(std::string(parse_error("pair w { iso [e(i), e(j) | f(k)] = (i - j) * e(i + j + k); }").what())
                .find("at least two families required"),
            std::string::npos);
  EXPECT_NE(std::string(parse_error("pair w { family e indexed by Z; }").what()).find("at least two families required"),
            std::string::npos);

  // Unbalanced coefficient: reported at the open parenthesis (line 4, column 29).
  const ParseError open = parse_error(kHeader + "  iso [e(i), e(j) | f(k)] = (i - j * e(i + j + k);\n" + kIsoF + "}");
  EXPECT_EQ(open.pos().line, 4);
  EXPECT_EQ(open.pos().column, 29);
  EXPECT_NE(std::string(open.what()).find("unbalanced parenthesis"), std::string::npos);

  const ParseError anti = parse_error(kHeader + "  iso [e(i), e(j) | f(k)] = (i + j) * e(i + j + k);\n" + kIsoF + "}");
  EXPECT_EQ(anti.pos().line, 4);
  EXPECT_NE(std::string(anti.what()).find("antisymmetry"), std::string::npos);

  const ParseError target = parse_error(kHeader + "  iso [e(i), e(j) | f(k)] = (i - j) * e(i * j);\n" + kIsoF + "}");
  EXPECT_NE(std::string(target.what()).find("malformed index expression"), std::string::npos);
  EXPECT_EQ(target.pos().column, 41);

  const ParseError frac = parse_error(kHeader + "  iso [e(i), e(j) | f(k)] = (i - j) * e(i / 2);\n" + kIsoF + "}");
  EXPECT_NE(std::string(frac.what()).find("malformed index expression"), std::string::npos);

  const std::vector<std::string> bad = {
      "",
      "pair w { family e indexed by Z; family e indexed by Z; }",
      "pair w { family e indexed by Z; family f indexed by Z; family g indexed by Z; }",
      "pair w { family e indexed by N; }",
      kHeader + kIsoF + "}",
      kHeader + kIsoF + kIsoF + "}",
      kHeader + "  iso [e(i), f(j) | f(k)] = (i - j) * e(i + j + k);\n" + kIsoF + "}",
      kHeader + "  iso [e(i), e(j) | e(k)] = (i - j) * e(i + j + k);\n" + kIsoF + "}",
      kHeader + "  iso [e(i), e(i) | f(k)] = (i - j) * e(i + j + k);\n" + kIsoF + "}",
      kHeader + "  iso [e(i), e(j) | f(k)] = (i - j) * f(i + j + k);\n" + kIsoF + "}",
      kHeader + "  iso [e(i), e(j) | f(k)] = (i - j) * e(i + j) * e(k);\n" + kIsoF + "}",
      kHeader + "  iso [e(i), e(j) | f(k)] = (i - j) * e(i + j) + 1;\n" + kIsoF + "}",
      kHeader + "  iso [e(i), e(j) | f(k)] = i * e(i + j + k) - j * e(i + j + k);\n" + kIsoF + "}",
      kHeader + "  iso [e(i), e(j) | f(k)] = (i - m) * e(i + j + k);\n" + kIsoF + "}",
      kHeader + "  iso [e(i), e(j) | f(k)] = (i - j);\n" + kIsoF + "}",
      kHeader + "  iso [e(i), e(j) | f(k)] = (i - j) * e(i + j + k)\n" + kIsoF + "}",
      kHeader + "  iso [e(i), e(j) | f(k)] = (i - j) * e(i + j + k);\n" + kIsoF + "chart c { }\n}",
      kHeader + "  iso [e(i), e(j) | f(k)] = (i - j) * e(i + j + k);\n" + kIsoF + "chart c { g: i >= 0; }\n}",
      kHeader + "  iso [e(i), e(j) | f(k)] = (i - j) * e(i + j + k);\n" + kIsoF + "chart c { e: i > 0; }\n}",
      kHeader + "  iso [e(i), e(j) | f(k)] = (i - j) * e(i + j + k);\n" + kIsoF +
          "chart c { e: i >= 0; } chart c { e: i <= 0; }\n}",
      kHeader + "  iso [e(i), e(j) | f(k)] = (i - j) * e(i + j + k);\n" + kIsoF + "} trailing",
  };
  for (const auto& t : bad) EXPECT_THROW(parse_pair_spec(t), ParseError) << t;
}

TEST(PairSpecEmitter, UnrestrictedChartCannotBeWritten) {
  PairSpec s = witt_pair_spec();
  s.charts.push_back(CompositeChart{"all", {}});
  EXPECT_THROW(emit_pair_spec(s), std::invalid_argument);
}

// Random antisymmetric coefficient q(i,j,k) - q(j,i,k) and symmetric affine target.
PairSpec random_spec(std::mt19937& rng) {
  std::uniform_int_distribution<int> small(-3, 3), deg(0, 2), nterms(1, 3), coin(0, 1);
  const auto random_rule = [&] {
    IndexPoly q;
    while (true) {
      for (int t = nterms(rng); t > 0; --t) {
        IndexPoly m = make_rational(small(rng), 1 + coin(rng));
        for (int v = 0; v < 3; ++v)
          for (int d = deg(rng); d > 0; --d) m = m * IndexPoly::variable(v);
        q = q + m;
      }
      if (!(q - q.swapped(0, 1)).is_zero()) break;
    }
    const long a = small(rng), b = small(rng), c = small(rng);
    return IsoRule{q - q.swapped(0, 1), AffineForm(c, {a, a, b})};
  };
  const std::array<std::string, 2> fam = coin(rng) ? std::array<std::string, 2>{"e", "f"}
                                                   : std::array<std::string, 2>{"u", "v_2"};
  PairSpec s{PairPresentation("p" + std::to_string(small(rng) + 3), fam, {random_rule(), random_rule()}), {}};
  for (int c = 0, n = deg(rng); c < n; ++c) {
    CompositeChart chart{"c" + std::to_string(c), {}};
    for (int f = 0; f < 2; ++f) {
      if (coin(rng)) chart.ranges[f].lo = small(rng);
      if (coin(rng)) chart.ranges[f].hi = small(rng);
    }
    if (chart.ranges[0] == IndexRange{} && chart.ranges[1] == IndexRange{}) chart.ranges[0].lo = 0;
    s.charts.push_back(chart);
  }
  return s;
}

TEST(PairSpecProperty, RandomRoundTrip) {
  std::mt19937 rng(20261017);
  for (int trial = 0; trial < 300; ++trial) {
    const PairSpec s = random_spec(rng);
    const std::string text = emit_pair_spec(s);
    const PairSpec back = parse_pair_spec(text);
    ASSERT_TRUE(same_spec(back, s)) << text;
    ASSERT_EQ(emit_pair_spec(back), text);
  }
}

// ---------------------------------------------------------------- reports

TEST(Report, EmptyJson) {
  Report r;
  r.command = "verify-pair";
  EXPECT_EQ(emit_report(r, Format::kJson),
            "{\"tool\":\"isopair\",\"version\":\"1.0.0\",\"command\":\"verify-pair\",\"parameters\":{},"
            "\"checks\":[],\"summary\":{\"pass\":0,\"fail\":0}}\n");
  EXPECT_EQ(emit_report(r, Format::kCsv), "id,pass,text\n");
  EXPECT_EQ(emit_report(r, Format::kText), "isopair verify-pair {}\nsummary: 0 pass, 0 fail\n");
}

TEST(Report, FloatsUse17SignificantDigits) {
  EXPECT_EQ(dump_json(Json(0.1)), "0.10000000000000001");
  EXPECT_EQ(dump_json(Json(1.0)), "1");
  EXPECT_EQ(dump_json(Json(3e-9)), "3e-09");
  EXPECT_EQ(dump_json(Json(std::nan(""))), "\"nan\"");
  EXPECT_EQ(dump_json(Json(-HUGE_VAL)), "\"-inf\"");
  EXPECT_EQ(dump_json(Json{{"b", 1}, {"a", "x\"y"}}), "{\"b\":1,\"a\":\"x\\\"y\"}");
  Report r;
  r.command = "lab";
  r.floating = true;
  const Json j = Json::parse(emit_report(r, Format::kJson));
  EXPECT_TRUE(j.contains("platform"));
}

TEST(Report, CsvQuotesAndTable) {
  Report r;
  r.checks.push_back(Check{"a,b", Json::object(), false, Json::object(), "say \"hi\""});
  EXPECT_EQ(emit_report(r, Format::kCsv), "id,pass,text\n\"a,b\",false,\"say \"\"hi\"\"\"\n");
  r.table = "N,value\n8,1\n";
  EXPECT_EQ(emit_report(r, Format::kCsv), "N,value\n8,1\n");
}

// ---------------------------------------------------------------- commands and exit codes

TEST(Cli, VerifyPairGoldenPasses) {
  const RunResult r = run({"verify-pair", "--spec", kGolden.string(), "--K", "6", "--format", "json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const Json j = Json::parse(r.out);
  ASSERT_EQ(j["checks"].size(), 4u);
  for (const auto& c : j["checks"]) {
    EXPECT_TRUE(c["pass"].get<bool>());
    EXPECT_TRUE(c["result"]["defects"].empty());
    EXPECT_EQ(c["result"]["regime"], "polynomial-identity");
  }
  EXPECT_EQ(j["parameters"]["regime"], "polynomial-identity");
  EXPECT_EQ(j["summary"]["fail"], 0);
}

TEST(Cli, VerifyPairReportsDefectsOfBrokenPair) {
  // An antisymmetric coefficient that breaks the compatibility identities.
  const auto spec = temp_file("squared.ipair", kHeader +
                                                   "  iso [e(i), e(j) | f(k)] = (i^2 - j^2) * e(i + j + k);\n" +
                                                   kIsoF + "}\n");
  const RunResult r = run({"verify-pair", "--spec", spec.string(), "--K", "2", "--max-defects", "3"});
  EXPECT_EQ(r.code, 1) << r.err;
  const Json j = Json::parse(r.out);
  EXPECT_GT(j["summary"]["fail"].get<int>(), 0);
  bool found = false;
  for (const auto& c : j["checks"]) {
    if (c["pass"].get<bool>()) continue;
    EXPECT_LE(c["result"]["defects"].size(), 3u);
    EXPECT_TRUE(c["result"]["truncated"].get<bool>() || c["result"]["defect_count"].get<long>() <= 3);
    found = true;
  }
  EXPECT_TRUE(found);
  EXPECT_EQ(j["parameters"]["regime"], "window");
}

TEST(Cli, RmatrixIdentityExitCodes) {
  const RunResult paper = run({"rmatrix", "--defect", "identity", "--normalization", "paper", "--K", "4"});
  EXPECT_EQ(paper.code, 1);
  const Json j = Json::parse(paper.out);
  // Oracle: (i - j) e_{i+j+k} is nonzero exactly when i != j, 9 * 8 * 9 tuples per family.
  for (const auto& c : j["checks"]) EXPECT_EQ(c["result"]["defect_count"], 648);
  EXPECT_EQ(j["checks"][0]["result"]["defects"][0]["tuple"], Json::array({-4, -3, -4}));
  EXPECT_EQ(j["checks"][0]["result"]["defects"][0]["value"], "-e-11");
  EXPECT_EQ(run({"rmatrix", "--defect", "identity", "--normalization", "half", "--K", "4"}).code, 0);
  EXPECT_EQ(run({"rmatrix", "--defect", "multiplicativity", "--K", "3"}).code, 0);
  EXPECT_EQ(run({"rmatrix", "--defect", "compensated", "--K", "3"}).code, 0);
  EXPECT_EQ(run({"rmatrix", "--defect", "mybe", "--K", "2"}).code, 1);
  const RunResult csv = run({"rmatrix", "--defect", "identity", "--K", "1", "--format", "csv"});
  EXPECT_EQ(csv.out.substr(0, csv.out.find('\n')), "family,i,j,k,defect");
}

TEST(Cli, CertifyExamples) {
  const RunResult r = run({"certify", "--op", "f(-1)", "--h", "1"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(Json::parse(r.out)["checks"][0]["result"]["certificate"]["verdict"], "bounded-not-compact");
  EXPECT_EQ(run({"certify", "--op", "f(-1)", "--h", "1", "--expect", "bounded-not-compact"}).code, 0);
  EXPECT_EQ(run({"certify", "--op", "f(-1)", "--h", "1", "--expect", "trace-class"}).code, 1);
  const RunResult lb = run({"certify", "--op", "f(1)*f(-1) - f(-1)*f(1)", "--h", "symbolic"});
  const Json c = Json::parse(lb.out)["checks"][0]["result"]["certificate"];
  EXPECT_EQ(c["verdict"], "trace-class");
  EXPECT_EQ(c["exceptional_h_roots"], Json::array({"1/2"}));
}

TEST(Cli, OperatorExpressionsMatchDirectConstruction) {
  const auto ctx = VermaContext::symbolic();
  const auto e = [&](long k) { return rep_generator(WittFamily::kE, k, ctx); };
  EXPECT_EQ(parse_operator_expression("e(2)*e(-2) - e(-2)*e(2) - 4*e(0)", ctx), witt_deviation(2, -2, ctx));
  EXPECT_EQ(parse_operator_expression("e(1 + 1)", ctx), e(2));
  EXPECT_EQ(parse_operator_expression("(e(0) - h*id)/2", ctx),
            op_scale(e(0) - op_scale(op_identity(ctx), parse_rational_function("h")), RationalFunction(make_rational(1, 2))));
  EXPECT_EQ(parse_operator_expression("3", ctx), op_scale(op_identity(ctx), RationalFunction(3)));
  const auto two = VermaContext::numeric(Rational(2));
  EXPECT_EQ(parse_operator_expression("h*id", two), op_scale(op_identity(two), RationalFunction(2)));
  EXPECT_THROW(parse_operator_expression("e(1)/e(2)", ctx), ParseError);
  EXPECT_THROW(parse_operator_expression("g(1)", ctx), ParseError);
  EXPECT_THROW(parse_operator_expression("e(k)", ctx), ParseError);
  EXPECT_THROW(parse_operator_expression("e(1/2)", ctx), ParseError);
  EXPECT_THROW(parse_operator_expression("e(1) e(2)", ctx), ParseError);
}

TEST(Cli, UsageAndInputErrorsExitTwo) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"no-such-command"}).code, 2);
  EXPECT_EQ(run({"verify-pair", "--bogus"}).code, 2);
  EXPECT_EQ(run({"verify-pair", "--K", "x"}).code, 2);
  EXPECT_EQ(run({"verify-pair", "--K", "0"}).code, 2);
  EXPECT_EQ(run({"verify-pair", "--spec", "/nonexistent/file.ipair"}).code, 2);
  EXPECT_EQ(run({"verify-pair", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"rmatrix", "--normalization", "double"}).code, 2);
  EXPECT_EQ(run({"rmatrix", "--mybe-constant", "x"}).code, 2);
  EXPECT_EQ(run({"certify"}).code, 2);
  EXPECT_EQ(run({"certify", "--op", "f(-1", "--h", "1"}).code, 2);
  EXPECT_EQ(run({"certify", "--op", "f(1)", "--h", "-1/2"}).code, 2);
  EXPECT_EQ(run({"deviation", "--i", "1"}).code, 2);
  EXPECT_EQ(run({"lab"}).code, 2);
  EXPECT_EQ(run({"lab", "unitarity", "--h", "symbolic"}).code, 2);
  EXPECT_EQ(run({"lab", "unitarity", "--N-schedule", "64,32"}).code, 2);
  EXPECT_EQ(run({"verify-composite", "--spec",
                 temp_file("nocharts.ipair", kHeader + "  iso [e(i), e(j) | f(k)] = (i - j) * e(i + j + k);\n" +
                                                 kIsoF + "}\n")
                     .string()})
                .code,
            2);
  const auto bad = temp_file("bad.ipair", kHeader + "  iso [e(i), e(j) | f(k)] = (i - j * e(i + j + k);\n" + kIsoF + "}");
  const RunResult r = run({"verify-pair", "--spec", bad.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("line 4, column 29"), std::string::npos) << r.err;
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST(Cli, ExactReportsAreByteReproducible) {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"verify-pair", "--K", "3"},
           {"verify-composite", "--spec", kGolden.string()},
           {"verify-rep", "--K", "3", "--cross-chart"},
           {"deviation", "--K", "3", "--h", "5/2"},
           {"rmatrix", "--defect", "mybe", "--K", "2", "--format", "csv"}}) {
    const RunResult a = run(args), b = run(args);
    EXPECT_EQ(a.code, b.code);
    EXPECT_FALSE(a.out.empty());
    EXPECT_EQ(a.out, b.out) << args[0];
  }
}

TEST(Cli, OutFileAndFormats) {
  const auto path = std::filesystem::temp_directory_path() / "isopair_test_report.txt";
  std::filesystem::remove(path);
  const RunResult r = run({"verify-composite", "--format", "text", "--out", path.string()});
  EXPECT_EQ(r.code, 0);
  EXPECT_TRUE(r.out.empty());
  const std::string body = read_file(path);
  EXPECT_NE(body.find("PASS closure"), std::string::npos);
  EXPECT_NE(body.find("summary: 4 pass, 0 fail"), std::string::npos);
}

TEST(Cli, DeviationCommand) {
  const RunResult r = run({"deviation", "--i", "2", "--j", "-2", "--h", "1"});
  EXPECT_EQ(r.code, 0);
  // Stable part vanishes at h = 1; only a rank-one vacuum entry remains, so the class is zero.
  const Json one = Json::parse(r.out)["checks"][0]["result"];
  EXPECT_EQ(one["deviation"], "offset 0: 0 [boundary n=0: -1]");
  EXPECT_EQ(one["certificate"]["verdict"], "zero");
  EXPECT_EQ(one["certificate"]["finite_rank"], true);
  const RunResult two = run({"deviation", "--i", "2", "--j", "-2", "--h", "2"});
  EXPECT_EQ(two.code, 0);
  const Json c = Json::parse(two.out)["checks"][0]["result"];
  EXPECT_NE(c["deviation"], "0");
  EXPECT_EQ(c["certificate"]["modulo_scalars"], true);
}

TEST(Cli, LabCurveCsvHasTwoColumns) {
  const RunResult r = run({"lab", "unitarity", "--N-schedule", "16,24", "--window", "8", "--format", "csv"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::istringstream in(r.out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "N,value");
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 1);
    ++rows;
  }
  EXPECT_EQ(rows, 2);
  const Json j = Json::parse(run({"lab", "semigroup"}).out);
  EXPECT_TRUE(j.contains("platform"));
}

TEST(Cli, EmitTables) {
  const auto dir = std::filesystem::temp_directory_path() / "isopair_test_tables";
  std::filesystem::remove_all(dir);
  const RunResult r = run({"emit-tables", "--out", dir.string(), "--K", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(std::filesystem::exists(dir / "rmatrix-identity-paper.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "deviation-symbolic.json"));
  EXPECT_EQ(read_file(dir / "rmatrix-identity-half.csv"), "family,i,j,k,defect\n");
}

}  // namespace
}  // namespace isopair
