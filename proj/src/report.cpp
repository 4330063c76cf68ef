#include "isopair/report.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace isopair {

long Report::pass_count() const {
  return static_cast<long>(std::count_if(checks.begin(), checks.end(), [](const Check& c) { return c.pass; }));
}

long Report::fail_count() const { return static_cast<long>(checks.size()) - pass_count(); }

std::string to_string(Format f) {
  switch (f) {
    case Format::kJson:
      return "json";
    case Format::kCsv:
      return "csv";
    case Format::kText:
      return "text";
  }
  return "?";
}

Format parse_format(std::string_view text) {
  if (text == "json") return Format::kJson;
  if (text == "csv") return Format::kCsv;
  if (text == "text") return Format::kText;
  throw std::invalid_argument("unknown format '" + std::string(text) + "'");
}

std::string platform_note() {
#if defined(__clang__)
  const std::string compiler = fmt::format("clang {}.{}.{}", __clang_major__, __clang_minor__, __clang_patchlevel__);
#elif defined(__GNUC__)
  const std::string compiler = fmt::format("gcc {}.{}.{}", __GNUC__, __GNUC_MINOR__, __GNUC_PATCHLEVEL__);
#else
  const std::string compiler = "unknown compiler";
#endif
  return fmt::format("IEEE-754 binary64; {}; Eigen {}.{}.{}; trailing digits may differ across platforms", compiler,
                     EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION);
}

namespace {

void write_json(const Json& v, std::string& out) {
  switch (v.type()) {
    case Json::value_t::object: {
      out += '{';
      bool first = true;
      for (const auto& [k, x] : v.items()) {
        if (!first) out += ',';
        first = false;
        out += Json(k).dump();
        out += ':';
        write_json(x, out);
      }
      out += '}';
      return;
    }
    case Json::value_t::array: {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        write_json(v[i], out);
      }
      out += ']';
      return;
    }
    case Json::value_t::number_float: {
      const double d = v.get<double>();
      if (std::isnan(d)) {
        out += "\"nan\"";
      } else if (std::isinf(d)) {
        out += d > 0 ? "\"inf\"" : "\"-inf\"";
      } else {
        out += fmt::format("{:.17g}", d);
      }
      return;
    }
    default:
      out += v.dump();
  }
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::string dump_json(const Json& value) {
  std::string out;
  write_json(value, out);
  return out;
}

std::string emit_report(const Report& report, Format format) {
  switch (format) {
    case Format::kJson: {
      Json j;
      j["tool"] = kToolName;
      j["version"] = kToolVersion;
      j["command"] = report.command;
      j["parameters"] = report.parameters;
      if (report.floating) j["platform"] = platform_note();
      j["checks"] = Json::array();
      for (const auto& c : report.checks)
        j["checks"].push_back(Json{{"id", c.id}, {"inputs", c.inputs}, {"pass", c.pass}, {"result", c.result}, {"text", c.text}});
      j["summary"] = Json{{"pass", report.pass_count()}, {"fail", report.fail_count()}};
      return dump_json(j) + "\n";
    }
    case Format::kCsv: {
      if (report.table) return *report.table;
      std::string out = "id,pass,text\n";
      for (const auto& c : report.checks)
        out += csv_field(c.id) + "," + (c.pass ? "true" : "false") + "," + csv_field(c.text) + "\n";
      return out;
    }
    case Format::kText: {
      std::string out = fmt::format("{} {} {}\n", kToolName, report.command, dump_json(report.parameters));
      if (report.floating) out += "platform: " + platform_note() + "\n";
      for (const auto& c : report.checks) out += fmt::format("{} {}: {}\n", c.pass ? "PASS" : "FAIL", c.id, c.text);
      out += fmt::format("summary: {} pass, {} fail\n", report.pass_count(), report.fail_count());
      return out;
    }
  }
  return {};
}

}  // namespace isopair
