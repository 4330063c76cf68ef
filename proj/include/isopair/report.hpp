#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace isopair {

using Json = nlohmann::ordered_json;

/// One verified property: what was checked, on which inputs, and the outcome.
struct Check {
  std::string id;
  Json inputs = Json::object();
  bool pass = true;
  /// Defect list, certificate or curve.
  Json result = Json::object();
  /// One-line human summary.
  std::string text;
};

struct Report {
  std::string command;
  Json parameters = Json::object();
  std::vector<Check> checks;
  /// Set when any value is floating point; adds the platform note.
  bool floating = false;
  /// Optional tabular payload used by the csv format (header line included).
  std::optional<std::string> table;

  long pass_count() const;
  long fail_count() const;
  bool ok() const { return fail_count() == 0; }
};

enum class Format { kJson, kCsv, kText };
std::string to_string(Format f);
/// "json", "csv" or "text"; std::invalid_argument otherwise.
Format parse_format(std::string_view text);

inline constexpr const char* kToolName = "isopair";
inline constexpr const char* kToolVersion = "1.0.0";

/// Platform note attached to floating reports.
std::string platform_note();

/// Deterministic rendering. JSON: compact, header fields (tool, version, command, parameters)
/// then checks and summary, insertion-ordered keys, doubles with 17 significant digits and
/// non-finite doubles as the strings "nan", "inf", "-inf". CSV: the table when present,
/// else one row per check. Text: one PASS/FAIL line per check and a summary line.
std::string emit_report(const Report& report, Format format);

/// Compact JSON text of a value with the report's number formatting.
std::string dump_json(const Json& value);

}  // namespace isopair
