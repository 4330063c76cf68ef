#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "isopair/report.hpp"
#include "isopair/shift_operator.hpp"

namespace isopair {

enum ExitCode { kExitPass = 0, kExitDefect = 1, kExitUsage = 2 };

/// Runs one command line (args exclude the program name). The rendered report goes to --out
/// or `out`; diagnostics go to `err`. Returns 0 when every check passes, 1 when any check
/// fails, 2 on usage or input errors. When `report` is given it receives the built report.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
                Report* report = nullptr);

/// Operator expression over e(k), f(k), id, h, rational literals, + - * / ^ and parentheses,
/// evaluated in the given context. Division only by scalars. Throws ParseError.
ShiftOperator parse_operator_expression(std::string_view text, const VermaContext& ctx);

/// "symbolic" or a rational literal; std::invalid_argument or std::domain_error otherwise.
VermaContext parse_weight(const std::string& text);

}  // namespace isopair
