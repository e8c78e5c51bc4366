#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace kgsynth::eval {

using CsvRow = std::vector<std::string>;

/// Comma-separated with double-quote escaping; fields holding a comma, quote
/// or line break are quoted. Rows end in "\n".
std::string write_csv(const std::vector<CsvRow>& rows);

/// Inverse of write_csv; also accepts CRLF line ends. Throws ParseError on an
/// unterminated quoted field.
std::vector<CsvRow> read_csv(std::string_view text);

}  // namespace kgsynth::eval
