#pragma once

#include <string>
#include <string_view>
#include <vector>

// Minimal comma-separated reader for the project's own flat files (no quoting).
namespace lumsim::csv {

using Row = std::vector<std::string>;

/// Splits into rows and fields. Blank lines are skipped; CRLF is tolerated.
std::vector<Row> parse(std::string_view text);

std::string join(const Row& row);

double to_double(const std::string& field, const std::string& where);
long long to_int(const std::string& field, const std::string& where);

}  // namespace lumsim::csv
