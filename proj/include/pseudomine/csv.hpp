#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace pseudomine::csv {

using Row = std::vector<std::string>;

/// RFC 4180 reader: quoted fields may hold commas, doubled quotes and newlines.
std::vector<Row> parse(std::string_view text);

/// Quotes the field when it contains a comma, quote or line break.
std::string field(std::string_view value);

std::string join(const Row& row);

bool parse_bool(std::string_view value, bool& out);

}  // namespace pseudomine::csv
