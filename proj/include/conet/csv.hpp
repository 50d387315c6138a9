#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace conet::csv {

// Splits one RFC 4180 record (no embedded newlines). Throws FormatError on an
// unterminated quote.
std::vector<std::string> split(std::string_view line);

// Quotes a field only when it contains a comma, quote or newline.
std::string escape(std::string_view field);

std::string join(const std::vector<std::string>& fields);

}  // namespace conet::csv
