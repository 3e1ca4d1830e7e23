#pragma once
// Number formatting and parsing shared by the text formats.

#include <cstdint>
#include <string>
#include <string_view>

namespace askey {

// Shortest decimal form that parses back to the same double.
std::string format_real(double v);

// 17 significant digits, used for matrix exports.
std::string format_real17(double v);

// Strict parsers: the whole string must be consumed. Throw DomainError.
double parse_real(std::string_view s);
std::int64_t parse_int(std::string_view s);

}  // namespace askey
