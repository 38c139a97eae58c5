#pragma once

#include <string>
#include <string_view>

namespace mtirl {

// Shortest decimal that parses back to the same double. NaN is written as
// the empty string.
std::string format_double(double v);

// Inverse of format_double; throws std::invalid_argument on malformed input.
double parse_double(std::string_view text);

long long parse_integer(std::string_view text);

}  // namespace mtirl
