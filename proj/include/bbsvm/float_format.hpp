#pragma once

#include <string>
#include <string_view>

namespace bbsvm {

/// Shortest decimal string that parses back to exactly `value`.
/// Infinities are written as `inf` / `-inf`; NaN as `nan`.
std::string format_double(double value);

/// Parses a full token produced by `format_double` (or any decimal /
/// scientific literal). Throws std::invalid_argument on junk.
double parse_double(std::string_view token);

}  // namespace bbsvm
