#pragma once

#include <string>

namespace dictprompt {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// `value` rounded to `decimals` places, fixed notation.
std::string format_fixed(double value, int decimals);

} // namespace dictprompt
