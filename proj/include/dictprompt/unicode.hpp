#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dictprompt::unicode {

bool is_space(char32_t cp);
bool is_punctuation(char32_t cp);

/// Splits on Unicode White_Space; no empty pieces.
std::vector<std::string> split_whitespace(std::string_view text);

/// Python str.split() whitespace set (White_Space plus U+001C..U+001F).
std::vector<std::string> split_whitespace_py(std::string_view text);

/// Removes leading and trailing code points of general category P*.
std::string_view strip_punctuation(std::string_view word);

/// Simple (1:1) Unicode lowercase mapping.
std::string to_lower(std::string_view text);

bool contains_whitespace(std::string_view text);

} // namespace dictprompt::unicode
