#include "dictprompt/format.hpp"

#include <array>
#include <charconv>

namespace dictprompt {

std::string format_double(double value)
{
    std::array<char, 32> buf{};
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), result.ptr);
}

std::string format_fixed(double value, int decimals)
{
    std::array<char, 64> buf{};
    const auto result =
        std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed, decimals);
    return std::string(buf.data(), result.ptr);
}

} // namespace dictprompt
