#include "dictprompt/unicode.hpp"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <cstdint>

namespace dictprompt::unicode {
namespace {

// Invalid sequences decode as U+FFFD, which is neither space nor punctuation,
// so malformed bytes survive tokenization untouched.
struct Decoded {
    char32_t cp;
    std::size_t begin;
    std::size_t end;
};

template <class F>
void for_each_code_point(std::string_view text, F&& f)
{
    const auto* s = reinterpret_cast<const uint8_t*>(text.data());
    const auto length = static_cast<int32_t>(text.size());
    int32_t i = 0;
    while (i < length) {
        const int32_t start = i;
        UChar32 c;
        U8_NEXT(s, i, length, c);
        if (c < 0)
            c = 0xFFFD;
        if (!f(Decoded{static_cast<char32_t>(c), static_cast<std::size_t>(start),
                       static_cast<std::size_t>(i)}))
            return;
    }
}

template <class IsSep>
std::vector<std::string> split_by(std::string_view text, IsSep is_sep)
{
    std::vector<std::string> out;
    std::size_t token_begin = std::string_view::npos;
    for_each_code_point(text, [&](const Decoded& d) {
        if (is_sep(d.cp)) {
            if (token_begin != std::string_view::npos) {
                out.emplace_back(text.substr(token_begin, d.begin - token_begin));
                token_begin = std::string_view::npos;
            }
        } else if (token_begin == std::string_view::npos) {
            token_begin = d.begin;
        }
        return true;
    });
    if (token_begin != std::string_view::npos)
        out.emplace_back(text.substr(token_begin));
    return out;
}

} // namespace

bool is_space(char32_t cp)
{
    return u_isUWhiteSpace(static_cast<UChar32>(cp));
}

bool is_punctuation(char32_t cp)
{
    return u_ispunct(static_cast<UChar32>(cp));
}

std::vector<std::string> split_whitespace(std::string_view text)
{
    return split_by(text, is_space);
}

std::vector<std::string> split_whitespace_py(std::string_view text)
{
    return split_by(text, [](char32_t cp) { return (cp >= 0x1C && cp <= 0x1F) || is_space(cp); });
}

std::string_view strip_punctuation(std::string_view word)
{
    // First and one-past-last byte offsets of non-punctuation code points.
    std::size_t first = std::string_view::npos;
    std::size_t last = 0;
    for_each_code_point(word, [&](const Decoded& d) {
        if (!is_punctuation(d.cp)) {
            if (first == std::string_view::npos)
                first = d.begin;
            last = d.end;
        }
        return true;
    });
    if (first == std::string_view::npos)
        return {};
    return word.substr(first, last - first);
}

std::string to_lower(std::string_view text)
{
    std::string out;
    out.reserve(text.size());
    for_each_code_point(text, [&](const Decoded& d) {
        if (d.cp < 0x80) {
            const char c = text[d.begin];
            out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
            return true;
        }
        if (d.cp == 0xFFFD) {
            out.append(text.substr(d.begin, d.end - d.begin));
            return true;
        }
        const UChar32 lower = u_tolower(static_cast<UChar32>(d.cp));
        uint8_t buf[U8_MAX_LENGTH];
        int32_t n = 0;
        U8_APPEND_UNSAFE(buf, n, lower);
        out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(n));
        return true;
    });
    return out;
}

bool contains_whitespace(std::string_view text)
{
    bool found = false;
    for_each_code_point(text, [&](const Decoded& d) {
        found = is_space(d.cp);
        return !found;
    });
    return found;
}

} // namespace dictprompt::unicode
