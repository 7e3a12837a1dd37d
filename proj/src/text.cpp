#include "dictprompt/text.hpp"

#include "dictprompt/error.hpp"
#include "dictprompt/unicode.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace dictprompt {
namespace {

void replace_all(std::string& s, std::string_view from, std::string_view to)
{
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }
bool is_period_or_comma(char c) { return c == '.' || c == ','; }

// [\{-\~\[-\` -\&\(-\+\:-\@\/]
bool is_13a_symbol(char c)
{
    const auto u = static_cast<unsigned char>(c);
    return (u >= 0x7B && u <= 0x7E) || (u >= 0x5B && u <= 0x60) || (u >= 0x20 && u <= 0x26) ||
           (u >= 0x28 && u <= 0x2B) || (u >= 0x3A && u <= 0x40) || u == 0x2F;
}

// Leftmost non-overlapping substitution of a two-character pattern, the way
// re.sub scans. Byte-wise scanning is equivalent here because every pattern
// has at least one ASCII side.
template <class First, class Second, class Emit>
std::string substitute_pairs(const std::string& s, First first, Second second, Emit emit)
{
    std::string out;
    out.reserve(s.size() + s.size() / 4);
    std::size_t i = 0;
    while (i < s.size()) {
        if (i + 1 < s.size() && first(s[i]) && second(s[i + 1])) {
            emit(out, s[i], s[i + 1]);
            i += 2;
        } else {
            out.push_back(s[i]);
            ++i;
        }
    }
    return out;
}

} // namespace

TokenizedSentence lookup_tokenize(std::string_view line)
{
    TokenizedSentence out;
    out.raw = std::string(line);
    for (const auto& piece : unicode::split_whitespace(line)) {
        const auto stripped = unicode::strip_punctuation(piece);
        if (!stripped.empty())
            out.tokens.push_back(unicode::to_lower(stripped));
    }
    return out;
}

std::string lookup_normalize(std::string_view word)
{
    return unicode::to_lower(unicode::strip_punctuation(word));
}

TokenizedSentence eval_tokenize(std::string_view line)
{
    std::string s(line);
    replace_all(s, "<skipped>", "");
    replace_all(s, "-\n", "");
    replace_all(s, "\n", " ");
    if (s.find('&') != std::string::npos) {
        replace_all(s, "&quot;", "\"");
        replace_all(s, "&amp;", "&");
        replace_all(s, "&lt;", "<");
        replace_all(s, "&gt;", ">");
    }

    std::string spaced;
    spaced.reserve(s.size() * 2 + 2);
    spaced.push_back(' ');
    for (const char c : s) {
        if (is_13a_symbol(c)) {
            spaced.push_back(' ');
            spaced.push_back(c);
            spaced.push_back(' ');
        } else {
            spaced.push_back(c);
        }
    }
    spaced.push_back(' ');

    auto not_digit = [](char c) { return !is_digit(c); };
    spaced = substitute_pairs(spaced, not_digit, is_period_or_comma, [](std::string& o, char a, char b) {
        o.push_back(a);
        o.push_back(' ');
        o.push_back(b);
        o.push_back(' ');
    });
    spaced = substitute_pairs(spaced, is_period_or_comma, not_digit, [](std::string& o, char a, char b) {
        o.push_back(' ');
        o.push_back(a);
        o.push_back(' ');
        o.push_back(b);
    });
    spaced = substitute_pairs(spaced, is_digit, [](char c) { return c == '-'; },
                              [](std::string& o, char a, char b) {
                                  o.push_back(a);
                                  o.push_back(' ');
                                  o.push_back(b);
                                  o.push_back(' ');
                              });

    TokenizedSentence out;
    out.raw = std::string(line);
    out.tokens = unicode::split_whitespace_py(spaced);
    return out;
}

void FrequencyTable::add(std::string_view word, std::uint64_t n)
{
    auto it = counts_.find(word);
    if (it == counts_.end())
        it = counts_.emplace(std::string(word), 0).first;
    it->second += n;
    total_ += n;
}

std::uint64_t FrequencyTable::count(std::string_view word) const
{
    const auto it = counts_.find(word);
    return it == counts_.end() ? 0 : it->second;
}

FrequencyTable build_frequency_table(std::span<const std::string> lines)
{
    FrequencyTable table;
    for (const auto& line : lines)
        for (const auto& token : lookup_tokenize(line).tokens)
            table.add(token);
    return table;
}

std::vector<std::string> top_k_words(const FrequencyTable& table, std::size_t k)
{
    std::vector<std::pair<std::string_view, std::uint64_t>> entries(table.counts().begin(),
                                                                     table.counts().end());
    // counts() is already in lexicographic order, so a stable sort by count suffices.
    std::stable_sort(entries.begin(), entries.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    entries.resize(std::min(k, entries.size()));
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const auto& [word, count] : entries)
        out.emplace_back(word);
    return out;
}

std::vector<std::string> ParallelCorpus::source_lines() const
{
    std::vector<std::string> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs)
        out.push_back(p.source);
    return out;
}

std::vector<std::string> ParallelCorpus::target_lines() const
{
    std::vector<std::string> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs)
        out.push_back(p.target);
    return out;
}

bool CorpusFilter::accepts(std::size_t source_len, std::size_t target_len) const
{
    if (drop_empty && (source_len == 0 || target_len == 0))
        return false;
    if (max_len && (source_len > *max_len || target_len > *max_len))
        return false;
    if (max_ratio) {
        const auto ls = static_cast<double>(source_len);
        const auto lt = static_cast<double>(target_len);
        if (ratio_mode == RatioMode::symmetric) {
            if (std::max(ls, lt) > *max_ratio * std::min(ls, lt))
                return false;
        } else if (ls > *max_ratio * lt) {
            return false;
        }
    }
    return true;
}

std::vector<std::size_t> filter_indices(const ParallelCorpus& corpus, const CorpusFilter& filter)
{
    std::vector<std::size_t> kept;
    kept.reserve(corpus.size());
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto ls = lookup_tokenize(corpus.pairs[i].source).tokens.size();
        const auto lt = lookup_tokenize(corpus.pairs[i].target).tokens.size();
        if (filter.accepts(ls, lt))
            kept.push_back(i);
    }
    return kept;
}

ParallelCorpus select_pairs(const ParallelCorpus& corpus, std::span<const std::size_t> indices)
{
    ParallelCorpus out;
    out.source_lang = corpus.source_lang;
    out.target_lang = corpus.target_lang;
    out.pairs.reserve(indices.size());
    for (const auto i : indices)
        out.pairs.push_back(corpus.pairs.at(i));
    return out;
}

std::string read_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError(path.string(), "cannot open file for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad())
        throw IoError(path.string(), "read failed");
    return std::move(buf).str();
}

void write_file(const std::filesystem::path& path, std::string_view content)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError(path.string(), "cannot open file for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw IoError(path.string(), "write failed");
}

std::vector<std::string> read_lines(const std::filesystem::path& path)
{
    const std::string content = read_file(path);
    std::vector<std::string> lines;
    std::size_t pos = 0;
    if (content.starts_with("\xEF\xBB\xBF"))
        pos = 3;
    while (pos < content.size()) {
        auto nl = content.find('\n', pos);
        if (nl == std::string::npos)
            nl = content.size();
        std::string line = content.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        lines.push_back(std::move(line));
        pos = nl + 1;
    }
    return lines;
}

void write_lines(const std::filesystem::path& path, std::span<const std::string> lines)
{
    std::string content;
    for (const auto& line : lines) {
        content += line;
        content += '\n';
    }
    write_file(path, content);
}

ParallelCorpus read_parallel(const std::filesystem::path& source, const std::filesystem::path& target)
{
    auto src = read_lines(source);
    auto tgt = read_lines(target);
    if (src.size() != tgt.size())
        throw ParseError("line-count mismatch: " + source.string() + " has " + std::to_string(src.size()) +
                         " lines, " + target.string() + " has " + std::to_string(tgt.size()));
    ParallelCorpus corpus;
    corpus.pairs.reserve(src.size());
    for (std::size_t i = 0; i < src.size(); ++i)
        corpus.pairs.push_back({std::move(src[i]), std::move(tgt[i])});
    return corpus;
}

ParallelCorpus read_parallel_tsv(const std::filesystem::path& path)
{
    const auto lines = read_lines(path);
    ParallelCorpus corpus;
    corpus.pairs.reserve(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& line = lines[i];
        const auto tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw ParseError(path.string() + ": expected exactly two tab-separated columns", i + 1);
        corpus.pairs.push_back({line.substr(0, tab), line.substr(tab + 1)});
    }
    return corpus;
}

ParallelCorpus load_parallel(const std::filesystem::path& source, const std::filesystem::path& target,
                             const CorpusFilter& filter)
{
    const auto raw = read_parallel(source, target);
    const auto kept = filter_indices(raw, filter);
    return select_pairs(raw, kept);
}

LinkSet parse_pharaoh(std::string_view line, std::size_t line_no)
{
    LinkSet links;
    for (const auto& item : unicode::split_whitespace(line)) {
        const auto dash = item.find('-');
        std::uint32_t i = 0;
        std::uint32_t j = 0;
        bool ok = dash != std::string::npos && dash > 0 && dash + 1 < item.size();
        if (ok) {
            const char* begin = item.data();
            const char* mid = item.data() + dash;
            const char* end = item.data() + item.size();
            auto r1 = std::from_chars(begin, mid, i);
            auto r2 = std::from_chars(mid + 1, end, j);
            ok = r1.ec == std::errc{} && r1.ptr == mid && r2.ec == std::errc{} && r2.ptr == end;
        }
        if (!ok)
            throw ParseError("malformed alignment link '" + item + "'", line_no);
        links.push_back({i, j});
    }
    std::sort(links.begin(), links.end());
    links.erase(std::unique(links.begin(), links.end()), links.end());
    return links;
}

std::string format_pharaoh(const LinkSet& links)
{
    std::string out;
    for (const auto& l : links) {
        if (!out.empty())
            out += ' ';
        out += std::to_string(l.source);
        out += '-';
        out += std::to_string(l.target);
    }
    return out;
}

AlignmentLinks parse_alignments(std::span<const std::string> lines, const ParallelCorpus& corpus)
{
    if (lines.size() != corpus.size())
        throw ParseError("alignment file has " + std::to_string(lines.size()) + " lines, corpus has " +
                         std::to_string(corpus.size()) + " pairs");
    AlignmentLinks out;
    out.pairs.reserve(lines.size());
    for (std::size_t n = 0; n < lines.size(); ++n) {
        auto links = parse_pharaoh(lines[n], n + 1);
        const auto ls = lookup_tokenize(corpus.pairs[n].source).tokens.size();
        const auto lt = lookup_tokenize(corpus.pairs[n].target).tokens.size();
        for (const auto& l : links) {
            if (l.source >= ls || l.target >= lt)
                throw ParseError("link " + std::to_string(l.source) + "-" + std::to_string(l.target) +
                                     " out of bounds for a " + std::to_string(ls) + "x" + std::to_string(lt) +
                                     " sentence pair",
                                 n + 1);
        }
        out.pairs.push_back(std::move(links));
    }
    return out;
}

AlignmentLinks load_alignments(const std::filesystem::path& path, const ParallelCorpus& corpus)
{
    return parse_alignments(read_lines(path), corpus);
}

void write_alignments(const std::filesystem::path& path, const AlignmentLinks& links)
{
    std::vector<std::string> lines;
    lines.reserve(links.size());
    for (const auto& l : links.pairs)
        lines.push_back(format_pharaoh(l));
    write_lines(path, lines);
}

AlignmentLinks select_links(const AlignmentLinks& links, std::span<const std::size_t> indices)
{
    AlignmentLinks out;
    out.pairs.reserve(indices.size());
    for (const auto i : indices)
        out.pairs.push_back(links.pairs.at(i));
    return out;
}

} // namespace dictprompt
