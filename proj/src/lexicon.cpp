#include "dictprompt/lexicon.hpp"

#include "dictprompt/error.hpp"
#include "dictprompt/format.hpp"
#include "dictprompt/rng.hpp"
#include "dictprompt/text.hpp"
#include "dictprompt/unicode.hpp"

#include <algorithm>

namespace dictprompt {
namespace {

std::string join_tokens(const std::vector<std::string>& tokens)
{
    std::string out;
    for (const auto& t : tokens) {
        if (!out.empty())
            out += ' ';
        out += t;
    }
    return out;
}

// Non-stoplist types of the corpus and their token counts.
FrequencyTable countable_types(std::span<const std::string> lines, const Stoplist& stoplist)
{
    FrequencyTable table;
    for (const auto& line : lines)
        for (const auto& token : lookup_tokenize(line).tokens)
            if (!stoplist.contains(token))
                table.add(token);
    return table;
}

double percent(std::uint64_t part, std::uint64_t whole)
{
    return 100.0 * static_cast<double>(part) / static_cast<double>(whole);
}

} // namespace

std::string_view to_string(Provenance p)
{
    switch (p) {
    case Provenance::loaded: return "loaded";
    case Provenance::induced: return "induced";
    case Provenance::downsampled: return "downsampled";
    case Provenance::shuffled: return "shuffled";
    }
    return "unknown";
}

bool BilingualLexicon::add(std::string_view source, std::string_view target)
{
    if (source.empty() || target.empty())
        throw ContractError("lexicon words must be non-empty");
    if (unicode::contains_whitespace(source))
        throw ContractError("lexicon source word contains whitespace: '" + std::string(source) + "'");
    auto it = entries_.find(source);
    if (it == entries_.end())
        it = entries_.emplace(std::string(source), std::vector<std::string>{}).first;
    auto& targets = it->second;
    if (std::find(targets.begin(), targets.end(), target) != targets.end())
        return false;
    targets.emplace_back(target);
    return true;
}

void BilingualLexicon::set(std::string_view source, std::vector<std::string> targets)
{
    if (targets.empty())
        throw ContractError("empty translation list for '" + std::string(source) + "'");
    auto it = entries_.find(source);
    if (it == entries_.end())
        entries_.emplace(std::string(source), std::move(targets));
    else
        it->second = std::move(targets);
}

bool BilingualLexicon::erase(std::string_view source)
{
    const auto it = entries_.find(source);
    if (it == entries_.end())
        return false;
    entries_.erase(it);
    return true;
}

std::span<const std::string> BilingualLexicon::lookup(std::string_view word) const
{
    const auto it = entries_.find(word);
    if (it == entries_.end())
        return {};
    return it->second;
}

std::size_t BilingualLexicon::pair_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& [_, targets] : entries_)
        n += targets.size();
    return n;
}

std::span<const std::string> lookup(const BilingualLexicon& lex, std::string_view word)
{
    return lex.lookup(word);
}

BilingualLexicon parse_muse(std::string_view text)
{
    BilingualLexicon lex;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    if (text.starts_with("\xEF\xBB\xBF"))
        pos = 3;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos)
            nl = text.size();
        const auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++line_no;

        const auto fields = unicode::split_whitespace(line);
        if (fields.size() != 2)
            throw ParseError("expected 2 fields, found " + std::to_string(fields.size()), line_no);
        const auto source = lookup_normalize(fields[0]);
        const auto target = join_tokens(lookup_tokenize(fields[1]).tokens);
        if (source.empty() || target.empty())
            continue;
        lex.add(source, target);
    }
    return lex;
}

BilingualLexicon load_muse(const std::filesystem::path& path)
{
    try {
        return parse_muse(read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), 0);
    }
}

std::string format_muse(const BilingualLexicon& lex)
{
    std::string out;
    for (const auto& [source, targets] : lex.entries()) {
        for (const auto& target : targets) {
            out += source;
            out += ' ';
            out += target;
            out += '\n';
        }
    }
    return out;
}

void write_muse(const std::filesystem::path& path, const BilingualLexicon& lex)
{
    write_file(path, format_muse(lex));
}

CoverageStats coverage_stats(const BilingualLexicon& lex, std::span<const std::string> lines,
                             const Stoplist& stoplist)
{
    const auto types = countable_types(lines, stoplist);
    if (types.total() == 0)
        throw ContractError("coverage is undefined: corpus has no tokens outside the stoplist");

    CoverageStats stats;
    stats.total_types = types.vocabulary_size();
    stats.total_tokens = types.total();
    for (const auto& [word, count] : types.counts()) {
        if (lex.contains(word)) {
            ++stats.covered_types;
            stats.covered_tokens += count;
        }
    }
    stats.token_coverage = percent(stats.covered_tokens, stats.total_tokens);
    stats.type_coverage = percent(stats.covered_types, stats.total_types);
    return stats;
}

BilingualLexicon downsample_to_type_coverage(const BilingualLexicon& lex, double target_rate,
                                             std::span<const std::string> lines, const Stoplist& stoplist,
                                             std::uint64_t seed)
{
    const auto stats = coverage_stats(lex, lines, stoplist);
    if (target_rate < 0)
        throw ContractError("target coverage must be >= 0, got " + format_double(target_rate));
    if (target_rate > stats.type_coverage)
        throw ContractError("target coverage " + format_double(target_rate) + "% is above the current type coverage " +
                            format_double(stats.type_coverage) + "%");

    std::vector<std::string> covering;
    const auto types = countable_types(lines, stoplist);
    for (const auto& [word, _] : types.counts())
        if (lex.contains(word))
            covering.push_back(word);

    std::uint64_t keep = stats.covered_types;
    while (keep > 0 && percent(keep, stats.total_types) > target_rate)
        --keep;

    Rng rng(seed);
    rng.shuffle(std::span(covering));

    BilingualLexicon out = lex;
    for (std::size_t i = 0; i < covering.size() - keep; ++i)
        out.erase(covering[i]);
    out.set_provenance(Provenance::downsampled);
    return out;
}

std::vector<double> coverage_sweep(double full, double step)
{
    if (step <= 0)
        throw ContractError("coverage sweep step must be positive");
    std::vector<double> rates;
    for (int i = 0;; ++i) {
        const double r = step * i;
        if (r >= full)
            break;
        rates.push_back(r);
    }
    rates.push_back(full);
    return rates;
}

BilingualLexicon shuffle_targets(const BilingualLexicon& lex, std::uint64_t seed)
{
    if (lex.empty())
        throw ContractError("cannot shuffle an empty lexicon");

    std::vector<std::string> sources;
    std::vector<std::vector<std::string>> lists;
    for (const auto& [source, targets] : lex.entries()) {
        sources.push_back(source);
        lists.push_back(targets);
    }

    // Sattolo's algorithm: a uniformly random single cycle.
    std::vector<std::size_t> perm(lists.size());
    for (std::size_t i = 0; i < perm.size(); ++i)
        perm[i] = i;
    Rng rng(seed);
    for (std::size_t i = perm.size() - 1; i > 0; --i)
        std::swap(perm[i], perm[rng.below(i)]);

    BilingualLexicon out(lex.source_lang(), lex.target_lang(), Provenance::shuffled);
    for (std::size_t i = 0; i < sources.size(); ++i)
        out.set(sources[i], lists[perm[i]]);
    return out;
}

} // namespace dictprompt
