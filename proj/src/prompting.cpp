#include "dictprompt/prompting.hpp"

#include "dictprompt/error.hpp"
#include "dictprompt/rng.hpp"

#include <algorithm>
#include <set>

namespace dictprompt {
namespace {

constexpr std::string_view kClausePrefix = "In this context, ";

std::string instruction_prefix(std::string_view target_lang)
{
    return "Translate the following sentence to " + std::string(target_lang) + ": ";
}

std::string answer_prefix(std::string_view target_lang)
{
    return "The full translation to " + std::string(target_lang) + " is:";
}

std::vector<std::string_view> split_on(std::string_view text, std::string_view sep)
{
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = text.find(sep, pos);
        if (next == std::string_view::npos) {
            out.push_back(text.substr(pos));
            return out;
        }
        out.push_back(text.substr(pos, next - pos));
        pos = next + sep.size();
    }
}

std::vector<Hint> parse_hint_clause(std::string_view clause)
{
    if (!clause.starts_with(kClausePrefix) || !clause.ends_with('.'))
        throw ParseError("malformed hint clause");
    clause.remove_prefix(kClausePrefix.size());
    clause.remove_suffix(1);

    std::vector<Hint> hints;
    for (auto item : split_on(clause, "; the word \"")) {
        if (hints.empty()) {
            if (!item.starts_with("the word \""))
                throw ParseError("malformed hint clause");
            item.remove_prefix(10);
        }
        const auto means = item.find("\" means \"");
        if (means == std::string_view::npos || !item.ends_with('"'))
            throw ParseError("malformed hint item");
        Hint hint;
        hint.word = std::string(item.substr(0, means));
        auto translations = item.substr(means + 9);
        translations.remove_suffix(1);
        for (const auto t : split_on(translations, "\", \""))
            hint.translations.emplace_back(t);
        hints.push_back(std::move(hint));
    }
    return hints;
}

} // namespace

std::string_view to_string(HintStrategy s)
{
    switch (s) {
    case HintStrategy::full: return "full";
    case HintStrategy::gold: return "gold";
    case HintStrategy::random_single: return "random";
    case HintStrategy::false_dict: return "false";
    case HintStrategy::none: return "none";
    }
    return "unknown";
}

HintStrategy parse_strategy(std::string_view name)
{
    if (name == "full" || name == "dictionary")
        return HintStrategy::full;
    if (name == "gold")
        return HintStrategy::gold;
    if (name == "random" || name == "random_single")
        return HintStrategy::random_single;
    if (name == "false" || name == "false_dict")
        return HintStrategy::false_dict;
    if (name == "none" || name == "baseline")
        return HintStrategy::none;
    throw ContractError("unknown hint strategy '" + std::string(name) + "'");
}

bool contains_sequence(std::span<const std::string> haystack, std::span<const std::string> needle)
{
    if (needle.empty())
        return false;
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

bool phrase_occurs(std::string_view phrase, std::span<const std::string> tokens)
{
    return contains_sequence(tokens, lookup_tokenize(phrase).tokens);
}

HintSet select_hints(std::string_view sentence, const BilingualLexicon& lex, const Stoplist& stoplist,
                     HintStrategy strategy, std::uint64_t seed, std::optional<std::string_view> reference,
                     std::size_t max_translations)
{
    if (strategy == HintStrategy::gold && !reference)
        throw ContractError("the gold hint strategy needs a reference translation");
    if (max_translations == 0)
        throw ContractError("max_translations must be at least 1");

    HintSet out;
    out.strategy = strategy;
    if (strategy == HintStrategy::none)
        return out;

    std::vector<std::string> reference_tokens;
    if (strategy == HintStrategy::gold)
        reference_tokens = lookup_tokenize(*reference).tokens;

    Rng rng(seed);
    std::set<std::string, std::less<>> seen;
    auto tokens = lookup_tokenize(sentence).tokens;
    for (auto& word : tokens) {
        if (stoplist.contains(word) || !seen.insert(word).second)
            continue;
        const auto translations = lex.lookup(word);
        if (translations.empty())
            continue;

        Hint hint{std::move(word), {}};
        switch (strategy) {
        case HintStrategy::full:
            if (translations.size() <= max_translations) {
                hint.translations.assign(translations.begin(), translations.end());
            } else {
                auto picked = rng.sample_indices(translations.size(), max_translations);
                std::sort(picked.begin(), picked.end());
                for (const auto i : picked)
                    hint.translations.push_back(translations[i]);
            }
            break;
        case HintStrategy::gold: {
            const std::string* found = nullptr;
            std::size_t matches = 0;
            for (const auto& t : translations) {
                if (phrase_occurs(t, reference_tokens)) {
                    found = &t;
                    ++matches;
                }
            }
            if (matches != 1)
                continue;
            hint.translations.push_back(*found);
            break;
        }
        case HintStrategy::random_single:
        case HintStrategy::false_dict:
            hint.translations.push_back(translations[rng.below(translations.size())]);
            break;
        case HintStrategy::none:
            break;
        }
        out.items.push_back(std::move(hint));
    }
    return out;
}

std::string render_hint_clause(const HintSet& hints)
{
    if (hints.empty())
        return {};
    std::string out(kClausePrefix);
    for (std::size_t i = 0; i < hints.items.size(); ++i) {
        const auto& item = hints.items[i];
        if (i > 0)
            out += "; ";
        out += "the word \"";
        out += item.word;
        out += "\" means ";
        for (std::size_t j = 0; j < item.translations.size(); ++j) {
            if (j > 0)
                out += ", ";
            out += '"';
            out += item.translations[j];
            out += '"';
        }
    }
    out += '.';
    return out;
}

std::string render_example(std::string_view source, std::string_view target_lang, const HintSet& hints,
                           std::optional<std::string_view> reference)
{
    std::string out = instruction_prefix(target_lang);
    out += source;
    out += '\n';
    if (!hints.empty()) {
        out += render_hint_clause(hints);
        out += '\n';
    }
    out += answer_prefix(target_lang);
    if (reference) {
        out += ' ';
        out += *reference;
    }
    return out;
}

std::vector<Demonstration> select_demonstrations(const ParallelCorpus& dev, std::size_t k, std::uint64_t seed,
                                                 const BilingualLexicon& lex, const Stoplist& stoplist,
                                                 HintStrategy strategy, std::size_t max_translations)
{
    if (k > dev.size())
        throw ContractError("cannot draw " + std::to_string(k) + " demonstrations from a development set of " +
                            std::to_string(dev.size()) + " pairs");
    Rng rng(derive_seed(seed, Stream::demo_selection));
    auto picked = rng.sample_indices(dev.size(), k);
    std::sort(picked.begin(), picked.end());

    std::vector<Demonstration> demos;
    demos.reserve(k);
    for (const auto i : picked) {
        const auto& pair = dev.pairs[i];
        if (pair.target.empty())
            throw ContractError("demonstration " + std::to_string(i) + " has an empty reference");
        demos.push_back({pair.source,
                         select_hints(pair.source, lex, stoplist, strategy, derive_seed(seed, Stream::demo_hints, i),
                                      pair.target, max_translations),
                         pair.target});
    }
    return demos;
}

RenderedPrompt build_prompt(std::span<const Demonstration> demos, std::string_view source,
                            std::string_view target_lang, const HintSet& hints, std::size_t instance_id)
{
    RenderedPrompt out;
    out.instance_id = instance_id;
    for (const auto& demo : demos) {
        out.text += render_example(demo.source, target_lang, demo.hints, demo.reference);
        out.text += "\n\n";
    }
    out.text += render_example(source, target_lang, hints);
    return out;
}

std::vector<ParsedExample> parse_prompt(std::string_view text, std::string_view target_lang)
{
    const auto instruction = instruction_prefix(target_lang);
    const auto answer = answer_prefix(target_lang);

    std::vector<ParsedExample> out;
    for (const auto block : split_on(text, "\n\n")) {
        const auto lines = split_on(block, "\n");
        if (lines.size() < 2 || lines.size() > 3)
            throw ParseError("prompt block has " + std::to_string(lines.size()) + " lines");
        if (!lines.front().starts_with(instruction))
            throw ParseError("prompt block lacks the translation instruction");
        if (!lines.back().starts_with(answer))
            throw ParseError("prompt block lacks the answer line");

        ParsedExample ex;
        ex.source = std::string(lines.front().substr(instruction.size()));
        if (lines.size() == 3)
            ex.hints = parse_hint_clause(lines[1]);
        auto tail = lines.back().substr(answer.size());
        if (!tail.empty()) {
            if (!tail.starts_with(' '))
                throw ParseError("malformed answer line");
            ex.reference = std::string(tail.substr(1));
        }
        out.push_back(std::move(ex));
    }
    return out;
}

} // namespace dictprompt
