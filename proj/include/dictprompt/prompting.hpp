#pragma once

#include "dictprompt/lexicon.hpp"
#include "dictprompt/text.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dictprompt {

enum class HintStrategy {
    full,          // every translation, at most max_translations sampled at random
    gold,          // the single translation found in the reference
    random_single, // one translation at random
    false_dict,    // random_single over a target-shuffled lexicon
    none,          // baseline, no hint clause
};

std::string_view to_string(HintStrategy s);
HintStrategy parse_strategy(std::string_view name);

constexpr std::size_t default_max_translations = 3;
constexpr std::size_t default_demo_count = 4;
constexpr std::size_t default_stoplist_size = 500;

struct Hint {
    std::string word;
    std::vector<std::string> translations;

    friend bool operator==(const Hint&, const Hint&) = default;
};

struct HintSet {
    std::vector<Hint> items;
    HintStrategy strategy = HintStrategy::none;

    bool empty() const noexcept { return items.empty(); }
    friend bool operator==(const HintSet&, const HintSet&) = default;
};

/// True when `needle` occurs in `haystack` as a contiguous run. An empty needle never occurs.
bool contains_sequence(std::span<const std::string> haystack, std::span<const std::string> needle);

/// True when the lookup tokens of `phrase` occur contiguously in `tokens`.
bool phrase_occurs(std::string_view phrase, std::span<const std::string> tokens);

/// Hints for one sentence: one item per distinct non-stoplist lookup token
/// with a lexicon entry, in first-occurrence order, filtered by `strategy`.
///
/// All random choices come from Rng(seed). For false_dict the caller passes
/// the shuffled lexicon; selection then matches random_single. `reference`
/// is required for gold.
HintSet select_hints(std::string_view sentence, const BilingualLexicon& lex, const Stoplist& stoplist,
                     HintStrategy strategy, std::uint64_t seed,
                     std::optional<std::string_view> reference = std::nullopt,
                     std::size_t max_translations = default_max_translations);

/// `In this context, the word "w" means "t1", "t2"; the word ...` or "" for no hints.
std::string render_hint_clause(const HintSet& hints);

/// One prompt block. Without a reference the last line ends in "is:" (query position).
std::string render_example(std::string_view source, std::string_view target_lang, const HintSet& hints,
                           std::optional<std::string_view> reference = std::nullopt);

struct Demonstration {
    std::string source;
    HintSet hints;
    std::string reference;
};

/// k distinct dev pairs drawn with a seeded RNG, kept in dev order. Hints use
/// per-pair streams of `seed`, and the dev target as reference for gold.
std::vector<Demonstration> select_demonstrations(const ParallelCorpus& dev, std::size_t k, std::uint64_t seed,
                                                 const BilingualLexicon& lex, const Stoplist& stoplist,
                                                 HintStrategy strategy,
                                                 std::size_t max_translations = default_max_translations);

struct RenderedPrompt {
    std::string text;
    std::string stop = "\n";
    std::size_t instance_id = 0;
};

/// Demonstration blocks followed by the query block, separated by one blank line.
RenderedPrompt build_prompt(std::span<const Demonstration> demos, std::string_view source,
                            std::string_view target_lang, const HintSet& hints, std::size_t instance_id = 0);

struct ParsedExample {
    std::string source;
    std::vector<Hint> hints;
    std::optional<std::string> reference;
};

/// Inverse of build_prompt for text it produced; throws ParseError otherwise.
std::vector<ParsedExample> parse_prompt(std::string_view text, std::string_view target_lang);

} // namespace dictprompt
