#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dictprompt {

using Stoplist = std::set<std::string, std::less<>>;

enum class Provenance { loaded, induced, downsampled, shuffled };

std::string_view to_string(Provenance p);

/// Source word -> ordered, duplicate-free list of target translations.
///
/// Words are stored lookup-normalized (see lookup_tokenize). A translation may
/// span several tokens; it is then matched as a contiguous token sequence.
class BilingualLexicon {
public:
    using Entries = std::map<std::string, std::vector<std::string>, std::less<>>;

    BilingualLexicon() = default;
    BilingualLexicon(std::string source_lang, std::string target_lang,
                     Provenance provenance = Provenance::loaded)
        : source_lang_(std::move(source_lang)), target_lang_(std::move(target_lang)),
          provenance_(provenance) {}

    /// Appends `target` to the list of `source`. Returns false for a duplicate
    /// pair. Both words must be non-empty and already normalized.
    bool add(std::string_view source, std::string_view target);

    /// Replaces the whole list of `source`; the list must be non-empty and duplicate-free.
    void set(std::string_view source, std::vector<std::string> targets);
    bool erase(std::string_view source);

    /// Stored translations or an empty span.
    std::span<const std::string> lookup(std::string_view word) const;
    bool contains(std::string_view word) const { return entries_.find(word) != entries_.end(); }

    const Entries& entries() const noexcept { return entries_; }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    std::size_t pair_count() const noexcept;

    const std::string& source_lang() const noexcept { return source_lang_; }
    const std::string& target_lang() const noexcept { return target_lang_; }
    Provenance provenance() const noexcept { return provenance_; }
    void set_provenance(Provenance p) noexcept { provenance_ = p; }

    friend bool operator==(const BilingualLexicon& a, const BilingualLexicon& b)
    {
        return a.entries_ == b.entries_;
    }

private:
    Entries entries_;
    std::string source_lang_;
    std::string target_lang_;
    Provenance provenance_ = Provenance::loaded;
};

/// Parses MUSE ground-truth dictionary text: one "source target" pair per line.
/// Repeated source words accumulate translations in file order; duplicate
/// lines are dropped; pairs whose normalized side is empty are skipped.
BilingualLexicon parse_muse(std::string_view text);
BilingualLexicon load_muse(const std::filesystem::path& path);
std::string format_muse(const BilingualLexicon& lex);
void write_muse(const std::filesystem::path& path, const BilingualLexicon& lex);

std::span<const std::string> lookup(const BilingualLexicon& lex, std::string_view word);

struct CoverageStats {
    double token_coverage = 0; // percent
    double type_coverage = 0;  // percent
    std::uint64_t covered_types = 0;
    std::uint64_t total_types = 0;
    std::uint64_t covered_tokens = 0;
    std::uint64_t total_tokens = 0;
};

/// Token and type coverage of `lines` (lookup-tokenized) by the lexicon,
/// excluding stoplist words from numerator and denominator. Throws
/// ContractError when no countable token remains.
CoverageStats coverage_stats(const BilingualLexicon& lex, std::span<const std::string> lines,
                             const Stoplist& stoplist);

/// Removes whole, randomly chosen entries that cover corpus types until type
/// coverage is <= target_rate. Removal follows one seeded permutation, so for
/// a fixed seed a lower rate always yields a subset of a higher one.
BilingualLexicon downsample_to_type_coverage(const BilingualLexicon& lex, double target_rate,
                                             std::span<const std::string> lines, const Stoplist& stoplist,
                                             std::uint64_t seed);

/// Coverage grid 0, step, 2*step, ... below `full`, then `full` itself.
std::vector<double> coverage_sweep(double full, double step = 5.0);

/// False dictionary: translation lists rotated along a seeded random cycle
/// over the source words, so with two or more entries no word keeps its own list.
BilingualLexicon shuffle_targets(const BilingualLexicon& lex, std::uint64_t seed);

} // namespace dictprompt
