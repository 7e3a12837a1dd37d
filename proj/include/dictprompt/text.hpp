#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dictprompt {

struct TokenizedSentence {
    std::vector<std::string> tokens;
    std::string raw;
};

/// Tokenizer used for dictionary lookup, stoplists and hint matching: splits on
/// Unicode whitespace, strips leading/trailing punctuation, lowercases and
/// drops tokens that end up empty.
TokenizedSentence lookup_tokenize(std::string_view line);

/// Lookup normalization of a single word; empty when nothing survives.
std::string lookup_normalize(std::string_view word);

/// mteval-v13a tokenization as used for BLEU scoring. Case preserving.
TokenizedSentence eval_tokenize(std::string_view line);

class FrequencyTable {
public:
    using Counts = std::map<std::string, std::uint64_t, std::less<>>;

    void add(std::string_view word, std::uint64_t n = 1);
    std::uint64_t count(std::string_view word) const;
    std::uint64_t total() const noexcept { return total_; }
    std::size_t vocabulary_size() const noexcept { return counts_.size(); }
    const Counts& counts() const noexcept { return counts_; }

private:
    Counts counts_;
    std::uint64_t total_ = 0;
};

FrequencyTable build_frequency_table(std::span<const std::string> lines);

/// The k most frequent words; ties broken by byte-lexicographic order.
std::vector<std::string> top_k_words(const FrequencyTable& table, std::size_t k);

struct SentencePair {
    std::string source;
    std::string target;
};

struct ParallelCorpus {
    std::vector<SentencePair> pairs;
    std::string source_lang;
    std::string target_lang;

    std::size_t size() const noexcept { return pairs.size(); }
    bool empty() const noexcept { return pairs.empty(); }
    std::vector<std::string> source_lines() const;
    std::vector<std::string> target_lines() const;
};

enum class RatioMode {
    symmetric,          // max(len_s, len_t) / min(len_s, len_t)
    source_over_target, // len_s / len_t
};

/// Length filters for training data; lengths count lookup tokens.
struct CorpusFilter {
    std::optional<std::size_t> max_len;
    std::optional<double> max_ratio;
    RatioMode ratio_mode = RatioMode::symmetric;
    bool drop_empty = true;

    /// Sentences over 250 tokens and pairs with ratio above 1.5 are dropped.
    static CorpusFilter training() { return {250, 1.5, RatioMode::symmetric, true}; }
    static CorpusFilter none() { return {std::nullopt, std::nullopt, RatioMode::symmetric, false}; }

    bool accepts(std::size_t source_len, std::size_t target_len) const;
};

/// Indices of the pairs that pass `filter`, in corpus order.
std::vector<std::size_t> filter_indices(const ParallelCorpus& corpus, const CorpusFilter& filter);
ParallelCorpus select_pairs(const ParallelCorpus& corpus, std::span<const std::size_t> indices);

/// Reads a UTF-8 file as lines; strips a BOM and trailing CR.
std::vector<std::string> read_lines(const std::filesystem::path& path);
void write_lines(const std::filesystem::path& path, std::span<const std::string> lines);
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

/// Two line-aligned files, unfiltered. Throws ParseError on a line-count mismatch.
ParallelCorpus read_parallel(const std::filesystem::path& source, const std::filesystem::path& target);
/// One file, "source<TAB>target" per line, unfiltered.
ParallelCorpus read_parallel_tsv(const std::filesystem::path& path);

ParallelCorpus load_parallel(const std::filesystem::path& source, const std::filesystem::path& target,
                             const CorpusFilter& filter = CorpusFilter::training());

struct Link {
    std::uint32_t source = 0;
    std::uint32_t target = 0;

    auto operator<=>(const Link&) const = default;
};

/// Sorted, duplicate-free link set of one sentence pair.
using LinkSet = std::vector<Link>;

struct AlignmentLinks {
    std::vector<LinkSet> pairs;

    std::size_t size() const noexcept { return pairs.size(); }
};

/// Parses one Pharaoh line ("0-0 1-2 ..."). `line_no` is only used in errors.
LinkSet parse_pharaoh(std::string_view line, std::size_t line_no = 0);
std::string format_pharaoh(const LinkSet& links);

/// Parses and bounds-checks alignment lines against the lookup-tokenized corpus.
AlignmentLinks parse_alignments(std::span<const std::string> lines, const ParallelCorpus& corpus);
AlignmentLinks load_alignments(const std::filesystem::path& path, const ParallelCorpus& corpus);
void write_alignments(const std::filesystem::path& path, const AlignmentLinks& links);
AlignmentLinks select_links(const AlignmentLinks& links, std::span<const std::size_t> indices);

} // namespace dictprompt
