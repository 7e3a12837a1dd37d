#pragma once

#include "dictprompt/lexicon.hpp"
#include "dictprompt/text.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace dictprompt {

/// Threshold on p(s, t) for keeping a candidate translation.
constexpr double default_lambda() { return 0.1; }
/// Additive smoothing on the source occurrence count.
constexpr double default_delta() { return 1.0; }
constexpr int default_em_iterations() { return 5; }

/// IBM Model 1 EM (uniform initialization, no NULL word) over lookup-tokenized
/// pairs, estimating t(source | target). Every source token is then linked to
/// its most probable target token, the lowest index winning ties. Pairs with an
/// empty side get no links. Deterministic: a fixed accumulation order is used.
AlignmentLinks align_model1(const ParallelCorpus& corpus, int iterations = default_em_iterations());

struct InducedEntry {
    std::string source;
    std::string target;
    double probability = 0;
    std::uint64_t aligned_count = 0;
    std::uint64_t source_count = 0;
};

struct InducedLexicon {
    BilingualLexicon lexicon;
    /// Kept pairs, grouped by source word, each group in lexicon order.
    std::vector<InducedEntry> entries;
};

/// Throws ContractError unless lambda is in (0, 1] and delta >= 0.
void validate_induction_params(double lambda, double delta);

/// Smoothed matched ratio p(s,t) = aligned(s,t) / (count(s) + delta), counted
/// over token occurrences. Keeps every t with p >= lambda, ordered by
/// descending p then lexicographically.
InducedLexicon induce_lexicon(const ParallelCorpus& corpus, const AlignmentLinks& links,
                              double lambda = default_lambda(), double delta = default_delta());

/// Sidecar TSV: source, target, p, aligned_count, source_count.
std::string format_induced_tsv(const std::vector<InducedEntry>& entries);
void write_induced_tsv(const std::filesystem::path& path, const std::vector<InducedEntry>& entries);

} // namespace dictprompt
