#pragma once

#include "dictprompt/prompting.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dictprompt {

enum class BleuSmoothing {
    none, // any zero precision gives 0
    exp,  // mteval "exp" smoothing for zero-match orders
};

struct BleuScore {
    double score = 0; // percent
    std::array<double, 4> precisions{}; // percent, after smoothing
    std::array<std::uint64_t, 4> matches{};
    std::array<std::uint64_t, 4> totals{};
    double brevity_penalty = 0;
    std::uint64_t hyp_len = 0;
    std::uint64_t ref_len = 0;
};

/// Corpus BLEU over 13a-tokenized text, single reference, n-grams up to 4.
BleuScore bleu_corpus(std::span<const std::string> hypotheses, std::span<const std::string> references,
                      BleuSmoothing smoothing = BleuSmoothing::none);

struct SentenceHits {
    std::size_t sentence = 0;
    std::vector<std::string> words; // hinted source words
    std::vector<bool> hit;          // parallel to words
    std::size_t hits = 0;
};

struct HitReport {
    std::uint64_t opportunities = 0;
    std::uint64_t hits = 0;
    std::optional<double> rate; // percent; absent without opportunities
    std::vector<SentenceHits> sentences;
};

/// Hint usage: a hinted word is hit once when any of its translations occurs
/// in the lookup-tokenized output as a contiguous token sequence.
HitReport hit_report(std::span<const HintSet> hints, std::span<const std::string> outputs);

struct ControlRow {
    std::string label;
    std::optional<double> baseline;
    std::optional<double> treated;
    std::optional<double> delta;
    std::uint64_t opportunities = 0;
};

/// Baseline, treated and delta usage for one strategy; both reports must share their hint sets.
ControlRow compare_controllability(const HitReport& baseline, const HitReport& treated, std::string label = {});

} // namespace dictprompt
