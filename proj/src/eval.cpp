#include "dictprompt/eval.hpp"

#include "dictprompt/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace dictprompt {
namespace {

using NgramCounts = std::map<std::vector<std::string_view>, std::uint64_t>;

NgramCounts count_ngrams(const std::vector<std::string>& tokens, std::size_t n)
{
    NgramCounts counts;
    if (tokens.size() < n)
        return counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i)
        ++counts[std::vector<std::string_view>(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                                               tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
    return counts;
}

} // namespace

BleuScore bleu_corpus(std::span<const std::string> hypotheses, std::span<const std::string> references,
                      BleuSmoothing smoothing)
{
    if (hypotheses.size() != references.size())
        throw ContractError("BLEU needs one reference per hypothesis: " + std::to_string(hypotheses.size()) +
                            " hypotheses, " + std::to_string(references.size()) + " references");
    if (hypotheses.empty())
        throw ContractError("BLEU needs at least one sentence pair");

    BleuScore out;
    for (std::size_t s = 0; s < hypotheses.size(); ++s) {
        const auto hyp = eval_tokenize(hypotheses[s]).tokens;
        const auto ref = eval_tokenize(references[s]).tokens;
        out.hyp_len += hyp.size();
        out.ref_len += ref.size();
        for (std::size_t n = 1; n <= 4; ++n) {
            const auto hyp_counts = count_ngrams(hyp, n);
            const auto ref_counts = count_ngrams(ref, n);
            for (const auto& [gram, count] : hyp_counts) {
                const auto it = ref_counts.find(gram);
                if (it != ref_counts.end())
                    out.matches[n - 1] += std::min(count, it->second);
            }
            if (hyp.size() >= n)
                out.totals[n - 1] += hyp.size() - n + 1;
        }
    }

    if (out.hyp_len == 0)
        out.brevity_penalty = 0;
    else if (out.hyp_len < out.ref_len)
        out.brevity_penalty = std::exp(1.0 - static_cast<double>(out.ref_len) / static_cast<double>(out.hyp_len));
    else
        out.brevity_penalty = 1.0;

    const bool no_matches = std::all_of(out.matches.begin(), out.matches.end(), [](auto m) { return m == 0; });
    if (no_matches)
        return out;

    bool any_zero = false;
    double smooth = 1.0;
    for (std::size_t n = 0; n < 4; ++n) {
        if (out.totals[n] == 0) {
            any_zero = true;
            break;
        }
        if (out.matches[n] == 0) {
            if (smoothing == BleuSmoothing::exp) {
                smooth *= 2;
                out.precisions[n] = 100.0 / (smooth * static_cast<double>(out.totals[n]));
            } else {
                any_zero = true;
            }
        } else {
            out.precisions[n] = 100.0 * static_cast<double>(out.matches[n]) / static_cast<double>(out.totals[n]);
        }
    }

    if (any_zero) {
        out.score = 0;
    } else if (out.matches == out.totals && out.brevity_penalty == 1.0) {
        // exp(log(100)) is not exactly 100 in binary floating point.
        out.score = 100.0;
    } else {
        double log_sum = 0;
        for (const double p : out.precisions)
            log_sum += std::log(p);
        out.score = out.brevity_penalty * std::exp(log_sum / 4.0);
    }
    return out;
}

HitReport hit_report(std::span<const HintSet> hints, std::span<const std::string> outputs)
{
    if (hints.size() != outputs.size())
        throw ContractError("hit report needs one output per hint set: " + std::to_string(hints.size()) +
                            " hint sets, " + std::to_string(outputs.size()) + " outputs");
    HitReport report;
    report.sentences.reserve(hints.size());
    for (std::size_t s = 0; s < hints.size(); ++s) {
        const auto tokens = lookup_tokenize(outputs[s]).tokens;
        SentenceHits detail;
        detail.sentence = s;
        for (const auto& item : hints[s].items) {
            bool hit = false;
            for (const auto& t : item.translations)
                hit = hit || phrase_occurs(t, tokens);
            detail.words.push_back(item.word);
            detail.hit.push_back(hit);
            detail.hits += hit ? 1 : 0;
        }
        report.opportunities += detail.words.size();
        report.hits += detail.hits;
        report.sentences.push_back(std::move(detail));
    }
    if (report.opportunities > 0)
        report.rate = 100.0 * static_cast<double>(report.hits) / static_cast<double>(report.opportunities);
    return report;
}

ControlRow compare_controllability(const HitReport& baseline, const HitReport& treated, std::string label)
{
    if (baseline.opportunities != treated.opportunities)
        throw ContractError("controllability reports use different hint sets: " +
                            std::to_string(baseline.opportunities) + " vs " +
                            std::to_string(treated.opportunities) + " opportunities");
    if (baseline.sentences.size() != treated.sentences.size())
        throw ContractError("controllability reports cover different numbers of sentences");
    for (std::size_t s = 0; s < baseline.sentences.size(); ++s)
        if (baseline.sentences[s].words != treated.sentences[s].words)
            throw ContractError("controllability reports differ in hinted words at sentence " + std::to_string(s));

    ControlRow row;
    row.label = std::move(label);
    row.baseline = baseline.rate;
    row.treated = treated.rate;
    row.opportunities = treated.opportunities;
    if (baseline.rate && treated.rate)
        row.delta = *treated.rate - *baseline.rate;
    return row;
}

} // namespace dictprompt
