#include "dictprompt/induction.hpp"

#include "dictprompt/error.hpp"
#include "dictprompt/format.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

namespace dictprompt {
namespace {

using WordId = std::uint32_t;

class Vocabulary {
public:
    WordId intern(const std::string& word)
    {
        const auto [it, inserted] = ids_.try_emplace(word, static_cast<WordId>(ids_.size()));
        return it->second;
    }
    std::size_t size() const noexcept { return ids_.size(); }

private:
    std::unordered_map<std::string, WordId> ids_;
};

std::uint64_t pair_key(WordId source, WordId target)
{
    return (static_cast<std::uint64_t>(source) << 32) | target;
}

} // namespace

AlignmentLinks align_model1(const ParallelCorpus& corpus, int iterations)
{
    if (corpus.empty())
        throw ContractError("cannot align an empty corpus");
    if (iterations < 1)
        throw ContractError("EM needs at least one iteration");

    Vocabulary source_vocab;
    Vocabulary target_vocab;
    std::vector<std::vector<WordId>> src(corpus.size());
    std::vector<std::vector<WordId>> tgt(corpus.size());
    for (std::size_t n = 0; n < corpus.size(); ++n) {
        for (const auto& w : lookup_tokenize(corpus.pairs[n].source).tokens)
            src[n].push_back(source_vocab.intern(w));
        for (const auto& w : lookup_tokenize(corpus.pairs[n].target).tokens)
            tgt[n].push_back(target_vocab.intern(w));
    }

    // t(s | t), only for co-occurring pairs; uniform start.
    std::unordered_map<std::uint64_t, double> prob;
    const double uniform = 1.0 / static_cast<double>(std::max<std::size_t>(source_vocab.size(), 1));
    for (std::size_t n = 0; n < corpus.size(); ++n)
        for (const auto s : src[n])
            for (const auto t : tgt[n])
                prob.try_emplace(pair_key(s, t), uniform);

    std::unordered_map<std::uint64_t, double> counts;
    std::vector<double> target_totals(target_vocab.size());
    std::vector<double> row;
    for (int iter = 0; iter < iterations; ++iter) {
        for (auto& [_, c] : counts)
            c = 0;
        std::fill(target_totals.begin(), target_totals.end(), 0.0);

        for (std::size_t n = 0; n < corpus.size(); ++n) {
            if (src[n].empty() || tgt[n].empty())
                continue;
            row.resize(tgt[n].size());
            for (const auto s : src[n]) {
                double norm = 0;
                for (std::size_t j = 0; j < tgt[n].size(); ++j) {
                    row[j] = prob[pair_key(s, tgt[n][j])];
                    norm += row[j];
                }
                for (std::size_t j = 0; j < tgt[n].size(); ++j) {
                    const double posterior = row[j] / norm;
                    counts[pair_key(s, tgt[n][j])] += posterior;
                    target_totals[tgt[n][j]] += posterior;
                }
            }
        }
        for (auto& [key, p] : prob)
            p = counts[key] / target_totals[static_cast<WordId>(key & 0xffffffffu)];
    }

    AlignmentLinks out;
    out.pairs.resize(corpus.size());
    for (std::size_t n = 0; n < corpus.size(); ++n) {
        if (src[n].empty() || tgt[n].empty())
            continue;
        for (std::size_t i = 0; i < src[n].size(); ++i) {
            std::size_t best = 0;
            double best_p = -1;
            for (std::size_t j = 0; j < tgt[n].size(); ++j) {
                const double p = prob[pair_key(src[n][i], tgt[n][j])];
                if (p > best_p) {
                    best_p = p;
                    best = j;
                }
            }
            out.pairs[n].push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(best)});
        }
    }
    return out;
}

void validate_induction_params(double lambda, double delta)
{
    if (!(lambda > 0 && lambda <= 1))
        throw ContractError("lambda must be in (0, 1], got " + format_double(lambda));
    if (!(delta >= 0))
        throw ContractError("delta must be >= 0, got " + format_double(delta));
}

InducedLexicon induce_lexicon(const ParallelCorpus& corpus, const AlignmentLinks& links, double lambda,
                              double delta)
{
    validate_induction_params(lambda, delta);
    if (links.size() != corpus.size())
        throw ContractError("alignment has " + std::to_string(links.size()) + " pairs, corpus has " +
                            std::to_string(corpus.size()));

    std::map<std::string, std::uint64_t, std::less<>> source_counts;
    std::map<std::string, std::map<std::string, std::uint64_t>, std::less<>> aligned;
    for (std::size_t n = 0; n < corpus.size(); ++n) {
        const auto src = lookup_tokenize(corpus.pairs[n].source).tokens;
        const auto tgt = lookup_tokenize(corpus.pairs[n].target).tokens;
        for (const auto& w : src)
            ++source_counts[w];
        for (const auto& l : links.pairs[n]) {
            if (l.source >= src.size() || l.target >= tgt.size())
                throw ContractError("link " + std::to_string(l.source) + "-" + std::to_string(l.target) +
                                    " out of bounds in pair " + std::to_string(n));
            ++aligned[src[l.source]][tgt[l.target]];
        }
    }

    InducedLexicon out;
    out.lexicon = BilingualLexicon(corpus.source_lang, corpus.target_lang, Provenance::induced);
    for (const auto& [source, targets] : aligned) {
        const auto source_count = source_counts[source];
        std::vector<InducedEntry> kept;
        for (const auto& [target, count] : targets) {
            const double p = static_cast<double>(count) / (static_cast<double>(source_count) + delta);
            if (p >= lambda)
                kept.push_back({source, target, p, count, source_count});
        }
        // targets iterate lexicographically, so a stable sort keeps that as the tie-break.
        std::stable_sort(kept.begin(), kept.end(),
                         [](const InducedEntry& a, const InducedEntry& b) { return a.probability > b.probability; });
        for (auto& e : kept) {
            out.lexicon.add(e.source, e.target);
            out.entries.push_back(std::move(e));
        }
    }
    return out;
}

std::string format_induced_tsv(const std::vector<InducedEntry>& entries)
{
    std::string out;
    for (const auto& e : entries) {
        out += e.source;
        out += '\t';
        out += e.target;
        out += '\t';
        out += format_double(e.probability);
        out += '\t';
        out += std::to_string(e.aligned_count);
        out += '\t';
        out += std::to_string(e.source_count);
        out += '\n';
    }
    return out;
}

void write_induced_tsv(const std::filesystem::path& path, const std::vector<InducedEntry>& entries)
{
    write_file(path, format_induced_tsv(entries));
}

} // namespace dictprompt
