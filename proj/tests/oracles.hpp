#pragma once

// Independent reference implementations and fixture generators shared by the
// unit tests and the acceptance runner. They favour obviousness over speed.

#include "dictprompt/induction.hpp"
#include "dictprompt/lexicon.hpp"
#include "dictprompt/prompting.hpp"
#include "dictprompt/rng.hpp"
#include "dictprompt/text.hpp"

#include <algorithm>
#include <string>
#include <vector>

namespace oracle {

using namespace dictprompt;

inline std::string word(char prefix, std::uint64_t i)
{
    return std::string(1, prefix) + std::to_string(i);
}

inline std::vector<std::string> words_of(const std::string& line)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ' ') {
            if (!cur.empty())
                out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty())
        out.push_back(cur);
    return out;
}

/// Corpus of at most `max_pairs` pairs over words s0..s{vocab-1} and t0..t{vocab-1}.
inline ParallelCorpus random_corpus(Rng& rng, std::size_t max_pairs, std::size_t vocab, std::size_t max_len = 6)
{
    ParallelCorpus corpus;
    const auto n = 1 + rng.below(max_pairs);
    for (std::size_t i = 0; i < n; ++i) {
        SentencePair p;
        const auto ls = rng.below(max_len + 1);
        const auto lt = rng.below(max_len + 1);
        for (std::size_t k = 0; k < ls; ++k)
            p.source += (k ? " " : "") + word('s', rng.below(vocab));
        for (std::size_t k = 0; k < lt; ++k)
            p.target += (k ? " " : "") + word('t', rng.below(vocab));
        corpus.pairs.push_back(std::move(p));
    }
    return corpus;
}

/// Any subset of the source x target index grid, each link with probability 1/3.
inline AlignmentLinks random_links(Rng& rng, const ParallelCorpus& corpus)
{
    AlignmentLinks links;
    for (const auto& p : corpus.pairs) {
        const auto ls = words_of(p.source).size();
        const auto lt = words_of(p.target).size();
        LinkSet set;
        for (std::uint32_t i = 0; i < ls; ++i)
            for (std::uint32_t j = 0; j < lt; ++j)
                if (rng.below(3) == 0)
                    set.push_back({i, j});
        links.pairs.push_back(std::move(set));
    }
    return links;
}

/// Recounts every (source word, target word) pair from scratch by scanning the
/// whole corpus for each candidate.
inline std::vector<InducedEntry> induce(const ParallelCorpus& corpus, const AlignmentLinks& links, double lambda,
                                        double delta)
{
    std::vector<std::string> sources;
    std::vector<std::string> targets;
    for (const auto& p : corpus.pairs) {
        for (const auto& w : words_of(p.source))
            sources.push_back(w);
        for (const auto& w : words_of(p.target))
            targets.push_back(w);
    }
    std::sort(sources.begin(), sources.end());
    sources.erase(std::unique(sources.begin(), sources.end()), sources.end());
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());

    std::vector<InducedEntry> out;
    for (const auto& s : sources) {
        std::uint64_t occurrences = 0;
        for (const auto& p : corpus.pairs)
            for (const auto& w : words_of(p.source))
                occurrences += w == s ? 1 : 0;
        std::vector<InducedEntry> group;
        for (const auto& t : targets) {
            std::uint64_t count = 0;
            for (std::size_t n = 0; n < corpus.size(); ++n) {
                const auto src = words_of(corpus.pairs[n].source);
                const auto tgt = words_of(corpus.pairs[n].target);
                for (const auto& l : links.pairs[n])
                    count += src[l.source] == s && tgt[l.target] == t ? 1 : 0;
            }
            if (count == 0)
                continue;
            const double p = static_cast<double>(count) / (static_cast<double>(occurrences) + delta);
            if (p >= lambda)
                group.push_back({s, t, p, count, occurrences});
        }
        // Selection sort: highest p first, earliest (lexicographically smallest) on ties.
        for (std::size_t i = 0; i < group.size(); ++i) {
            std::size_t best = i;
            for (std::size_t j = i + 1; j < group.size(); ++j)
                if (group[j].probability > group[best].probability)
                    best = j;
            std::rotate(group.begin() + i, group.begin() + best, group.begin() + best + 1);
        }
        out.insert(out.end(), group.begin(), group.end());
    }
    return out;
}

inline bool same_entries(const std::vector<InducedEntry>& a, const std::vector<InducedEntry>& b)
{
    if (a.size() != b.size())
        return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i].source != b[i].source || a[i].target != b[i].target || a[i].probability != b[i].probability ||
            a[i].aligned_count != b[i].aligned_count || a[i].source_count != b[i].source_count)
            return false;
    return true;
}

/// Dense IBM Model 1 over whole-vocabulary tables, argmax links with the lowest index on ties.
inline AlignmentLinks model1(const ParallelCorpus& corpus, int iterations)
{
    std::vector<std::string> sv;
    std::vector<std::string> tv;
    std::vector<std::vector<std::size_t>> src;
    std::vector<std::vector<std::size_t>> tgt;
    auto id = [](std::vector<std::string>& v, const std::string& w) {
        const auto it = std::find(v.begin(), v.end(), w);
        if (it != v.end())
            return static_cast<std::size_t>(it - v.begin());
        v.push_back(w);
        return v.size() - 1;
    };
    for (const auto& p : corpus.pairs) {
        src.emplace_back();
        tgt.emplace_back();
        for (const auto& w : lookup_tokenize(p.source).tokens)
            src.back().push_back(id(sv, w));
        for (const auto& w : lookup_tokenize(p.target).tokens)
            tgt.back().push_back(id(tv, w));
    }
    std::vector<std::vector<double>> t(sv.size(), std::vector<double>(tv.size(), 1.0 / sv.size()));
    for (int it = 0; it < iterations; ++it) {
        std::vector<std::vector<double>> c(sv.size(), std::vector<double>(tv.size(), 0.0));
        std::vector<double> total(tv.size(), 0.0);
        for (std::size_t n = 0; n < src.size(); ++n) {
            if (src[n].empty() || tgt[n].empty())
                continue;
            for (const auto s : src[n]) {
                double z = 0;
                for (const auto j : tgt[n])
                    z += t[s][j];
                for (const auto j : tgt[n]) {
                    c[s][j] += t[s][j] / z;
                    total[j] += t[s][j] / z;
                }
            }
        }
        for (std::size_t s = 0; s < sv.size(); ++s)
            for (std::size_t j = 0; j < tv.size(); ++j)
                if (total[j] > 0)
                    t[s][j] = c[s][j] / total[j];
    }
    AlignmentLinks out;
    for (std::size_t n = 0; n < src.size(); ++n) {
        LinkSet set;
        if (!tgt[n].empty()) {
            for (std::uint32_t i = 0; i < src[n].size(); ++i) {
                std::uint32_t best = 0;
                for (std::uint32_t j = 1; j < tgt[n].size(); ++j)
                    if (t[src[n][i]][tgt[n][j]] > t[src[n][i]][tgt[n][best]])
                        best = j;
                set.push_back({i, best});
            }
        }
        out.pairs.push_back(std::move(set));
    }
    return out;
}

/// Distinct translations of `word` present in `reference_tokens`, by naive window comparison.
inline std::size_t translations_present(const BilingualLexicon& lex, const std::string& word,
                                        const std::vector<std::string>& reference_tokens)
{
    std::size_t present = 0;
    for (const auto& translation : lex.lookup(word)) {
        const auto needle = lookup_tokenize(translation).tokens;
        bool found = false;
        for (std::size_t i = 0; !needle.empty() && i + needle.size() <= reference_tokens.size() && !found; ++i) {
            bool all = true;
            for (std::size_t k = 0; k < needle.size() && all; ++k)
                all = reference_tokens[i + k] == needle[k];
            found = all;
        }
        present += found ? 1 : 0;
    }
    return present;
}

/// Gold fixture: a small lexicon, a sentence over its words plus fillers, and a
/// reference that mentions zero, one or several translations of each word.
struct GoldFixture {
    BilingualLexicon lexicon;
    Stoplist stoplist;
    std::string sentence;
    std::string reference;
};

inline GoldFixture random_gold_fixture(Rng& rng)
{
    GoldFixture f;
    const auto entries = 1 + rng.below(8);
    for (std::size_t e = 0; e < entries; ++e) {
        const auto n = 1 + rng.below(4);
        for (std::size_t k = 0; k < n; ++k) {
            // Some translations are two-word phrases to exercise sequence matching.
            auto target = word('t', rng.below(12));
            if (rng.below(4) == 0)
                target += " " + word('t', rng.below(12));
            f.lexicon.add(word('w', e), target);
        }
    }
    if (rng.below(3) == 0)
        f.stoplist.insert(word('w', rng.below(entries)));
    const auto len = 1 + rng.below(10);
    for (std::size_t i = 0; i < len; ++i) {
        const bool known = rng.below(3) != 0;
        f.sentence += (i ? " " : "") + (known ? word('w', rng.below(entries + 2)) : word('f', rng.below(5)));
    }
    const auto ref_len = rng.below(14);
    for (std::size_t i = 0; i < ref_len; ++i)
        f.reference += (i ? " " : "") + word('t', rng.below(12));
    return f;
}

} // namespace oracle
