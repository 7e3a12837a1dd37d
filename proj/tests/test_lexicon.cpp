#include "dictprompt/error.hpp"
#include "dictprompt/lexicon.hpp"
#include "dictprompt/rng.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace dictprompt;
using Words = std::vector<std::string>;

namespace {

Words list(std::span<const std::string> s)
{
    return {s.begin(), s.end()};
}

BilingualLexicon sample_dictionary()
{
    return parse_muse("bel buzzer\nbel bell\npintu door\npintu doors\nmembatasi limiting\nmembatasi restrict\n"
                      "membatasi limit\nsambil while\n");
}

} // namespace

TEST_CASE("MUSE parsing")
{
    const auto lex = parse_muse("pintu door\npintu doors\n");
    CHECK(list(lex.lookup("pintu")) == Words{"door", "doors"});
    CHECK(parse_muse("").empty());
    const auto dup = parse_muse("bel bell\nbel bell\n");
    CHECK(dup.pair_count() == 1);
    CHECK(parse_muse("Pintu\tDoor\r\n").lookup("pintu").front() == "door");

    try {
        parse_muse("pintu door\nrusak\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(parse_muse("a b c\n"), ParseError);
    CHECK(format_muse(lex) == "pintu door\npintu doors\n");
    CHECK(parse_muse(format_muse(sample_dictionary())) == sample_dictionary());
}

TEST_CASE("lookup")
{
    const auto lex = sample_dictionary();
    CHECK(list(lookup(lex, "membatasi")) == Words{"limiting", "restrict", "limit"});
    CHECK(lookup(lex, "tidak").empty());
    CHECK(list(lookup(lex, "sambil")) == Words{"while"});
}

TEST_CASE("lexicon invariants")
{
    BilingualLexicon lex;
    CHECK(lex.add("a", "x"));
    CHECK_FALSE(lex.add("a", "x"));
    CHECK_THROWS_AS(lex.add("", "x"), ContractError);
    CHECK_THROWS_AS(lex.add("a b", "x"), ContractError);
    CHECK_THROWS_AS(lex.set("a", {}), ContractError);
    CHECK(lex.erase("a"));
    CHECK(lex.empty());
}

TEST_CASE("coverage")
{
    const auto a_only = parse_muse("a x\n");
    const std::vector<std::string> corpus{"a b a"};
    const auto s = coverage_stats(a_only, corpus, {});
    CHECK(s.covered_tokens == 2);
    CHECK(s.total_tokens == 3);
    CHECK(s.token_coverage == doctest::Approx(66.6667).epsilon(1e-5));
    CHECK(s.type_coverage == doctest::Approx(50.0));

    const auto full = parse_muse("a x\nb y\n");
    CHECK(coverage_stats(full, corpus, {}).token_coverage == 100.0);
    CHECK(coverage_stats(full, corpus, {}).type_coverage == 100.0);

    // Stoplist words leave both sides of the ratio.
    CHECK(coverage_stats(a_only, corpus, Stoplist{"b"}).type_coverage == 100.0);
    CHECK_THROWS_AS(coverage_stats(a_only, std::vector<std::string>{}, {}), ContractError);
    CHECK_THROWS_AS(coverage_stats(a_only, corpus, Stoplist{"a", "b"}), ContractError);
}

TEST_CASE("coverage counts match a recount")
{
    Rng rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const auto corpus = oracle::random_corpus(rng, 10, 12);
        const auto lines = corpus.source_lines();
        BilingualLexicon lex;
        for (int e = 0; e < 6; ++e)
            lex.add(oracle::word('s', rng.below(12)), "x");
        std::uint64_t tokens = 0;
        std::uint64_t covered = 0;
        std::set<std::string> types;
        std::set<std::string> covered_types;
        for (const auto& line : lines)
            for (const auto& w : oracle::words_of(line)) {
                ++tokens;
                types.insert(w);
                if (lex.contains(w)) {
                    ++covered;
                    covered_types.insert(w);
                }
            }
        if (tokens == 0)
            continue;
        const auto s = coverage_stats(lex, lines, {});
        CHECK(s.total_tokens == tokens);
        CHECK(s.covered_tokens == covered);
        CHECK(s.total_types == types.size());
        CHECK(s.covered_types == covered_types.size());
        CHECK(s.covered_tokens <= s.total_tokens);
        CHECK(s.covered_types <= s.total_types);
    }
}

TEST_CASE("downsampling")
{
    // 10 corpus types, 6 covered, plus two entries that cover nothing.
    const std::vector<std::string> corpus{"w0 w1 w2 w3 w4 w5 w6 w7 w8 w9"};
    BilingualLexicon lex;
    for (int i = 0; i < 6; ++i)
        lex.add("w" + std::to_string(i), "t" + std::to_string(i));
    lex.add("zz", "t");
    lex.add("yy", "t");
    CHECK(coverage_stats(lex, corpus, {}).type_coverage == 60.0);

    const auto at30 = downsample_to_type_coverage(lex, 30, corpus, {}, 7);
    CHECK(coverage_stats(at30, corpus, {}).covered_types == 3);
    CHECK(at30.contains("zz"));
    CHECK(at30.provenance() == Provenance::downsampled);
    CHECK(downsample_to_type_coverage(lex, 30, corpus, {}, 7) == at30);

    const auto at0 = downsample_to_type_coverage(lex, 0, corpus, {}, 7);
    CHECK(coverage_stats(at0, corpus, {}).covered_types == 0);
    CHECK(downsample_to_type_coverage(lex, 60, corpus, {}, 7) == lex);

    try {
        downsample_to_type_coverage(lex, 75, corpus, {}, 7);
        FAIL("expected an error");
    } catch (const ContractError& e) {
        CHECK(std::string(e.what()).find("75") != std::string::npos);
        CHECK(std::string(e.what()).find("60") != std::string::npos);
    }
    CHECK_THROWS_AS(downsample_to_type_coverage(lex, -1, corpus, {}, 7), ContractError);

    // 35% cannot be met exactly; coverage ends at or below the target.
    CHECK(coverage_stats(downsample_to_type_coverage(lex, 35, corpus, {}, 7), corpus, {}).covered_types == 3);
}

TEST_CASE("downsampling is nested across rates")
{
    std::string line;
    BilingualLexicon lex;
    for (int i = 0; i < 200; ++i) {
        line += "v" + std::to_string(i) + " ";
        if (i % 3 != 0)
            lex.add("v" + std::to_string(i), "t");
    }
    const std::vector<std::string> corpus{line};
    const auto full = coverage_stats(lex, corpus, {}).type_coverage;
    const auto rates = coverage_sweep(full);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        BilingualLexicon previous;
        for (double rate : rates) {
            const auto d = downsample_to_type_coverage(lex, rate, corpus, {}, seed);
            const auto got = coverage_stats(d, corpus, {}).type_coverage;
            CHECK(got <= rate + 1e-9);
            CHECK(rate - got < 1.0);
            for (const auto& [w, _] : previous.entries())
                CHECK(d.contains(w));
            previous = d;
        }
    }
}

TEST_CASE("coverage sweep grid")
{
    CHECK(coverage_sweep(33) == std::vector<double>{0, 5, 10, 15, 20, 25, 30, 33});
    CHECK(coverage_sweep(35) == std::vector<double>{0, 5, 10, 15, 20, 25, 30, 35});
    CHECK(coverage_sweep(0) == std::vector<double>{0});
    CHECK(coverage_sweep(12, 4) == std::vector<double>{0, 4, 8, 12});
}

TEST_CASE("false dictionary")
{
    const auto one = parse_muse("a x\n");
    CHECK(shuffle_targets(one, 3) == one);
    CHECK_THROWS_AS(shuffle_targets(BilingualLexicon{}, 3), ContractError);

    const auto two = parse_muse("a x\nb y\n");
    const auto swapped = shuffle_targets(two, 3);
    CHECK(list(swapped.lookup("a")) == Words{"y"});
    CHECK(list(swapped.lookup("b")) == Words{"x"});
    CHECK(swapped.provenance() == Provenance::shuffled);

    BilingualLexicon big;
    for (int i = 0; i < 100; ++i)
        for (int k = 0; k <= i % 3; ++k)
            big.add("s" + std::to_string(i), "t" + std::to_string(i) + "_" + std::to_string(k));
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto shuffled = shuffle_targets(big, seed);
        std::vector<std::vector<std::string>> before;
        std::vector<std::vector<std::string>> after;
        for (const auto& [w, t] : big.entries()) {
            before.push_back(t);
            REQUIRE(shuffled.contains(w));
            after.push_back(list(shuffled.lookup(w)));
            CHECK(after.back() != t);
        }
        CHECK(shuffled.size() == big.size());
        std::sort(before.begin(), before.end());
        std::sort(after.begin(), after.end());
        CHECK(before == after);
        CHECK(shuffle_targets(big, seed) == shuffled);
    }
}
