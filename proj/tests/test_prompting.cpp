#include "dictprompt/error.hpp"
#include "dictprompt/prompting.hpp"
#include "dictprompt/text.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>

using namespace dictprompt;
using Words = std::vector<std::string>;

namespace {

const std::filesystem::path data_dir = DICTPROMPT_TEST_DATA;

HintSet hints(std::vector<Hint> items, HintStrategy s = HintStrategy::full)
{
    return {std::move(items), s};
}

} // namespace

TEST_CASE("hint clause")
{
    CHECK(render_hint_clause(hints({{"sambil", {"while"}}, {"membatasi", {"limiting", "restrict", "limit"}}})) ==
          "In this context, the word \"sambil\" means \"while\"; the word \"membatasi\" means \"limiting\", "
          "\"restrict\", \"limit\".");
    CHECK(render_hint_clause({}).empty());
    CHECK(render_hint_clause(hints({{"bel", {"bell"}}})) == "In this context, the word \"bel\" means \"bell\".");
}

TEST_CASE("example blocks")
{
    CHECK(render_example("Halo dunia.", "English", {}) ==
          "Translate the following sentence to English: Halo dunia.\nThe full translation to English is:");
    CHECK(render_example("Halo.", "English", hints({{"halo", {"hello"}}}), std::string_view("Hello.")) ==
          "Translate the following sentence to English: Halo.\n"
          "In this context, the word \"halo\" means \"hello\".\n"
          "The full translation to English is: Hello.");
}

TEST_CASE("one-shot prompt matches the golden file byte for byte")
{
    const auto golden = read_file(data_dir / "one_shot_prompt.txt");
    const auto dir = data_dir / "one_shot";
    const auto lex = load_muse(dir / "lexicon.txt");
    Stoplist stoplist;
    for (const auto& w : read_lines(dir / "stoplist.txt"))
        stoplist.insert(w);
    const auto dev = read_parallel(dir / "dev.src", dir / "dev.tgt");
    const auto query = read_lines(dir / "test.src").at(0);

    const auto demos = select_demonstrations(dev, 1, 1, lex, stoplist, HintStrategy::full);
    const auto h = select_hints(query, lex, stoplist, HintStrategy::full, 1);
    const auto prompt = build_prompt(demos, query, "English", h);
    CHECK(prompt.text == golden);
    CHECK(prompt.stop == "\n");

    // Demo hints: stoplist words with entries (anda, dua, ke, ini) are skipped.
    REQUIRE(demos.size() == 1);
    CHECK(demos[0].hints.items.size() == 2);
    CHECK(demos[0].hints.items[1].translations == Words{"limiting", "restrict", "limit"});
}

TEST_CASE("full strategy samples at most three translations in stored order")
{
    const auto lex = parse_muse("kata a\nkata b\nkata c\nkata d\nkata e\n");
    std::set<Words> seen;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const auto h = select_hints("kata", lex, {}, HintStrategy::full, seed);
        REQUIRE(h.items.size() == 1);
        const auto& t = h.items[0].translations;
        CHECK(t.size() == 3);
        CHECK(std::is_sorted(t.begin(), t.end()));
        seen.insert(t);
        CHECK(select_hints("kata", lex, {}, HintStrategy::full, seed) == h);
    }
    CHECK(seen.size() == 10);
    CHECK(select_hints("kata", lex, {}, HintStrategy::full, 1, std::nullopt, 5).items[0].translations.size() == 5);
}

TEST_CASE("hint selection basics")
{
    const auto lex = parse_muse("pintu door\npintu doors\nbel bell\n");
    const auto h = select_hints("Pintu bel, pintu!", lex, {}, HintStrategy::full, 3);
    REQUIRE(h.items.size() == 2);
    CHECK(h.items[0].word == "pintu");
    CHECK(h.items[1].word == "bel");
    CHECK(select_hints("pintu bel", lex, Stoplist{"bel"}, HintStrategy::full, 3).items.size() == 1);
    CHECK(select_hints("pintu bel", lex, {}, HintStrategy::none, 3).empty());

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto r = select_hints("pintu bel", lex, {}, HintStrategy::random_single, seed);
        REQUIRE(r.items.size() == 2);
        for (const auto& item : r.items) {
            REQUIRE(item.translations.size() == 1);
            const auto entry = lex.lookup(item.word);
            CHECK(std::find(entry.begin(), entry.end(), item.translations[0]) != entry.end());
        }
    }
    CHECK_THROWS_AS(select_hints("pintu", lex, {}, HintStrategy::gold, 1), ContractError);
}

TEST_CASE("gold hints")
{
    const auto pintu = parse_muse("pintu door\npintu doors\n");
    CHECK(select_hints("pintu", pintu, {}, HintStrategy::gold, 1, std::string_view("The door and the doors.")).empty());
    const auto one = select_hints("pintu", pintu, {}, HintStrategy::gold, 1, std::string_view("Close the doors!"));
    REQUIRE(one.items.size() == 1);
    CHECK(one.items[0].translations == Words{"doors"});

    const auto binatang = parse_muse("binatang beast\nbinatang beasts\nbinatang animals\nbinatang animal\n");
    const std::string_view reference =
        "Travellers may encounter animal pests that they are not familiar with in their home regions.";
    const auto g = select_hints("binatang", binatang, {}, HintStrategy::gold, 1, reference);
    REQUIRE(g.items.size() == 1);
    CHECK(g.items[0].translations == Words{"animal"});

    // Multiword translations match as contiguous token runs.
    BilingualLexicon multi;
    multi.add("rs", "general hospital");
    multi.add("rs", "hospital");
    CHECK(select_hints("rs", multi, {}, HintStrategy::gold, 1, std::string_view("a hospital")).items.at(0).translations ==
          Words{"hospital"});
    CHECK(select_hints("rs", multi, {}, HintStrategy::gold, 1, std::string_view("the general hospital")).empty());
    CHECK(select_hints("rs", multi, {}, HintStrategy::gold, 1, std::string_view("general, and hospital")).items.at(0)
              .translations == Words{"hospital"});
}

TEST_CASE("gold hints agree with a brute-force check")
{
    Rng rng(4242);
    for (int trial = 0; trial < 300; ++trial) {
        const auto f = oracle::random_gold_fixture(rng);
        const auto h = select_hints(f.sentence, f.lexicon, f.stoplist, HintStrategy::gold, trial,
                                    std::string_view(f.reference));
        const auto ref_tokens = lookup_tokenize(f.reference).tokens;
        std::set<std::string> emitted;
        for (const auto& item : h.items) {
            emitted.insert(item.word);
            REQUIRE(item.translations.size() == 1);
            CHECK(phrase_occurs(item.translations[0], ref_tokens));
            CHECK(oracle::translations_present(f.lexicon, item.word, ref_tokens) == 1);
        }
        for (const auto& w : lookup_tokenize(f.sentence).tokens) {
            if (emitted.contains(w) || f.stoplist.contains(w) || !f.lexicon.contains(w))
                continue;
            CHECK(oracle::translations_present(f.lexicon, w, ref_tokens) != 1);
        }
    }
}

TEST_CASE("demonstrations")
{
    ParallelCorpus dev;
    for (int i = 0; i < 10; ++i)
        dev.pairs.push_back({"kalimat " + std::to_string(i), "sentence " + std::to_string(i)});
    const auto lex = parse_muse("kalimat sentence\n");

    CHECK(select_demonstrations(dev, 0, 1, lex, {}, HintStrategy::full).empty());
    const auto a = select_demonstrations(dev, 4, 9, lex, {}, HintStrategy::full);
    const auto b = select_demonstrations(dev, 4, 9, lex, {}, HintStrategy::full);
    REQUIRE(a.size() == 4);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].source == b[i].source);
        CHECK(a[i].hints == b[i].hints);
        CHECK_FALSE(a[i].reference.empty());
    }
    const auto all = select_demonstrations(dev, 10, 3, lex, {}, HintStrategy::full);
    for (std::size_t i = 0; i < all.size(); ++i)
        CHECK(all[i].source == dev.pairs[i].source);
    CHECK_THROWS_AS(select_demonstrations(dev, 11, 3, lex, {}, HintStrategy::full), ContractError);

    const auto gold = select_demonstrations(dev, 2, 3, lex, {}, HintStrategy::gold);
    for (const auto& d : gold)
        CHECK(d.hints.items.at(0).translations == Words{"sentence"});
}

TEST_CASE("prompt assembly")
{
    const auto zero = build_prompt({}, "Halo.", "English", {});
    CHECK(zero.text == "Translate the following sentence to English: Halo.\nThe full translation to English is:");

    std::vector<Demonstration> demos(4, Demonstration{"a", {}, "b"});
    const auto four = build_prompt(demos, "c", "English", {}, 7);
    std::size_t blocks = 1;
    for (std::size_t pos = 0; (pos = four.text.find("\n\n", pos)) != std::string::npos; pos += 2)
        ++blocks;
    CHECK(blocks == 5);
    CHECK(four.instance_id == 7);
    CHECK(four.text.ends_with("The full translation to English is:"));
}

TEST_CASE("rendered prompts parse back to their parts")
{
    Rng rng(1234);
    const std::vector<std::string> vocab{"rumah", "besar", "Kucing", "tidur,", "di", "atas", "meja.", "\"kata\"", "é"};
    const std::vector<std::string> targets{"house", "big", "cat", "sleep", "on top", "table", "word's", "rock'n'roll"};
    for (int trial = 0; trial < 200; ++trial) {
        auto sentence = [&] {
            std::string s;
            const auto n = 1 + rng.below(8);
            for (std::size_t i = 0; i < n; ++i)
                s += (i ? " " : "") + vocab[rng.below(vocab.size())];
            return s;
        };
        auto hint_set = [&] {
            HintSet h{{}, HintStrategy::full};
            const auto n = rng.below(4);
            for (std::size_t i = 0; i < n; ++i) {
                Hint item{"w" + std::to_string(i), {}};
                const auto k = 1 + rng.below(3);
                for (std::size_t j = 0; j < k; ++j)
                    item.translations.push_back(targets[rng.below(targets.size())]);
                h.items.push_back(item);
            }
            return h;
        };
        std::vector<Demonstration> demos;
        const auto k = rng.below(4);
        for (std::size_t i = 0; i < k; ++i)
            demos.push_back({sentence(), hint_set(), sentence()});
        const auto source = sentence();
        const auto h = hint_set();
        const auto prompt = build_prompt(demos, source, "English", h);
        const auto parsed = parse_prompt(prompt.text, "English");
        REQUIRE(parsed.size() == k + 1);
        for (std::size_t i = 0; i < k; ++i) {
            CHECK(parsed[i].source == demos[i].source);
            CHECK(parsed[i].hints == demos[i].hints.items);
            CHECK(parsed[i].reference == demos[i].reference);
        }
        CHECK(parsed[k].source == source);
        CHECK(parsed[k].hints == h.items);
        CHECK_FALSE(parsed[k].reference.has_value());
    }
    CHECK_THROWS_AS(parse_prompt("not a prompt", "English"), ParseError);
}

TEST_CASE("strategy names")
{
    for (auto s : {HintStrategy::full, HintStrategy::gold, HintStrategy::random_single, HintStrategy::false_dict,
                   HintStrategy::none})
        CHECK(parse_strategy(to_string(s)) == s);
    CHECK(parse_strategy("baseline") == HintStrategy::none);
    CHECK_THROWS_AS(parse_strategy("best"), ContractError);
}
