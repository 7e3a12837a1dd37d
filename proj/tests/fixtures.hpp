#pragma once

// A synthetic translation task: word-for-word "sentences" over a seeded
// vocabulary, references built from each word's first translation, and a
// lexicon that knows roughly 40% of the content words.

#include "dictprompt/rng.hpp"
#include "dictprompt/text.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace fixture {

struct SyntheticTask {
    std::filesystem::path test_src;
    std::filesystem::path test_tgt;
    std::filesystem::path dev_src;
    std::filesystem::path dev_tgt;
    std::filesystem::path lexicon;
};

inline SyntheticTask write_synthetic_task(const std::filesystem::path& dir, std::size_t test_size = 100,
                                          std::size_t dev_size = 20, std::size_t vocab = 300,
                                          std::uint64_t seed = 11)
{
    using dictprompt::Rng;
    Rng rng(seed);
    const std::vector<std::string> function_words{"yang", "dan", "di", "ke", "ini"};
    const std::vector<std::string> function_english{"which", "and", "at", "to", "this"};

    auto source_word = [](std::size_t i) { return "kata" + std::to_string(i); };
    auto english = [](std::size_t i, std::size_t sense) {
        return "word" + std::to_string(i) + (sense ? "v" + std::to_string(sense) : "");
    };

    auto make_lines = [&](std::size_t count, std::vector<std::string>& src, std::vector<std::string>& tgt) {
        for (std::size_t n = 0; n < count; ++n) {
            std::string s;
            std::string t;
            const auto len = 4 + rng.below(9);
            for (std::size_t k = 0; k < len; ++k) {
                if (k)
                    s += ' ', t += ' ';
                if (rng.below(4) == 0) {
                    const auto f = rng.below(function_words.size());
                    s += function_words[f];
                    t += function_english[f];
                } else {
                    // Skewed draw so that a few words are frequent.
                    const auto i = rng.below(1 + rng.below(vocab));
                    s += source_word(i);
                    t += english(i, 0);
                }
            }
            src.push_back(s + ".");
            tgt.push_back(t + ".");
        }
    };

    std::vector<std::string> test_src;
    std::vector<std::string> test_tgt;
    std::vector<std::string> dev_src;
    std::vector<std::string> dev_tgt;
    make_lines(test_size, test_src, test_tgt);
    make_lines(dev_size, dev_src, dev_tgt);

    std::vector<std::string> lexicon;
    for (std::size_t f = 0; f < function_words.size(); ++f)
        lexicon.push_back(function_words[f] + " " + function_english[f]);
    for (std::size_t i = 0; i < vocab; ++i) {
        if (rng.below(5) >= 2)
            continue;
        const auto senses = 1 + rng.below(5);
        for (std::size_t sense = 0; sense < senses; ++sense)
            lexicon.push_back(source_word(i) + " " + english(i, sense));
    }

    std::filesystem::create_directories(dir);
    SyntheticTask task{dir / "test.src", dir / "test.tgt", dir / "dev.src", dir / "dev.tgt", dir / "lexicon.txt"};
    dictprompt::write_lines(task.test_src, test_src);
    dictprompt::write_lines(task.test_tgt, test_tgt);
    dictprompt::write_lines(task.dev_src, dev_src);
    dictprompt::write_lines(task.dev_tgt, dev_tgt);
    dictprompt::write_lines(task.lexicon, lexicon);
    return task;
}

} // namespace fixture
