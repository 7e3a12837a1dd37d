#include "dictprompt/error.hpp"
#include "dictprompt/records.hpp"
#include "tmpdir.hpp"

#include <doctest.h>

#include <algorithm>

using namespace dictprompt;

TEST_CASE("prompt records round-trip through JSONL")
{
    test::TempDir dir;
    PromptRecord a;
    a.id = 0;
    a.prompt = "Translate the following sentence to English: \"x\"\nThe full translation to English is:";
    a.source = "\"x\"";
    a.reference = "x";
    a.hints = {{"x", {"y", "z"}}};
    PromptRecord b;
    b.id = 1;
    b.prompt = "p";
    b.source = "é";
    const std::vector<PromptRecord> records{a, b};
    write_prompts(dir / "p.jsonl", records);
    const auto text = read_file(dir / "p.jsonl");
    CHECK(text.starts_with("{\"id\":0,\"prompt\":"));
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);

    const auto back = read_prompts(dir / "p.jsonl");
    REQUIRE(back.size() == 2);
    CHECK(back[0].prompt == a.prompt);
    CHECK(back[0].reference == a.reference);
    CHECK(back[0].hints == a.hints);
    CHECK_FALSE(back[1].reference.has_value());
    CHECK(format_jsonl(back) == text);
}

TEST_CASE("result records round-trip and report bad lines")
{
    test::TempDir dir;
    ResultRecord r;
    r.id = 3;
    r.source = "s";
    r.raw = " h\nmore";
    r.hypothesis = "h";
    r.error = "HTTP 500";
    write_results(dir / "r.jsonl", std::vector<ResultRecord>{r});
    const auto back = read_results(dir / "r.jsonl");
    REQUIRE(back.size() == 1);
    CHECK(back[0].error == "HTTP 500");
    CHECK(back[0].raw == r.raw);
    CHECK(to_hint_set(back[0].hints).empty());

    write_file(dir / "bad.jsonl", "{\"id\":0,\"source\":\"s\",\"hypothesis\":\"\",\"raw\":\"\",\"hints\":[]}\n{oops\n");
    try {
        read_results(dir / "bad.jsonl");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
}
