#include "dictprompt/records.hpp"

#include "dictprompt/error.hpp"
#include "dictprompt/text.hpp"

namespace dictprompt {
namespace {

template <class Record, class Parse>
std::vector<Record> read_jsonl(const std::filesystem::path& path, Parse parse)
{
    std::vector<Record> out;
    const auto lines = read_lines(path);
    for (std::size_t n = 0; n < lines.size(); ++n) {
        if (lines[n].empty())
            continue;
        try {
            out.push_back(parse(nlohmann::json::parse(lines[n])));
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(path.string() + ": " + e.what(), n + 1);
        }
    }
    return out;
}

template <class Record>
std::string join_jsonl(std::span<const Record> records)
{
    std::string out;
    for (const auto& r : records) {
        out += dump_line(to_json(r));
        out += '\n';
    }
    return out;
}

std::vector<Hint> hints_from_json(const nlohmann::json& j)
{
    std::vector<Hint> out;
    if (j.contains("hints"))
        for (const auto& h : j.at("hints"))
            out.push_back(hint_from_json(h));
    return out;
}

nlohmann::ordered_json hints_to_json(const std::vector<Hint>& hints)
{
    auto arr = nlohmann::ordered_json::array();
    for (const auto& h : hints)
        arr.push_back(to_json(h));
    return arr;
}

} // namespace

nlohmann::ordered_json to_json(const Hint& hint)
{
    return {{"word", hint.word}, {"translations", hint.translations}};
}

Hint hint_from_json(const nlohmann::json& j)
{
    return {j.at("word").get<std::string>(), j.at("translations").get<std::vector<std::string>>()};
}

nlohmann::ordered_json to_json(const PromptRecord& r)
{
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["prompt"] = r.prompt;
    j["stop"] = r.stop;
    j["source"] = r.source;
    if (r.reference)
        j["reference"] = *r.reference;
    j["hints"] = hints_to_json(r.hints);
    return j;
}

nlohmann::ordered_json to_json(const ResultRecord& r)
{
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["source"] = r.source;
    j["hypothesis"] = r.hypothesis;
    j["raw"] = r.raw;
    if (r.reference)
        j["reference"] = *r.reference;
    j["hints"] = hints_to_json(r.hints);
    if (r.error)
        j["error"] = *r.error;
    return j;
}

PromptRecord prompt_record_from_json(const nlohmann::json& j)
{
    PromptRecord r;
    r.id = j.at("id").get<std::size_t>();
    r.prompt = j.at("prompt").get<std::string>();
    r.stop = j.value("stop", std::string("\n"));
    r.source = j.at("source").get<std::string>();
    if (j.contains("reference") && !j.at("reference").is_null())
        r.reference = j.at("reference").get<std::string>();
    r.hints = hints_from_json(j);
    return r;
}

ResultRecord result_record_from_json(const nlohmann::json& j)
{
    ResultRecord r;
    r.id = j.at("id").get<std::size_t>();
    r.source = j.value("source", std::string());
    r.hypothesis = j.at("hypothesis").get<std::string>();
    r.raw = j.value("raw", std::string());
    if (j.contains("reference") && !j.at("reference").is_null())
        r.reference = j.at("reference").get<std::string>();
    r.hints = hints_from_json(j);
    if (j.contains("error") && !j.at("error").is_null())
        r.error = j.at("error").get<std::string>();
    return r;
}

std::string dump_line(const nlohmann::ordered_json& j)
{
    return j.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);
}

std::string dump_pretty(const nlohmann::ordered_json& j)
{
    return j.dump(2, ' ', false, nlohmann::json::error_handler_t::replace) + "\n";
}

std::string format_jsonl(std::span<const PromptRecord> records) { return join_jsonl(records); }
std::string format_jsonl(std::span<const ResultRecord> records) { return join_jsonl(records); }

void write_prompts(const std::filesystem::path& path, std::span<const PromptRecord> records)
{
    write_file(path, format_jsonl(records));
}

void write_results(const std::filesystem::path& path, std::span<const ResultRecord> records)
{
    write_file(path, format_jsonl(records));
}

std::vector<PromptRecord> read_prompts(const std::filesystem::path& path)
{
    return read_jsonl<PromptRecord>(path, prompt_record_from_json);
}

std::vector<ResultRecord> read_results(const std::filesystem::path& path)
{
    return read_jsonl<ResultRecord>(path, result_record_from_json);
}

HintSet to_hint_set(std::span<const Hint> hints)
{
    HintSet set;
    set.items.assign(hints.begin(), hints.end());
    set.strategy = set.items.empty() ? HintStrategy::none : HintStrategy::full;
    return set;
}

} // namespace dictprompt
