#pragma once

#include "dictprompt/prompting.hpp"

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace dictprompt {

/// One line of a prompt batch.
struct PromptRecord {
    std::size_t id = 0;
    std::string prompt;
    std::string stop = "\n";
    std::string source;
    std::optional<std::string> reference;
    std::vector<Hint> hints;
};

/// One line of a translation results file.
struct ResultRecord {
    std::size_t id = 0;
    std::string source;
    std::string hypothesis;
    std::string raw;
    std::optional<std::string> reference;
    std::vector<Hint> hints;
    std::optional<std::string> error;
};

nlohmann::ordered_json to_json(const Hint& hint);
Hint hint_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const PromptRecord& r);
nlohmann::ordered_json to_json(const ResultRecord& r);
PromptRecord prompt_record_from_json(const nlohmann::json& j);
ResultRecord result_record_from_json(const nlohmann::json& j);

/// Compact single-line JSON; invalid UTF-8 is replaced rather than thrown on.
std::string dump_line(const nlohmann::ordered_json& j);
std::string dump_pretty(const nlohmann::ordered_json& j);

std::string format_jsonl(std::span<const PromptRecord> records);
std::string format_jsonl(std::span<const ResultRecord> records);
void write_prompts(const std::filesystem::path& path, std::span<const PromptRecord> records);
void write_results(const std::filesystem::path& path, std::span<const ResultRecord> records);
std::vector<PromptRecord> read_prompts(const std::filesystem::path& path);
std::vector<ResultRecord> read_results(const std::filesystem::path& path);

HintSet to_hint_set(std::span<const Hint> hints);

} // namespace dictprompt
