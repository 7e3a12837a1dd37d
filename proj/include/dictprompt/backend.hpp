#pragma once

#include "dictprompt/records.hpp"

#include <chrono>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dictprompt {

enum class BackendKind {
    http,                // OpenAI-compatible /completions endpoint
    mock_map,            // canned completion per source sentence
    mock_reference_echo, // returns the instance's reference
    mock_hint_copier,    // returns the first translation of each hint
};

std::string_view to_string(BackendKind kind);
BackendKind parse_backend_kind(std::string_view name);

struct RetryPolicy {
    int max_attempts = 3;
    std::chrono::milliseconds backoff_base{500}; // doubled after every failed attempt
};

struct BackendConfig {
    BackendKind kind = BackendKind::mock_reference_echo;
    std::string endpoint; // e.g. http://localhost:8000/v1
    std::string model;
    int max_tokens = 256;
    double temperature = 0; // greedy unless overridden
    std::map<std::string, std::string> canned; // source sentence -> raw completion
    std::size_t max_concurrency = 4;
    RetryPolicy retry;
    std::chrono::seconds timeout{120};
    std::string api_key; // taken from the environment, never persisted

    /// Throws ContractError on an unusable configuration.
    void validate() const;
};

/// Environment variable holding the bearer token for the http backend.
constexpr const char* api_key_env = "DICTPROMPT_API_KEY";

struct CompletionResult {
    std::size_t instance_id = 0;
    std::string raw;
    std::string hypothesis;
    double latency_ms = 0;
    int attempts = 0;
    std::optional<std::string> error;

    bool ok() const noexcept { return !error.has_value(); }
};

/// Text before the first occurrence of `stop` (all of it when absent), trimmed.
std::string extract_hypothesis(std::string_view raw, std::string_view stop);

/// Completes every prompt, returning results in input order. At most
/// cfg.max_concurrency requests are in flight. Failures are reported per
/// instance and never abort the batch.
std::vector<CompletionResult> complete_batch(std::span<const PromptRecord> prompts, const BackendConfig& cfg);

/// Joins prompt records with their completions into persisted result records.
std::vector<ResultRecord> to_result_records(std::span<const PromptRecord> prompts,
                                            std::span<const CompletionResult> completions);

} // namespace dictprompt
