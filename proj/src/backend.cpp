#include "dictprompt/backend.hpp"

#include "dictprompt/error.hpp"

#include <atomic>
#include <regex>
#include <thread>

#include <httplib.h>

namespace dictprompt {
namespace {

constexpr std::string_view kWhitespace = " \t\r\n\f\v";

struct Endpoint {
    std::string scheme_host_port;
    std::string path;
};

Endpoint split_endpoint(const std::string& url)
{
    static const std::regex pattern(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(url, m, pattern))
        throw ContractError("endpoint must look like http://host[:port][/prefix], got '" + url + "'");
    std::string prefix = m[2].matched ? m[2].str() : std::string();
    while (!prefix.empty() && prefix.back() == '/')
        prefix.pop_back();
    return {m[1].str(), prefix + "/completions"};
}

bool is_transient(int status)
{
    return status == 408 || status == 429 || status >= 500;
}

class Completer {
public:
    explicit Completer(const BackendConfig& cfg) : cfg_(cfg) {}

    CompletionResult run(const PromptRecord& prompt)
    {
        CompletionResult result;
        result.instance_id = prompt.id;
        const auto start = std::chrono::steady_clock::now();
        switch (cfg_.kind) {
        case BackendKind::http:
            complete_http(prompt, result);
            break;
        case BackendKind::mock_map: {
            result.attempts = 1;
            const auto it = cfg_.canned.find(prompt.source);
            if (it == cfg_.canned.end())
                result.error = "no canned completion for instance " + std::to_string(prompt.id);
            else
                result.raw = it->second;
            break;
        }
        case BackendKind::mock_reference_echo:
            result.attempts = 1;
            if (prompt.reference)
                result.raw = *prompt.reference;
            else
                result.error = "instance " + std::to_string(prompt.id) + " has no reference to echo";
            break;
        case BackendKind::mock_hint_copier:
            result.attempts = 1;
            for (const auto& h : prompt.hints) {
                if (h.translations.empty())
                    continue;
                if (!result.raw.empty())
                    result.raw += ' ';
                result.raw += h.translations.front();
            }
            break;
        }
        if (result.ok())
            result.hypothesis = extract_hypothesis(result.raw, prompt.stop);
        result.latency_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
        return result;
    }

private:
    void complete_http(const PromptRecord& prompt, CompletionResult& result)
    {
        if (!client_) {
            const auto endpoint = split_endpoint(cfg_.endpoint);
            path_ = endpoint.path;
            client_ = std::make_unique<httplib::Client>(endpoint.scheme_host_port);
            client_->set_connection_timeout(cfg_.timeout);
            client_->set_read_timeout(cfg_.timeout);
            client_->set_write_timeout(cfg_.timeout);
            if (!cfg_.api_key.empty())
                client_->set_bearer_token_auth(cfg_.api_key);
        }

        nlohmann::json body = {
            {"model", cfg_.model},
            {"prompt", prompt.prompt},
            {"max_tokens", cfg_.max_tokens},
            {"temperature", cfg_.temperature},
            {"stop", nlohmann::json::array({prompt.stop})},
        };
        const auto payload = body.dump(-1, ' ', false, nlohmann::json::error_handler_t::replace);

        std::string last_error;
        for (int attempt = 1; attempt <= cfg_.retry.max_attempts; ++attempt) {
            result.attempts = attempt;
            if (attempt > 1)
                std::this_thread::sleep_for(cfg_.retry.backoff_base * (1LL << (attempt - 2)));

            auto res = client_->Post(path_, payload, "application/json");
            if (!res) {
                last_error = "request failed: " + httplib::to_string(res.error());
                continue;
            }
            if (res->status != 200) {
                last_error = "HTTP " + std::to_string(res->status);
                if (is_transient(res->status))
                    continue;
                result.error = last_error + " for instance " + std::to_string(prompt.id) + ": " + res->body;
                return;
            }
            try {
                const auto j = nlohmann::json::parse(res->body);
                result.raw = j.at("choices").at(0).at("text").get<std::string>();
            } catch (const nlohmann::json::exception& e) {
                result.error = "malformed response body for instance " + std::to_string(prompt.id) + ": " + e.what();
            }
            return;
        }
        result.error = "endpoint unreachable after " + std::to_string(cfg_.retry.max_attempts) +
                       " attempts for instance " + std::to_string(prompt.id) + " (" + last_error + ")";
    }

    const BackendConfig& cfg_;
    std::unique_ptr<httplib::Client> client_;
    std::string path_;
};

} // namespace

std::string_view to_string(BackendKind kind)
{
    switch (kind) {
    case BackendKind::http: return "http";
    case BackendKind::mock_map: return "mock_map";
    case BackendKind::mock_reference_echo: return "mock_reference_echo";
    case BackendKind::mock_hint_copier: return "mock_hint_copier";
    }
    return "unknown";
}

BackendKind parse_backend_kind(std::string_view name)
{
    if (name == "http")
        return BackendKind::http;
    if (name == "mock_map" || name == "map")
        return BackendKind::mock_map;
    if (name == "mock_reference_echo" || name == "echo")
        return BackendKind::mock_reference_echo;
    if (name == "mock_hint_copier" || name == "copier")
        return BackendKind::mock_hint_copier;
    throw ContractError("unknown backend '" + std::string(name) + "'");
}

void BackendConfig::validate() const
{
    if (max_tokens <= 0)
        throw ContractError("max_tokens must be positive");
    if (max_concurrency == 0)
        throw ContractError("max_concurrency must be at least 1");
    if (retry.max_attempts < 1)
        throw ContractError("retry policy needs at least one attempt");
    if (temperature < 0)
        throw ContractError("temperature must be >= 0");
    if (kind == BackendKind::http) {
        if (model.empty())
            throw ContractError("the http backend needs a model name");
        split_endpoint(endpoint);
    }
}

std::string extract_hypothesis(std::string_view raw, std::string_view stop)
{
    if (!stop.empty()) {
        const auto pos = raw.find(stop);
        if (pos != std::string_view::npos)
            raw = raw.substr(0, pos);
    }
    const auto first = raw.find_first_not_of(kWhitespace);
    if (first == std::string_view::npos)
        return {};
    const auto last = raw.find_last_not_of(kWhitespace);
    return std::string(raw.substr(first, last - first + 1));
}

std::vector<CompletionResult> complete_batch(std::span<const PromptRecord> prompts, const BackendConfig& cfg)
{
    cfg.validate();
    if (prompts.empty())
        throw ContractError("empty prompt batch");

    std::vector<CompletionResult> results(prompts.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        Completer completer(cfg);
        for (std::size_t i = next++; i < prompts.size(); i = next++)
            results[i] = completer.run(prompts[i]);
    };

    {
        const auto workers = std::min(cfg.max_concurrency, prompts.size());
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back(worker);
    }
    return results;
}

std::vector<ResultRecord> to_result_records(std::span<const PromptRecord> prompts,
                                            std::span<const CompletionResult> completions)
{
    if (prompts.size() != completions.size())
        throw ContractError("prompt and completion counts differ");
    std::vector<ResultRecord> out;
    out.reserve(prompts.size());
    for (std::size_t i = 0; i < prompts.size(); ++i) {
        const auto& p = prompts[i];
        const auto& c = completions[i];
        out.push_back({p.id, p.source, c.hypothesis, c.raw, p.reference, p.hints, c.error});
    }
    return out;
}

} // namespace dictprompt
