#pragma once

// Library side of the command-line tool: every subcommand is a function of a
// plain options struct, and every run records a manifest from which it can be
// replayed.

#include "dictprompt/backend.hpp"
#include "dictprompt/eval.hpp"
#include "dictprompt/induction.hpp"
#include "dictprompt/lexicon.hpp"
#include "dictprompt/prompting.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace dictprompt {

std::string_view tool_version();

/// "sha256:<hex>" of the file contents.
std::string sha256_file(const std::filesystem::path& path);

struct RunManifest {
    std::string command;
    std::string version;
    nlohmann::ordered_json options; // effective configuration, secrets excluded
    std::vector<std::pair<std::string, std::string>> inputs;  // role -> path
    std::vector<std::pair<std::string, std::string>> digests; // role -> sha256
    std::vector<std::string> outputs;

    nlohmann::ordered_json to_json() const;
    static RunManifest from_json(const nlohmann::ordered_json& j);
    void write(const std::filesystem::path& path) const;
    static RunManifest read(const std::filesystem::path& path);
    /// Throws Error when an input is missing or its digest changed.
    void verify_inputs() const;
};

/// Either two line-aligned files or one two-column TSV.
struct CorpusPaths {
    std::string source;
    std::string target;
    std::string tsv;

    bool empty() const { return source.empty() && tsv.empty(); }
};

struct InduceOptions {
    CorpusPaths train;
    std::string alignments; // Pharaoh file for the unfiltered corpus; empty runs the built-in aligner
    double lambda = default_lambda();
    double delta = default_delta();
    int iterations = default_em_iterations();
    std::size_t max_len = 250;
    double max_ratio = 1.5;
    RatioMode ratio_mode = RatioMode::symmetric;
    std::string source_lang;
    std::string target_lang;
    std::string out; // MUSE lexicon; sidecars use it as prefix
};

struct StoplistOptions {
    std::string file;      // explicit list, one word per line
    std::string from;      // source lines to count; used when file is empty
    std::size_t size = default_stoplist_size;
};

struct CoverageOptions {
    std::string lexicon;
    std::string corpus; // source-side lines
    StoplistOptions stoplist;
    std::string out; // JSON report
};

struct PromptsOptions {
    CorpusPaths test; // target side optional (references)
    CorpusPaths dev;
    std::string lexicon;
    StoplistOptions stoplist;
    HintStrategy strategy = HintStrategy::full;
    std::optional<HintStrategy> demo_strategy; // defaults to strategy
    std::uint64_t seed = 1;
    std::size_t k = default_demo_count;
    std::size_t max_hints = default_max_translations;
    std::string source_lang;
    std::string target_lang = "English";
    std::string out;
};

struct TranslateOptions {
    std::string prompts;
    std::string backend = "mock_reference_echo";
    std::string endpoint;
    std::string model;
    int max_tokens = 256;
    double temperature = 0;
    std::size_t concurrency = 4;
    int max_attempts = 3;
    int backoff_ms = 500;
    int timeout_s = 120;
    std::string canned; // JSON object source -> completion, for mock_map
    std::string out;
};

struct ScoreOptions {
    std::string results;
    std::string references; // optional; else the records' reference fields
    BleuSmoothing smoothing = BleuSmoothing::none;
    std::string out;
};

struct ControlOptions {
    std::string baseline;
    std::vector<std::pair<std::string, std::string>> treated; // label -> results file
    std::string out;
};

struct AblateOptions {
    PromptsOptions prompts; // out is unused
    double step = 5;
    std::string out_dir;
};

struct InduceSummary {
    std::size_t pairs_read = 0;
    std::size_t pairs_kept = 0;
    std::size_t entries = 0;
    std::size_t translation_pairs = 0;
    bool aligned_internally = false;
};

struct AblationPoint {
    double target_rate = 0;
    CoverageStats achieved;
    std::size_t entries = 0;
    std::string lexicon;
    std::string prompts;
};

/// The table written by the control subcommand.
struct ControlReport {
    std::vector<ControlRow> rows;
};

/// Corpus BLEU of the hypotheses; failed instances score as empty output.
/// Empty `references` means the records' own reference fields.
BleuScore bleu_from_results(std::span<const ResultRecord> results, std::span<const std::string> references = {},
                            BleuSmoothing smoothing = BleuSmoothing::none);
nlohmann::ordered_json to_json(const BleuScore& score);
nlohmann::ordered_json to_json(const CoverageStats& stats);
nlohmann::ordered_json to_json(const ControlReport& report);

Stoplist build_stoplist(const StoplistOptions& opts);

std::vector<PromptRecord> make_prompt_batch(const PromptsOptions& opts, const BilingualLexicon& lexicon,
                                            const Stoplist& stoplist);

InduceSummary run_induce(const InduceOptions& opts);
CoverageStats run_coverage(const CoverageOptions& opts);
std::vector<PromptRecord> run_prompts(const PromptsOptions& opts);
std::vector<ResultRecord> run_translate(const TranslateOptions& opts);
BleuScore run_score(const ScoreOptions& opts);
ControlReport run_control(const ControlOptions& opts);
std::vector<AblationPoint> run_ablate(const AblateOptions& opts);

/// Re-executes the run recorded in `manifest`, after checking input digests.
/// A non-empty `out` replaces the recorded output path (or directory).
RunManifest replay(const std::filesystem::path& manifest, const std::string& out = {});

std::filesystem::path manifest_path_for(const std::filesystem::path& output);

nlohmann::ordered_json to_json(const InduceOptions& o);
nlohmann::ordered_json to_json(const CoverageOptions& o);
nlohmann::ordered_json to_json(const PromptsOptions& o);
nlohmann::ordered_json to_json(const TranslateOptions& o);
nlohmann::ordered_json to_json(const ScoreOptions& o);
nlohmann::ordered_json to_json(const ControlOptions& o);
nlohmann::ordered_json to_json(const AblateOptions& o);
InduceOptions induce_options_from_json(const nlohmann::json& j);
CoverageOptions coverage_options_from_json(const nlohmann::json& j);
PromptsOptions prompts_options_from_json(const nlohmann::json& j);
TranslateOptions translate_options_from_json(const nlohmann::json& j);
ScoreOptions score_options_from_json(const nlohmann::json& j);
ControlOptions control_options_from_json(const nlohmann::json& j);
AblateOptions ablate_options_from_json(const nlohmann::json& j);

} // namespace dictprompt
