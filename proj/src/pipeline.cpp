#include "dictprompt/pipeline.hpp"

#include "dictprompt/error.hpp"
#include "dictprompt/format.hpp"
#include "dictprompt/rng.hpp"
#include "dictprompt/text.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdlib>
#include <map>

#ifndef DICTPROMPT_VERSION
#define DICTPROMPT_VERSION "0.0.0"
#endif

namespace dictprompt {
namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

void require_out(const std::string& out, std::string_view command)
{
    if (out.empty())
        throw ContractError(std::string(command) + ": an output path is required");
}

std::string_view to_string(RatioMode m)
{
    return m == RatioMode::symmetric ? "symmetric" : "source_over_target";
}

RatioMode parse_ratio_mode(std::string_view s)
{
    if (s == "symmetric")
        return RatioMode::symmetric;
    if (s == "source_over_target" || s == "source-target")
        return RatioMode::source_over_target;
    throw ContractError("unknown ratio mode '" + std::string(s) + "'");
}

std::string_view to_string(BleuSmoothing s)
{
    return s == BleuSmoothing::none ? "none" : "exp";
}

BleuSmoothing parse_smoothing(std::string_view s)
{
    if (s == "none")
        return BleuSmoothing::none;
    if (s == "exp")
        return BleuSmoothing::exp;
    throw ContractError("unknown BLEU smoothing '" + std::string(s) + "'");
}

ojson to_json(const CorpusPaths& p)
{
    return {{"source", p.source}, {"target", p.target}, {"tsv", p.tsv}};
}

CorpusPaths corpus_paths_from_json(const nlohmann::json& j)
{
    return {j.value("source", ""), j.value("target", ""), j.value("tsv", "")};
}

ojson to_json(const StoplistOptions& s)
{
    return {{"file", s.file}, {"from", s.from}, {"size", s.size}};
}

StoplistOptions stoplist_options_from_json(const nlohmann::json& j)
{
    return {j.value("file", ""), j.value("from", ""), j.value("size", default_stoplist_size)};
}

ojson optional_to_json(const std::optional<double>& v)
{
    return v ? ojson(*v) : ojson(nullptr);
}

// Records input paths for the manifest, in a fixed order.
class Inputs {
public:
    void add(std::string role, const std::string& path)
    {
        if (!path.empty())
            entries_.emplace_back(std::move(role), path);
    }
    void add(const std::string& prefix, const CorpusPaths& p)
    {
        add(prefix + "_source", p.source);
        add(prefix + "_target", p.target);
        add(prefix + "_tsv", p.tsv);
    }
    void add(const StoplistOptions& s)
    {
        add("stoplist_file", s.file);
        if (s.file.empty())
            add("stoplist_from", s.from);
    }

    RunManifest manifest(std::string command, ojson options, std::vector<std::string> outputs) const
    {
        RunManifest m;
        m.command = std::move(command);
        m.version = std::string(tool_version());
        m.options = std::move(options);
        m.inputs = entries_;
        for (const auto& [role, path] : entries_)
            m.digests.emplace_back(role, sha256_file(path));
        m.outputs = std::move(outputs);
        return m;
    }

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

ParallelCorpus read_corpus(const CorpusPaths& p, bool target_required, std::string_view what)
{
    if (!p.tsv.empty())
        return read_parallel_tsv(p.tsv);
    if (p.source.empty())
        throw ContractError(std::string(what) + ": no source file given");
    if (!p.target.empty())
        return read_parallel(p.source, p.target);
    if (target_required)
        throw ContractError(std::string(what) + ": no target file given");
    ParallelCorpus corpus;
    for (auto& line : read_lines(p.source))
        corpus.pairs.push_back({std::move(line), {}});
    return corpus;
}

bool has_target(const CorpusPaths& p)
{
    return !p.tsv.empty() || !p.target.empty();
}

std::string rate_label(double rate)
{
    return format_fixed(rate, 2);
}

BilingualLexicon restrict_to_corpus(const BilingualLexicon& lex, std::span<const std::string> lines,
                                    const Stoplist& stoplist)
{
    BilingualLexicon out(lex.source_lang(), lex.target_lang(), lex.provenance());
    for (const auto& line : lines) {
        for (const auto& token : lookup_tokenize(line).tokens) {
            if (stoplist.contains(token) || out.contains(token))
                continue;
            const auto targets = lex.lookup(token);
            if (!targets.empty())
                out.set(token, {targets.begin(), targets.end()});
        }
    }
    return out;
}

} // namespace

std::string_view tool_version()
{
    return "dictprompt " DICTPROMPT_VERSION;
}

std::string sha256_file(const fs::path& path)
{
    const auto content = read_file(path);
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(content.data(), content.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
        throw Error("SHA-256 computation failed for " + path.string());
    static constexpr char hex[] = "0123456789abcdef";
    std::string out = "sha256:";
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xf];
    }
    return out;
}

fs::path manifest_path_for(const fs::path& output)
{
    return fs::path(output.string() + ".manifest.json");
}

ojson RunManifest::to_json() const
{
    ojson j;
    j["command"] = command;
    j["version"] = version;
    j["options"] = options;
    ojson in = ojson::object();
    for (std::size_t i = 0; i < inputs.size(); ++i)
        in[inputs[i].first] = {{"path", inputs[i].second}, {"digest", digests.at(i).second}};
    j["inputs"] = in;
    j["outputs"] = outputs;
    return j;
}

RunManifest RunManifest::from_json(const ojson& j)
{
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.version = j.value("version", "");
    m.options = j.at("options");
    for (const auto& [role, entry] : j.at("inputs").items()) {
        m.inputs.emplace_back(role, entry.at("path").get<std::string>());
        m.digests.emplace_back(role, entry.at("digest").get<std::string>());
    }
    m.outputs = j.value("outputs", std::vector<std::string>{});
    return m;
}

void RunManifest::write(const fs::path& path) const
{
    write_file(path, dump_pretty(to_json()));
}

RunManifest RunManifest::read(const fs::path& path)
{
    try {
        return from_json(ojson::parse(read_file(path)));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void RunManifest::verify_inputs() const
{
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        const auto& [role, path] = inputs[i];
        if (!fs::exists(path))
            throw Error("manifest input '" + role + "' is missing: " + path);
        const auto digest = sha256_file(path);
        if (digest != digests.at(i).second)
            throw Error("manifest input '" + role + "' changed: " + path + " has " + digest + ", manifest records " +
                        digests.at(i).second);
    }
}

ojson to_json(const InduceOptions& o)
{
    return {{"train", to_json(o.train)},
            {"alignments", o.alignments},
            {"lambda", o.lambda},
            {"delta", o.delta},
            {"iterations", o.iterations},
            {"max_len", o.max_len},
            {"max_ratio", o.max_ratio},
            {"ratio_mode", to_string(o.ratio_mode)},
            {"source_lang", o.source_lang},
            {"target_lang", o.target_lang},
            {"out", o.out}};
}

InduceOptions induce_options_from_json(const nlohmann::json& j)
{
    InduceOptions o;
    o.train = corpus_paths_from_json(j.at("train"));
    o.alignments = j.value("alignments", "");
    o.lambda = j.value("lambda", default_lambda());
    o.delta = j.value("delta", default_delta());
    o.iterations = j.value("iterations", default_em_iterations());
    o.max_len = j.value("max_len", std::size_t{250});
    o.max_ratio = j.value("max_ratio", 1.5);
    o.ratio_mode = parse_ratio_mode(j.value("ratio_mode", "symmetric"));
    o.source_lang = j.value("source_lang", "");
    o.target_lang = j.value("target_lang", "");
    o.out = j.value("out", "");
    return o;
}

ojson to_json(const CoverageOptions& o)
{
    return {{"lexicon", o.lexicon}, {"corpus", o.corpus}, {"stoplist", to_json(o.stoplist)}, {"out", o.out}};
}

CoverageOptions coverage_options_from_json(const nlohmann::json& j)
{
    return {j.value("lexicon", ""), j.value("corpus", ""), stoplist_options_from_json(j.at("stoplist")),
            j.value("out", "")};
}

ojson to_json(const PromptsOptions& o)
{
    return {{"test", to_json(o.test)},
            {"dev", to_json(o.dev)},
            {"lexicon", o.lexicon},
            {"stoplist", to_json(o.stoplist)},
            {"strategy", to_string(o.strategy)},
            {"demo_strategy", to_string(o.demo_strategy.value_or(o.strategy))},
            {"seed", o.seed},
            {"k", o.k},
            {"max_hints", o.max_hints},
            {"source_lang", o.source_lang},
            {"target_lang", o.target_lang},
            {"out", o.out}};
}

PromptsOptions prompts_options_from_json(const nlohmann::json& j)
{
    PromptsOptions o;
    o.test = corpus_paths_from_json(j.at("test"));
    o.dev = corpus_paths_from_json(j.at("dev"));
    o.lexicon = j.value("lexicon", "");
    o.stoplist = stoplist_options_from_json(j.at("stoplist"));
    o.strategy = parse_strategy(j.value("strategy", "full"));
    if (j.contains("demo_strategy"))
        o.demo_strategy = parse_strategy(j.at("demo_strategy").get<std::string>());
    o.seed = j.value("seed", std::uint64_t{1});
    o.k = j.value("k", default_demo_count);
    o.max_hints = j.value("max_hints", default_max_translations);
    o.source_lang = j.value("source_lang", "");
    o.target_lang = j.value("target_lang", "English");
    o.out = j.value("out", "");
    return o;
}

ojson to_json(const TranslateOptions& o)
{
    return {{"prompts", o.prompts},
            {"backend",
             {{"kind", o.backend},
              {"endpoint", o.endpoint},
              {"model", o.model},
              {"max_tokens", o.max_tokens},
              {"temperature", o.temperature},
              {"max_concurrency", o.concurrency},
              {"retry", {{"max_attempts", o.max_attempts}, {"backoff_base_ms", o.backoff_ms}}},
              {"timeout_s", o.timeout_s},
              {"canned", o.canned},
              {"api_key_env", api_key_env}}},
            {"out", o.out}};
}

TranslateOptions translate_options_from_json(const nlohmann::json& j)
{
    TranslateOptions o;
    o.prompts = j.value("prompts", "");
    const auto& b = j.at("backend");
    o.backend = b.value("kind", "mock_reference_echo");
    o.endpoint = b.value("endpoint", "");
    o.model = b.value("model", "");
    o.max_tokens = b.value("max_tokens", 256);
    o.temperature = b.value("temperature", 0.0);
    o.concurrency = b.value("max_concurrency", std::size_t{4});
    if (b.contains("retry")) {
        o.max_attempts = b.at("retry").value("max_attempts", 3);
        o.backoff_ms = b.at("retry").value("backoff_base_ms", 500);
    }
    o.timeout_s = b.value("timeout_s", 120);
    o.canned = b.value("canned", "");
    o.out = j.value("out", "");
    return o;
}

ojson to_json(const ScoreOptions& o)
{
    return {{"results", o.results}, {"references", o.references}, {"smoothing", to_string(o.smoothing)},
            {"out", o.out}};
}

ScoreOptions score_options_from_json(const nlohmann::json& j)
{
    return {j.value("results", ""), j.value("references", ""), parse_smoothing(j.value("smoothing", "none")),
            j.value("out", "")};
}

ojson to_json(const ControlOptions& o)
{
    ojson treated = ojson::array();
    for (const auto& [label, path] : o.treated)
        treated.push_back({{"label", label}, {"results", path}});
    return {{"baseline", o.baseline}, {"treated", treated}, {"out", o.out}};
}

ControlOptions control_options_from_json(const nlohmann::json& j)
{
    ControlOptions o;
    o.baseline = j.value("baseline", "");
    for (const auto& t : j.at("treated"))
        o.treated.emplace_back(t.at("label").get<std::string>(), t.at("results").get<std::string>());
    o.out = j.value("out", "");
    return o;
}

ojson to_json(const AblateOptions& o)
{
    return {{"prompts", to_json(o.prompts)}, {"step", o.step}, {"out_dir", o.out_dir}};
}

AblateOptions ablate_options_from_json(const nlohmann::json& j)
{
    AblateOptions o;
    o.prompts = prompts_options_from_json(j.at("prompts"));
    o.step = j.value("step", 5.0);
    o.out_dir = j.value("out_dir", "");
    return o;
}

ojson to_json(const BleuScore& s)
{
    return {{"bleu", s.score},
            {"precisions", s.precisions},
            {"bp", s.brevity_penalty},
            {"hyp_len", s.hyp_len},
            {"ref_len", s.ref_len},
            {"matches", s.matches},
            {"totals", s.totals},
            {"tokenizer", "13a"}};
}

ojson to_json(const CoverageStats& s)
{
    return {{"token_coverage", s.token_coverage}, {"type_coverage", s.type_coverage},
            {"covered_tokens", s.covered_tokens}, {"total_tokens", s.total_tokens},
            {"covered_types", s.covered_types},   {"total_types", s.total_types}};
}

ojson to_json(const ControlReport& report)
{
    ojson rows = ojson::array();
    for (const auto& r : report.rows)
        rows.push_back({{"strategy", r.label},
                        {"baseline", optional_to_json(r.baseline)},
                        {"treated", optional_to_json(r.treated)},
                        {"delta", optional_to_json(r.delta)},
                        {"opportunities", r.opportunities}});
    return {{"rows", rows}};
}

Stoplist build_stoplist(const StoplistOptions& opts)
{
    Stoplist stoplist;
    if (!opts.file.empty()) {
        for (const auto& line : read_lines(opts.file)) {
            auto word = lookup_normalize(line);
            if (!word.empty())
                stoplist.insert(std::move(word));
        }
    } else if (!opts.from.empty()) {
        const auto lines = read_lines(opts.from);
        for (auto& word : top_k_words(build_frequency_table(lines), opts.size))
            stoplist.insert(std::move(word));
    }
    return stoplist;
}

namespace {

// Without an explicit list the stoplist comes from the development source side.
Stoplist resolve_stoplist(const StoplistOptions& opts, const CorpusPaths& dev)
{
    if (!opts.file.empty() || !opts.from.empty())
        return build_stoplist(opts);
    if (!dev.tsv.empty()) {
        Stoplist stoplist;
        for (auto& word : top_k_words(build_frequency_table(read_parallel_tsv(dev.tsv).source_lines()), opts.size))
            stoplist.insert(std::move(word));
        return stoplist;
    }
    if (dev.source.empty())
        return {};
    auto with_dev = opts;
    with_dev.from = dev.source;
    return build_stoplist(with_dev);
}

} // namespace

InduceSummary run_induce(const InduceOptions& opts)
{
    require_out(opts.out, "induce");
    validate_induction_params(opts.lambda, opts.delta);
    if (opts.iterations < 1)
        throw ContractError("EM needs at least one iteration");

    auto raw = read_corpus(opts.train, true, "induce");
    raw.source_lang = opts.source_lang;
    raw.target_lang = opts.target_lang;
    const CorpusFilter filter{opts.max_len, opts.max_ratio, opts.ratio_mode, true};
    const auto kept = filter_indices(raw, filter);
    const auto corpus = select_pairs(raw, kept);

    InduceSummary summary;
    summary.pairs_read = raw.size();
    summary.pairs_kept = corpus.size();

    std::vector<std::string> outputs{opts.out, opts.out + ".scores.tsv"};
    AlignmentLinks links;
    if (!opts.alignments.empty()) {
        links = select_links(load_alignments(opts.alignments, raw), kept);
    } else {
        links = align_model1(corpus, opts.iterations);
        summary.aligned_internally = true;
        write_alignments(opts.out + ".align", links);
        outputs.push_back(opts.out + ".align");
    }

    const auto induced = induce_lexicon(corpus, links, opts.lambda, opts.delta);
    write_muse(opts.out, induced.lexicon);
    write_induced_tsv(opts.out + ".scores.tsv", induced.entries);
    summary.entries = induced.lexicon.size();
    summary.translation_pairs = induced.lexicon.pair_count();

    Inputs inputs;
    inputs.add("train", opts.train);
    inputs.add("alignments", opts.alignments);
    inputs.manifest("induce", to_json(opts), outputs).write(manifest_path_for(opts.out));
    return summary;
}

CoverageStats run_coverage(const CoverageOptions& opts)
{
    require_out(opts.out, "coverage");
    const auto lex = load_muse(opts.lexicon);
    const auto lines = read_lines(opts.corpus);
    const auto stoplist = build_stoplist(opts.stoplist);
    const auto stats = coverage_stats(lex, lines, stoplist);

    ojson report = to_json(stats);
    report["lexicon_entries"] = lex.size();
    report["stoplist_size"] = stoplist.size();
    write_file(opts.out, dump_pretty(report));

    Inputs inputs;
    inputs.add("lexicon", opts.lexicon);
    inputs.add("corpus", opts.corpus);
    inputs.add(opts.stoplist);
    inputs.manifest("coverage", to_json(opts), {opts.out}).write(manifest_path_for(opts.out));
    return stats;
}

std::vector<PromptRecord> make_prompt_batch(const PromptsOptions& opts, const BilingualLexicon& lexicon,
                                            const Stoplist& stoplist)
{
    const auto test = read_corpus(opts.test, false, "test set");
    const bool have_refs = has_target(opts.test);
    if (opts.strategy == HintStrategy::gold && !have_refs)
        throw ContractError("the gold strategy needs test references");

    const auto demo_strategy = opts.demo_strategy.value_or(opts.strategy);
    BilingualLexicon false_lexicon;
    if ((opts.strategy == HintStrategy::false_dict || demo_strategy == HintStrategy::false_dict) && !lexicon.empty())
        false_lexicon = shuffle_targets(lexicon, derive_seed(opts.seed, Stream::false_dictionary));
    auto lexicon_for = [&](HintStrategy s) -> const BilingualLexicon& {
        return s == HintStrategy::false_dict && !lexicon.empty() ? false_lexicon : lexicon;
    };

    std::vector<Demonstration> demos;
    if (opts.k > 0) {
        const auto dev_raw = read_corpus(opts.dev, true, "development set");
        const CorpusFilter non_empty{std::nullopt, std::nullopt, RatioMode::symmetric, true};
        const auto dev = select_pairs(dev_raw, filter_indices(dev_raw, non_empty));
        demos = select_demonstrations(dev, opts.k, opts.seed, lexicon_for(demo_strategy), stoplist, demo_strategy,
                                      opts.max_hints);
    }

    const auto& instance_lexicon = lexicon_for(opts.strategy);
    std::vector<PromptRecord> records;
    records.reserve(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) {
        const auto& pair = test.pairs[i];
        std::optional<std::string_view> reference;
        if (have_refs)
            reference = pair.target;
        const auto hints = select_hints(pair.source, instance_lexicon, stoplist, opts.strategy,
                                        derive_seed(opts.seed, Stream::instance_hints, i), reference, opts.max_hints);
        auto prompt = build_prompt(demos, pair.source, opts.target_lang, hints, i);

        PromptRecord r;
        r.id = i;
        r.prompt = std::move(prompt.text);
        r.stop = std::move(prompt.stop);
        r.source = pair.source;
        if (have_refs)
            r.reference = pair.target;
        r.hints = hints.items;
        records.push_back(std::move(r));
    }
    return records;
}

std::vector<PromptRecord> run_prompts(const PromptsOptions& opts)
{
    require_out(opts.out, "prompts");
    if (opts.lexicon.empty() && opts.strategy != HintStrategy::none)
        throw ContractError("strategy '" + std::string(to_string(opts.strategy)) + "' needs a lexicon");
    BilingualLexicon lexicon;
    if (!opts.lexicon.empty())
        lexicon = load_muse(opts.lexicon);

    const auto stoplist = resolve_stoplist(opts.stoplist, opts.dev);

    const auto records = make_prompt_batch(opts, lexicon, stoplist);
    write_prompts(opts.out, records);
    const std::vector<std::string> stop_words(stoplist.begin(), stoplist.end());
    write_lines(opts.out + ".stoplist.txt", stop_words);

    Inputs inputs;
    inputs.add("test", opts.test);
    if (opts.k > 0 || opts.stoplist.file.empty())
        inputs.add("dev", opts.dev);
    inputs.add("lexicon", opts.lexicon);
    inputs.add("stoplist_file", opts.stoplist.file);
    inputs.manifest("prompts", to_json(opts), {opts.out, opts.out + ".stoplist.txt"})
        .write(manifest_path_for(opts.out));
    return records;
}

std::vector<ResultRecord> run_translate(const TranslateOptions& opts)
{
    require_out(opts.out, "translate");
    BackendConfig cfg;
    cfg.kind = parse_backend_kind(opts.backend);
    cfg.endpoint = opts.endpoint;
    cfg.model = opts.model;
    cfg.max_tokens = opts.max_tokens;
    cfg.temperature = opts.temperature;
    cfg.max_concurrency = opts.concurrency;
    cfg.retry.max_attempts = opts.max_attempts;
    cfg.retry.backoff_base = std::chrono::milliseconds(opts.backoff_ms);
    cfg.timeout = std::chrono::seconds(opts.timeout_s);
    if (const char* key = std::getenv(api_key_env))
        cfg.api_key = key;
    if (cfg.kind == BackendKind::mock_map) {
        if (opts.canned.empty())
            throw ContractError("the mock_map backend needs a canned completion file");
        try {
            cfg.canned = nlohmann::json::parse(read_file(opts.canned)).get<std::map<std::string, std::string>>();
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(opts.canned + ": " + e.what());
        }
    }
    cfg.validate();

    const auto prompts = read_prompts(opts.prompts);
    const auto completions = complete_batch(prompts, cfg);
    const auto results = to_result_records(prompts, completions);
    write_results(opts.out, results);

    Inputs inputs;
    inputs.add("prompts", opts.prompts);
    if (cfg.kind == BackendKind::mock_map)
        inputs.add("canned", opts.canned);
    inputs.manifest("translate", to_json(opts), {opts.out}).write(manifest_path_for(opts.out));
    return results;
}

BleuScore bleu_from_results(std::span<const ResultRecord> results, std::span<const std::string> references,
                            BleuSmoothing smoothing)
{
    std::vector<std::string> hyps;
    std::vector<std::string> refs;
    hyps.reserve(results.size());
    for (const auto& r : results) {
        hyps.push_back(r.error ? std::string() : r.hypothesis);
        if (references.empty()) {
            if (!r.reference)
                throw ContractError("result " + std::to_string(r.id) + " has no reference to score against");
            refs.push_back(*r.reference);
        }
    }
    if (!references.empty())
        refs.assign(references.begin(), references.end());
    return bleu_corpus(hyps, refs, smoothing);
}

BleuScore run_score(const ScoreOptions& opts)
{
    require_out(opts.out, "score");
    const auto results = read_results(opts.results);
    std::vector<std::string> references;
    if (!opts.references.empty())
        references = read_lines(opts.references);

    const auto score = bleu_from_results(results, references, opts.smoothing);

    std::size_t failed = 0;
    for (const auto& r : results)
        failed += r.error ? 1 : 0;
    ojson report = to_json(score);
    report["sentences"] = results.size();
    report["failed"] = failed;
    write_file(opts.out, dump_pretty(report));

    Inputs inputs;
    inputs.add("results", opts.results);
    inputs.add("references", opts.references);
    inputs.manifest("score", to_json(opts), {opts.out}).write(manifest_path_for(opts.out));
    return score;
}

ControlReport run_control(const ControlOptions& opts)
{
    require_out(opts.out, "control");
    if (opts.treated.empty())
        throw ContractError("control needs at least one treated results file");

    const auto baseline = read_results(opts.baseline);
    std::map<std::size_t, const ResultRecord*> baseline_by_id;
    for (const auto& r : baseline)
        baseline_by_id[r.id] = &r;

    ControlReport report;
    for (const auto& [label, path] : opts.treated) {
        const auto treated = read_results(path);
        std::vector<HintSet> hints;
        std::vector<std::string> baseline_out;
        std::vector<std::string> treated_out;
        for (const auto& r : treated) {
            const auto it = baseline_by_id.find(r.id);
            if (it == baseline_by_id.end())
                throw ContractError("baseline results lack instance " + std::to_string(r.id) + " of '" + label + "'");
            hints.push_back(to_hint_set(r.hints));
            baseline_out.push_back(it->second->error ? std::string() : it->second->hypothesis);
            treated_out.push_back(r.error ? std::string() : r.hypothesis);
        }
        report.rows.push_back(
            compare_controllability(hit_report(hints, baseline_out), hit_report(hints, treated_out), label));
    }
    write_file(opts.out, dump_pretty(to_json(report)));

    Inputs inputs;
    inputs.add("baseline", opts.baseline);
    for (const auto& [label, path] : opts.treated)
        inputs.add("treated:" + label, path);
    inputs.manifest("control", to_json(opts), {opts.out}).write(manifest_path_for(opts.out));
    return report;
}

std::vector<AblationPoint> run_ablate(const AblateOptions& opts)
{
    require_out(opts.out_dir, "ablate");
    const auto& p = opts.prompts;
    if (p.lexicon.empty())
        throw ContractError("ablate needs a lexicon");
    const auto lexicon = load_muse(p.lexicon);

    const auto stoplist = resolve_stoplist(p.stoplist, p.dev);

    const auto test_lines = read_corpus(p.test, false, "test set").source_lines();
    // Entries that cannot cover a test type play no part in the sweep; dropping
    // them makes the 0% point a dictionary-free (baseline) batch.
    const auto full = restrict_to_corpus(lexicon, test_lines, stoplist);
    const auto full_stats = coverage_stats(full, test_lines, stoplist);
    const auto rates = coverage_sweep(full_stats.type_coverage, opts.step);

    fs::create_directories(opts.out_dir);
    std::vector<AblationPoint> points;
    ojson rows = ojson::array();
    std::vector<std::string> outputs;
    for (const double rate : rates) {
        const auto lex = downsample_to_type_coverage(full, rate, test_lines, stoplist,
                                                     derive_seed(p.seed, Stream::downsample));
        const auto dir = fs::path(opts.out_dir) / ("rate_" + rate_label(rate));
        fs::create_directories(dir);

        AblationPoint point;
        point.target_rate = rate;
        point.achieved = coverage_stats(lex, test_lines, stoplist);
        point.entries = lex.size();
        point.lexicon = (dir / "lexicon.txt").string();
        point.prompts = (dir / "prompts.jsonl").string();
        write_muse(point.lexicon, lex);
        write_prompts(point.prompts, make_prompt_batch(p, lex, stoplist));
        outputs.push_back(point.lexicon);
        outputs.push_back(point.prompts);

        rows.push_back({{"target_rate", rate},
                        {"type_coverage", point.achieved.type_coverage},
                        {"token_coverage", point.achieved.token_coverage},
                        {"entries", point.entries},
                        {"lexicon", point.lexicon},
                        {"prompts", point.prompts}});
        points.push_back(std::move(point));
    }
    const auto summary = (fs::path(opts.out_dir) / "summary.json").string();
    write_file(summary, dump_pretty({{"full_type_coverage", full_stats.type_coverage}, {"points", rows}}));
    outputs.push_back(summary);

    Inputs inputs;
    inputs.add("test", p.test);
    inputs.add("dev", p.dev);
    inputs.add("lexicon", p.lexicon);
    inputs.add("stoplist_file", p.stoplist.file);
    inputs.manifest("ablate", to_json(opts), outputs).write(fs::path(opts.out_dir) / "manifest.json");
    return points;
}

RunManifest replay(const fs::path& manifest_path, const std::string& out)
{
    const auto manifest = RunManifest::read(manifest_path);
    manifest.verify_inputs();
    const auto& o = manifest.options;
    const auto& cmd = manifest.command;

    auto with_out = [&](auto options) {
        if (!out.empty())
            options.out = out;
        return options;
    };

    fs::path written;
    if (cmd == "induce") {
        const auto opts = with_out(induce_options_from_json(o));
        run_induce(opts);
        written = manifest_path_for(opts.out);
    } else if (cmd == "coverage") {
        const auto opts = with_out(coverage_options_from_json(o));
        run_coverage(opts);
        written = manifest_path_for(opts.out);
    } else if (cmd == "prompts") {
        const auto opts = with_out(prompts_options_from_json(o));
        run_prompts(opts);
        written = manifest_path_for(opts.out);
    } else if (cmd == "translate") {
        const auto opts = with_out(translate_options_from_json(o));
        run_translate(opts);
        written = manifest_path_for(opts.out);
    } else if (cmd == "score") {
        const auto opts = with_out(score_options_from_json(o));
        run_score(opts);
        written = manifest_path_for(opts.out);
    } else if (cmd == "control") {
        const auto opts = with_out(control_options_from_json(o));
        run_control(opts);
        written = manifest_path_for(opts.out);
    } else if (cmd == "ablate") {
        auto opts = ablate_options_from_json(o);
        if (!out.empty())
            opts.out_dir = out;
        run_ablate(opts);
        written = fs::path(opts.out_dir) / "manifest.json";
    } else {
        throw ContractError("manifest records unknown command '" + cmd + "'");
    }
    return RunManifest::read(written);
}

} // namespace dictprompt
