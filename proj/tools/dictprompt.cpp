#include "dictprompt/error.hpp"
#include "dictprompt/format.hpp"
#include "dictprompt/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace dictprompt;

namespace {

std::string percent(const std::optional<double>& v)
{
    return v ? format_fixed(*v, 2) : std::string("n/a");
}

void add_corpus(CLI::App* cmd, CorpusPaths& paths, const std::string& name, const std::string& what)
{
    cmd->add_option("--" + name + "-src", paths.source, what + " source-side file");
    cmd->add_option("--" + name + "-tgt", paths.target, what + " target-side file");
    cmd->add_option("--" + name + "-tsv", paths.tsv, what + " as one source<TAB>target file");
}

void add_stoplist(CLI::App* cmd, StoplistOptions& s)
{
    cmd->add_option("--stoplist", s.file, "explicit stopword list, one word per line");
    cmd->add_option("--stoplist-from", s.from, "count stopwords from these source lines");
    cmd->add_option("--stoplist-size", s.size, "number of most frequent words to exclude")->capture_default_str();
}

// Strategy flags are strings on the command line and enums in the options.
struct PromptFlags {
    std::string strategy = "full";
    std::string demo_strategy;
};

void add_prompt_options(CLI::App* cmd, PromptsOptions& o, PromptFlags& flags)
{
    add_corpus(cmd, o.test, "test", "test set (target side holds references)");
    add_corpus(cmd, o.dev, "dev", "development set for demonstrations and the stoplist");
    cmd->add_option("--lexicon", o.lexicon, "bilingual dictionary in MUSE format");
    add_stoplist(cmd, o.stoplist);
    cmd->add_option("--strategy", flags.strategy, "full, gold, random, false or none")->capture_default_str();
    cmd->add_option("--demo-strategy", flags.demo_strategy, "hint strategy for demonstrations");
    cmd->add_option("--seed", o.seed, "run seed")->capture_default_str();
    cmd->add_option("--k", o.k, "number of demonstrations")->capture_default_str();
    cmd->add_option("--max-hints", o.max_hints, "translations shown per hinted word")->capture_default_str();
    cmd->add_option("--source-lang", o.source_lang, "source language name");
    cmd->add_option("--target-lang", o.target_lang, "target language name")->capture_default_str();
}

void apply(PromptsOptions& o, const PromptFlags& flags)
{
    o.strategy = parse_strategy(flags.strategy);
    if (!flags.demo_strategy.empty())
        o.demo_strategy = parse_strategy(flags.demo_strategy);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dictionary-hinted few-shot translation prompts, lexicon induction and evaluation"};
    app.set_version_flag("--version", std::string(tool_version()));
    app.set_config("--config", "", "TOML file with defaults; [subcommand] sections, flags override");
    app.require_subcommand(1);

    InduceOptions induce;
    auto* c_induce = app.add_subcommand("induce", "induce a lexicon from a parallel corpus");
    add_corpus(c_induce, induce.train, "train", "training corpus");
    c_induce->add_option("--alignments", induce.alignments, "Pharaoh alignments; skips the built-in aligner");
    c_induce->add_option("--lambda", induce.lambda, "minimum matched ratio")->capture_default_str();
    c_induce->add_option("--delta", induce.delta, "smoothing added to source counts")->capture_default_str();
    c_induce->add_option("--iterations", induce.iterations, "EM iterations of the built-in aligner")
        ->capture_default_str();
    c_induce->add_option("--max-len", induce.max_len, "drop pairs with a longer side")->capture_default_str();
    c_induce->add_option("--max-ratio", induce.max_ratio, "drop pairs with a larger length ratio")
        ->capture_default_str();
    std::string ratio_mode = "symmetric";
    c_induce->add_option("--ratio-mode", ratio_mode, "symmetric or source_over_target")->capture_default_str();
    c_induce->add_option("--source-lang", induce.source_lang);
    c_induce->add_option("--target-lang", induce.target_lang);
    c_induce->add_option("-o,--out", induce.out, "MUSE output path")->required();

    CoverageOptions coverage;
    auto* c_coverage = app.add_subcommand("coverage", "token and type coverage of a lexicon on a corpus");
    c_coverage->add_option("--lexicon", coverage.lexicon)->required();
    c_coverage->add_option("--corpus", coverage.corpus, "source-side lines")->required();
    c_coverage->add_option("--stoplist", coverage.stoplist.file);
    c_coverage->add_option("--stoplist-from", coverage.stoplist.from);
    c_coverage->add_option("--stoplist-size", coverage.stoplist.size)->capture_default_str();
    c_coverage->add_option("-o,--out", coverage.out, "JSON report")->required();

    PromptsOptions prompts;
    PromptFlags prompt_flags;
    auto* c_prompts = app.add_subcommand("prompts", "build a prompt batch");
    add_prompt_options(c_prompts, prompts, prompt_flags);
    c_prompts->add_option("-o,--out", prompts.out, "prompt JSONL")->required();

    TranslateOptions translate;
    auto* c_translate = app.add_subcommand("translate", "complete a prompt batch");
    c_translate->add_option("--prompts", translate.prompts)->required();
    c_translate->add_option("--backend", translate.backend, "http, mock_map, mock_reference_echo or mock_hint_copier")
        ->capture_default_str();
    c_translate->add_option("--endpoint", translate.endpoint, "base URL of a completions API");
    c_translate->add_option("--model", translate.model);
    c_translate->add_option("--max-tokens", translate.max_tokens)->capture_default_str();
    c_translate->add_option("--temperature", translate.temperature)->capture_default_str();
    c_translate->add_option("--concurrency", translate.concurrency)->capture_default_str();
    c_translate->add_option("--max-attempts", translate.max_attempts)->capture_default_str();
    c_translate->add_option("--backoff-ms", translate.backoff_ms)->capture_default_str();
    c_translate->add_option("--timeout", translate.timeout_s, "seconds per request")->capture_default_str();
    c_translate->add_option("--canned", translate.canned, "JSON file mapping source to completion, for mock_map");
    c_translate->add_option("-o,--out", translate.out, "results JSONL")->required();

    ScoreOptions score;
    std::string smoothing = "none";
    auto* c_score = app.add_subcommand("score", "corpus BLEU of a results file");
    c_score->add_option("--results", score.results)->required();
    c_score->add_option("--references", score.references, "reference lines; defaults to the records' references");
    c_score->add_option("--smoothing", smoothing, "none or exp")->capture_default_str();
    c_score->add_option("-o,--out", score.out, "JSON report")->required();

    ControlOptions control;
    std::vector<std::string> treated;
    auto* c_control = app.add_subcommand("control", "hint usage of treated runs against a baseline run");
    c_control->add_option("--baseline", control.baseline, "results without hints")->required();
    c_control->add_option("--treated", treated, "label=results.jsonl, repeatable")->required();
    c_control->add_option("-o,--out", control.out, "JSON report")->required();

    AblateOptions ablate;
    PromptFlags ablate_flags;
    auto* c_ablate = app.add_subcommand("ablate", "prompt batches at decreasing dictionary coverage");
    add_prompt_options(c_ablate, ablate.prompts, ablate_flags);
    c_ablate->add_option("--step", ablate.step, "coverage step in percent")->capture_default_str();
    c_ablate->add_option("-o,--out-dir", ablate.out_dir)->required();

    std::string manifest;
    std::string replay_out;
    auto* c_replay = app.add_subcommand("replay", "re-run a recorded manifest after checking its inputs");
    c_replay->add_option("manifest", manifest)->required();
    c_replay->add_option("-o,--out", replay_out, "write to this path instead of the recorded one");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_induce) {
            induce.ratio_mode = ratio_mode == "symmetric" ? RatioMode::symmetric : RatioMode::source_over_target;
            if (ratio_mode != "symmetric" && ratio_mode != "source_over_target")
                throw ContractError("unknown ratio mode '" + ratio_mode + "'");
            const auto s = run_induce(induce);
            std::cout << "pairs read " << s.pairs_read << ", kept " << s.pairs_kept << "\n"
                      << "entries " << s.entries << ", translation pairs " << s.translation_pairs << "\n";
        } else if (*c_coverage) {
            const auto s = run_coverage(coverage);
            std::cout << "token coverage " << format_fixed(s.token_coverage, 2) << "\n"
                      << "type coverage " << format_fixed(s.type_coverage, 2) << "\n";
        } else if (*c_prompts) {
            apply(prompts, prompt_flags);
            const auto records = run_prompts(prompts);
            std::cout << records.size() << " prompts written to " << prompts.out << "\n";
        } else if (*c_translate) {
            const auto results = run_translate(translate);
            std::size_t failed = 0;
            for (const auto& r : results)
                failed += r.error ? 1 : 0;
            std::cout << results.size() << " results, " << failed << " failed\n";
        } else if (*c_score) {
            score.smoothing = smoothing == "exp" ? BleuSmoothing::exp : BleuSmoothing::none;
            if (smoothing != "exp" && smoothing != "none")
                throw ContractError("unknown smoothing '" + smoothing + "'");
            const auto s = run_score(score);
            std::cout << "BLEU " << format_fixed(s.score, 2) << " (" << format_fixed(s.precisions[0], 1) << "/"
                      << format_fixed(s.precisions[1], 1) << "/" << format_fixed(s.precisions[2], 1) << "/"
                      << format_fixed(s.precisions[3], 1) << ", BP " << format_fixed(s.brevity_penalty, 3) << ")\n";
        } else if (*c_control) {
            for (const auto& item : treated) {
                const auto eq = item.find('=');
                if (eq == std::string::npos || eq == 0)
                    throw ContractError("--treated expects label=path, got '" + item + "'");
                control.treated.emplace_back(item.substr(0, eq), item.substr(eq + 1));
            }
            const auto report = run_control(control);
            std::cout << "strategy\tbaseline\ttreated\tdelta\n";
            for (const auto& row : report.rows)
                std::cout << row.label << "\t" << percent(row.baseline) << "\t" << percent(row.treated) << "\t"
                          << percent(row.delta) << "\n";
        } else if (*c_ablate) {
            apply(ablate.prompts, ablate_flags);
            for (const auto& p : run_ablate(ablate))
                std::cout << "target " << format_fixed(p.target_rate, 2) << "  achieved "
                          << format_fixed(p.achieved.type_coverage, 2) << "  entries " << p.entries << "\n";
        } else if (*c_replay) {
            const auto m = replay(manifest, replay_out);
            std::cout << "replayed " << m.command << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "dictprompt: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
