// cloze-entropy: bootstrap convergence analysis of cloze-norm entropy and
// LLM-derived entropy extraction/comparison. See README.md for the workflow.

#include <string>

#include <CLI11.hpp>

#include "cloze/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Entropy norms: bootstrap convergence analysis and LLM alignment"};
    app.require_subcommand(1);

    cloze::RunConfig config;
    std::string delimiter = ",";
    std::string subsample;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--out-dir", config.out_dir, "Output directory")->required();
        cmd->add_option("--seed", config.seed, "Master seed for all randomized steps");
        cmd->add_option("--jobs", config.jobs, "Worker threads (0 = all cores)");
    };

    auto* analyze = app.add_subcommand(
        "analyze-convergence", "Bootstrap entropy trajectories and convergence points");
    analyze->add_option("--input", config.input, "Response CSV (sentence_id,context,response)")
        ->required();
    analyze->add_option("--delimiter", delimiter, "Input field delimiter (single character)");
    analyze->add_option("--rounds", config.rounds, "Bootstrap rounds per sentence");
    analyze->add_option("--slope-threshold", config.criterion.slope_threshold,
                        "Convergence slope threshold, bits/response");
    analyze->add_option("--window", config.criterion.window, "Slope window, responses");
    analyze->add_option("--consecutive", config.criterion.consecutive,
                        "Consecutive sub-threshold steps required");
    analyze->add_option("--min-responses", config.filter.min_responses,
                        "Minimum responses per sentence");
    analyze->add_flag("--normalize-human", config.normalize_human,
                      "Apply the full token normalizer to human responses");
    analyze->add_flag("--dump-trajectories", config.dump_trajectories,
                      "Write the full per-round trajectory matrix (large)");
    add_common(analyze);

    auto* llm = app.add_subcommand("llm-entropy",
                                   "Extract per-sentence entropy from a prediction source");
    llm->add_option("--input", config.input, "Response CSV providing sentence contexts");
    llm->add_option("--delimiter", delimiter, "Input field delimiter (single character)");
    llm->add_option("--method", config.method, "logit | sample | dump")->required();
    llm->add_option("--prompt", config.prompt_spec, "1 | 2 | path to a prompt JSON file");
    llm->add_option("--backend-url", config.backend_url,
                    "OpenAI-compatible endpoint base URL (auth via CLOZE_API_KEY)");
    llm->add_option("--model", config.model, "Model name sent in requests");
    llm->add_option("--dump-file", config.dump_file, "Top-k prediction dump (JSONL)");
    llm->add_option("--temperature", config.generation.temperature, "Sampling temperature");
    llm->add_option("--max-tokens", config.generation.max_tokens, "Completion token cap");
    llm->add_option("--top-logprobs", config.generation.top_logprobs,
                    "Alternatives requested per position (logit mode)");
    llm->add_option("--n-samples", config.generation.n_samples,
                    "Completions per sentence (sampling mode)");
    llm->add_option("--backoff-ms", config.backoff_ms, "Initial retry backoff, milliseconds");
    add_common(llm);

    auto* compare = app.add_subcommand(
        "compare", "Score model entropies against human convergence output");
    compare->add_option("--human", config.human_csv, "convergence.csv from analyze-convergence")
        ->required();
    compare->add_option("--model-file", config.model_jsonl, "Entropy JSONL from llm-entropy")
        ->required();
    compare->add_option("--model-name", config.model_name, "Model column in the report");
    compare->add_option("--dataset-name", config.dataset_name, "Dataset column in the report");
    compare->add_option("--subsample-n", subsample,
                        "Subsample the paired set to this size (seeded)");
    compare->add_flag("--converged-only", config.converged_only,
                      "Use only sentences whose human entropy converged");
    add_common(compare);

    auto* report = app.add_subcommand("report", "Merge artifacts in --out-dir into report.json");
    add_common(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : cloze::kExitConfigError;
    }

    if (delimiter.size() != 1) {
        std::fprintf(stderr, "{\"error\":\"config\",\"message\":\"--delimiter must be one character\"}\n");
        return cloze::kExitConfigError;
    }
    config.delimiter = delimiter[0];
    if (!subsample.empty()) {
        try {
            config.subsample_n = std::stoull(subsample);
        } catch (const std::exception&) {
            std::fprintf(stderr, "{\"error\":\"config\",\"message\":\"--subsample-n must be an integer\"}\n");
            return cloze::kExitConfigError;
        }
    }

    if (analyze->parsed()) return cloze::run_subcommand("analyze-convergence", config);
    if (llm->parsed()) return cloze::run_subcommand("llm-entropy", config);
    if (compare->parsed()) return cloze::run_subcommand("compare", config);
    return cloze::run_subcommand("report", config);
}
