#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cloze/backend.hpp"
#include "cloze/bootstrap.hpp"
#include "cloze/convergence.hpp"
#include "cloze/corpus.hpp"
#include "cloze/llm.hpp"
#include "cloze/metrics.hpp"

namespace cloze {

// Everything a subcommand run needs; populated by the CLI or by tests.
struct RunConfig {
    // shared
    std::filesystem::path input;
    std::filesystem::path out_dir;
    char delimiter = ',';
    std::uint64_t seed = 42;
    std::size_t jobs = 0;  // 0 = hardware concurrency

    // analyze-convergence
    std::size_t rounds = 1000;
    ConvergenceCriterion criterion;
    CorpusFilter filter;
    bool normalize_human = false;
    bool dump_trajectories = false;

    // llm-entropy
    std::string method = "logit";  // logit | sample | dump
    std::string prompt_spec = "1";  // 1 | 2 | path to a template file
    std::string backend_url;
    std::string model = "gpt-4o";
    std::filesystem::path dump_file;
    GenerationConfig generation;
    int backoff_ms = 500;

    // compare
    std::filesystem::path human_csv;
    std::filesystem::path model_jsonl;
    std::string model_name = "unknown";
    std::string dataset_name = "unknown";
    std::optional<std::size_t> subsample_n;
    bool converged_only = false;
};

// Exit codes shared by the library entry points and the CLI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitPartialFailure = 2;
inline constexpr int kExitBackendFailure = 3;

// Ingest -> encode -> filter -> bootstrap -> convergence -> summary.
// Writes convergence.csv, convergence_summary.json, mean_trajectories.csv,
// convergence_scatter.csv, exclusions.csv and (behind dump_trajectories)
// trajectories.csv, each with a .meta.json sidecar.
int run_analyze_convergence(const RunConfig& config);

// Per-sentence entropy JSONL for the chosen method/prompt, resumable via an
// append-only journal; failed sentences land in a manifest. `backend`
// overrides the HTTP client (used by tests); pass nullptr for normal use.
int run_llm_entropy(const RunConfig& config, PredictionBackend* backend = nullptr);

// Pairs human and model entropies, computes Bias/MAE/CCC, emits the report
// CSV plus an identity-line scatter with the extreme-error sentences flagged.
int run_compare(const RunConfig& config);

// Collects artifacts already present in out_dir into report.json and prints
// a digest to stdout.
int run_report(const RunConfig& config);

// Maps exceptions from the run_* functions to exit codes and writes
// machine-readable error JSON (stderr + <out_dir>/error.json when possible).
int run_subcommand(const std::string& name, const RunConfig& config,
                   PredictionBackend* backend = nullptr);

// ---- artifact readers (also used by `report` and tests) ---------------------

struct HumanEntropyRow {
    std::string sentence_id;
    std::size_t n_responses = 0;
    double final_entropy_bits = 0.0;
    bool converged = false;
    std::optional<std::size_t> convergence_n;
    std::string reason;
};
std::vector<HumanEntropyRow> read_convergence_csv(const std::filesystem::path& path);

struct ModelEntropyRecord {
    std::string sentence_id;
    std::string method;
    std::string prompt_id;
    double entropy_bits = 0.0;
    double dropped_mass = 0.0;
    std::size_t dropped_count = 0;
};
std::vector<ModelEntropyRecord> read_entropy_jsonl(const std::filesystem::path& path);

}  // namespace cloze
