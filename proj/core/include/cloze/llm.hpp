#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cloze/entropy.hpp"

namespace cloze {

enum class PromptId { kPrompt1, kPrompt2, kCustom };

std::string to_string(PromptId id);

struct PromptTemplate {
    std::string system_message;
    std::string user_template;  // must contain exactly one {sentence} placeholder
    PromptId id = PromptId::kCustom;

    // The two prompt designs this tool ships with, verbatim, sharing the
    // "simulate 100 people" system message.
    static PromptTemplate prompt1();
    static PromptTemplate prompt2();
    // JSON file: {"system_message": ..., "user_template": ...}
    static PromptTemplate from_file(const std::filesystem::path& path);

    // Throws ConfigError unless user_template has exactly one {sentence}.
    void validate() const;
    std::string render(const std::string& sentence) const;
};

struct GenerationConfig {
    double temperature = 1.5;
    int max_tokens = 4;
    int top_logprobs = 20;
    int n_samples = 100;
    std::vector<std::string> stop_sequences = {"\n", " "};  // sampling mode only
};

// One candidate next token as reported by a prediction source.
struct TokenPrediction {
    std::string token;
    double logprob;  // natural-log probability
};

enum class DistributionSource { kLogit, kSampling, kTopkDump };

std::string to_string(DistributionSource source);

// Word-level probability distribution after normalization/aggregation.
// Keys are non-empty, lowercase, alphabetic-only. Entries sum to 1 within
// 1e-9; dropped_mass is the pre-renormalization mass that did not survive.
struct WordDistribution {
    std::map<std::string, double> entries;
    double dropped_mass = 0.0;
    std::size_t dropped_count = 0;  // tokens/samples that normalized to nothing
    DistributionSource source = DistributionSource::kLogit;
};

EntropyBits distribution_entropy(const WordDistribution& dist);

// exp() the logprobs, group tokens by normalize_word, drop tokens that
// normalize to nothing, renormalize the survivors to 1. Throws
// AllTokensFilteredError when nothing survives.
WordDistribution aggregate_tokens(std::span<const TokenPrediction> predictions,
                                  DistributionSource source = DistributionSource::kLogit);

// Sampling-mode aggregation: each raw completion is normalized as one word;
// empty normalizations are dropped and counted. Entropy comes from the
// surviving empirical counts. Throws TooFewValidSamplesError when more than
// half the samples drop, AllTokensFilteredError when none survive.
struct SampleAggregation {
    WordDistribution dist;
    EntropyBits entropy = 0.0;
    std::size_t dropped_count = 0;
    std::size_t multiword_count = 0;  // raw completions with internal whitespace
};
SampleAggregation aggregate_samples(std::span<const std::string> raw_samples);

// ---- top-k dump (offline prediction source) ---------------------------------

// One JSONL record: {"sentence_id": ..., "predictions": [{"token","logprob"},...]}
struct DumpRecord {
    std::string sentence_id;
    std::vector<TokenPrediction> predictions;
};

// Throws MalformedDumpError (with line number) on unparseable records.
std::vector<DumpRecord> read_topk_dump(const std::filesystem::path& path);
std::vector<DumpRecord> read_topk_dump(std::istream& in);

struct DistributionWithEntropy {
    WordDistribution dist;
    EntropyBits entropy = 0.0;
};

// Same pipeline as the logit path, fed from a dump record.
DistributionWithEntropy topk_dump_entropy(const DumpRecord& record);

}  // namespace cloze
