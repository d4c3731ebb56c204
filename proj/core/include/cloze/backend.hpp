#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "cloze/llm.hpp"

namespace cloze {

struct ChatRequest {
    std::string model;
    std::string system_message;
    std::string user_message;
    double temperature = 1.0;
    int max_tokens = 0;
    bool logprobs = false;
    int top_logprobs = 0;
    std::vector<std::string> stop;
};

struct ChatResponse {
    std::string content;
    // top-k alternatives at the first generated token position, if reported
    std::vector<TokenPrediction> first_position_top_logprobs;
};

class PredictionBackend {
public:
    virtual ~PredictionBackend() = default;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// Client for an OpenAI-compatible POST /v1/chat/completions endpoint.
// 429 and 5xx responses are retried with exponential backoff (max_attempts
// total tries); other failures throw BackendError immediately, with status 0
// for transport-level errors.
class OpenAiClient : public PredictionBackend {
public:
    struct Options {
        std::string base_url;          // e.g. http://127.0.0.1:8080
        std::string api_token;         // sent as Authorization: Bearer <token>
        int max_attempts = 5;
        int initial_backoff_ms = 500;  // doubles per retry
        int timeout_s = 120;
    };

    explicit OpenAiClient(Options options);
    ~OpenAiClient() override;

    ChatResponse complete(const ChatRequest& request) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Reads the auth token from CLOZE_API_KEY, falling back to OPENAI_API_KEY.
std::string backend_token_from_env();

// ---- entropy extraction against a backend ------------------------------------

// One chat-completion call with logprob reporting; aggregates the top-k
// alternatives at the first generated token position. Throws BackendError,
// LogprobsUnavailableError, AllTokensFilteredError.
DistributionWithEntropy logit_entropy(PredictionBackend& backend, const std::string& model,
                                      const std::string& sentence,
                                      const PromptTemplate& prompt,
                                      const GenerationConfig& config);

// One completion without logprobs, cut at the configured stop sequences.
std::string sample_completion(PredictionBackend& backend, const std::string& model,
                              const std::string& sentence, const PromptTemplate& prompt,
                              const GenerationConfig& config);

// n_samples independent completions, aggregated as an empirical distribution.
SampleAggregation sampling_entropy(PredictionBackend& backend, const std::string& model,
                                   const std::string& sentence, const PromptTemplate& prompt,
                                   const GenerationConfig& config);

}  // namespace cloze
