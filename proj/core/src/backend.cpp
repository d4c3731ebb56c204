#include "cloze/backend.hpp"

#include <chrono>
#include <cstdlib>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "cloze/errors.hpp"

namespace cloze {

using nlohmann::json;

struct OpenAiClient::Impl {
    Options options;
    httplib::Client http;

    explicit Impl(Options opts)
        : options(std::move(opts)), http(options.base_url) {
        http.set_connection_timeout(options.timeout_s, 0);
        http.set_read_timeout(options.timeout_s, 0);
        if (!options.api_token.empty()) {
            http.set_default_headers(
                {{"Authorization", "Bearer " + options.api_token}});
        }
    }
};

OpenAiClient::OpenAiClient(Options options) : impl_(std::make_unique<Impl>(std::move(options))) {}
OpenAiClient::~OpenAiClient() = default;

namespace {

json build_payload(const ChatRequest& request) {
    json payload = {
        {"model", request.model},
        {"messages",
         json::array({{{"role", "system"}, {"content", request.system_message}},
                      {{"role", "user"}, {"content", request.user_message}}})},
        {"temperature", request.temperature},
        {"max_tokens", request.max_tokens},
    };
    if (request.logprobs) {
        payload["logprobs"] = true;
        payload["top_logprobs"] = request.top_logprobs;
    }
    if (!request.stop.empty()) payload["stop"] = request.stop;
    return payload;
}

ChatResponse parse_response(const std::string& body) {
    json j = json::parse(body, nullptr, false);
    if (j.is_discarded()) throw BackendError(200, "response body is not JSON");
    ChatResponse out;
    try {
        const auto& choice = j.at("choices").at(0);
        if (choice.contains("message") && choice.at("message").contains("content") &&
            choice.at("message").at("content").is_string()) {
            out.content = choice.at("message").at("content").get<std::string>();
        }
        if (choice.contains("logprobs") && !choice.at("logprobs").is_null()) {
            const auto& content = choice.at("logprobs").at("content");
            if (!content.empty()) {
                for (const auto& alt : content.at(0).at("top_logprobs")) {
                    out.first_position_top_logprobs.push_back(
                        {alt.at("token").get<std::string>(),
                         alt.at("logprob").get<double>()});
                }
            }
        }
    } catch (const json::exception& e) {
        throw BackendError(200, std::string("unexpected response shape: ") + e.what());
    }
    return out;
}

}  // namespace

ChatResponse OpenAiClient::complete(const ChatRequest& request) {
    const std::string body = build_payload(request).dump();
    int backoff_ms = impl_->options.initial_backoff_ms;
    int last_status = 0;
    std::string last_body;

    for (int attempt = 1; attempt <= impl_->options.max_attempts; ++attempt) {
        auto res = impl_->http.Post("/v1/chat/completions", body, "application/json");
        if (!res) {
            throw BackendError(0, "transport error: " + httplib::to_string(res.error()));
        }
        if (res->status == 200) return parse_response(res->body);
        last_status = res->status;
        last_body = res->body;
        const bool retryable = res->status == 429 || res->status >= 500;
        if (!retryable || attempt == impl_->options.max_attempts) break;
        std::this_thread::sleep_for(std::chrono::milliseconds(backoff_ms));
        backoff_ms *= 2;
    }
    throw BackendError(last_status, last_body);
}

std::string backend_token_from_env() {
    if (const char* tok = std::getenv("CLOZE_API_KEY")) return tok;
    if (const char* tok = std::getenv("OPENAI_API_KEY")) return tok;
    return {};
}

DistributionWithEntropy logit_entropy(PredictionBackend& backend, const std::string& model,
                                      const std::string& sentence,
                                      const PromptTemplate& prompt,
                                      const GenerationConfig& config) {
    ChatRequest request;
    request.model = model;
    request.system_message = prompt.system_message;
    request.user_message = prompt.render(sentence);
    request.temperature = config.temperature;
    request.max_tokens = config.max_tokens;
    request.logprobs = true;
    request.top_logprobs = config.top_logprobs;

    ChatResponse response = backend.complete(request);
    if (response.first_position_top_logprobs.empty()) throw LogprobsUnavailableError();

    DistributionWithEntropy out;
    out.dist = aggregate_tokens(
        std::span<const TokenPrediction>(response.first_position_top_logprobs),
        DistributionSource::kLogit);
    out.entropy = distribution_entropy(out.dist);
    return out;
}

std::string sample_completion(PredictionBackend& backend, const std::string& model,
                              const std::string& sentence, const PromptTemplate& prompt,
                              const GenerationConfig& config) {
    ChatRequest request;
    request.model = model;
    request.system_message = prompt.system_message;
    request.user_message = prompt.render(sentence);
    request.temperature = config.temperature;
    request.max_tokens = config.max_tokens;
    request.stop = config.stop_sequences;
    // The full returned text is treated as one word downstream: separators
    // vanish in normalization and completions with internal whitespace are
    // flagged by the aggregator.
    return backend.complete(request).content;
}

SampleAggregation sampling_entropy(PredictionBackend& backend, const std::string& model,
                                   const std::string& sentence, const PromptTemplate& prompt,
                                   const GenerationConfig& config) {
    std::vector<std::string> samples;
    samples.reserve(static_cast<std::size_t>(config.n_samples));
    for (int i = 0; i < config.n_samples; ++i) {
        samples.push_back(sample_completion(backend, model, sentence, prompt, config));
    }
    return aggregate_samples(std::span<const std::string>(samples));
}

}  // namespace cloze
