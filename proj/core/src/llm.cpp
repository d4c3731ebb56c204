#include "cloze/llm.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "cloze/errors.hpp"
#include "cloze/text.hpp"

namespace cloze {

std::string to_string(PromptId id) {
    switch (id) {
        case PromptId::kPrompt1: return "prompt1";
        case PromptId::kPrompt2: return "prompt2";
        default: return "custom";
    }
}

std::string to_string(DistributionSource source) {
    switch (source) {
        case DistributionSource::kLogit: return "logit";
        case DistributionSource::kSampling: return "sampling";
        default: return "topk_dump";
    }
}

namespace {

constexpr const char* kSystemMessage =
    "You are simulating how 100 people from different backgrounds, cultures, and ages "
    "would each intuitively complete a sentence with the **first word** that comes to "
    "their mind. Responses may vary widely in meaning, tone, connotation. Be diverse "
    "and creative.";

constexpr const char* kPlaceholder = "{sentence}";

}  // namespace

PromptTemplate PromptTemplate::prompt1() {
    PromptTemplate t;
    t.system_message = kSystemMessage;
    t.user_template =
        "People complete sentences differently based on their experiences, mood, and "
        "background. For the sentence: '{sentence}'. What is ONE possible word someone "
        "might use to complete it? Consider both common AND uncommon responses - the "
        "obvious answers, the creative ones, the mistakes, and the surprising choices "
        "real humans make.";
    t.id = PromptId::kPrompt1;
    return t;
}

PromptTemplate PromptTemplate::prompt2() {
    PromptTemplate t;
    t.system_message = kSystemMessage;
    t.user_template =
        "You are simulating human sentence completions. Return EXACTLY ONE plausible "
        "next word (could be common, rare, creative, or mistaken). Rules: ONE word "
        "only, no quotes, no punctuation, no explanation. Sentence fragment: "
        "{sentence} Next word: ";
    t.id = PromptId::kPrompt2;
    return t;
}

PromptTemplate PromptTemplate::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open prompt file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("invalid prompt file " + path.string() + ": " + e.what());
    }
    PromptTemplate t;
    t.system_message = j.value("system_message", std::string(kSystemMessage));
    if (!j.contains("user_template"))
        throw ConfigError("prompt file " + path.string() + " lacks user_template");
    t.user_template = j.at("user_template").get<std::string>();
    t.id = PromptId::kCustom;
    t.validate();
    return t;
}

void PromptTemplate::validate() const {
    std::size_t first = user_template.find(kPlaceholder);
    if (first == std::string::npos)
        throw ConfigError("user_template lacks the {sentence} placeholder");
    if (user_template.find(kPlaceholder, first + 1) != std::string::npos)
        throw ConfigError("user_template has more than one {sentence} placeholder");
}

std::string PromptTemplate::render(const std::string& sentence) const {
    std::string out = user_template;
    std::size_t pos = out.find(kPlaceholder);
    if (pos == std::string::npos)
        throw ConfigError("user_template lacks the {sentence} placeholder");
    out.replace(pos, std::string(kPlaceholder).size(), sentence);
    return out;
}

EntropyBits distribution_entropy(const WordDistribution& dist) {
    double h = 0.0;
    for (const auto& [word, p] : dist.entries) {
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h + 0.0;
}

WordDistribution aggregate_tokens(std::span<const TokenPrediction> predictions,
                                  DistributionSource source) {
    WordDistribution dist;
    dist.source = source;
    double surviving_mass = 0.0;
    for (const auto& pred : predictions) {
        const double p = std::exp(pred.logprob);
        auto word = text::normalize_word(pred.token);
        if (!word) {
            ++dist.dropped_count;
            continue;
        }
        dist.entries[*word] += p;
        surviving_mass += p;
    }
    if (dist.entries.empty() || surviving_mass <= 0.0) throw AllTokensFilteredError();
    for (auto& [word, p] : dist.entries) p /= surviving_mass;
    dist.dropped_mass = 1.0 - surviving_mass;
    return dist;
}

SampleAggregation aggregate_samples(std::span<const std::string> raw_samples) {
    SampleAggregation agg;
    agg.dist.source = DistributionSource::kSampling;

    std::map<std::string, std::uint64_t> counts;
    for (const auto& raw : raw_samples) {
        if (text::has_internal_whitespace(raw)) ++agg.multiword_count;
        auto word = text::normalize_word(raw);
        if (!word) {
            ++agg.dropped_count;
            continue;
        }
        counts[*word]++;
    }
    if (counts.empty()) throw AllTokensFilteredError();
    if (2 * agg.dropped_count > raw_samples.size())
        throw TooFewValidSamplesError(agg.dropped_count, raw_samples.size());

    std::vector<std::uint64_t> count_values;
    count_values.reserve(counts.size());
    const auto total = static_cast<double>(raw_samples.size() - agg.dropped_count);
    for (const auto& [word, c] : counts) {
        agg.dist.entries[word] = static_cast<double>(c) / total;
        count_values.push_back(c);
    }
    agg.dist.dropped_mass =
        static_cast<double>(agg.dropped_count) / static_cast<double>(raw_samples.size());
    agg.dist.dropped_count = agg.dropped_count;
    agg.entropy = entropy_from_counts(std::span<const std::uint64_t>(count_values));
    return agg;
}

std::vector<DumpRecord> read_topk_dump(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open dump file: " + path.string());
    return read_topk_dump(in);
}

std::vector<DumpRecord> read_topk_dump(std::istream& in) {
    std::vector<DumpRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded()) throw MalformedDumpError(line_no, "invalid JSON");
        if (!j.is_object() || !j.contains("sentence_id") || !j.contains("predictions"))
            throw MalformedDumpError(line_no, "record needs sentence_id and predictions");
        DumpRecord rec;
        try {
            rec.sentence_id = j.at("sentence_id").get<std::string>();
            for (const auto& p : j.at("predictions")) {
                rec.predictions.push_back(
                    {p.at("token").get<std::string>(), p.at("logprob").get<double>()});
            }
        } catch (const nlohmann::json::exception& e) {
            throw MalformedDumpError(line_no, e.what());
        }
        if (rec.predictions.empty())
            throw MalformedDumpError(line_no, "record has no predictions");
        records.push_back(std::move(rec));
    }
    return records;
}

DistributionWithEntropy topk_dump_entropy(const DumpRecord& record) {
    DistributionWithEntropy out;
    out.dist = aggregate_tokens(std::span<const TokenPrediction>(record.predictions),
                                DistributionSource::kTopkDump);
    out.entropy = distribution_entropy(out.dist);
    return out;
}

}  // namespace cloze
