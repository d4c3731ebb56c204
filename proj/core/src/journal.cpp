#include "cloze/journal.hpp"

#include <json.hpp>

#include "cloze/errors.hpp"

namespace cloze {

using nlohmann::json;

ProgressJournal::ProgressJournal(const std::filesystem::path& path) {
    if (std::filesystem::exists(path)) {
        std::ifstream in(path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            json j = json::parse(line, nullptr, false);
            if (j.is_discarded()) continue;  // torn tail line from an interrupted run
            const std::string kind = j.value("kind", "");
            const std::string id = j.value("sentence_id", "");
            if (id.empty()) continue;
            if (kind == "logit" && j.contains("predictions")) {
                std::vector<TokenPrediction> preds;
                for (const auto& p : j["predictions"]) {
                    preds.push_back({p.value("token", ""), p.value("logprob", 0.0)});
                }
                state_[id].logit = std::move(preds);
                ++entries_loaded_;
            } else if (kind == "sample" && j.contains("sample_index") && j.contains("text")) {
                state_[id].samples[j["sample_index"].get<int>()] =
                    j["text"].get<std::string>();
                ++entries_loaded_;
            }
        }
    }
    out_.open(path, std::ios::app);
    if (!out_) throw ConfigError("cannot open journal for append: " + path.string());
}

bool ProgressJournal::has_logit(const std::string& sentence_id) const {
    std::lock_guard lock(mutex_);
    auto it = state_.find(sentence_id);
    return it != state_.end() && it->second.logit.has_value();
}

const std::vector<TokenPrediction>* ProgressJournal::logit_predictions(
    const std::string& sentence_id) const {
    std::lock_guard lock(mutex_);
    auto it = state_.find(sentence_id);
    if (it == state_.end() || !it->second.logit) return nullptr;
    return &*it->second.logit;
}

void ProgressJournal::record_logit(const std::string& sentence_id,
                                   const std::vector<TokenPrediction>& predictions) {
    json preds = json::array();
    for (const auto& p : predictions) {
        preds.push_back({{"token", p.token}, {"logprob", p.logprob}});
    }
    json j = {{"kind", "logit"}, {"sentence_id", sentence_id}, {"predictions", preds}};
    std::lock_guard lock(mutex_);
    state_[sentence_id].logit = predictions;
    append_line(j.dump());
}

bool ProgressJournal::has_sample(const std::string& sentence_id, int sample_index) const {
    std::lock_guard lock(mutex_);
    auto it = state_.find(sentence_id);
    return it != state_.end() && it->second.samples.count(sample_index) > 0;
}

std::map<int, std::string> ProgressJournal::samples(const std::string& sentence_id) const {
    std::lock_guard lock(mutex_);
    auto it = state_.find(sentence_id);
    if (it == state_.end()) return {};
    return it->second.samples;
}

void ProgressJournal::record_sample(const std::string& sentence_id, int sample_index,
                                    const std::string& text) {
    json j = {{"kind", "sample"},
              {"sentence_id", sentence_id},
              {"sample_index", sample_index},
              {"text", text}};
    std::lock_guard lock(mutex_);
    state_[sentence_id].samples[sample_index] = text;
    append_line(j.dump());
}

void ProgressJournal::append_line(const std::string& line) {
    out_ << line << '\n';
    out_.flush();
}

}  // namespace cloze
