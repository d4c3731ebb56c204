#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "cloze/llm.hpp"

namespace cloze {

// Append-only JSONL journal of raw backend acquisitions. On construction any
// existing journal is replayed, so an interrupted run resumes without
// repeating requests. Single writer; appends are mutex-guarded and flushed
// line by line.
class ProgressJournal {
public:
    explicit ProgressJournal(const std::filesystem::path& path);

    bool has_logit(const std::string& sentence_id) const;
    const std::vector<TokenPrediction>* logit_predictions(const std::string& sentence_id) const;
    void record_logit(const std::string& sentence_id,
                      const std::vector<TokenPrediction>& predictions);

    bool has_sample(const std::string& sentence_id, int sample_index) const;
    // sample_index -> raw completion text, for the samples acquired so far
    std::map<int, std::string> samples(const std::string& sentence_id) const;
    void record_sample(const std::string& sentence_id, int sample_index,
                       const std::string& text);

    std::size_t entries_loaded() const { return entries_loaded_; }

private:
    struct SentenceState {
        std::optional<std::vector<TokenPrediction>> logit;
        std::map<int, std::string> samples;
    };

    void append_line(const std::string& line);

    std::unordered_map<std::string, SentenceState> state_;
    std::ofstream out_;
    mutable std::mutex mutex_;
    std::size_t entries_loaded_ = 0;
};

}  // namespace cloze
