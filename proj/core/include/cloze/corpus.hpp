#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace cloze {

// One raw completion for one sentence fragment.
struct ResponseRecord {
    std::string sentence_id;
    std::string context;   // sentence fragment, final word missing
    std::string response;  // raw completion text
};

struct IngestResult {
    std::vector<ResponseRecord> records;
    std::size_t skipped_empty = 0;  // rows whose response was blank after trim
};

// Reads `sentence_id,context,response` CSV (columns located by header name,
// extra columns ignored). Rows with an empty response after whitespace trim
// are counted and skipped. Throws MissingColumnError, MalformedRowError,
// NotUtf8Error.
IngestResult ingest_csv(const std::filesystem::path& path, char delimiter = ',');
IngestResult ingest_csv(std::istream& in, char delimiter = ',');

// All responses for one sentence, in input order.
struct SentenceGroup {
    std::string sentence_id;
    std::string context;
    std::vector<std::string> responses;
};

// Groups records by sentence_id, preserving first-appearance order of
// sentences and of responses within a sentence. Conflicting context text for
// the same id is a hard error (ContextMismatchError).
std::vector<SentenceGroup> group_records(const std::vector<ResponseRecord>& records);

// How responses are canonicalized before category encoding.
enum class ResponseNormalization {
    kLowerTrim,  // lowercase + trim (default; datasets ship pre-cleaned)
    kFull,       // the llm-side normalizer: lowercase, trim, strip non-alphabetic
};

// One sentence's responses as integer category codes.
struct EncodedResponses {
    std::string sentence_id;
    std::vector<std::uint32_t> codes;  // category index per response, values < vocab.size()
    std::vector<std::string> vocab;    // category index -> normalized word, first-appearance order
    std::size_t n = 0;                 // == codes.size()
    std::size_t dropped = 0;           // responses removed by full normalization

    std::size_t num_categories() const { return vocab.size(); }
    std::vector<std::uint64_t> category_counts() const;
};

// Codes are assigned by first appearance; deterministic for a fixed input
// order. Throws EmptyGroupError when no response survives normalization.
EncodedResponses encode(const SentenceGroup& group,
                        ResponseNormalization norm = ResponseNormalization::kLowerTrim);

struct CorpusFilter {
    std::size_t min_responses = 100;
};

struct ExclusionRecord {
    std::string sentence_id;
    std::size_t n_responses = 0;
    std::string reason;
};

struct FilterOutcome {
    std::vector<EncodedResponses> kept;
    std::vector<ExclusionRecord> excluded;
};

// Retains sentences with n >= min_responses (inclusive); excluded ids are
// reported with their counts. Idempotent.
FilterOutcome apply_filter(std::vector<EncodedResponses> corpus, const CorpusFilter& filter);

}  // namespace cloze
