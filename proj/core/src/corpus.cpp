#include "cloze/corpus.hpp"

#include <fstream>
#include <unordered_map>

#include "cloze/csv.hpp"
#include "cloze/errors.hpp"
#include "cloze/text.hpp"

namespace cloze {

IngestResult ingest_csv(const std::filesystem::path& path, char delimiter) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open input file: " + path.string());
    return ingest_csv(in, delimiter);
}

IngestResult ingest_csv(std::istream& in, char delimiter) {
    csv::Reader reader(in, delimiter);

    auto header = reader.next();
    if (!header) return {};

    long id_col = -1, ctx_col = -1, resp_col = -1;
    for (std::size_t i = 0; i < header->fields.size(); ++i) {
        std::string name = text::trim(header->fields[i]);
        if (name == "sentence_id") id_col = static_cast<long>(i);
        else if (name == "context") ctx_col = static_cast<long>(i);
        else if (name == "response") resp_col = static_cast<long>(i);
    }
    if (id_col < 0) throw MissingColumnError("sentence_id");
    if (ctx_col < 0) throw MissingColumnError("context");
    if (resp_col < 0) throw MissingColumnError("response");

    const std::size_t min_fields =
        static_cast<std::size_t>(std::max({id_col, ctx_col, resp_col})) + 1;

    IngestResult result;
    while (auto row = reader.next()) {
        if (row->fields.size() == 1 && row->fields[0].empty()) continue;  // blank line
        if (row->fields.size() < min_fields)
            throw MalformedRowError(row->line_no,
                                    "expected at least " + std::to_string(min_fields) +
                                        " fields, got " + std::to_string(row->fields.size()));
        for (const auto& f : row->fields) {
            if (!text::is_valid_utf8(f)) throw NotUtf8Error(row->line_no);
        }
        ResponseRecord rec;
        rec.sentence_id = row->fields[static_cast<std::size_t>(id_col)];
        rec.context = row->fields[static_cast<std::size_t>(ctx_col)];
        rec.response = row->fields[static_cast<std::size_t>(resp_col)];
        if (rec.sentence_id.empty())
            throw MalformedRowError(row->line_no, "empty sentence_id");
        if (text::trim(rec.response).empty()) {
            ++result.skipped_empty;
            continue;
        }
        result.records.push_back(std::move(rec));
    }
    return result;
}

std::vector<SentenceGroup> group_records(const std::vector<ResponseRecord>& records) {
    std::vector<SentenceGroup> groups;
    std::unordered_map<std::string, std::size_t> index;
    for (const auto& rec : records) {
        auto [it, inserted] = index.emplace(rec.sentence_id, groups.size());
        if (inserted) {
            groups.push_back({rec.sentence_id, rec.context, {}});
        } else if (groups[it->second].context != rec.context) {
            throw ContextMismatchError(rec.sentence_id);
        }
        groups[it->second].responses.push_back(rec.response);
    }
    return groups;
}

std::vector<std::uint64_t> EncodedResponses::category_counts() const {
    std::vector<std::uint64_t> counts(vocab.size(), 0);
    for (std::uint32_t code : codes) counts[code]++;
    return counts;
}

EncodedResponses encode(const SentenceGroup& group, ResponseNormalization norm) {
    EncodedResponses enc;
    enc.sentence_id = group.sentence_id;
    std::unordered_map<std::string, std::uint32_t> code_of;
    for (const auto& raw : group.responses) {
        std::string word;
        if (norm == ResponseNormalization::kFull) {
            auto normalized = text::normalize_word(raw);
            if (!normalized) {
                ++enc.dropped;
                continue;
            }
            word = std::move(*normalized);
        } else {
            word = text::lower_trim(raw);
        }
        auto [it, inserted] = code_of.emplace(word, static_cast<std::uint32_t>(enc.vocab.size()));
        if (inserted) enc.vocab.push_back(std::move(word));
        enc.codes.push_back(it->second);
    }
    if (enc.codes.empty()) throw EmptyGroupError();
    enc.n = enc.codes.size();
    return enc;
}

FilterOutcome apply_filter(std::vector<EncodedResponses> corpus, const CorpusFilter& filter) {
    FilterOutcome out;
    for (auto& sentence : corpus) {
        if (sentence.n >= filter.min_responses) {
            out.kept.push_back(std::move(sentence));
        } else {
            out.excluded.push_back({sentence.sentence_id, sentence.n,
                                    "fewer_than_min_responses"});
        }
    }
    return out;
}

}  // namespace cloze
