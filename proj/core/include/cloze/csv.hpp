#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace cloze::csv {

// RFC 4180-ish reader: quoted fields, doubled quotes, newlines inside quotes,
// configurable single-byte delimiter. Tracks the physical line each record
// starts on for error reporting.
class Reader {
public:
    explicit Reader(std::istream& in, char delimiter = ',');

    struct Row {
        std::vector<std::string> fields;
        std::size_t line_no = 0;  // 1-based physical line of the first field
    };

    // Returns the next record, or std::nullopt at end of input.
    // Throws MalformedRowError on unbalanced quotes or stray quote characters.
    std::optional<Row> next();

private:
    std::istream& in_;
    char delim_;
    std::size_t line_ = 1;
};

std::string escape_field(const std::string& field, char delimiter = ',');

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter = ',');

// Fixed-format double rendering used by every CSV/JSONL artifact so that
// repeated runs are byte-identical.
std::string format_double(double v);

}  // namespace cloze::csv
