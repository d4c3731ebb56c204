#include "cloze/csv.hpp"

#include <cmath>
#include <cstdio>

#include "cloze/errors.hpp"

namespace cloze::csv {

Reader::Reader(std::istream& in, char delimiter) : in_(in), delim_(delimiter) {}

std::optional<Reader::Row> Reader::next() {
    int c = in_.get();
    if (c == EOF) return std::nullopt;

    Row row;
    row.line_no = line_;
    std::string field;
    bool quoted = false;
    bool field_started = false;

    auto push_field = [&] {
        row.fields.push_back(std::move(field));
        field.clear();
        quoted = false;
        field_started = false;
    };

    while (true) {
        if (c == EOF) {
            if (quoted) throw MalformedRowError(row.line_no, "unterminated quoted field");
            push_field();
            return row;
        }
        char ch = static_cast<char>(c);
        if (quoted) {
            if (ch == '"') {
                int peek = in_.peek();
                if (peek == '"') {
                    in_.get();
                    field.push_back('"');
                } else {
                    quoted = false;
                    // only delimiter, newline or EOF may follow a closing quote
                    if (peek != EOF && peek != delim_ && peek != '\n' && peek != '\r')
                        throw MalformedRowError(row.line_no, "garbage after closing quote");
                }
            } else {
                if (ch == '\n') ++line_;
                field.push_back(ch);
            }
        } else if (ch == '"' && !field_started) {
            quoted = true;
            field_started = true;
        } else if (ch == delim_) {
            push_field();
        } else if (ch == '\n') {
            ++line_;
            push_field();
            return row;
        } else if (ch == '\r') {
            // swallow \r\n; a bare \r also terminates the record
            if (in_.peek() == '\n') {
                in_.get();
            }
            ++line_;
            push_field();
            return row;
        } else {
            if (ch == '"') throw MalformedRowError(row.line_no, "quote inside unquoted field");
            field.push_back(ch);
            field_started = true;
        }
        c = in_.get();
    }
}

std::string escape_field(const std::string& field, char delimiter) {
    bool needs_quote = false;
    for (char ch : field) {
        if (ch == delimiter || ch == '"' || ch == '\n' || ch == '\r') {
            needs_quote = true;
            break;
        }
    }
    if (!needs_quote) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

void write_row(std::ostream& out, const std::vector<std::string>& fields, char delimiter) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.put(delimiter);
        out << escape_field(fields[i], delimiter);
    }
    out.put('\n');
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace cloze::csv
