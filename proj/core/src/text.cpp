#include "cloze/text.hpp"

#include <algorithm>
#include <iterator>

namespace cloze::text {

namespace {

struct CodepointRange {
    char32_t first;
    char32_t last;
};

struct CodepointPair {
    char32_t from;
    char32_t to;
};

#include "unicode_tables.inc"

template <std::size_t N>
bool in_ranges(const CodepointRange (&table)[N], char32_t cp) {
    auto it = std::upper_bound(std::begin(table), std::end(table), cp,
                               [](char32_t v, const CodepointRange& r) { return v < r.first; });
    if (it == std::begin(table)) return false;
    --it;
    return cp <= it->last;
}

}  // namespace

bool is_alphabetic(char32_t cp) {
    return in_ranges(kAlphaRanges, cp);
}

char32_t to_lower(char32_t cp) {
    auto it = std::lower_bound(std::begin(kLowerMap), std::end(kLowerMap), cp,
                               [](const CodepointPair& p, char32_t v) { return p.from < v; });
    if (it != std::end(kLowerMap) && it->from == cp) return it->to;
    return cp;
}

bool is_space(char32_t cp) {
    switch (cp) {
        case U'\t': case U'\n': case U'\v': case U'\f': case U'\r': case U' ':
        case 0x85: case 0xA0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

std::optional<char32_t> decode_utf8(std::string_view s, std::size_t& pos) {
    if (pos >= s.size()) return std::nullopt;
    const auto byte = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    unsigned char b0 = byte(pos);
    if (b0 < 0x80) {
        ++pos;
        return b0;
    }
    int len;
    char32_t cp;
    if ((b0 & 0xE0) == 0xC0) { len = 2; cp = b0 & 0x1F; }
    else if ((b0 & 0xF0) == 0xE0) { len = 3; cp = b0 & 0x0F; }
    else if ((b0 & 0xF8) == 0xF0) { len = 4; cp = b0 & 0x07; }
    else return std::nullopt;
    if (pos + len > s.size()) return std::nullopt;
    for (int i = 1; i < len; ++i) {
        unsigned char b = byte(pos + i);
        if ((b & 0xC0) != 0x80) return std::nullopt;
        cp = (cp << 6) | (b & 0x3F);
    }
    // reject overlong encodings and invalid scalar values
    static constexpr char32_t kMin[5] = {0, 0, 0x80, 0x800, 0x10000};
    if (cp < kMin[len] || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) return std::nullopt;
    pos += len;
    return cp;
}

bool is_valid_utf8(std::string_view s) {
    std::size_t pos = 0;
    while (pos < s.size()) {
        if (!decode_utf8(s, pos)) return false;
    }
    return true;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string lowercase(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    std::size_t pos = 0;
    while (pos < s.size()) {
        std::size_t start = pos;
        auto cp = decode_utf8(s, pos);
        if (!cp) {
            out.push_back(s[start]);
            pos = start + 1;
            continue;
        }
        append_utf8(out, to_lower(*cp));
    }
    return out;
}

std::string trim(std::string_view s) {
    // find first non-space codepoint
    std::size_t begin = 0;
    {
        std::size_t pos = 0;
        while (pos < s.size()) {
            std::size_t start = pos;
            auto cp = decode_utf8(s, pos);
            if (cp && is_space(*cp)) {
                begin = pos;
                continue;
            }
            begin = start;
            break;
        }
        if (pos >= s.size() && begin >= s.size()) return {};
    }
    // find end by scanning forward, remembering the end of the last non-space
    std::size_t end = begin;
    std::size_t pos = begin;
    while (pos < s.size()) {
        std::size_t start = pos;
        auto cp = decode_utf8(s, pos);
        if (!cp) {
            pos = start + 1;
            end = pos;
            continue;
        }
        if (!is_space(*cp)) end = pos;
    }
    return std::string(s.substr(begin, end - begin));
}

std::string lower_trim(std::string_view s) {
    return trim(lowercase(s));
}

std::optional<std::string> normalize_word(std::string_view token) {
    std::string lowered = trim(lowercase(token));
    std::string out;
    out.reserve(lowered.size());
    std::size_t pos = 0;
    while (pos < lowered.size()) {
        std::size_t start = pos;
        auto cp = decode_utf8(lowered, pos);
        if (!cp) {
            pos = start + 1;  // malformed byte: not alphabetic, drop
            continue;
        }
        if (is_alphabetic(*cp)) append_utf8(out, *cp);
    }
    if (out.empty()) return std::nullopt;
    return out;
}

bool has_internal_whitespace(std::string_view s) {
    std::string t = trim(s);
    std::size_t pos = 0;
    while (pos < t.size()) {
        std::size_t start = pos;
        auto cp = decode_utf8(t, pos);
        if (!cp) {
            pos = start + 1;
            continue;
        }
        if (is_space(*cp)) return true;
    }
    return false;
}

}  // namespace cloze::text
