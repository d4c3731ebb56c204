#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cloze::text {

// True if `s` is well-formed UTF-8 (no overlong forms, no surrogates,
// codepoints <= U+10FFFF).
bool is_valid_utf8(std::string_view s);

// Unicode-aware classification/mapping backed by generated tables
// (see core/src/unicode_tables.inc).
bool is_alphabetic(char32_t cp);
char32_t to_lower(char32_t cp);
bool is_space(char32_t cp);

// Decodes one codepoint starting at s[pos]; advances pos past it.
// Returns std::nullopt on malformed input (pos is left unspecified).
std::optional<char32_t> decode_utf8(std::string_view s, std::size_t& pos);

// Appends the UTF-8 encoding of cp.
void append_utf8(std::string& out, char32_t cp);

// Codepoint-wise lowercase of a UTF-8 string. Malformed bytes pass through.
std::string lowercase(std::string_view s);

// Strips leading/trailing Unicode whitespace.
std::string trim(std::string_view s);

// lowercase + trim, the default treatment of human responses.
std::string lower_trim(std::string_view s);

// Full token normalization: lowercase, trim, then drop every
// non-alphabetic codepoint. Returns std::nullopt when nothing survives.
std::optional<std::string> normalize_word(std::string_view token);

// True if the string contains whitespace between non-space codepoints
// (used to flag multi-word completions in sampling mode).
bool has_internal_whitespace(std::string_view s);

}  // namespace cloze::text
