#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace kgqa {

// ASCII-only case mapping. Multi-byte UTF-8 sequences pass through
// untouched, so byte lengths never change.
std::string to_lower(std::string_view s);
std::string to_upper(std::string_view s);
char lower_char(char c);
char upper_char(char c);

bool is_space(char c);
bool is_ascii_punct(char c);
bool is_ascii_digit(char c);
bool is_ascii_alpha(char c);

std::string_view trim_view(std::string_view s);
std::string trim(std::string_view s);

/// Trims and collapses every run of whitespace to a single space.
std::string collapse_whitespace(std::string_view s);

bool starts_with_icase(std::string_view s, std::string_view prefix);
bool equals_icase(std::string_view a, std::string_view b);

/// Byte offset of the first ASCII-case-insensitive occurrence of needle,
/// or npos.
std::size_t find_icase(std::string_view haystack, std::string_view needle);

// UTF-8 code point helpers. SQuAD offsets are code point indices.
std::size_t utf8_length(std::string_view s);
std::size_t utf8_byte_offset(std::string_view s, std::size_t codepoints);
std::size_t utf8_codepoint_offset(std::string_view s, std::size_t byte_offset);
std::string utf8_substr(std::string_view s, std::size_t start, std::size_t length);

struct TokenSpan {
  std::size_t begin = 0;  // byte offsets into the source text
  std::size_t end = 0;
};

// The one tokenizer used everywhere token counts appear: split on
// whitespace, then peel leading and trailing ASCII punctuation off each
// chunk as single-character tokens. Inner punctuation stays attached
// ("thin-film", "2.45").
std::vector<TokenSpan> tokenize_spans(std::string_view text);
std::vector<std::string> tokenize(std::string_view text);

/// Tokens that carry at least one letter, digit, or non-ASCII byte.
std::vector<std::string> word_tokens(std::string_view text);
std::size_t count_tokens(std::string_view text);

bool is_word_token(std::string_view token);

std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::vector<std::string> split(std::string_view s, char sep);

}  // namespace kgqa
