#include <doctest.h>

#include "digest.hpp"
#include "text.hpp"

using namespace kgqa;

TEST_CASE("tokenizer peels edge punctuation only") {
  CHECK(tokenize("Hello, world.") == std::vector<std::string>{"Hello", ",", "world", "."});
  CHECK(tokenize("thin-film (2.45 GHz)") == std::vector<std::string>{"thin-film", "(", "2.45", "GHz", ")"});
  CHECK(tokenize("  ") .empty());
  CHECK(tokenize("...") == std::vector<std::string>{".", ".", "."});
  CHECK(count_tokens("raw data dumps and HDT files") == 6);
  CHECK(word_tokens("a, b; (c)") == std::vector<std::string>{"a", "b", "c"});
}

TEST_CASE("token spans index the source text") {
  const std::string text = " (alpha) beta-gamma!";
  for (const auto& s : tokenize_spans(text)) {
    CHECK(s.begin < s.end);
    CHECK(s.end <= text.size());
    CHECK_FALSE(is_space(text[s.begin]));
  }
}

TEST_CASE("utf8 offsets count code points") {
  const std::string s = "caf\xC3\xA9 na\xC3\xAFve";  // café naïve
  CHECK(utf8_length(s) == 10);
  CHECK(utf8_byte_offset(s, 4) == 5);
  CHECK(utf8_codepoint_offset(s, 5) == 4);
  CHECK(utf8_substr(s, 5, 5) == "na\xC3\xAFve");
}

TEST_CASE("case-insensitive helpers are ASCII-only") {
  CHECK(find_icase("the EU-project PROMOTE", "promote") == 15);
  CHECK(find_icase("abc", "d") == std::string_view::npos);
  CHECK(equals_icase("NA", "na"));
  CHECK(to_lower("\xC3\x89T\xC3\x89") == "\xC3\x89t\xC3\x89");
  CHECK(collapse_whitespace("  a \n\t b  ") == "a b");
  CHECK(split("a,,b", ',') == std::vector<std::string>{"a", "", "b"});
}

TEST_CASE("sha256 matches known vectors") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
