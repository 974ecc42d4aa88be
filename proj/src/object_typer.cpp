#include "object_typer.hpp"

#include <algorithm>

#include "text.hpp"

namespace kgqa {

// lexicon.cpp
bool lexicon_is_noun(std::string_view lower);
bool lexicon_is_adjective(std::string_view lower);
bool lexicon_is_other(std::string_view lower);

std::string to_string(ObjectCategory c) {
  switch (c) {
    case ObjectCategory::research_problem: return "research_problem";
    case ObjectCategory::url: return "url";
    case ObjectCategory::location: return "location";
    case ObjectCategory::year_date: return "year_date";
    case ObjectCategory::number: return "number";
    case ObjectCategory::count_measurement: return "count_measurement";
    case ObjectCategory::noun: return "noun";
    case ObjectCategory::adjective: return "adjective";
    case ObjectCategory::acronym: return "acronym";
    case ObjectCategory::noun_phrase: return "noun_phrase";
    case ObjectCategory::adjective_phrase: return "adjective_phrase";
    case ObjectCategory::sentence: return "sentence";
  }
  return "sentence";
}

std::optional<ObjectCategory> parse_category(std::string_view s) {
  for (auto c : kAllCategories)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

std::string display_name(ObjectCategory c) {
  switch (c) {
    case ObjectCategory::research_problem: return "Research problem";
    case ObjectCategory::url: return "URL";
    case ObjectCategory::location: return "Location";
    case ObjectCategory::year_date: return "Year/date";
    case ObjectCategory::number: return "Number";
    case ObjectCategory::count_measurement: return "Count/measurement";
    case ObjectCategory::noun: return "Noun";
    case ObjectCategory::adjective: return "Adjective";
    case ObjectCategory::acronym: return "Acronym";
    case ObjectCategory::noun_phrase: return "Noun phrase";
    case ObjectCategory::adjective_phrase: return "Adjective phrase";
    case ObjectCategory::sentence: return "Sentence";
  }
  return "";
}

namespace {

bool ends_with(std::string_view s, std::string_view suffix) {
  return s.size() > suffix.size() + 1 && s.substr(s.size() - suffix.size()) == suffix;
}

bool any_suffix(std::string_view w, std::initializer_list<std::string_view> suffixes) {
  return std::any_of(suffixes.begin(), suffixes.end(), [&](std::string_view s) { return ends_with(w, s); });
}

std::optional<PosTag> lexicon_tag(std::string_view w) {
  if (lexicon_is_other(w)) return PosTag::other;
  if (lexicon_is_adjective(w)) return PosTag::adjective;
  if (lexicon_is_noun(w)) return PosTag::noun;
  // Plural forms of known nouns.
  if (w.size() > 3 && w.substr(w.size() - 3) == "ies" && lexicon_is_noun(std::string(w.substr(0, w.size() - 3)) + "y"))
    return PosTag::noun;
  if (w.size() > 2 && w.back() == 's' && lexicon_is_noun(w.substr(0, w.size() - 1))) return PosTag::noun;
  if (w.size() > 3 && w.substr(w.size() - 2) == "es" && lexicon_is_noun(w.substr(0, w.size() - 2)))
    return PosTag::noun;
  return std::nullopt;
}

}  // namespace

PosTag LexiconPosTagger::tag(std::string_view token) const {
  // Hyphenated compounds take the tag of their head (last) segment.
  if (const auto dash = token.rfind('-'); dash != std::string_view::npos && dash + 1 < token.size())
    token = token.substr(dash + 1);
  if (token.empty()) return PosTag::other;

  bool has_alpha = false, has_lower = false, has_non_alpha = false;
  for (char c : token) {
    if (is_ascii_alpha(c)) {
      has_alpha = true;
      has_lower |= (c >= 'a' && c <= 'z');
    } else if (!(static_cast<unsigned char>(c) & 0x80) && c != '\'') {
      has_non_alpha = true;
    }
  }
  if (!has_alpha || has_non_alpha) return PosTag::other;
  if (!has_lower && token.size() >= 2) return PosTag::other;  // acronym candidate

  const std::string w = to_lower(token);
  if (auto t = lexicon_tag(w)) return *t;

  if (any_suffix(w, {"ics", "tion", "sion", "ment", "ness", "ity", "ism", "ist", "ance", "ence", "ogy", "ure",
                     "ship", "hood", "dom", "age", "ery", "er", "or", "ing", "ers", "ors", "ists", "ments",
                     "tions", "sions", "ities", "ances", "ences"}))
    return PosTag::noun;
  if (any_suffix(w, {"ous", "ive", "ical", "al", "ic", "able", "ible", "ful", "less", "ar", "ish", "ent", "ant"}))
    return PosTag::adjective;
  if (any_suffix(w, {"ed", "ly"})) return PosTag::other;
  // Open-class fallback: unknown alphabetic words are overwhelmingly nouns
  // or proper nouns in scholarly metadata.
  return PosTag::noun;
}

const PosTagger& default_tagger() {
  static const LexiconPosTagger tagger;
  return tagger;
}

namespace {

bool is_location_predicate(std::string_view predicate) {
  static constexpr std::string_view kLocationPredicates[] = {
      "country", "city", "location", "continent", "has location", "study location", "countries"};
  const std::string p = to_lower(collapse_whitespace(predicate));
  return std::find(std::begin(kLocationPredicates), std::end(kLocationPredicates), p) !=
         std::end(kLocationPredicates);
}

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), is_ascii_digit);
}

bool is_acronym(std::string_view token) {
  if (token.size() < 2) return false;
  bool letter = false;
  for (char c : token) {
    if (c >= 'A' && c <= 'Z')
      letter = true;
    else if (!is_ascii_digit(c))
      return false;
  }
  return letter;
}

}  // namespace

ObjectCategory categorize(std::string_view object_label, std::string_view predicate_label, const PosTagger& tagger) {
  const std::string label = collapse_whitespace(object_label);

  if (equals_icase(collapse_whitespace(predicate_label), "has research problem")) return ObjectCategory::research_problem;
  if (starts_with_icase(label, "http")) return ObjectCategory::url;
  if (is_location_predicate(predicate_label)) return ObjectCategory::location;

  if (all_digits(label) && label.size() <= 4) {
    const int v = std::stoi(label);
    if (v >= 1000 && v <= 2100) return ObjectCategory::year_date;
  }

  std::string stripped;
  for (char c : label)
    if (c != '-' && c != '.' && c != ',') stripped.push_back(c);
  if (all_digits(stripped)) return ObjectCategory::number;

  const bool has_digit = std::any_of(label.begin(), label.end(), is_ascii_digit);
  if (has_digit) return ObjectCategory::count_measurement;  // digits mixed with anything else

  const auto tokens = word_tokens(label);
  if (tokens.size() == 1) {
    const PosTag t = tagger.tag(tokens[0]);
    if (t == PosTag::noun) return ObjectCategory::noun;
    if (t == PosTag::adjective) return ObjectCategory::adjective;
    if (is_acronym(tokens[0])) return ObjectCategory::acronym;
  }
  if (tokens.size() >= 2 && tokens.size() <= 5) {
    const PosTag last = tagger.tag(tokens.back());
    if (last == PosTag::noun) return ObjectCategory::noun_phrase;
    if (last == PosTag::adjective) return ObjectCategory::adjective_phrase;
  }
  return ObjectCategory::sentence;
}

std::map<ObjectCategory, CategoryShare> distribution(const std::vector<ObjectCategory>& categories) {
  std::map<ObjectCategory, CategoryShare> out;
  for (auto c : kAllCategories) out[c] = {};
  for (auto c : categories) ++out[c].count;
  if (!categories.empty())
    for (auto& [c, share] : out)
      share.percent = 100.0 * static_cast<double>(share.count) / static_cast<double>(categories.size());
  return out;
}

}  // namespace kgqa
