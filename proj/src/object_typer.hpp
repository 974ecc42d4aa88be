#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kgqa {

// Listed in precedence order: the first rule that applies wins.
enum class ObjectCategory {
  research_problem,
  url,
  location,
  year_date,
  number,
  count_measurement,
  noun,
  adjective,
  acronym,
  noun_phrase,
  adjective_phrase,
  sentence,
};

inline constexpr std::array<ObjectCategory, 12> kAllCategories = {
    ObjectCategory::research_problem, ObjectCategory::url,       ObjectCategory::location,
    ObjectCategory::year_date,        ObjectCategory::number,    ObjectCategory::count_measurement,
    ObjectCategory::noun,             ObjectCategory::adjective, ObjectCategory::acronym,
    ObjectCategory::noun_phrase,      ObjectCategory::adjective_phrase, ObjectCategory::sentence,
};

std::string to_string(ObjectCategory c);
std::optional<ObjectCategory> parse_category(std::string_view s);
/// Human-readable label used in rendered tables ("Noun phrase").
std::string display_name(ObjectCategory c);

enum class PosTag { noun, adjective, other };

class PosTagger {
 public:
  virtual ~PosTagger() = default;
  virtual PosTag tag(std::string_view token) const = 0;
};

/// Lexicon plus suffix heuristics. All-uppercase tokens are tagged `other`
/// so they can reach the acronym rule.
class LexiconPosTagger : public PosTagger {
 public:
  PosTag tag(std::string_view token) const override;
};

const PosTagger& default_tagger();

ObjectCategory categorize(std::string_view object_label, std::string_view predicate_label, const PosTagger& tagger);

struct CategoryShare {
  std::size_t count = 0;
  double percent = 0;
};

/// Every category is present in the result, including empty ones.
std::map<ObjectCategory, CategoryShare> distribution(const std::vector<ObjectCategory>& categories);

}  // namespace kgqa
