#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "corpus_build.hpp"
#include "object_typer.hpp"

namespace kgqa {

enum class QuestionVariant { unchanged, none, what, which, how };

inline constexpr std::array<QuestionVariant, 5> kAllVariants = {
    QuestionVariant::unchanged, QuestionVariant::none, QuestionVariant::what, QuestionVariant::which,
    QuestionVariant::how};

std::string to_string(QuestionVariant v);
std::optional<QuestionVariant> parse_variant(std::string_view s);

/// Template question for a predicate.
///   unchanged: the predicate verbatim
///   none:      "Predicate?"
///   what/which/how: "What predicate?". The predicate's first letter is
///              lowercased unless its first word is an acronym ("HMM type").
/// A trailing "?" is never doubled.
std::string make_question(std::string_view predicate_label, QuestionVariant variant);

struct QAInstance {
  std::string id;
  QuestionVariant variant = QuestionVariant::unchanged;
  std::string question;
  std::string context;
  AnchoredAnswer answer;
  std::string predicate_label;
  ObjectCategory category = ObjectCategory::sentence;

  bool operator==(const QAInstance&) const = default;
};

std::string instance_id(const CleanPair& pair, QuestionVariant variant);

/// One homogeneous instance list per requested variant, each with one
/// instance per pair, in corpus order.
std::map<QuestionVariant, std::vector<QAInstance>> generate_all(
    const CleanCorpus& corpus, const PosTagger& tagger,
    const std::vector<QuestionVariant>& variants = {kAllVariants.begin(), kAllVariants.end()});

}  // namespace kgqa
