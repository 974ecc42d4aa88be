#include "question_gen.hpp"

#include <set>

#include "digest.hpp"
#include "error.hpp"
#include "text.hpp"

namespace kgqa {

std::string to_string(QuestionVariant v) {
  switch (v) {
    case QuestionVariant::unchanged: return "unchanged";
    case QuestionVariant::none: return "none";
    case QuestionVariant::what: return "what";
    case QuestionVariant::which: return "which";
    case QuestionVariant::how: return "how";
  }
  return "unchanged";
}

std::optional<QuestionVariant> parse_variant(std::string_view s) {
  for (auto v : kAllVariants)
    if (to_string(v) == s) return v;
  return std::nullopt;
}

namespace {

bool first_word_is_acronym(std::string_view s) {
  const auto end = s.find(' ');
  const std::string_view word = s.substr(0, end);
  int upper = 0;
  for (char c : word) upper += (c >= 'A' && c <= 'Z');
  return upper >= 2;
}

std::string with_question_mark(std::string s) {
  if (s.empty() || s.back() != '?') s.push_back('?');
  return s;
}

}  // namespace

std::string make_question(std::string_view predicate_label, QuestionVariant variant) {
  if (variant == QuestionVariant::unchanged) return std::string(predicate_label);

  std::string predicate = trim(predicate_label);
  if (predicate.empty()) return variant == QuestionVariant::none ? "?" : to_string(variant) + "?";

  if (variant == QuestionVariant::none) {
    predicate[0] = upper_char(predicate[0]);
    return with_question_mark(std::move(predicate));
  }

  if (!first_word_is_acronym(predicate)) predicate[0] = lower_char(predicate[0]);
  std::string word = to_string(variant);
  word[0] = upper_char(word[0]);
  return with_question_mark(word + " " + predicate);
}

std::string instance_id(const CleanPair& pair, QuestionVariant variant) {
  const std::string key = pair.paper_id + '\x1f' + pair.contribution_id + '\x1f' + pair.predicate_label + '\x1f' +
                          pair.object_label + '\x1f' + std::to_string(pair.answer.start) + '\x1f' +
                          to_string(variant);
  return sha256_hex(key).substr(0, 24);
}

std::map<QuestionVariant, std::vector<QAInstance>> generate_all(const CleanCorpus& corpus,
                                                                const PosTagger& tagger,
                                                                const std::vector<QuestionVariant>& variants) {
  std::vector<ObjectCategory> categories;
  categories.reserve(corpus.size());
  for (const auto& p : corpus) categories.push_back(categorize(p.object_label, p.predicate_label, tagger));

  std::map<QuestionVariant, std::vector<QAInstance>> out;
  for (auto v : variants) {
    auto& list = out[v];
    list.reserve(corpus.size());
    std::set<std::string> ids;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      const auto& p = corpus[i];
      QAInstance q{instance_id(p, v), v, make_question(p.predicate_label, v), p.context, p.answer,
                   p.predicate_label, categories[i]};
      if (!ids.insert(q.id).second)
        throw Error(ErrorCode::internal, "instance id collision for pair " + std::to_string(i) +
                                             "; is the corpus deduplicated?");
      list.push_back(std::move(q));
    }
  }
  return out;
}

}  // namespace kgqa
