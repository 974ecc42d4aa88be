#include "corpus_build.hpp"

#include <json.hpp>

#include <fstream>
#include <map>
#include <set>
#include <tuple>

#include "error.hpp"
#include "text.hpp"

namespace kgqa {

using nlohmann::json;
using nlohmann::ordered_json;

std::optional<AnchoredAnswer> anchor_answer(std::string_view object_label, std::string_view abstract) {
  if (object_label.empty()) return std::nullopt;
  const std::size_t pos = find_icase(abstract, object_label);
  if (pos == std::string_view::npos) return std::nullopt;
  AnchoredAnswer a;
  a.text = std::string(abstract.substr(pos, object_label.size()));
  a.start = utf8_codepoint_offset(abstract, pos);
  a.length = utf8_length(a.text);
  return a;
}

bool span_matches(std::string_view context, const AnchoredAnswer& answer) {
  if (answer.length == 0) return false;
  if (answer.start + answer.length > utf8_length(context)) return false;
  return utf8_substr(context, answer.start, answer.length) == answer.text;
}

std::string to_string(BlocklistRule rule) {
  switch (rule) {
    case BlocklistRule::whole_number_0_999: return "whole_number_0_999";
    case BlocklistRule::hyphen: return "hyphen";
    case BlocklistRule::single_alphabet: return "single_alphabet";
    case BlocklistRule::boolean_like: return "boolean_like";
    case BlocklistRule::not_applicable: return "not_applicable";
    case BlocklistRule::stopword: return "stopword";
    case BlocklistRule::non_informative_phrase: return "non_informative_phrase";
  }
  return "unknown";
}

std::string describe(BlocklistRule rule) {
  switch (rule) {
    case BlocklistRule::whole_number_0_999: return "whole number between 0 and 999";
    case BlocklistRule::hyphen: return "the hyphen symbol";
    case BlocklistRule::single_alphabet: return "a single letter";
    case BlocklistRule::boolean_like: return "boolean value (t/f/yes/no/true/false)";
    case BlocklistRule::not_applicable: return "not-applicable marker";
    case BlocklistRule::stopword: return "stop word";
    case BlocklistRule::non_informative_phrase: return "non-informative phrase";
  }
  return "";
}

Blocklist::Blocklist() : Blocklist(default_non_informative_phrases()) {}

Blocklist::Blocklist(std::vector<std::string> phrases) {
  for (auto w : default_stopwords()) stopwords_.emplace(w);
  for (const auto& p : phrases) {
    std::string norm = to_lower(collapse_whitespace(p));
    if (!norm.empty()) phrases_.insert(std::move(norm));
  }
}

Blocklist Blocklist::from_phrases_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io, "cannot open phrases file " + path.string());
  std::vector<std::string> phrases;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim_view(line);
    if (t.empty() || t.front() == '#') continue;
    phrases.emplace_back(t);
  }
  return Blocklist(std::move(phrases));
}

bool Blocklist::matches(BlocklistRule rule, std::string_view raw) const {
  const std::string_view label = trim_view(raw);
  switch (rule) {
    case BlocklistRule::whole_number_0_999: {
      if (label.empty()) return false;
      for (char c : label)
        if (!is_ascii_digit(c)) return false;
      std::size_t first = label.find_first_not_of('0');
      if (first == std::string_view::npos) return true;  // "0", "000"
      return label.size() - first <= 3;
    }
    case BlocklistRule::hyphen:
      return label == "-";
    case BlocklistRule::single_alphabet:
      return label.size() == 1 && is_ascii_alpha(label[0]);
    case BlocklistRule::boolean_like: {
      const std::string l = to_lower(label);
      return l == "t" || l == "f" || l == "yes" || l == "no" || l == "true" || l == "false";
    }
    case BlocklistRule::not_applicable:
      return equals_icase(label, "na");
    case BlocklistRule::stopword:
      return stopwords_.count(to_lower(label)) > 0;
    case BlocklistRule::non_informative_phrase:
      return phrases_.count(to_lower(collapse_whitespace(label))) > 0;
  }
  return false;
}

std::optional<BlocklistRule> Blocklist::check(std::string_view label) const {
  for (auto rule : kAllBlocklistRules)
    if (matches(rule, label)) return rule;
  return std::nullopt;
}

CleanCorpus deduplicate(CleanCorpus pairs) {
  std::set<std::tuple<std::string_view, std::string_view, std::string_view>> seen;
  CleanCorpus out;
  out.reserve(pairs.size());
  // Keys view into `pairs`, which outlives `seen`; rows are copied out.
  for (const auto& p : pairs) {
    if (seen.emplace(p.predicate_label, p.object_label, p.context).second) out.push_back(p);
  }
  return out;
}

std::size_t BuildResult::dropped(const std::string& cause) const {
  for (const auto& [k, v] : drops)
    if (k == cause) return v;
  return 0;
}

std::size_t BuildResult::dropped_by_blocklist() const {
  std::size_t n = 0;
  for (auto rule : kAllBlocklistRules) n += dropped(to_string(rule));
  return n;
}

BuildResult build_clean_corpus(const RawCorpus& raw, const std::vector<AbstractRecord>& abstracts,
                               const Blocklist& blocklist) {
  std::map<std::string_view, std::string> context_by_paper;
  for (const auto& a : abstracts) {
    std::string text = collapse_whitespace(a.abstract_text);
    if (!text.empty()) context_by_paper.emplace(a.paper_id, std::move(text));
  }

  std::size_t no_abstract = 0, unanchored = 0;
  CleanCorpus anchored;
  for (const auto& t : raw.triples) {
    auto it = context_by_paper.find(t.paper_id);
    if (it == context_by_paper.end()) {
      ++no_abstract;
      continue;
    }
    const std::string label = collapse_whitespace(t.object_label);
    auto answer = anchor_answer(label, it->second);
    if (!answer) {
      ++unanchored;
      continue;
    }
    anchored.push_back({t.paper_id, t.contribution_id, collapse_whitespace(t.predicate_label), label, it->second,
                        std::move(*answer)});
  }

  const std::size_t before_dedup = anchored.size();
  CleanCorpus unique = deduplicate(std::move(anchored));
  const std::size_t duplicates = before_dedup - unique.size();

  std::map<BlocklistRule, std::size_t> rule_drops;
  BuildResult result;
  for (auto& p : unique) {
    if (auto rule = blocklist.check(p.object_label)) {
      ++rule_drops[*rule];
      continue;
    }
    result.corpus.push_back(std::move(p));
  }

  result.drops.emplace_back("no_abstract", no_abstract);
  result.drops.emplace_back("unanchored", unanchored);
  result.drops.emplace_back("duplicate", duplicates);
  for (auto rule : kAllBlocklistRules) result.drops.emplace_back(to_string(rule), rule_drops[rule]);
  result.stats = clean_corpus_stats(result.corpus);
  return result;
}

StatsTable clean_corpus_stats(const CleanCorpus& corpus) {
  constexpr std::size_t kLongAbstractTokens = 510;
  std::set<std::string_view> papers, contributions, predicates, objects, contexts, long_contexts;
  double predicate_tokens = 0, object_tokens = 0, abstract_tokens = 0;
  std::size_t long_rows = 0;
  std::map<std::string_view, std::size_t> context_tokens;
  for (const auto& p : corpus) {
    papers.insert(p.paper_id);
    contributions.insert(p.contribution_id);
    predicates.insert(p.predicate_label);
    objects.insert(p.object_label);
    predicate_tokens += static_cast<double>(count_tokens(p.predicate_label));
    object_tokens += static_cast<double>(count_tokens(p.object_label));
    auto [it, inserted] = context_tokens.try_emplace(p.context, 0);
    if (inserted) {
      it->second = count_tokens(p.context);
      abstract_tokens += static_cast<double>(it->second);
    }
    if (it->second > kLongAbstractTokens) {
      ++long_rows;
      long_contexts.insert(p.context);
    }
  }
  const double n = static_cast<double>(corpus.size());
  const double n_ctx = static_cast<double>(context_tokens.size());
  StatsTable t;
  t.add("unique_papers", static_cast<double>(papers.size()));
  t.add("unique_contributions", static_cast<double>(contributions.size()));
  t.add("pairs", n);
  t.add("unique_predicate_labels", static_cast<double>(predicates.size()));
  t.add("unique_object_labels", static_cast<double>(objects.size()));
  t.add("avg_tokens_per_predicate_label", n ? predicate_tokens / n : 0.0);
  t.add("avg_tokens_per_object_label", n ? object_tokens / n : 0.0);
  t.add("unique_abstracts", n_ctx);
  t.add("avg_tokens_per_abstract", n_ctx ? abstract_tokens / n_ctx : 0.0);
  t.add("abstracts_over_510_tokens", static_cast<double>(long_rows));
  t.add("unique_abstracts_over_510_tokens", static_cast<double>(long_contexts.size()));
  return t;
}

std::string serialize_clean_corpus(const CleanCorpus& corpus) {
  ordered_json arr = ordered_json::array();
  for (const auto& p : corpus) {
    ordered_json j;
    j["paper_id"] = p.paper_id;
    j["contribution_id"] = p.contribution_id;
    j["predicate_label"] = p.predicate_label;
    j["object_label"] = p.object_label;
    j["context"] = p.context;
    j["answer"] = {{"text", p.answer.text}, {"start", p.answer.start}, {"length", p.answer.length}};
    arr.push_back(std::move(j));
  }
  return arr.dump(1) + "\n";
}

CleanCorpus parse_clean_corpus(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("clean corpus: ") + e.what());
  }
  if (!root.is_array()) throw Error(ErrorCode::schema, "clean corpus: expected a JSON array");
  CleanCorpus out;
  for (std::size_t i = 0; i < root.size(); ++i) {
    try {
      const auto& j = root[i];
      CleanPair p;
      p.paper_id = j.at("paper_id").get<std::string>();
      p.contribution_id = j.at("contribution_id").get<std::string>();
      p.predicate_label = j.at("predicate_label").get<std::string>();
      p.object_label = j.at("object_label").get<std::string>();
      p.context = j.at("context").get<std::string>();
      const auto& a = j.at("answer");
      p.answer = {a.at("text").get<std::string>(), a.at("start").get<std::size_t>(),
                  a.at("length").get<std::size_t>()};
      if (!span_matches(p.context, p.answer))
        throw Error(ErrorCode::schema, "clean corpus[" + std::to_string(i) + "]: answer span does not match context");
      out.push_back(std::move(p));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::schema, "clean corpus[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return out;
}

std::string serialize_drop_report(const BuildResult& result) {
  ordered_json j = ordered_json::object();
  for (const auto& [cause, n] : result.drops) j[cause] = n;
  return j.dump(1) + "\n";
}

}  // namespace kgqa
