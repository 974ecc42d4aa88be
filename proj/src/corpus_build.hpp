#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "abstract_fetch.hpp"
#include "kg_ingest.hpp"
#include "stats.hpp"

namespace kgqa {

/// Answer span in the context. Offsets count Unicode code points, which is
/// what SQuAD's answer_start means to its Python consumers.
struct AnchoredAnswer {
  std::string text;
  std::size_t start = 0;
  std::size_t length = 0;

  bool operator==(const AnchoredAnswer&) const = default;
};

/// First case-insensitive occurrence of the label in the abstract, carrying
/// the abstract's surface form.
std::optional<AnchoredAnswer> anchor_answer(std::string_view object_label, std::string_view abstract);

/// context[start .. start+length] == text, compared byte for byte.
bool span_matches(std::string_view context, const AnchoredAnswer& answer);

enum class BlocklistRule {
  whole_number_0_999,
  hyphen,
  single_alphabet,
  boolean_like,
  not_applicable,
  stopword,
  non_informative_phrase,
};

inline constexpr BlocklistRule kAllBlocklistRules[] = {
    BlocklistRule::whole_number_0_999, BlocklistRule::hyphen,   BlocklistRule::single_alphabet,
    BlocklistRule::boolean_like,       BlocklistRule::not_applicable, BlocklistRule::stopword,
    BlocklistRule::non_informative_phrase,
};

std::string to_string(BlocklistRule rule);
std::string describe(BlocklistRule rule);

const std::vector<std::string_view>& default_stopwords();
const char* stopword_list_version();
std::vector<std::string> default_non_informative_phrases();

/// Object labels that make poor extraction targets.
class Blocklist {
 public:
  Blocklist();
  explicit Blocklist(std::vector<std::string> phrases);

  /// One phrase per line; blank lines and '#' comments ignored.
  static Blocklist from_phrases_file(const std::filesystem::path& path);

  /// First matching rule in declaration order, or nullopt to keep.
  std::optional<BlocklistRule> check(std::string_view label) const;
  bool matches(BlocklistRule rule, std::string_view label) const;

  const std::set<std::string>& phrases() const { return phrases_; }

 private:
  std::set<std::string, std::less<>> stopwords_;
  std::set<std::string> phrases_;
};

struct CleanPair {
  std::string paper_id;
  std::string contribution_id;
  std::string predicate_label;
  std::string object_label;
  std::string context;
  AnchoredAnswer answer;

  bool operator==(const CleanPair&) const = default;
};

using CleanCorpus = std::vector<CleanPair>;

/// Keeps the first row per (predicate, object, context), preserving order.
CleanCorpus deduplicate(CleanCorpus pairs);

struct BuildResult {
  CleanCorpus corpus;
  StatsTable stats;
  // Drop cause ("no_abstract", "unanchored", "duplicate", rule id) -> count.
  std::vector<std::pair<std::string, std::size_t>> drops;

  std::size_t dropped(const std::string& cause) const;
  std::size_t dropped_by_blocklist() const;
};

/// join abstracts -> anchor -> drop unanchored -> deduplicate -> blocklist.
BuildResult build_clean_corpus(const RawCorpus& raw, const std::vector<AbstractRecord>& abstracts,
                               const Blocklist& blocklist);

StatsTable clean_corpus_stats(const CleanCorpus& corpus);

std::string serialize_clean_corpus(const CleanCorpus& corpus);
CleanCorpus parse_clean_corpus(std::string_view text);
std::string serialize_drop_report(const BuildResult& result);

}  // namespace kgqa
