#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "http.hpp"
#include "stats.hpp"

namespace kgqa {

struct PaperRecord {
  std::string paper_id;
  std::string title;
  std::optional<std::string> doi;
  std::optional<std::string> research_field;

  bool operator==(const PaperRecord&) const = default;
};

/// One contribution statement. The subject is always a contribution node.
struct TripleRecord {
  std::string paper_id;
  std::string contribution_id;
  std::string predicate_label;
  std::string object_label;

  bool operator==(const TripleRecord&) const = default;
};

struct RawCorpus {
  std::vector<PaperRecord> papers;
  std::vector<TripleRecord> triples;

  bool operator==(const RawCorpus&) const = default;
  const PaperRecord* find_paper(std::string_view paper_id) const;
};

/// Sorts papers by id and triples by (paper, contribution, predicate, object).
void canonicalize(RawCorpus& corpus);

/// Throws Error(schema) naming the first offending record.
void validate(const RawCorpus& corpus);

std::string serialize_dump(const RawCorpus& corpus);
RawCorpus parse_dump(std::string_view text);
RawCorpus load_dump(const std::filesystem::path& path);
void save_dump(const RawCorpus& corpus, const std::filesystem::path& path);

struct IngestOptions {
  std::string api_base = "https://orkg.org";
  std::string statements_path = "/api/statements";
  std::string page_param = "page";
  std::string size_param = "size";
  int page_size = 100;
  int fanout = 4;
  RetryPolicy retry;

  std::string paper_class = "Paper";
  std::string contribution_class = "Contribution";
  std::string has_contribution_predicate = "P31";
  std::string doi_predicate = "P26";
  std::string research_field_predicate = "P30";

  std::string page_url(int page) const;
};

struct IngestResult {
  RawCorpus corpus;
  std::vector<std::string> warnings;
  int pages_fetched = 0;
  int pages_total = 0;
};

/// Crawls the paginated statements endpoint and keeps the statements whose
/// subject is a contribution, joined to their paper through the
/// has-contribution edge. Malformed pages are skipped with a warning; a page
/// that still fails at the network level after retries aborts the crawl
/// with Error(network) carrying the progress so far.
IngestResult fetch_contribution_triples(HttpTransport& transport, const IngestOptions& options);

StatsTable corpus_stats(const RawCorpus& corpus);

}  // namespace kgqa
