#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <vector>

#include "http.hpp"
#include "kg_ingest.hpp"

namespace kgqa {

enum class AbstractSource { crossref, semanticscholar, local };
enum class FetchStatus { found, not_found, error };

std::string to_string(AbstractSource s);
std::string to_string(FetchStatus s);
AbstractSource parse_abstract_source(std::string_view s);
FetchStatus parse_fetch_status(std::string_view s);

struct AbstractRecord {
  std::string paper_id;
  std::string abstract_text;
  AbstractSource source = AbstractSource::local;
  std::int64_t fetched_at = 0;  // unix seconds

  bool operator==(const AbstractRecord&) const = default;
};

struct FetchOutcome {
  std::string paper_id;
  FetchStatus status = FetchStatus::not_found;
  std::string detail;
  std::optional<AbstractRecord> record;  // present iff status == found

  bool operator==(const FetchOutcome&) const = default;
};

/// Markup stripped, entities decoded, whitespace collapsed. Applied to a
/// fixpoint, so clean_abstract(clean_abstract(x)) == clean_abstract(x).
std::string clean_abstract(std::string_view raw);

/// True if the text still contains something shaped like a markup tag.
bool contains_markup(std::string_view text);

/// Seconds since the epoch; honours SOURCE_DATE_EPOCH when set so that
/// recorded-fixture runs are reproducible.
std::int64_t current_epoch_seconds();

/// Append-only JSON-lines cache keyed by paper_id; the last line for a
/// paper wins. Concurrent readers, serialized writers.
class AbstractCache {
 public:
  AbstractCache() = default;  // in-memory only
  explicit AbstractCache(std::filesystem::path file);

  std::optional<FetchOutcome> lookup(const std::string& paper_id, std::int64_t now,
                                     std::int64_t negative_ttl_seconds) const;
  void store(const FetchOutcome& outcome, std::int64_t now);
  std::size_t size() const;

  /// Rewrites the file with one line per paper, sorted by paper_id.
  void compact();

 private:
  struct Entry {
    FetchOutcome outcome;
    std::int64_t cached_at = 0;
  };
  std::filesystem::path file_;
  mutable std::shared_mutex mutex_;
  std::map<std::string, Entry> entries_;
};

struct FetchOptions {
  std::string crossref_base = "https://api.crossref.org";
  std::string semanticscholar_base = "https://api.semanticscholar.org";
  int fanout = 4;
  double rate = 5.0;  // requests per second, per service
  RetryPolicy retry;
  std::int64_t negative_ttl_seconds = 30LL * 24 * 3600;
  std::int64_t now = 0;  // 0 means current_epoch_seconds()
};

struct CoverageReport {
  std::size_t total = 0;
  std::size_t found = 0;
  std::size_t not_found = 0;
  std::size_t errors = 0;
  std::size_t cache_hits = 0;

  double coverage() const { return total ? static_cast<double>(found) / static_cast<double>(total) : 0.0; }
};

/// Resolves papers to abstracts: DOI lookups first (Crossref, then
/// Semantic Scholar), then title lookups in the same order.
class AbstractFetcher {
 public:
  AbstractFetcher(HttpTransport& transport, AbstractCache& cache, FetchOptions options);

  FetchOutcome fetch_abstract(const PaperRecord& paper);

  struct BatchResult {
    std::vector<AbstractRecord> records;   // sorted by paper_id
    std::vector<FetchOutcome> outcomes;    // sorted by paper_id
    CoverageReport coverage;
  };
  BatchResult fetch_all(const RawCorpus& corpus);

 private:
  enum class AttemptResult { found, not_found, error };
  struct Attempt {
    AttemptResult result = AttemptResult::not_found;
    std::string text;
    std::string detail;
  };

  FetchOutcome resolve(const PaperRecord& paper);
  Attempt query(const std::string& url, RateLimiter& limiter,
                std::optional<std::string> (*extract)(std::string_view, std::string&));
  std::int64_t now() const;

  HttpTransport& transport_;
  AbstractCache& cache_;
  FetchOptions options_;
  RateLimiter crossref_limiter_;
  RateLimiter s2_limiter_;
};

// Response parsers, exposed for testing. They return the raw abstract (or
// nullopt) and describe which hit was taken in `detail`.
std::optional<std::string> extract_crossref_work(std::string_view body, std::string& detail);
std::optional<std::string> extract_crossref_search(std::string_view body, std::string& detail);
std::optional<std::string> extract_s2_paper(std::string_view body, std::string& detail);
std::optional<std::string> extract_s2_search(std::string_view body, std::string& detail);

std::string crossref_doi_url(const std::string& base, const std::string& doi);
std::string crossref_title_url(const std::string& base, const std::string& title);
std::string s2_doi_url(const std::string& base, const std::string& doi);
std::string s2_title_url(const std::string& base, const std::string& title);

std::string serialize_abstracts(const std::vector<AbstractRecord>& records);
std::vector<AbstractRecord> parse_abstracts(std::string_view text);

}  // namespace kgqa
