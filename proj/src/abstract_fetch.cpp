#include "abstract_fetch.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <regex>
#include <thread>

#include "digest.hpp"
#include "error.hpp"
#include "text.hpp"

namespace kgqa {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(AbstractSource s) {
  switch (s) {
    case AbstractSource::crossref: return "crossref";
    case AbstractSource::semanticscholar: return "semanticscholar";
    case AbstractSource::local: return "local";
  }
  return "local";
}

std::string to_string(FetchStatus s) {
  switch (s) {
    case FetchStatus::found: return "found";
    case FetchStatus::not_found: return "not_found";
    case FetchStatus::error: return "error";
  }
  return "error";
}

AbstractSource parse_abstract_source(std::string_view s) {
  if (s == "crossref") return AbstractSource::crossref;
  if (s == "semanticscholar") return AbstractSource::semanticscholar;
  if (s == "local") return AbstractSource::local;
  throw Error(ErrorCode::schema, "unknown abstract source '" + std::string(s) + "'");
}

FetchStatus parse_fetch_status(std::string_view s) {
  if (s == "found") return FetchStatus::found;
  if (s == "not_found") return FetchStatus::not_found;
  if (s == "error") return FetchStatus::error;
  throw Error(ErrorCode::schema, "unknown fetch status '" + std::string(s) + "'");
}

// ---------------------------------------------------------------------------
// Normalization

namespace {

const std::regex& tag_pattern() {
  static const std::regex re(R"(<[/!?]?[A-Za-z][^<>]*>)");
  return re;
}

// JATS section headings ("Abstract", "Background") are not abstract text.
const std::regex& jats_title_pattern() {
  static const std::regex re(R"(<jats:title[^>]*>[^<]*</jats:title>)", std::regex::icase);
  return re;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x110000) {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string decode_entities(std::string_view s) {
  static const std::pair<std::string_view, std::string_view> kNamed[] = {
      {"amp", "&"}, {"lt", "<"}, {"gt", ">"}, {"quot", "\""}, {"apos", "'"}, {"nbsp", " "}};
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '&') {
      out.push_back(s[i]);
      continue;
    }
    const auto semi = s.find(';', i);
    if (semi == std::string_view::npos || semi - i > 10) {
      out.push_back('&');
      continue;
    }
    const std::string_view name = s.substr(i + 1, semi - i - 1);
    bool decoded = false;
    if (name.size() > 1 && name[0] == '#') {
      const bool hex = name[1] == 'x' || name[1] == 'X';
      const std::string digits(name.substr(hex ? 2 : 1));
      char* end = nullptr;
      const unsigned long cp = std::strtoul(digits.c_str(), &end, hex ? 16 : 10);
      if (!digits.empty() && end && *end == '\0' && cp > 0) {
        append_utf8(out, cp);
        decoded = true;
      }
    } else {
      for (const auto& [n, v] : kNamed)
        if (name == n) {
          out += v;
          decoded = true;
          break;
        }
    }
    if (decoded)
      i = semi;
    else
      out.push_back('&');
  }
  return out;
}

std::string clean_once(std::string_view raw) {
  std::string s = std::regex_replace(std::string(raw), jats_title_pattern(), " ");
  s = decode_entities(s);
  s = std::regex_replace(s, tag_pattern(), " ");
  return collapse_whitespace(s);
}

}  // namespace

std::string clean_abstract(std::string_view raw) {
  std::string current(raw);
  for (int i = 0; i < 8; ++i) {
    std::string next = clean_once(current);
    if (next == current) break;
    current = std::move(next);
  }
  return current;
}

bool contains_markup(std::string_view text) {
  return std::regex_search(text.begin(), text.end(), tag_pattern());
}

std::int64_t current_epoch_seconds() {
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH"); env && *env) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end && *end == '\0') return v;
  }
  return static_cast<std::int64_t>(std::time(nullptr));
}

// ---------------------------------------------------------------------------
// Cache

namespace {

ordered_json outcome_to_json(const FetchOutcome& o) {
  ordered_json j;
  j["paper_id"] = o.paper_id;
  j["status"] = to_string(o.status);
  j["detail"] = o.detail;
  if (o.record) {
    ordered_json r;
    r["abstract_text"] = o.record->abstract_text;
    r["source"] = to_string(o.record->source);
    r["fetched_at"] = o.record->fetched_at;
    j["abstract"] = std::move(r);
  }
  return j;
}

FetchOutcome outcome_from_json(const json& j) {
  FetchOutcome o;
  o.paper_id = j.at("paper_id").get<std::string>();
  o.status = parse_fetch_status(j.at("status").get<std::string>());
  o.detail = j.value("detail", "");
  if (auto it = j.find("abstract"); it != j.end() && it->is_object()) {
    AbstractRecord r;
    r.paper_id = o.paper_id;
    r.abstract_text = it->at("abstract_text").get<std::string>();
    r.source = parse_abstract_source(it->at("source").get<std::string>());
    r.fetched_at = it->at("fetched_at").get<std::int64_t>();
    o.record = std::move(r);
  }
  return o;
}

}  // namespace

AbstractCache::AbstractCache(std::filesystem::path file) : file_(std::move(file)) {
  if (!std::filesystem::exists(file_)) return;
  std::ifstream in(file_);
  std::string line;
  while (std::getline(in, line)) {
    if (trim_view(line).empty()) continue;
    try {
      const json j = json::parse(line);
      Entry e{outcome_from_json(j), j.value("cached_at", std::int64_t{0})};
      entries_[e.outcome.paper_id] = std::move(e);
    } catch (const std::exception&) {
      // A torn final line from an interrupted run is skipped, not fatal.
    }
  }
}

std::optional<FetchOutcome> AbstractCache::lookup(const std::string& paper_id, std::int64_t now,
                                                  std::int64_t negative_ttl_seconds) const {
  std::shared_lock lock(mutex_);
  auto it = entries_.find(paper_id);
  if (it == entries_.end()) return std::nullopt;
  const auto& e = it->second;
  if (e.outcome.status == FetchStatus::error) return std::nullopt;
  if (e.outcome.status == FetchStatus::not_found && now - e.cached_at > negative_ttl_seconds)
    return std::nullopt;
  return e.outcome;
}

void AbstractCache::store(const FetchOutcome& outcome, std::int64_t now) {
  std::unique_lock lock(mutex_);
  entries_[outcome.paper_id] = Entry{outcome, now};
  if (file_.empty()) return;
  if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
  std::ofstream out(file_, std::ios::app);
  if (!out) throw Error(ErrorCode::io, "cannot append to cache " + file_.string());
  ordered_json j = outcome_to_json(outcome);
  j["cached_at"] = now;
  out << j.dump() << '\n';
}

void AbstractCache::compact() {
  std::unique_lock lock(mutex_);
  if (file_.empty()) return;
  std::string text;
  for (const auto& [id, e] : entries_) {
    ordered_json j = outcome_to_json(e.outcome);
    j["cached_at"] = e.cached_at;
    text += j.dump() + "\n";
  }
  write_file_atomic(file_, text);
}

std::size_t AbstractCache::size() const {
  std::shared_lock lock(mutex_);
  return entries_.size();
}

// ---------------------------------------------------------------------------
// Service endpoints and response parsing

namespace {

std::string encode_doi(const std::string& doi) {
  std::string out;
  for (const auto& part : split(trim(doi), '/')) {
    if (!out.empty()) out.push_back('/');
    out += url_encode(part);
  }
  return out;
}

std::optional<std::string> non_empty_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) return std::nullopt;
  std::string s = it->get<std::string>();
  if (trim_view(s).empty()) return std::nullopt;
  return s;
}

std::string first_title(const json& item) {
  auto it = item.find("title");
  if (it == item.end()) return "";
  if (it->is_string()) return it->get<std::string>();
  if (it->is_array() && !it->empty() && (*it)[0].is_string()) return (*it)[0].get<std::string>();
  return "";
}

}  // namespace

std::string crossref_doi_url(const std::string& base, const std::string& doi) {
  return url_join(base, "/works/" + encode_doi(doi));
}

std::string crossref_title_url(const std::string& base, const std::string& title) {
  return url_join(base, "/works?query.bibliographic=" + url_encode(title) + "&rows=1");
}

std::string s2_doi_url(const std::string& base, const std::string& doi) {
  return url_join(base, "/graph/v1/paper/DOI:" + encode_doi(doi) + "?fields=title,abstract");
}

std::string s2_title_url(const std::string& base, const std::string& title) {
  return url_join(base, "/graph/v1/paper/search?query=" + url_encode(title) + "&fields=title,abstract&limit=1");
}

std::optional<std::string> extract_crossref_work(std::string_view body, std::string& detail) {
  const json root = json::parse(body);
  const auto& msg = root.at("message");
  detail = "crossref doi";
  return non_empty_string(msg, "abstract");
}

std::optional<std::string> extract_crossref_search(std::string_view body, std::string& detail) {
  const json root = json::parse(body);
  const auto& items = root.at("message").at("items");
  if (!items.is_array() || items.empty()) return std::nullopt;
  detail = "crossref title: first of " + std::to_string(items.size()) + " hit(s), \"" + first_title(items[0]) + "\"";
  return non_empty_string(items[0], "abstract");
}

std::optional<std::string> extract_s2_paper(std::string_view body, std::string& detail) {
  const json root = json::parse(body);
  detail = "semanticscholar doi";
  return non_empty_string(root, "abstract");
}

std::optional<std::string> extract_s2_search(std::string_view body, std::string& detail) {
  const json root = json::parse(body);
  const auto& data = root.at("data");
  if (!data.is_array() || data.empty()) return std::nullopt;
  detail = "semanticscholar title: first of " + std::to_string(data.size()) + " hit(s), \"" +
           first_title(data[0]) + "\"";
  return non_empty_string(data[0], "abstract");
}

// ---------------------------------------------------------------------------
// Fetcher

AbstractFetcher::AbstractFetcher(HttpTransport& transport, AbstractCache& cache, FetchOptions options)
    : transport_(transport),
      cache_(cache),
      options_(std::move(options)),
      crossref_limiter_(options_.rate),
      s2_limiter_(options_.rate) {}

std::int64_t AbstractFetcher::now() const { return options_.now ? options_.now : current_epoch_seconds(); }

AbstractFetcher::Attempt AbstractFetcher::query(
    const std::string& url, RateLimiter& limiter,
    std::optional<std::string> (*extract)(std::string_view, std::string&)) {
  Attempt a;
  for (int attempt = 0;; ++attempt) {
    limiter.acquire();
    HttpResponse res = transport_.get(url);
    const bool retryable = res.transport_failed() || res.status >= 500 || res.status == 429;
    if (retryable) {
      if (attempt < options_.retry.max_retries) {
        std::this_thread::sleep_for(options_.retry.delay_for(attempt));
        continue;
      }
      a.result = AttemptResult::error;
      a.detail = url + ": " + (res.transport_failed() ? res.error : "HTTP " + std::to_string(res.status));
      return a;
    }
    if (res.status != 200) {
      a.result = AttemptResult::not_found;
      a.detail = url + ": HTTP " + std::to_string(res.status);
      return a;
    }
    try {
      std::string detail;
      auto text = extract(res.body, detail);
      if (text) {
        std::string cleaned = clean_abstract(*text);
        if (!cleaned.empty()) {
          a.result = AttemptResult::found;
          a.text = std::move(cleaned);
          a.detail = detail;
          return a;
        }
      }
      a.result = AttemptResult::not_found;
      a.detail = url + ": no abstract in response";
    } catch (const std::exception& e) {
      a.result = AttemptResult::not_found;
      a.detail = url + ": unparseable response (" + e.what() + ")";
    }
    return a;
  }
}

FetchOutcome AbstractFetcher::resolve(const PaperRecord& paper) {
  struct Route {
    std::string url;
    RateLimiter* limiter;
    std::optional<std::string> (*extract)(std::string_view, std::string&);
    AbstractSource source;
  };
  std::vector<Route> routes;
  if (paper.doi && !trim_view(*paper.doi).empty()) {
    routes.push_back({crossref_doi_url(options_.crossref_base, *paper.doi), &crossref_limiter_,
                      &extract_crossref_work, AbstractSource::crossref});
    routes.push_back({s2_doi_url(options_.semanticscholar_base, *paper.doi), &s2_limiter_, &extract_s2_paper,
                      AbstractSource::semanticscholar});
  }
  if (!trim_view(paper.title).empty()) {
    routes.push_back({crossref_title_url(options_.crossref_base, paper.title), &crossref_limiter_,
                      &extract_crossref_search, AbstractSource::crossref});
    routes.push_back({s2_title_url(options_.semanticscholar_base, paper.title), &s2_limiter_,
                      &extract_s2_search, AbstractSource::semanticscholar});
  }

  FetchOutcome out;
  out.paper_id = paper.paper_id;
  if (routes.empty()) {
    out.status = FetchStatus::not_found;
    out.detail = "paper has neither doi nor title";
    return out;
  }
  std::vector<std::string> errors;
  for (const auto& route : routes) {
    Attempt a = query(route.url, *route.limiter, route.extract);
    if (a.result == AttemptResult::found) {
      out.status = FetchStatus::found;
      out.detail = a.detail;
      out.record = AbstractRecord{paper.paper_id, std::move(a.text), route.source, now()};
      return out;
    }
    if (a.result == AttemptResult::error) errors.push_back(a.detail);
  }
  if (!errors.empty()) {
    out.status = FetchStatus::error;
    out.detail = join(errors, "; ");
  } else {
    out.status = FetchStatus::not_found;
    out.detail = "no service returned an abstract";
  }
  return out;
}

FetchOutcome AbstractFetcher::fetch_abstract(const PaperRecord& paper) {
  if (auto cached = cache_.lookup(paper.paper_id, now(), options_.negative_ttl_seconds)) return *cached;
  FetchOutcome outcome = resolve(paper);
  // Errors are retryable and therefore not cached.
  if (outcome.status != FetchStatus::error) cache_.store(outcome, now());
  return outcome;
}

AbstractFetcher::BatchResult AbstractFetcher::fetch_all(const RawCorpus& corpus) {
  BatchResult result;
  const auto& papers = corpus.papers;
  std::vector<FetchOutcome> outcomes(papers.size());
  std::vector<char> from_cache(papers.size(), 0);
  std::atomic<std::size_t> next{0};
  const int workers = std::max(1, std::min<int>(options_.fanout, static_cast<int>(std::max<std::size_t>(1, papers.size()))));
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < papers.size(); i = next++) {
          try {
            if (auto cached = cache_.lookup(papers[i].paper_id, now(), options_.negative_ttl_seconds)) {
              outcomes[i] = std::move(*cached);
              from_cache[i] = 1;
              continue;
            }
            outcomes[i] = fetch_abstract(papers[i]);
          } catch (const std::exception& e) {
            outcomes[i] = FetchOutcome{papers[i].paper_id, FetchStatus::error, e.what(), std::nullopt};
          }
        }
      });
    }
  }

  result.coverage.total = papers.size();
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    auto& o = outcomes[i];
    result.coverage.cache_hits += from_cache[i];
    switch (o.status) {
      case FetchStatus::found: ++result.coverage.found; break;
      case FetchStatus::not_found: ++result.coverage.not_found; break;
      case FetchStatus::error: ++result.coverage.errors; break;
    }
    if (o.record) result.records.push_back(*o.record);
  }
  result.outcomes = std::move(outcomes);
  auto by_id = [](const auto& a, const auto& b) { return a.paper_id < b.paper_id; };
  std::sort(result.records.begin(), result.records.end(), by_id);
  std::sort(result.outcomes.begin(), result.outcomes.end(), by_id);
  return result;
}

// ---------------------------------------------------------------------------
// Abstracts file

std::string serialize_abstracts(const std::vector<AbstractRecord>& records) {
  ordered_json arr = ordered_json::array();
  for (const auto& r : records) {
    ordered_json j;
    j["paper_id"] = r.paper_id;
    j["abstract_text"] = r.abstract_text;
    j["source"] = to_string(r.source);
    j["fetched_at"] = r.fetched_at;
    arr.push_back(std::move(j));
  }
  return arr.dump(1) + "\n";
}

std::vector<AbstractRecord> parse_abstracts(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("abstracts: ") + e.what());
  }
  if (!root.is_array()) throw Error(ErrorCode::schema, "abstracts: expected a JSON array");
  std::vector<AbstractRecord> out;
  for (std::size_t i = 0; i < root.size(); ++i) {
    try {
      const auto& j = root[i];
      AbstractRecord r;
      r.paper_id = j.at("paper_id").get<std::string>();
      r.abstract_text = j.at("abstract_text").get<std::string>();
      r.source = parse_abstract_source(j.value("source", "local"));
      r.fetched_at = j.value("fetched_at", std::int64_t{0});
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::schema, "abstracts[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return out;
}

}  // namespace kgqa
