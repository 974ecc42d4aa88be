#include "kg_ingest.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "digest.hpp"
#include "error.hpp"
#include "text.hpp"

namespace kgqa {

using nlohmann::json;
using nlohmann::ordered_json;

const PaperRecord* RawCorpus::find_paper(std::string_view paper_id) const {
  auto it = std::lower_bound(papers.begin(), papers.end(), paper_id,
                             [](const PaperRecord& p, std::string_view id) { return p.paper_id < id; });
  if (it != papers.end() && it->paper_id == paper_id) return &*it;
  // Tolerate non-canonical corpora.
  for (const auto& p : papers)
    if (p.paper_id == paper_id) return &p;
  return nullptr;
}

void canonicalize(RawCorpus& corpus) {
  std::sort(corpus.papers.begin(), corpus.papers.end(),
            [](const PaperRecord& a, const PaperRecord& b) { return a.paper_id < b.paper_id; });
  std::sort(corpus.triples.begin(), corpus.triples.end(), [](const TripleRecord& a, const TripleRecord& b) {
    return std::tie(a.paper_id, a.contribution_id, a.predicate_label, a.object_label) <
           std::tie(b.paper_id, b.contribution_id, b.predicate_label, b.object_label);
  });
}

void validate(const RawCorpus& corpus) {
  std::set<std::string_view> ids;
  for (std::size_t i = 0; i < corpus.papers.size(); ++i) {
    const auto& p = corpus.papers[i];
    const std::string where = "papers[" + std::to_string(i) + "]";
    if (p.paper_id.empty()) throw Error(ErrorCode::schema, where + ": empty paper_id");
    if (!ids.insert(p.paper_id).second)
      throw Error(ErrorCode::schema, where + ": duplicate paper_id '" + p.paper_id + "'");
    if (trim_view(p.title).empty() && (!p.doi || trim_view(*p.doi).empty()))
      throw Error(ErrorCode::schema, where + ": paper '" + p.paper_id + "' has neither title nor doi");
  }
  for (std::size_t i = 0; i < corpus.triples.size(); ++i) {
    const auto& t = corpus.triples[i];
    const std::string where = "triples[" + std::to_string(i) + "]";
    if (!ids.count(t.paper_id))
      throw Error(ErrorCode::schema, where + ": unknown paper_id '" + t.paper_id + "'");
    if (t.contribution_id.empty()) throw Error(ErrorCode::schema, where + ": empty contribution_id");
    if (trim_view(t.predicate_label).empty()) throw Error(ErrorCode::schema, where + ": empty predicate_label");
    if (trim_view(t.object_label).empty()) throw Error(ErrorCode::schema, where + ": empty object_label");
  }
}

namespace {

ordered_json optional_json(const std::optional<std::string>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string required_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    throw Error(ErrorCode::schema, where + ": missing or non-string field '" + key + "'");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(ErrorCode::schema, where + ": field '" + key + "' must be a string or null");
  return it->get<std::string>();
}

}  // namespace

std::string serialize_dump(const RawCorpus& corpus) {
  ordered_json root;
  root["papers"] = ordered_json::array();
  for (const auto& p : corpus.papers) {
    ordered_json j;
    j["paper_id"] = p.paper_id;
    j["title"] = p.title;
    j["doi"] = optional_json(p.doi);
    j["research_field"] = optional_json(p.research_field);
    root["papers"].push_back(std::move(j));
  }
  root["triples"] = ordered_json::array();
  for (const auto& t : corpus.triples) {
    ordered_json j;
    j["paper_id"] = t.paper_id;
    j["contribution_id"] = t.contribution_id;
    j["predicate_label"] = t.predicate_label;
    j["object_label"] = t.object_label;
    root["triples"].push_back(std::move(j));
  }
  return root.dump(1) + "\n";
}

RawCorpus parse_dump(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("dump: ") + e.what());
  }
  if (!root.is_object() || !root.contains("papers") || !root.contains("triples") ||
      !root["papers"].is_array() || !root["triples"].is_array())
    throw Error(ErrorCode::schema, "dump: expected top-level arrays 'papers' and 'triples'");

  RawCorpus corpus;
  const auto& papers = root["papers"];
  for (std::size_t i = 0; i < papers.size(); ++i) {
    const std::string where = "papers[" + std::to_string(i) + "]";
    if (!papers[i].is_object()) throw Error(ErrorCode::schema, where + ": not an object");
    PaperRecord p;
    p.paper_id = required_string(papers[i], "paper_id", where);
    p.title = optional_string(papers[i], "title", where).value_or("");
    p.doi = optional_string(papers[i], "doi", where);
    p.research_field = optional_string(papers[i], "research_field", where);
    corpus.papers.push_back(std::move(p));
  }
  const auto& triples = root["triples"];
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const std::string where = "triples[" + std::to_string(i) + "]";
    if (!triples[i].is_object()) throw Error(ErrorCode::schema, where + ": not an object");
    TripleRecord t;
    t.paper_id = required_string(triples[i], "paper_id", where);
    t.contribution_id = required_string(triples[i], "contribution_id", where);
    t.predicate_label = collapse_whitespace(required_string(triples[i], "predicate_label", where));
    t.object_label = collapse_whitespace(required_string(triples[i], "object_label", where));
    corpus.triples.push_back(std::move(t));
  }
  // Validate before sorting so error indices refer to the file as written.
  validate(corpus);
  canonicalize(corpus);
  return corpus;
}

RawCorpus load_dump(const std::filesystem::path& path) { return parse_dump(read_file(path)); }

void save_dump(const RawCorpus& corpus, const std::filesystem::path& path) {
  write_file_atomic(path, serialize_dump(corpus));
}

std::string IngestOptions::page_url(int page) const {
  std::string url = url_join(api_base, statements_path);
  url += url.find('?') == std::string::npos ? '?' : '&';
  url += page_param + "=" + std::to_string(page) + "&" + size_param + "=" + std::to_string(page_size);
  return url;
}

namespace {

struct Node {
  std::string id;
  std::string label;
  std::vector<std::string> classes;

  bool has_class(const std::string& c) const {
    return std::find(classes.begin(), classes.end(), c) != classes.end();
  }
};

struct Statement {
  Node subject;
  Node predicate;
  Node object;
};

struct Page {
  std::vector<Statement> statements;
  std::optional<int> total_pages;
  bool last = false;
};

Node parse_node(const json& j) {
  Node n;
  if (!j.is_object()) throw std::runtime_error("statement node is not an object");
  n.id = j.at("id").get<std::string>();
  if (auto it = j.find("label"); it != j.end() && it->is_string()) n.label = it->get<std::string>();
  if (auto it = j.find("classes"); it != j.end() && it->is_array())
    for (const auto& c : *it)
      if (c.is_string()) n.classes.push_back(c.get<std::string>());
  return n;
}

// Throws on anything that does not look like a statements page.
Page parse_page(const std::string& body) {
  const json root = json::parse(body);
  if (!root.is_object() || !root.contains("content") || !root["content"].is_array())
    throw std::runtime_error("missing 'content' array");
  Page page;
  for (const auto& s : root["content"]) {
    page.statements.push_back(
        {parse_node(s.at("subject")), parse_node(s.at("predicate")), parse_node(s.at("object"))});
  }
  if (auto it = root.find("totalPages"); it != root.end() && it->is_number_integer())
    page.total_pages = it->get<int>();
  else if (auto p = root.find("page"); p != root.end() && p->is_object() && p->contains("totalPages"))
    page.total_pages = (*p)["totalPages"].get<int>();
  if (auto it = root.find("last"); it != root.end() && it->is_boolean()) page.last = it->get<bool>();
  return page;
}

enum class PageStatus { ok, malformed, network_failed };

struct PageOutcome {
  PageStatus status = PageStatus::ok;
  Page page;
  std::string message;
};

PageOutcome fetch_page(HttpTransport& transport, const IngestOptions& options, int index) {
  const std::string url = options.page_url(index);
  PageOutcome out;
  for (int attempt = 0;; ++attempt) {
    HttpResponse res = transport.get(url);
    const bool retryable = res.transport_failed() || res.status >= 500 || res.status == 429;
    if (retryable) {
      if (attempt < options.retry.max_retries) {
        std::this_thread::sleep_for(options.retry.delay_for(attempt));
        continue;
      }
      out.status = PageStatus::network_failed;
      out.message = res.transport_failed() ? res.error : "HTTP " + std::to_string(res.status);
      out.message += " after " + std::to_string(attempt + 1) + " attempts";
      return out;
    }
    if (res.status != 200) {
      out.status = PageStatus::malformed;
      out.message = "HTTP " + std::to_string(res.status);
      return out;
    }
    try {
      out.page = parse_page(res.body);
    } catch (const std::exception& e) {
      out.status = PageStatus::malformed;
      out.message = e.what();
    }
    return out;
  }
}

struct PaperInfo {
  std::string title;
  std::optional<std::string> doi;
  std::optional<std::string> research_field;
};

RawCorpus assemble(const std::vector<Statement>& statements, const IngestOptions& options,
                   std::vector<std::string>& warnings) {
  std::map<std::string, std::string> contribution_to_paper;
  std::map<std::string, PaperInfo> papers;
  struct Candidate {
    std::string contribution_id, predicate, object;
  };
  std::vector<Candidate> candidates;

  for (const auto& s : statements) {
    if (s.subject.has_class(options.paper_class)) {
      auto& info = papers[s.subject.id];
      if (info.title.empty()) info.title = collapse_whitespace(s.subject.label);
      if (s.predicate.id == options.has_contribution_predicate)
        contribution_to_paper.emplace(s.object.id, s.subject.id);
      else if (s.predicate.id == options.doi_predicate && !trim_view(s.object.label).empty())
        info.doi = trim(s.object.label);
      else if (s.predicate.id == options.research_field_predicate && !trim_view(s.object.label).empty())
        info.research_field = collapse_whitespace(s.object.label);
    }
    if (s.subject.has_class(options.contribution_class)) {
      std::string predicate = collapse_whitespace(s.predicate.label);
      std::string object = collapse_whitespace(s.object.label);
      if (predicate.empty() || object.empty()) continue;
      candidates.push_back({s.subject.id, std::move(predicate), std::move(object)});
    }
  }

  RawCorpus corpus;
  std::set<std::string> used_papers;
  std::size_t orphaned = 0;
  std::size_t unidentifiable = 0;
  for (auto& c : candidates) {
    auto it = contribution_to_paper.find(c.contribution_id);
    if (it == contribution_to_paper.end()) {
      ++orphaned;
      continue;
    }
    const auto& info = papers[it->second];
    if (info.title.empty() && !info.doi) {
      ++unidentifiable;
      continue;
    }
    used_papers.insert(it->second);
    corpus.triples.push_back({it->second, c.contribution_id, std::move(c.predicate), std::move(c.object)});
  }
  for (const auto& id : used_papers) {
    const auto& info = papers[id];
    corpus.papers.push_back({id, info.title, info.doi, info.research_field});
  }
  if (orphaned)
    warnings.push_back(std::to_string(orphaned) + " contribution statements without a known paper were dropped");
  if (unidentifiable)
    warnings.push_back(std::to_string(unidentifiable) +
                       " contribution statements whose paper has neither title nor doi were dropped");
  canonicalize(corpus);
  return corpus;
}

}  // namespace

IngestResult fetch_contribution_triples(HttpTransport& transport, const IngestOptions& options) {
  if (options.page_size <= 0) throw Error(ErrorCode::invalid_argument, "page_size must be positive");
  IngestResult result;
  std::vector<Statement> statements;

  auto network_failure = [&](int page, const std::string& message, int fetched, int total) {
    return Error(ErrorCode::network, "page " + std::to_string(page) + ": " + message + "; fetched " +
                                         std::to_string(fetched) + " of " +
                                         (total > 0 ? std::to_string(total) : std::string("?")) + " pages");
  };

  PageOutcome first = fetch_page(transport, options, 0);
  if (first.status == PageStatus::network_failed) throw network_failure(0, first.message, 0, 0);

  if (first.status == PageStatus::ok && first.page.total_pages) {
    const int total = *first.page.total_pages;
    result.pages_total = std::max(total, 1);
    result.pages_fetched = 1;
    statements = std::move(first.page.statements);

    std::vector<PageOutcome> outcomes(static_cast<std::size_t>(result.pages_total));
    std::atomic<int> next{1};
    const int workers = std::clamp(options.fanout, 1, std::max(1, total - 1));
    {
      std::vector<std::jthread> pool;
      for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
          for (int i = next++; i < result.pages_total; i = next++)
            outcomes[static_cast<std::size_t>(i)] = fetch_page(transport, options, i);
        });
      }
    }
    for (int i = 1; i < result.pages_total; ++i) {
      auto& o = outcomes[static_cast<std::size_t>(i)];
      if (o.status == PageStatus::network_failed) {
        int fetched = 1;
        for (int k = 1; k < result.pages_total; ++k)
          fetched += outcomes[static_cast<std::size_t>(k)].status != PageStatus::network_failed;
        throw network_failure(i, o.message, fetched, result.pages_total);
      }
      if (o.status == PageStatus::malformed) {
        result.warnings.push_back("page " + std::to_string(i) + " skipped: " + o.message);
        continue;
      }
      ++result.pages_fetched;
      for (auto& s : o.page.statements) statements.push_back(std::move(s));
    }
  } else {
    // Page count unknown: walk sequentially until an empty or final page.
    constexpr int kMaxConsecutiveMalformed = 3;
    int malformed_run = 0;
    PageOutcome current = std::move(first);
    for (int index = 0;; ++index) {
      if (index > 0) current = fetch_page(transport, options, index);
      if (current.status == PageStatus::network_failed)
        throw network_failure(index, current.message, result.pages_fetched, 0);
      if (current.status == PageStatus::malformed) {
        result.warnings.push_back("page " + std::to_string(index) + " skipped: " + current.message);
        if (++malformed_run >= kMaxConsecutiveMalformed) break;
        continue;
      }
      malformed_run = 0;
      ++result.pages_fetched;
      const bool done = current.page.statements.empty() || current.page.last;
      for (auto& s : current.page.statements) statements.push_back(std::move(s));
      if (done) break;
    }
    result.pages_total = result.pages_fetched;
  }

  result.corpus = assemble(statements, options, result.warnings);
  validate(result.corpus);
  return result;
}

StatsTable corpus_stats(const RawCorpus& corpus) {
  std::set<std::string_view> papers, contributions, predicates, objects;
  for (const auto& t : corpus.triples) {
    papers.insert(t.paper_id);
    contributions.insert(t.contribution_id);
    predicates.insert(t.predicate_label);
    objects.insert(t.object_label);
  }
  StatsTable table;
  table.add("unique_papers", static_cast<double>(papers.size()));
  table.add("unique_contributions", static_cast<double>(contributions.size()));
  table.add("pairs", static_cast<double>(corpus.triples.size()));
  table.add("unique_predicate_labels", static_cast<double>(predicates.size()));
  table.add("unique_object_labels", static_cast<double>(objects.size()));
  return table;
}

}  // namespace kgqa
