#include "workspace.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <set>

#include "abstract_fetch.hpp"
#include "corpus_build.hpp"
#include "dataset.hpp"
#include "digest.hpp"
#include "error.hpp"
#include "kg_ingest.hpp"
#include "object_typer.hpp"
#include "qa_eval.hpp"
#include "question_gen.hpp"
#include "report.hpp"
#include "text.hpp"

namespace kgqa {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

RetryPolicy retry_from(const Config& c, const std::string& prefix) {
  RetryPolicy r;
  r.max_retries = static_cast<int>(c.get_int(prefix + ".max_retries"));
  r.base_delay = std::chrono::milliseconds(c.get_int(prefix + ".backoff_ms"));
  return r;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (!(is_ascii_alpha(c) || is_ascii_digit(c) || c == '-' || c == '_' || c == '.')) c = '_';
  return s;
}

std::string squad_title(const std::string& variant) { return "prompt-orkg-" + variant; }

}  // namespace

Workspace::Workspace(fs::path root, Config config) : root_(std::move(root)), config_(std::move(config)) {
  config_.check_conflicts();
  fs::create_directories(root_);
}

std::vector<std::string> Workspace::variants() const {
  std::vector<std::string> out;
  for (const auto& raw : kgqa::split(config_.get_string("generate.variants"), ',')) {
    const std::string v = to_lower(trim(raw));
    if (v.empty()) continue;
    if (!parse_variant(v)) throw Error(ErrorCode::config, "unknown question variant '" + v + "'");
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorCode::config, "generate.variants is empty");
  return out;
}

fs::path Workspace::require(const std::string& rel, const char* producer) const {
  const fs::path p = path(rel);
  if (!fs::exists(p))
    throw Error(ErrorCode::missing_artifact,
                "missing upstream artifact " + p.string() + " (run `" + producer + "` first)");
  return p;
}

fs::path Workspace::resolve_input(const fs::path& p) const {
  if (p.is_absolute() || fs::exists(p)) return p;
  if (fs::exists(root_ / p)) return root_ / p;
  throw Error(ErrorCode::missing_artifact, "missing input file " + p.string());
}

std::string Workspace::display(const fs::path& p) const {
  const auto rel = p.lexically_relative(root_);
  if (!rel.empty() && *rel.begin() != "..") return rel.generic_string();
  return p.generic_string();
}

std::string Workspace::write(const std::string& rel, const std::string& data) {
  const fs::path p = path(rel);
  fs::create_directories(p.parent_path());
  write_file_atomic(p, data);
  return rel;
}

std::string Workspace::write_json(const std::string& rel, const ordered_json& j) {
  return write(rel, j.dump(2) + "\n");
}

void Workspace::record(const std::string& stage, const std::vector<fs::path>& inputs,
                       const std::vector<std::string>& outputs) {
  const fs::path mpath = path("manifest.json");
  json manifest = json::object();
  if (fs::exists(mpath)) {
    try {
      manifest = json::parse(read_file(mpath));
    } catch (const json::exception&) {
      manifest = json::object();
    }
  }
  manifest["tool_version"] = kToolVersion;
  manifest["seed"] = config_.get_int("seed");
  manifest["config"] = json::parse(config_.snapshot().dump());
  json entry;
  entry["completed_at"] = current_epoch_seconds();
  entry["inputs"] = json::object();
  for (const auto& in : inputs) entry["inputs"][display(in)] = sha256_file(in);
  entry["outputs"] = json::object();
  for (const auto& out : outputs) entry["outputs"][out] = sha256_file(path(out));
  manifest["stages"][stage] = std::move(entry);
  write_file_atomic(mpath, manifest.dump(2) + "\n");
}

std::shared_ptr<HttpTransport> Workspace::transport_for(const std::string& prefix) {
  auto& slot = prefix == "ingest" ? ingest_transport_ : abstract_transport_;
  if (slot) return slot;
  const std::string fixtures = config_.get_string(prefix + ".fixtures");
  if (!fixtures.empty()) return RecordedTransport::from_file(resolve_input(fixtures));
  return std::make_shared<LiveTransport>(std::chrono::seconds(config_.get_int(prefix + ".timeout_s")));
}

StageSummary Workspace::ingest() {
  StageSummary s{"ingest", {}, ""};
  std::vector<fs::path> inputs;
  IngestResult result;
  const std::string dump = config_.get_string("ingest.dump");
  if (!dump.empty()) {
    const fs::path p = resolve_input(dump);
    inputs.push_back(p);
    result.corpus = load_dump(p);
  } else {
    const std::string fixtures = config_.get_string("ingest.fixtures");
    if (!fixtures.empty() && !ingest_transport_) inputs.push_back(resolve_input(fixtures));
    IngestOptions o;
    o.api_base = config_.get_string("ingest.api_base");
    o.statements_path = config_.get_string("ingest.statements_path");
    o.page_param = config_.get_string("ingest.page_param");
    o.size_param = config_.get_string("ingest.size_param");
    o.page_size = static_cast<int>(config_.get_int("ingest.page_size"));
    o.fanout = static_cast<int>(config_.get_int("ingest.fanout"));
    o.retry = retry_from(config_, "ingest");
    auto transport = transport_for("ingest");
    result = fetch_contribution_triples(*transport, o);
  }

  ordered_json stats = corpus_stats(result.corpus).to_json();
  if (dump.empty()) {
    stats["pages_fetched"] = result.pages_fetched;
    stats["pages_total"] = result.pages_total;
  }
  s.outputs.push_back(write("raw/corpus.json", serialize_dump(result.corpus)));
  s.outputs.push_back(write_json("raw/stats.json", stats));
  s.outputs.push_back(write_json("raw/warnings.json", ordered_json(result.warnings)));
  record("ingest", inputs, s.outputs);
  s.message = "ingested " + std::to_string(result.corpus.papers.size()) + " papers, " +
              std::to_string(result.corpus.triples.size()) + " triples, " + std::to_string(result.warnings.size()) +
              " warnings";
  return s;
}

StageSummary Workspace::fetch_abstracts() {
  StageSummary s{"fetch-abstracts", {}, ""};
  const fs::path raw_path = require("raw/corpus.json", "ingest");
  std::vector<fs::path> inputs{raw_path};
  const RawCorpus raw = load_dump(raw_path);

  const std::string fixtures = config_.get_string("abstracts.fixtures");
  if (!fixtures.empty() && !abstract_transport_) inputs.push_back(resolve_input(fixtures));
  auto transport = transport_for("abstracts");

  FetchOptions o;
  o.crossref_base = config_.get_string("abstracts.crossref_base");
  o.semanticscholar_base = config_.get_string("abstracts.semanticscholar_base");
  o.fanout = static_cast<int>(config_.get_int("abstracts.fanout"));
  o.rate = config_.get_double("abstracts.rate");
  o.retry = retry_from(config_, "abstracts");
  o.negative_ttl_seconds = config_.get_int("abstracts.negative_ttl_days") * 24 * 3600;

  fs::create_directories(path("abstracts"));
  AbstractCache cache(path("abstracts/cache.jsonl"));
  AbstractFetcher fetcher(*transport, cache, o);
  auto batch = fetcher.fetch_all(raw);
  cache.compact();

  ordered_json coverage;
  coverage["total"] = batch.coverage.total;
  coverage["found"] = batch.coverage.found;
  coverage["not_found"] = batch.coverage.not_found;
  coverage["errors"] = batch.coverage.errors;
  coverage["coverage"] = std::round(batch.coverage.coverage() * 10000.0) / 10000.0;
  coverage["outcomes"] = ordered_json::array();
  for (const auto& out : batch.outcomes) {
    ordered_json j;
    j["paper_id"] = out.paper_id;
    j["status"] = to_string(out.status);
    j["detail"] = out.detail;
    coverage["outcomes"].push_back(std::move(j));
  }
  s.outputs.push_back(write("abstracts/abstracts.json", serialize_abstracts(batch.records)));
  s.outputs.push_back(write_json("abstracts/coverage.json", coverage));
  s.outputs.push_back("abstracts/cache.jsonl");
  record("fetch-abstracts", inputs, s.outputs);
  char pct[32];
  std::snprintf(pct, sizeof pct, "%.1f%%", batch.coverage.coverage() * 100.0);
  s.message = "abstracts found for " + std::to_string(batch.coverage.found) + "/" +
              std::to_string(batch.coverage.total) + " papers (" + pct + "), " +
              std::to_string(batch.coverage.errors) + " errors, " + std::to_string(batch.coverage.cache_hits) +
              " cache hits";
  return s;
}

StageSummary Workspace::build() {
  StageSummary s{"build", {}, ""};
  const fs::path raw_path = require("raw/corpus.json", "ingest");
  const fs::path abs_path = require("abstracts/abstracts.json", "fetch-abstracts");
  std::vector<fs::path> inputs{raw_path, abs_path};
  const RawCorpus raw = load_dump(raw_path);
  const auto abstracts = parse_abstracts(read_file(abs_path));

  Blocklist blocklist;
  const std::string phrases = config_.get_string("build.phrases_file");
  if (!phrases.empty()) {
    const fs::path p = resolve_input(phrases);
    inputs.push_back(p);
    blocklist = Blocklist::from_phrases_file(p);
  }
  const BuildResult result = build_clean_corpus(raw, abstracts, blocklist);

  ordered_json stats;
  stats["before"] = corpus_stats(raw).to_json();
  stats["after"] = result.stats.to_json();
  stats["stopword_list"] = stopword_list_version();
  s.outputs.push_back(write("clean/corpus.json", serialize_clean_corpus(result.corpus)));
  s.outputs.push_back(write_json("clean/stats.json", stats));
  s.outputs.push_back(write("clean/drops.json", serialize_drop_report(result)));
  record("build", inputs, s.outputs);
  s.message = "clean corpus has " + std::to_string(result.corpus.size()) + " pairs";
  return s;
}

StageSummary Workspace::generate() {
  StageSummary s{"generate", {}, ""};
  const fs::path clean_path = require("clean/corpus.json", "build");
  const CleanCorpus corpus = parse_clean_corpus(read_file(clean_path));

  std::vector<QuestionVariant> wanted;
  for (const auto& v : variants()) wanted.push_back(*parse_variant(v));
  const auto sets = generate_all(corpus, default_tagger(), wanted);

  for (const auto& [variant, instances] : sets) {
    const std::string name = to_string(variant);
    s.outputs.push_back(write("datasets/" + name + "/all.json", to_squad_json(instances, squad_title(name))));
    s.outputs.push_back(write("datasets/" + name + "/meta.json", to_meta_json(instances)));
  }

  // Categories do not depend on the question template.
  std::vector<ObjectCategory> cats;
  for (const auto& p : corpus) cats.push_back(categorize(p.object_label, p.predicate_label, default_tagger()));
  ordered_json dist = ordered_json::object();
  for (const auto& [c, share] : distribution(cats)) {
    ordered_json j;
    j["count"] = share.count;
    j["percent"] = std::round(share.percent * 100.0) / 100.0;
    dist[to_string(c)] = std::move(j);
  }
  s.outputs.push_back(write_json("datasets/categories.json", dist));
  record("generate", {clean_path}, s.outputs);
  s.message = "generated " + std::to_string(sets.size()) + " variants of " + std::to_string(corpus.size()) +
              " instances";
  return s;
}

StageSummary Workspace::split() {
  StageSummary s{"split", {}, ""};
  const auto seed = static_cast<std::uint64_t>(config_.get_int("seed"));
  const int threshold = static_cast<int>(config_.get_int("split.threshold"));
  const double fraction = config_.get_double("split.train_fraction");
  std::vector<fs::path> inputs;
  std::size_t train_n = 0, eval_n = 0;
  for (const auto& v : variants()) {
    const fs::path all = require("datasets/" + v + "/all.json", "generate");
    const fs::path meta = require("datasets/" + v + "/meta.json", "generate");
    inputs.push_back(all);
    inputs.push_back(meta);
    const auto instances = join_with_meta(parse_squad_json(read_file(all)), parse_meta_json(read_file(meta)));
    const auto parts = split_by_predicate(instances, threshold, fraction, seed);
    s.outputs.push_back(write("datasets/" + v + "/train.json", to_squad_json(parts.train, squad_title(v))));
    s.outputs.push_back(write("datasets/" + v + "/eval.json", to_squad_json(parts.eval, squad_title(v))));
    train_n = parts.train.size();
    eval_n = parts.eval.size();
  }
  record("split", inputs, s.outputs);
  s.message = "split " + std::to_string(train_n) + " train / " + std::to_string(eval_n) +
              " eval instances per variant (seed " + std::to_string(seed) + ")";
  return s;
}

StageSummary Workspace::evaluate(const fs::path& predictions, const fs::path& eval, const fs::path& meta,
                                 RunLabels labels) {
  StageSummary s{"evaluate", {}, ""};
  const fs::path pred_path = resolve_input(predictions);
  const fs::path eval_path = resolve_input(eval);
  const fs::path meta_path = resolve_input(meta);
  const auto gold =
      join_with_meta(parse_squad_json(read_file(eval_path)), parse_meta_json(read_file(meta_path)));
  const auto preds = parse_predictions(read_file(pred_path));
  auto [strict, relaxed] = kgqa::evaluate(preds, gold);

  if (labels.variant.empty()) labels.variant = gold.empty() ? "unknown" : to_string(gold.front().variant);
  if (labels.name.empty()) labels.name = labels.model + "-" + labels.variant + "-" + labels.stage;
  labels.name = sanitize(labels.name);

  RunSummary run{labels.name, labels.model, labels.stage, labels.variant, strict, relaxed};
  const std::string dir = "runs/" + labels.name;
  s.outputs.push_back(write_json(dir + "/report.json", run_to_json(run)));
  std::string text = render_category_table(run);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "\nstrict: accuracy %.1f%%  token F1 %.1f%%\nrelaxed: accuracy %.1f%%  token F1 %.1f%%\n"
                "instances %zu, missing predictions %zu\n",
                strict.accuracy * 100, strict.token_f1 * 100, relaxed.accuracy * 100, relaxed.token_f1 * 100,
                strict.n, strict.missing);
  text += buf;
  s.outputs.push_back(write(dir + "/report.txt", text));
  record("evaluate:" + labels.name, {pred_path, eval_path, meta_path}, s.outputs);
  std::snprintf(buf, sizeof buf, "run %s: strict %.1f%%, relaxed %.1f%% over %zu instances", labels.name.c_str(),
                strict.accuracy * 100, relaxed.accuracy * 100, strict.n);
  s.message = buf;
  return s;
}

StageSummary Workspace::baseline(const fs::path& eval, RunLabels labels) {
  StageSummary s{"baseline", {}, ""};
  const fs::path eval_path = resolve_input(eval);
  const auto questions = parse_squad_json(read_file(eval_path));
  const int window = static_cast<int>(config_.get_int("baseline.window"));

  PredictionSet preds;
  for (const auto& q : questions) preds.entries[q.id] = baseline_predict(q.context, q.question, window);

  const fs::path meta_path = eval_path.parent_path() / "meta.json";
  const bool have_meta = fs::exists(meta_path);
  if (labels.variant.empty()) {
    const auto dir = eval_path.parent_path().filename().string();
    labels.variant = parse_variant(dir) ? dir : "unknown";
  }
  if (labels.model.empty() || labels.model == "unknown") labels.model = "baseline";
  if (labels.name.empty()) labels.name = "baseline-" + labels.variant;
  labels.name = sanitize(labels.name);

  const std::string pred_rel = "runs/" + labels.name + "/predictions.json";
  s.outputs.push_back(write(pred_rel, serialize_predictions(preds)));
  record("baseline:" + labels.name, {eval_path}, s.outputs);
  s.message = "baseline predicted " + std::to_string(preds.entries.size()) + " answers";
  if (have_meta) {
    auto scored = evaluate(path(pred_rel), eval_path, meta_path, labels);
    s.outputs.insert(s.outputs.end(), scored.outputs.begin(), scored.outputs.end());
    s.message += "; " + scored.message;
  }
  return s;
}

StageSummary Workspace::report(const std::string& pattern) {
  StageSummary s{"report", {}, ""};
  std::vector<RunSummary> runs;
  std::vector<fs::path> inputs;
  for (const auto& p : glob_paths(root_, pattern)) {
    const fs::path file = fs::is_directory(p) ? p / "report.json" : p;
    if (file.filename() != "report.json" || !fs::exists(file)) continue;
    try {
      runs.push_back(run_from_json(json::parse(read_file(file))));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::parse, file.string() + ": " + e.what());
    }
    inputs.push_back(file);
  }
  if (runs.empty()) throw Error(ErrorCode::missing_artifact, "no run reports match '" + pattern + "' under " +
                                                                 root_.string() + " (run `evaluate` first)");
  s.outputs.push_back(write_json("report.json", aggregate_json(runs)));
  s.outputs.push_back(write("report.txt", render_full_report(runs)));
  record("report", inputs, s.outputs);
  s.message = "report over " + std::to_string(runs.size()) + " runs";
  return s;
}

std::vector<fs::path> glob_paths(const fs::path& base, const std::string& pattern) {
  std::vector<fs::path> frontier{base};
  for (const auto& seg : split(pattern, '/')) {
    if (seg.empty() || seg == ".") continue;
    std::vector<fs::path> next;
    const bool wild = seg.find_first_of("*?[") != std::string::npos;
    for (const auto& dir : frontier) {
      if (!wild) {
        if (fs::exists(dir / seg)) next.push_back(dir / seg);
        continue;
      }
      if (!fs::is_directory(dir)) continue;
      for (const auto& entry : fs::directory_iterator(dir))
        if (fnmatch(seg.c_str(), entry.path().filename().c_str(), 0) == 0) next.push_back(entry.path());
    }
    frontier = std::move(next);
  }
  std::sort(frontier.begin(), frontier.end());
  if (frontier.size() == 1 && frontier.front() == base) return {};
  return frontier;
}

}  // namespace kgqa
