// One PASS/FAIL/SKIP line per acceptance criterion; exit status 1 on any FAIL.
#include <algorithm>
#include <array>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corpus_build.hpp"
#include "dataset.hpp"
#include "digest.hpp"
#include "error.hpp"
#include "object_typer.hpp"
#include "qa_eval.hpp"
#include "question_gen.hpp"
#include "text.hpp"
#include "workspace.hpp"

using namespace kgqa;
namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  enum Kind { pass, fail, skip } kind;
  std::string detail;
};

Outcome ok(std::string d) { return {Outcome::pass, std::move(d)}; }
Outcome bad(std::string d) { return {Outcome::fail, std::move(d)}; }

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

const fs::path kFixtures = KGQA_FIXTURE_DIR;

Config fixture_config() {
  Config c;
  c.set("ingest.api_base", "http://kg.fixture");
  c.set("ingest.page_size", "5");
  c.set("ingest.fixtures", (kFixtures / "kg_statements.json").string());
  c.set("ingest.backoff_ms", "1");
  c.set("abstracts.crossref_base", "http://crossref.fixture");
  c.set("abstracts.semanticscholar_base", "http://s2.fixture");
  c.set("abstracts.fixtures", (kFixtures / "abstract_services.json").string());
  c.set("abstracts.backoff_ms", "1");
  c.set("abstracts.rate", "0");
  return c;
}

fs::path run_fixture_pipeline(const std::string& name) {
  const auto root = fs::temp_directory_path() / "kgqa_acceptance" / name;
  fs::remove_all(root);
  Workspace ws(root, fixture_config());
  ws.ingest();
  ws.fetch_abstracts();
  ws.build();
  ws.generate();
  ws.split();
  for (const auto& v : ws.variants()) ws.baseline(root / "datasets" / v / "eval.json", {});
  ws.report();
  return root;
}

// ---- span fidelity --------------------------------------------------------

// Byte offset of the given code point index, or npos past the end.
std::size_t code_point_offset(const std::string& s, std::size_t index) {
  std::size_t pos = 0;
  for (std::size_t i = 0; i < index; ++i) {
    if (pos >= s.size()) return std::string::npos;
    const unsigned char c = s[pos];
    pos += c < 0x80 ? 1 : c < 0xE0 ? 2 : c < 0xF0 ? 3 : 4;
  }
  return pos <= s.size() ? pos : std::string::npos;
}

std::size_t code_point_count(const std::string& s) {
  std::size_t n = 0;
  for (unsigned char c : s) n += (c & 0xC0) != 0x80;
  return n;
}

Outcome span_fidelity(const fs::path& root) {
  const auto t0 = Clock::now();
  std::size_t checked = 0, broken = 0;
  for (const auto& file : glob_paths(root, "datasets/*/*.json")) {
    if (file.filename() == "meta.json") continue;
    const auto doc = json::parse(read_file(file));
    for (const auto& article : doc["data"])
      for (const auto& para : article["paragraphs"]) {
        const std::string ctx = para["context"];
        for (const auto& qa : para["qas"])
          for (const auto& a : qa["answers"]) {
            const std::string text = a["text"];
            const std::size_t b = code_point_offset(ctx, a["answer_start"].get<std::size_t>());
            const std::size_t e =
                b == std::string::npos ? b : code_point_offset(ctx, a["answer_start"].get<std::size_t>() + code_point_count(text));
            ++checked;
            if (b == std::string::npos || e == std::string::npos || ctx.substr(b, e - b) != text) ++broken;
          }
      }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << checked << " answers scanned, " << broken << " mismatched, " << secs << " s";
  if (checked == 0) return bad("no answers found");
  return broken == 0 && secs < 1.0 ? ok(d.str()) : bad(d.str());
}

// ---- template goldens -----------------------------------------------------

Outcome template_goldens() {
  struct Row {
    const char* predicate;
    const char* none;
    const char* what;
    const char* which;
    const char* how;
  };
  const Row rows[] = {
      {"approach name", "Approach name?", "What approach name?", "Which approach name?", "How approach name?"},
      {"continent", "Continent?", "What continent?", "Which continent?", "How continent?"},
      {"sampling year", "Sampling year?", "What sampling year?", "Which sampling year?", "How sampling year?"},
      {"type of nanocarrier", "Type of nanocarrier?", "What type of nanocarrier?", "Which type of nanocarrier?",
       "How type of nanocarrier?"},
  };
  int hits = 0, total = 0;
  std::string first_miss;
  auto expect = [&](const char* pred, QuestionVariant v, const std::string& want) {
    ++total;
    const auto got = make_question(pred, v);
    if (got == want) ++hits;
    else if (first_miss.empty()) first_miss = "'" + got + "' != '" + want + "'";
  };
  for (const auto& r : rows) {
    expect(r.predicate, QuestionVariant::none, r.none);
    expect(r.predicate, QuestionVariant::what, r.what);
    expect(r.predicate, QuestionVariant::which, r.which);
    expect(r.predicate, QuestionVariant::how, r.how);
    expect(r.predicate, QuestionVariant::unchanged, r.predicate);
  }
  const auto d = std::to_string(hits) + "/" + std::to_string(total) + " exact";
  return hits == total ? ok(d) : bad(d + "; " + first_miss);
}

// ---- object typer goldens -------------------------------------------------

Outcome typer_goldens() {
  struct Row {
    const char* object;
    const char* predicate;
    ObjectCategory want;
  };
  const Row rows[] = {
      {"Transistors", "has property", ObjectCategory::noun},
      {"data mining", "has property", ObjectCategory::noun_phrase},
      {"HMM", "has property", ObjectCategory::acronym},
      {"Performance of thin-film transistors", "has research problem", ObjectCategory::research_problem},
      {"high", "has property", ObjectCategory::adjective},
      {"Serbia", "country", ObjectCategory::location},
      {"4977", "has property", ObjectCategory::number},
      {"2.45 GHz", "has property", ObjectCategory::count_measurement},
      {"raw data dumps and HDT files", "has property", ObjectCategory::sentence},
      {"2011", "has property", ObjectCategory::year_date},
      {"https://github.com/giannisnik/mpad", "has property", ObjectCategory::url},
      {"Unsupervised and Adaptive", "has property", ObjectCategory::adjective_phrase},
  };
  int hits = 0;
  std::string first_miss;
  for (const auto& r : rows) {
    const auto got = categorize(r.object, r.predicate, default_tagger());
    if (got == r.want) ++hits;
    else if (first_miss.empty()) first_miss = std::string(r.object) + " -> " + to_string(got);
  }
  const auto d = std::to_string(hits) + "/12 exact";
  return hits == 12 ? ok(d) : bad(d + "; " + first_miss);
}

// ---- blocklist soundness --------------------------------------------------

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

// Independent restatement of the rules over a whitespace-collapsed label.
bool brute_blocked(const std::string& raw, const std::set<std::string>& stopwords) {
  static const std::regex number("^0*[0-9]{1,3}$");
  static const std::regex letter("^[A-Za-z]$");
  std::istringstream in(raw);
  std::string word, label;
  while (in >> word) label += (label.empty() ? "" : " ") + word;
  const std::string l = lower(label);
  if (std::regex_match(label, number)) return true;
  if (label == "-") return true;
  if (std::regex_match(label, letter)) return true;
  if (l == "t" || l == "f" || l == "yes" || l == "no" || l == "true" || l == "false") return true;
  if (l == "na") return true;
  if (stopwords.count(l)) return true;
  return l == "any track" || l == "method";
}

std::string random_label(std::mt19937_64& rng, const std::vector<std::string>& pool) {
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  auto randcase = [&](std::string s) {
    for (auto& c : s)
      if (pick(2)) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    return s;
  };
  std::string s;
  switch (pick(7)) {
    case 0: {  // digit strings, some with leading zeros, some beyond 999
      const std::size_t len = 1 + pick(5);
      for (std::size_t i = 0; i < len; ++i) s += static_cast<char>('0' + pick(10));
      break;
    }
    case 1:
      s = std::string(1, static_cast<char>(pick(2) ? 'a' + pick(26) : 'A' + pick(26)));
      if (pick(4) == 0) s = "-";
      break;
    case 2:
      s = randcase(pool[pick(pool.size())]);
      break;
    case 3: {
      const char* words[] = {"any  track", "Method", "methods", "any", "track record", "N/A", "nA", "yess", "T-cell"};
      s = words[pick(std::size(words))];
      break;
    }
    case 4: {
      const std::size_t len = 1 + pick(12);
      const std::string alphabet = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789 -.%";
      for (std::size_t i = 0; i < len; ++i) s += alphabet[pick(alphabet.size())];
      break;
    }
    case 5:
      s = std::to_string(pick(2000)) + (pick(2) ? " GHz" : "");
      break;
    default:
      s = randcase(pool[pick(pool.size())]) + " " + randcase(pool[pick(pool.size())]);
      break;
  }
  if (pick(5) == 0) s = " " + s + "  ";
  return s;
}

Outcome blocklist_soundness() {
  std::set<std::string> stopwords;
  for (auto w : default_stopwords()) stopwords.emplace(w);
  std::vector<std::string> pool(stopwords.begin(), stopwords.end());
  for (const char* w : {"graphene", "yes", "no", "true", "false", "na", "kenya", "deep learning"}) pool.emplace_back(w);

  std::mt19937_64 rng(20240601);
  constexpr std::size_t kLabels = 12000;
  RawCorpus raw;
  std::vector<AbstractRecord> abstracts;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < kLabels; ++i) {
    std::string label = random_label(rng, pool);
    if (label.find_first_not_of(' ') == std::string::npos) label = "x";
    const std::string id = "P" + std::to_string(i);
    raw.papers.push_back({id, "t", std::nullopt, std::nullopt});
    raw.triples.push_back({id, id + "c", "has value", label});
    abstracts.push_back({id, "Record " + std::to_string(i) + " reports " + label + " here.", AbstractSource::local, 0});
    labels.push_back(std::move(label));
  }
  const auto result = build_clean_corpus(raw, abstracts, Blocklist());

  std::set<std::string> survivors;
  std::size_t leaked = 0;
  for (const auto& p : result.corpus) {
    survivors.insert(p.paper_id);
    if (brute_blocked(p.object_label, stopwords)) ++leaked;
  }
  std::size_t disagreements = 0, blocked = 0;
  for (std::size_t i = 0; i < kLabels; ++i) {
    const bool expect_blocked = brute_blocked(labels[i], stopwords);
    blocked += expect_blocked;
    if (expect_blocked == survivors.count("P" + std::to_string(i)) > 0) ++disagreements;
  }
  std::ostringstream d;
  d << kLabels << " labels, " << blocked << " blocked, " << leaked << " blocked labels survived, " << disagreements
    << " disagreements with brute-force re-check";
  return leaked == 0 && disagreements == 0 && result.dropped("unanchored") == 0 ? ok(d.str()) : bad(d.str());
}

// ---- split contract -------------------------------------------------------

std::vector<QAInstance> synthetic_instances() {
  std::vector<QAInstance> out;
  for (int count : {1, 9, 10, 12, 100}) {
    const std::string pred = "predicate " + std::to_string(count);
    for (int i = 0; i < count; ++i) {
      QAInstance q;
      q.id = pred + "#" + std::to_string(i);
      q.variant = QuestionVariant::which;
      q.predicate_label = pred;
      q.question = make_question(pred, q.variant);
      q.context = "value " + std::to_string(i) + " of " + pred;
      q.answer = {"value", 0, 5};
      q.category = ObjectCategory::noun;
      out.push_back(std::move(q));
    }
  }
  return out;
}

Outcome split_contract() {
  const auto instances = synthetic_instances();
  const auto a = split_by_predicate(instances, 10, 0.75, 42);
  const auto b = split_by_predicate(instances, 10, 0.75, 42);
  std::map<std::string, std::size_t> eval_counts;
  for (const auto& q : a.eval) ++eval_counts[q.predicate_label];
  const std::map<int, std::size_t> want{{1, 0}, {9, 0}, {10, 3}, {12, 3}, {100, 25}};
  std::string miss;
  for (const auto& [count, n] : want) {
    const auto got = eval_counts["predicate " + std::to_string(count)];
    if (got != n) miss += " count " + std::to_string(count) + " -> " + std::to_string(got);
  }
  const bool partition = a.train.size() + a.eval.size() == instances.size();
  const bool identical = to_squad_json(a.train, "t") == to_squad_json(b.train, "t") &&
                         to_squad_json(a.eval, "e") == to_squad_json(b.eval, "e");
  std::ostringstream d;
  d << "eval " << a.eval.size() << ", train " << a.train.size() << "; per-count eval 0/0/3/3/25"
    << (miss.empty() ? "" : " violated:" + miss) << "; reruns " << (identical ? "byte-identical" : "differ");
  return miss.empty() && partition && identical ? ok(d.str()) : bad(d.str());
}

// ---- metric oracle ----------------------------------------------------------

std::string oracle_normalize(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n\r\f\v");
  if (b == std::string::npos) return "";
  std::string t = lower(s.substr(b, s.find_last_not_of(" \t\n\r\f\v") - b + 1));
  while (!t.empty() && std::string(".,;:-)(_+").find(t.back()) != std::string::npos) t.pop_back();
  return t;
}

double oracle_f1(const std::string& pred, const std::string& gold) {
  auto toks = [](const std::string& s) {
    std::vector<std::string> out;
    for (const auto& t : word_tokens(oracle_normalize(s))) out.push_back(t);
    return out;
  };
  const auto p = toks(pred), g = toks(gold);
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::map<std::string, int> gc;
  for (const auto& t : g) ++gc[t];
  int common = 0;
  for (const auto& t : p)
    if (gc[t]-- > 0) ++common;
  if (common == 0) return 0.0;
  const double precision = double(common) / p.size(), recall = double(common) / g.size();
  return 2 * precision * recall / (precision + recall);
}

Outcome metric_oracle() {
  struct Row {
    const char* gold;
    const char* pred;  // nullptr: no prediction
    ObjectCategory cat;
    bool strict, relaxed;  // hand-scored
  };
  using C = ObjectCategory;
  const Row rows[] = {
      {"North America", "north america", C::location, 1, 1},
      {"PROMOTE", "the PROMOTE project.", C::acronym, 0, 1},
      {"2.45 GHz", "2.45 ghz)+", C::count_measurement, 1, 1},
      {"solid lipid nanoparticles", "solid lipid", C::noun_phrase, 0, 0},
      {"graphene", "graphene", C::noun, 1, 1},
      {"Kenya", nullptr, C::location, 0, 0},
      {"Germany", "Germany.", C::location, 1, 1},
      {"2003", "in 2003", C::year_date, 0, 1},
      {"HMM", "hmm", C::acronym, 1, 1},
      {"HMM", "HMMs", C::acronym, 0, 1},
      {"deep learning", "learning", C::noun_phrase, 0, 0},
      {"high", "High", C::adjective, 1, 1},
      {"4977", "4977 patients", C::number, 0, 1},
      {"https://github.com/x/y", "https://github.com/x/y", C::url, 1, 1},
      {"https://github.com/x/y", "github.com/x/y", C::url, 0, 0},
      {"data mining", "Data Mining;", C::noun_phrase, 1, 1},
      {"Serbia", "Serbia and Montenegro", C::location, 0, 1},
      {"Unsupervised and Adaptive", "unsupervised", C::adjective_phrase, 0, 0},
      {"raw data dumps and HDT files", "raw data dumps", C::sentence, 0, 0},
      {"Transistors", "transistors", C::noun, 1, 1},
      {"2011", "2011-", C::year_date, 1, 1},
      {"Performance of thin-film transistors", "performance of thin-film transistors", C::research_problem, 1, 1},
      {"speech recognition", "automatic speech recognition", C::research_problem, 0, 1},
      {"21.3 %", "21.3", C::count_measurement, 0, 0},
      {"21.3 %", "21.3 % efficiency", C::count_measurement, 0, 1},
      {"Spain", "spain", C::location, 1, 1},
      {"SQuAD", "SQuAD 2.0", C::acronym, 0, 1},
      {"ORKG", "orkg_", C::acronym, 1, 1},
      {"lithium iron phosphate", "iron phosphate", C::noun_phrase, 0, 0},
      {"stable", "stable,", C::adjective, 1, 1},
      {"robust", "not robust", C::adjective, 0, 1},
      {"Tokyo", nullptr, C::location, 0, 0},
      {"10 days", "10 days", C::count_measurement, 1, 1},
      {"500 cycles", "500", C::count_measurement, 0, 0},
      {"Contact maps", "contact maps are predicted", C::noun_phrase, 0, 1},
      {"simulated annealing", "", C::noun_phrase, 0, 0},
      {"1999-2003", "1999-2003", C::year_date, 1, 1},
      {"1999-2003", "1999", C::year_date, 0, 0},
      {"Microalgae", "microalgae:", C::noun, 1, 1},
      {"nitrogen", "Nitrogen removal", C::noun, 0, 1},
      {"GFET", "GFET design", C::acronym, 0, 1},
      {"2015 to 2020", "from 2015 to 2020", C::year_date, 0, 1},
      {"Crop yield prediction", "crop yield prediction in kenya", C::research_problem, 0, 1},
      {"linear regression", "regression", C::noun_phrase, 0, 0},
      {"thermal infrared bands", "Thermal infrared bands+", C::noun_phrase, 1, 1},
      {"positive and negative terms", "a lexicon of positive and negative terms.", C::sentence, 0, 1},
      {"0.87", "0.87", C::number, 1, 1},
      {"0.87", "0.8", C::number, 0, 0},
      {"residual network", "a residual-network", C::noun_phrase, 0, 0},
      {"Sentiment analysis", "sentiment analysis)", C::research_problem, 1, 1},
  };
  static_assert(std::size(rows) == 50);

  std::vector<QAInstance> gold;
  PredictionSet preds;
  std::size_t hand_strict = 0, hand_relaxed = 0, oracle_disagree = 0;
  std::size_t brute_strict = 0, brute_relaxed = 0;
  double brute_f1 = 0;
  std::map<ObjectCategory, std::array<std::size_t, 3>> brute_cat;  // n, strict, relaxed
  for (std::size_t i = 0; i < std::size(rows); ++i) {
    const auto& r = rows[i];
    QAInstance q;
    q.id = "q" + std::to_string(i);
    q.answer = {r.gold, 0, code_point_count(r.gold)};
    q.context = r.gold;
    q.category = r.cat;
    gold.push_back(q);
    hand_strict += r.strict;
    hand_relaxed += r.relaxed;
    auto& cat = brute_cat[r.cat];
    ++cat[0];
    if (!r.pred) continue;
    preds.entries[q.id] = r.pred;
    const std::string np = oracle_normalize(r.pred), ng = oracle_normalize(r.gold);
    const bool s = np == ng, rel = np.find(ng) != std::string::npos;
    if (s != r.strict || rel != r.relaxed) ++oracle_disagree;
    brute_strict += s;
    brute_relaxed += rel;
    cat[1] += s;
    cat[2] += rel;
    brute_f1 += oracle_f1(r.pred, r.gold);
  }
  const auto [strict, relaxed] = evaluate(preds, gold);
  const double n = 50;
  std::vector<std::string> problems;
  if (hand_strict != 20 || hand_relaxed != 35 || oracle_disagree) problems.push_back("hand table inconsistent");
  if (strict.accuracy != brute_strict / n) problems.push_back("strict accuracy");
  if (relaxed.accuracy != brute_relaxed / n) problems.push_back("relaxed accuracy");
  if (std::abs(strict.token_f1 - brute_f1 / n) > 1e-12 || relaxed.token_f1 != strict.token_f1)
    problems.push_back("token F1");
  if (strict.missing != 2 || strict.n != 50) problems.push_back("counts");
  for (const auto& [cat, c] : brute_cat) {
    const auto it = strict.per_category.find(cat);
    const auto jt = relaxed.per_category.find(cat);
    if (it == strict.per_category.end() || jt == relaxed.per_category.end() || it->second.n != c[0] ||
        it->second.strict != double(c[1]) / c[0] || it->second.relaxed != double(c[2]) / c[0] ||
        jt->second.relaxed != double(c[2]) / c[0])
      problems.push_back("category " + to_string(cat));
  }

  std::mt19937_64 rng(7);
  const std::string alphabet = "abAB .,;:-)(_+ 12";
  auto rand_str = [&] {
    std::string s;
    const std::size_t len = std::uniform_int_distribution<std::size_t>(0, 8)(rng);
    for (std::size_t i = 0; i < len; ++i)
      s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    return s;
  };
  std::size_t implication_violations = 0, strict_hits = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string g = rand_str(), p = rand_str();
    if (i % 3 == 0) p = (i % 2 ? std::string("x ") : std::string()) + g + (i % 5 ? "." : " y");
    const bool s = answers_match(p, g, MatchSetting::strict);
    strict_hits += s;
    if (s && !answers_match(p, g, MatchSetting::relaxed)) ++implication_violations;
  }
  if (implication_violations) problems.push_back("strict without relaxed");

  std::ostringstream d;
  d << "50 pairs: strict " << brute_strict << "/50, relaxed " << brute_relaxed << "/50, token F1 " << strict.token_f1
    << "; strict=>relaxed over 10000 random pairs (" << strict_hits << " strict hits, " << implication_violations
    << " violations)";
  if (problems.empty()) return ok(d.str());
  std::string all;
  for (const auto& p : problems) all += (all.empty() ? "" : ", ") + p;
  return bad(d.str() + "; mismatch: " + all);
}

// ---- normalization ----------------------------------------------------------

Outcome normalization() {
  const std::pair<const char*, const char*> examples[] = {
      {"PROMOTE. ", "promote"}, {"North America", "north america"}, {"2.45 GHz)+", "2.45 ghz"}};
  std::size_t hits = 0;
  for (const auto& [in, want] : examples) hits += normalize_answer(in) == want;
  std::mt19937_64 rng(11);
  const std::string alphabet = "aZ .,;:-)(_+\t9%";
  std::size_t violations = 0;
  for (int i = 0; i < 10000; ++i) {
    std::string s;
    const std::size_t len = std::uniform_int_distribution<std::size_t>(0, 10)(rng);
    for (std::size_t k = 0; k < len; ++k)
      s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    std::string upper = s;
    for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const auto n = normalize_answer(s);
    if (normalize_answer(n) != n || normalize_answer(upper) != n) ++violations;
  }
  std::ostringstream d;
  d << hits << "/3 examples exact; idempotence and case stability over 10000 strings, " << violations
    << " violations";
  return hits == 3 && violations == 0 ? ok(d.str()) : bad(d.str());
}

// ---- fixture pipeline determinism ------------------------------------------

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = sha256_file(e.path());
  return out;
}

Outcome pipeline_determinism(fs::path& first_root) {
  const auto t0 = Clock::now();
  first_root = run_fixture_pipeline("run_a");
  const auto second = run_fixture_pipeline("run_b");
  const double secs = seconds_since(t0);
  const auto a = snapshot(first_root), b = snapshot(second);
  std::size_t differing = 0;
  for (const auto& [rel, digest] : a) {
    auto it = b.find(rel);
    if (it == b.end() || it->second != digest) ++differing;
  }
  differing += b.size() > a.size() ? b.size() - a.size() : 0;
  std::ostringstream d;
  d << "two fresh runs, " << a.size() << " files each, " << differing << " differ, " << secs << " s total";
  return differing == 0 && !a.empty() && secs < 60.0 ? ok(d.str()) : bad(d.str());
}

}  // namespace

int main() {
  setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
  int failures = 0;
  auto report = [&](const char* name, const std::function<Outcome()>& check) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = bad(std::string("exception: ") + e.what());
    }
    const char* tag = o.kind == Outcome::pass ? "PASS" : o.kind == Outcome::fail ? "FAIL" : "SKIP";
    failures += o.kind == Outcome::fail;
    std::cout << tag << "  " << name << ": " << o.detail << "\n";
  };

  fs::path pipeline_root;
  // The pipeline runs first so span fidelity can scan its output.
  Outcome determinism;
  try {
    determinism = pipeline_determinism(pipeline_root);
  } catch (const std::exception& e) {
    determinism = bad(std::string("exception: ") + e.what());
  }

  report("span fidelity", [&] { return pipeline_root.empty() ? bad("pipeline did not run") : span_fidelity(pipeline_root); });
  report("template goldens", template_goldens);
  report("object typer goldens", typer_goldens);
  report("blocklist soundness", blocklist_soundness);
  report("split contract", split_contract);
  report("metric oracle equivalence", metric_oracle);
  report("answer normalization", normalization);
  report("released dataset statistics", [] {
    return Outcome{Outcome::skip,
                   "needs the published corpus release, which is not available offline; "
                   "rebuild with `kgqa ingest --dump <file>` and compare clean/stats.json by hand"};
  });
  report("fixture pipeline determinism", [&] { return determinism; });
  return failures ? 1 : 0;
}
