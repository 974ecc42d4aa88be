#include "qa_eval.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "error.hpp"
#include "text.hpp"

namespace kgqa {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(MatchSetting s) { return s == MatchSetting::strict ? "strict" : "relaxed"; }

namespace {

bool is_tail_strippable(char c) {
  switch (c) {
    case '.': case ',': case ';': case ':': case '-': case ')': case '(': case '_': case '+':
      return true;
    default:
      return is_space(c);
  }
}

}  // namespace

std::string normalize_answer(std::string_view s) {
  std::string out = to_lower(trim_view(s));
  while (!out.empty() && is_tail_strippable(out.back())) out.pop_back();
  return out;
}

bool answers_match(std::string_view prediction, std::string_view gold, MatchSetting setting) {
  const std::string p = normalize_answer(prediction);
  const std::string g = normalize_answer(gold);
  if (setting == MatchSetting::strict) return p == g;
  return p.find(g) != std::string::npos;
}

double token_f1(std::string_view prediction, std::string_view gold) {
  const auto p = word_tokens(normalize_answer(prediction));
  const auto g = word_tokens(normalize_answer(gold));
  if (p.empty() && g.empty()) return 1.0;
  if (p.empty() || g.empty()) return 0.0;
  std::map<std::string_view, int> counts;
  for (const auto& t : g) ++counts[t];
  std::size_t common = 0;
  for (const auto& t : p) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++common;
    }
  }
  if (common == 0) return 0.0;
  const double precision = static_cast<double>(common) / static_cast<double>(p.size());
  const double recall = static_cast<double>(common) / static_cast<double>(g.size());
  return 2 * precision * recall / (precision + recall);
}

PredictionSet parse_predictions(std::string_view text) {
  if (trim_view(text).empty()) return {};  // an empty file means no predictions
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("predictions: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::schema, "predictions: expected a JSON object of id -> answer");
  PredictionSet out;
  for (const auto& [id, v] : root.items()) {
    if (!v.is_string()) throw Error(ErrorCode::schema, "predictions: answer for " + id + " is not a string");
    out.entries.emplace(id, v.get<std::string>());
  }
  return out;
}

std::string serialize_predictions(const PredictionSet& predictions) {
  ordered_json root = ordered_json::object();
  for (const auto& [id, answer] : predictions.entries) root[id] = answer;
  return root.dump(1) + "\n";
}

std::pair<EvalReport, EvalReport> evaluate(const PredictionSet& predictions, const std::vector<QAInstance>& gold) {
  if (gold.empty()) throw Error(ErrorCode::invalid_argument, "evaluation needs at least one gold instance");

  std::set<std::string_view> gold_ids;
  for (const auto& q : gold) gold_ids.insert(q.id);
  std::vector<std::string> unknown;
  for (const auto& [id, _] : predictions.entries)
    if (!gold_ids.count(id)) unknown.push_back(id);
  if (!unknown.empty()) {
    std::string list;
    for (std::size_t i = 0; i < unknown.size() && i < 20; ++i) list += (i ? ", " : "") + unknown[i];
    if (unknown.size() > 20) list += ", ... (" + std::to_string(unknown.size()) + " total)";
    throw Error(ErrorCode::unknown_id, "prediction ids not in the eval set: " + list);
  }

  struct Tally {
    std::size_t n = 0, strict = 0, relaxed = 0;
  };
  std::map<ObjectCategory, Tally> by_category;
  std::size_t strict_hits = 0, relaxed_hits = 0, missing = 0, present = 0;
  double f1_sum = 0, gold_tokens = 0, predicted_tokens = 0;

  for (const auto& q : gold) {
    auto it = predictions.entries.find(q.id);
    const bool has_prediction = it != predictions.entries.end();
    const std::string_view pred = has_prediction ? std::string_view(it->second) : std::string_view();
    bool s = false, r = false;
    if (has_prediction) {
      s = answers_match(pred, q.answer.text, MatchSetting::strict);
      r = answers_match(pred, q.answer.text, MatchSetting::relaxed);
      f1_sum += token_f1(pred, q.answer.text);
      predicted_tokens += static_cast<double>(count_tokens(pred));
      ++present;
    } else {
      ++missing;
    }
    gold_tokens += static_cast<double>(count_tokens(q.answer.text));
    strict_hits += s;
    relaxed_hits += r;
    auto& t = by_category[q.category];
    ++t.n;
    t.strict += s;
    t.relaxed += r;
  }

  const double n = static_cast<double>(gold.size());
  EvalReport base;
  base.n = gold.size();
  base.missing = missing;
  base.token_f1 = f1_sum / n;
  base.gold_avg_tokens = gold_tokens / n;
  base.predicted_avg_tokens = present ? predicted_tokens / static_cast<double>(present) : 0.0;
  for (const auto& [c, t] : by_category)
    base.per_category[c] = {t.n, static_cast<double>(t.strict) / static_cast<double>(t.n),
                            static_cast<double>(t.relaxed) / static_cast<double>(t.n)};

  EvalReport strict = base;
  strict.setting = MatchSetting::strict;
  strict.accuracy = static_cast<double>(strict_hits) / n;
  EvalReport relaxed = base;
  relaxed.setting = MatchSetting::relaxed;
  relaxed.accuracy = static_cast<double>(relaxed_hits) / n;
  return {strict, relaxed};
}

std::string baseline_predict(std::string_view context, std::string_view question, int window_tokens) {
  const auto spans = tokenize_spans(context);
  if (spans.empty()) return "";
  const std::size_t window = static_cast<std::size_t>(std::max(1, window_tokens));

  std::set<std::string> question_words;
  for (const auto& w : word_tokens(question)) question_words.insert(to_lower(w));

  const std::size_t n = spans.size();
  const std::size_t width = std::min(window, n);
  std::size_t best_start = 0;
  std::size_t best_overlap = 0;
  for (std::size_t s = 0; s + width <= n; ++s) {
    std::set<std::string> hit;
    for (std::size_t k = s; k < s + width; ++k) {
      std::string tok = to_lower(context.substr(spans[k].begin, spans[k].end - spans[k].begin));
      if (question_words.count(tok)) hit.insert(std::move(tok));
    }
    if (hit.size() > best_overlap) {
      best_overlap = hit.size();
      best_start = s;
    }
  }
  const std::size_t b = spans[best_start].begin;
  const std::size_t e = spans[best_start + width - 1].end;
  return std::string(context.substr(b, e - b));
}

PredictionSet baseline_predict_all(const std::vector<QAInstance>& gold, int window_tokens) {
  PredictionSet out;
  for (const auto& q : gold) out.entries[q.id] = baseline_predict(q.context, q.question, window_tokens);
  return out;
}

ordered_json report_to_json(const EvalReport& r) {
  auto round4 = [](double v) { return std::round(v * 1e4) / 1e4; };
  ordered_json j;
  j["setting"] = to_string(r.setting);
  j["n"] = r.n;
  j["missing"] = r.missing;
  j["accuracy"] = round4(r.accuracy);
  j["token_f1"] = round4(r.token_f1);
  j["gold_avg_tokens"] = round4(r.gold_avg_tokens);
  j["predicted_avg_tokens"] = round4(r.predicted_avg_tokens);
  ordered_json cats = ordered_json::object();
  for (auto c : kAllCategories) {
    auto it = r.per_category.find(c);
    if (it == r.per_category.end()) continue;
    cats[to_string(c)] = {{"n", it->second.n},
                          {"strict_accuracy", round4(it->second.strict)},
                          {"relaxed_accuracy", round4(it->second.relaxed)}};
  }
  j["per_category"] = std::move(cats);
  return j;
}

}  // namespace kgqa
