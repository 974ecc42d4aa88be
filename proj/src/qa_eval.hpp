#pragma once

#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "object_typer.hpp"
#include "question_gen.hpp"

namespace kgqa {

enum class MatchSetting { strict, relaxed };

std::string to_string(MatchSetting s);

/// Trim, lowercase, then strip any of . , ; : - ) ( _ + (and whitespace
/// they expose) from the end until nothing changes.
std::string normalize_answer(std::string_view s);

/// strict: normalized equality. relaxed: normalized gold contained in the
/// normalized prediction.
bool answers_match(std::string_view prediction, std::string_view gold, MatchSetting setting);

/// Bag-of-tokens F1 over normalized answers; 1.0 when both are empty.
double token_f1(std::string_view prediction, std::string_view gold);

struct PredictionSet {
  std::map<std::string, std::string> entries;
};

PredictionSet parse_predictions(std::string_view text);
std::string serialize_predictions(const PredictionSet& predictions);

struct CategoryAccuracy {
  std::size_t n = 0;
  double strict = 0;
  double relaxed = 0;
};

struct EvalReport {
  MatchSetting setting = MatchSetting::strict;
  double accuracy = 0;
  double token_f1 = 0;
  std::map<ObjectCategory, CategoryAccuracy> per_category;  // categories present in gold
  double gold_avg_tokens = 0;
  double predicted_avg_tokens = 0;  // over predictions that are present
  std::size_t n = 0;
  std::size_t missing = 0;
};

/// Scores per instance. Ids absent from the predictions count as wrong;
/// prediction ids absent from gold raise Error(unknown_id).
std::pair<EvalReport, EvalReport> evaluate(const PredictionSet& predictions, const std::vector<QAInstance>& gold);

/// Model-free answerer: the window of `window_tokens` consecutive context
/// tokens sharing the most distinct words with the question (earliest on
/// ties), returned as the exact context substring.
std::string baseline_predict(std::string_view context, std::string_view question, int window_tokens = 6);

PredictionSet baseline_predict_all(const std::vector<QAInstance>& gold, int window_tokens = 6);

nlohmann::ordered_json report_to_json(const EvalReport& report);

}  // namespace kgqa
