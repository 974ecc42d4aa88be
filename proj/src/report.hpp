#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qa_eval.hpp"

namespace kgqa {

/// One evaluated run: a model at a training stage on a dataset variant.
struct RunSummary {
  std::string name;
  std::string model;
  std::string stage;  // "vanilla" or "trained"
  std::string variant;
  EvalReport strict;
  EvalReport relaxed;
};

nlohmann::ordered_json run_to_json(const RunSummary& run);
RunSummary run_from_json(const nlohmann::json& j);

/// Variant rows x model columns, cells "vanilla/trained" as
/// "F1 (accuracy)" percentages, plus row and column averages.
std::string render_setting_table(const std::vector<RunSummary>& runs, MatchSetting setting);

/// Category coverage and strict/relaxed accuracy for one run.
std::string render_category_table(const RunSummary& run);

/// Gold vs predicted average answer length per model and variant.
std::string render_token_table(const std::vector<RunSummary>& runs);

std::string render_full_report(const std::vector<RunSummary>& runs);
nlohmann::ordered_json aggregate_json(const std::vector<RunSummary>& runs);

}  // namespace kgqa
