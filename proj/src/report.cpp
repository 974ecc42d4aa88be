#include "report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>

#include "error.hpp"

namespace kgqa {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

const char* const kNotes[] = {
    "accuracy and token_f1 are computed per instance",
    "token_f1 is SQuAD-style macro bag-of-tokens F1 and is setting-independent",
    "relaxed accuracy checks that the normalized gold answer is contained in the normalized prediction",
};

EvalReport report_from_json(const json& j, MatchSetting setting) {
  EvalReport r;
  r.setting = setting;
  r.n = j.at("n").get<std::size_t>();
  r.missing = j.value("missing", std::size_t{0});
  r.accuracy = j.at("accuracy").get<double>();
  r.token_f1 = j.at("token_f1").get<double>();
  r.gold_avg_tokens = j.value("gold_avg_tokens", 0.0);
  r.predicted_avg_tokens = j.value("predicted_avg_tokens", 0.0);
  if (auto it = j.find("per_category"); it != j.end())
    for (const auto& [name, v] : it->items())
      if (auto c = parse_category(name))
        r.per_category[*c] = {v.at("n").get<std::size_t>(), v.at("strict_accuracy").get<double>(),
                              v.at("relaxed_accuracy").get<double>()};
  return r;
}

std::string pct(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", v * 100.0);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : s + std::string(width - s.size(), ' ');
}

struct Cell {
  std::optional<double> f1[2];   // [vanilla, trained]
  std::optional<double> acc[2];
};

std::string format_pair(const std::optional<double>* v) {
  return (v[0] ? pct(*v[0]) : "-") + "/" + (v[1] ? pct(*v[1]) : "-");
}

std::string format_cell(const Cell& c) { return format_pair(c.f1) + " (" + format_pair(c.acc) + ")"; }

int stage_index(const std::string& stage) { return stage == "trained" ? 1 : 0; }

Cell average(const std::vector<const Cell*>& cells) {
  Cell out;
  for (int s = 0; s < 2; ++s) {
    double f = 0, a = 0;
    int n = 0;
    for (const auto* c : cells)
      if (c->f1[s]) {
        f += *c->f1[s];
        a += *c->acc[s];
        ++n;
      }
    if (n) {
      out.f1[s] = f / n;
      out.acc[s] = a / n;
    }
  }
  return out;
}

std::vector<std::string> ordered_variants(const std::vector<RunSummary>& runs) {
  // Row order follows the published results layout.
  static const char* const kOrder[] = {"unchanged", "none", "what", "how", "which"};
  std::set<std::string> present;
  for (const auto& r : runs) present.insert(r.variant);
  std::vector<std::string> out;
  for (const char* v : kOrder)
    if (present.erase(v)) out.emplace_back(v);
  out.insert(out.end(), present.begin(), present.end());
  return out;
}

}  // namespace

ordered_json run_to_json(const RunSummary& run) {
  ordered_json j;
  j["run"] = run.name;
  j["model"] = run.model;
  j["stage"] = run.stage;
  j["variant"] = run.variant;
  j["strict"] = report_to_json(run.strict);
  j["relaxed"] = report_to_json(run.relaxed);
  j["notes"] = ordered_json::array();
  for (const char* n : kNotes) j["notes"].push_back(n);
  return j;
}

RunSummary run_from_json(const json& j) {
  try {
    RunSummary r;
    r.name = j.value("run", "");
    r.model = j.value("model", "unknown");
    r.stage = j.value("stage", "vanilla");
    r.variant = j.value("variant", "unknown");
    r.strict = report_from_json(j.at("strict"), MatchSetting::strict);
    r.relaxed = report_from_json(j.at("relaxed"), MatchSetting::relaxed);
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::schema, std::string("run report: ") + e.what());
  }
}

std::string render_setting_table(const std::vector<RunSummary>& runs, MatchSetting setting) {
  std::set<std::string> model_set;
  for (const auto& r : runs) model_set.insert(r.model);
  const std::vector<std::string> models(model_set.begin(), model_set.end());
  const auto variants = ordered_variants(runs);

  std::map<std::pair<std::string, std::string>, Cell> cells;
  for (const auto& r : runs) {
    const auto& rep = setting == MatchSetting::strict ? r.strict : r.relaxed;
    auto& c = cells[{r.variant, r.model}];
    const int s = stage_index(r.stage);
    c.f1[s] = rep.token_f1;
    c.acc[s] = rep.accuracy;
  }

  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"Dataset variant"};
  header.insert(header.end(), models.begin(), models.end());
  header.emplace_back("*row avg*");
  rows.push_back(header);
  for (const auto& v : variants) {
    std::vector<std::string> row{v};
    std::vector<const Cell*> in_row;
    for (const auto& m : models) {
      auto it = cells.find({v, m});
      if (it == cells.end()) {
        row.emplace_back("-");
        continue;
      }
      row.push_back(format_cell(it->second));
      in_row.push_back(&it->second);
    }
    row.push_back(format_cell(average(in_row)));
    rows.push_back(std::move(row));
  }
  std::vector<std::string> footer{"*column avg*"};
  for (const auto& m : models) {
    std::vector<const Cell*> in_col;
    for (const auto& v : variants)
      if (auto it = cells.find({v, m}); it != cells.end()) in_col.push_back(&it->second);
    footer.push_back(format_cell(average(in_col)));
  }
  footer.emplace_back("-");
  rows.push_back(std::move(footer));

  std::vector<std::size_t> widths(header.size(), 0);
  for (const auto& row : rows)
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());

  std::string out = setting == MatchSetting::strict
                        ? "F1 (accuracy), strict exact-match setting; cells are vanilla/trained\n"
                        : "F1 (accuracy), relaxed containment setting; cells are vanilla/trained\n";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::string line;
    for (std::size_t i = 0; i < rows[r].size(); ++i) line += (i ? " | " : "") + pad(rows[r][i], widths[i]);
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
    if (r == 0 || r + 2 == rows.size()) {
      std::size_t total = 0;
      for (auto w : widths) total += w;
      out += std::string(total + 3 * (widths.size() - 1), '-') + "\n";
    }
  }
  return out;
}

std::string render_category_table(const RunSummary& run) {
  std::string out = "Per-category accuracy (strict/relaxed) for " + run.model + ", variant " + run.variant + ", " +
                    run.stage + "\n";
  out += pad("Object category", 20) + " | " + pad("% coverage", 10) + " | % accuracy\n";
  std::vector<std::pair<ObjectCategory, CategoryAccuracy>> rows(run.strict.per_category.begin(),
                                                                 run.strict.per_category.end());
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& a, const auto& b) { return a.second.strict < b.second.strict; });
  for (const auto& [c, acc] : rows) {
    const double coverage = run.strict.n ? static_cast<double>(acc.n) / static_cast<double>(run.strict.n) : 0.0;
    out += pad(display_name(c), 20) + " | " + pad(pct(coverage), 10) + " | " + pct(acc.strict) + "/" +
           pct(acc.relaxed) + "\n";
  }
  return out;
}

std::string render_token_table(const std::vector<RunSummary>& runs) {
  struct Row {
    std::optional<double> gold;
    std::optional<double> predicted[2];
  };
  std::map<std::pair<std::string, std::string>, Row> rows;
  for (const auto& r : runs) {
    auto& row = rows[{r.model, r.variant}];
    row.gold = r.strict.gold_avg_tokens;
    row.predicted[stage_index(r.stage)] = r.strict.predicted_avg_tokens;
  }
  auto num = [](const std::optional<double>& v) {
    if (!v) return std::string("-");
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *v);
    return std::string(buf);
  };
  std::string out = "Average answer length in tokens; predicted is vanilla/trained\n";
  out += pad("Model", 28) + " | " + pad("Variant", 10) + " | " + pad("Gold", 6) + " | Predicted\n";
  for (const auto& [key, row] : rows)
    out += pad(key.first, 28) + " | " + pad(key.second, 10) + " | " + pad(num(row.gold), 6) + " | " +
           num(row.predicted[0]) + "/" + num(row.predicted[1]) + "\n";
  return out;
}

std::string render_full_report(const std::vector<RunSummary>& runs) {
  if (runs.empty()) return "no evaluated runs found\n";
  std::string out = render_setting_table(runs, MatchSetting::strict) + "\n" +
                    render_setting_table(runs, MatchSetting::relaxed) + "\n";
  for (const auto& r : runs) out += render_category_table(r) + "\n";
  out += render_token_table(runs);
  out += "\nNotes:\n";
  for (const char* n : kNotes) out += "  - " + std::string(n) + "\n";
  return out;
}

ordered_json aggregate_json(const std::vector<RunSummary>& runs) {
  ordered_json j;
  j["runs"] = ordered_json::array();
  for (const auto& r : runs) j["runs"].push_back(run_to_json(r));
  return j;
}

}  // namespace kgqa
