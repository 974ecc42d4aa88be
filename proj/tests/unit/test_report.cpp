#include <doctest.h>

#include "report.hpp"

using namespace kgqa;

namespace {

RunSummary run(const std::string& model, const std::string& stage, const std::string& variant, double f1,
               double acc) {
  RunSummary r;
  r.name = model + "-" + variant + "-" + stage;
  r.model = model;
  r.stage = stage;
  r.variant = variant;
  r.strict.n = 10;
  r.strict.token_f1 = f1;
  r.strict.accuracy = acc;
  r.strict.per_category[ObjectCategory::noun] = {6, acc, acc + 0.1};
  r.strict.per_category[ObjectCategory::url] = {4, 0.25, 0.5};
  r.relaxed = r.strict;
  r.relaxed.setting = MatchSetting::relaxed;
  r.relaxed.accuracy = acc + 0.1;
  return r;
}

}  // namespace

TEST_CASE("setting table cells are vanilla/trained with averages") {
  const std::vector<RunSummary> runs{run("roberta", "vanilla", "which", 0.10, 0.20),
                                     run("roberta", "trained", "which", 0.30, 0.40),
                                     run("bert", "vanilla", "which", 0.05, 0.10),
                                     run("roberta", "vanilla", "unchanged", 0.02, 0.04)};
  const auto text = render_setting_table(runs, MatchSetting::strict);
  CHECK(text.find("10.0/30.0 (20.0/40.0)") != std::string::npos);
  CHECK(text.find("5.0/- (10.0/-)") != std::string::npos);
  CHECK(text.find("7.5/30.0 (15.0/40.0)") != std::string::npos);  // row avg for "which"
  // "unchanged" rows come before "which".
  CHECK(text.find("unchanged") < text.find("which"));
  CHECK(text.find("*column avg*") != std::string::npos);
}

TEST_CASE("category table and json round trip") {
  const auto r = run("m", "trained", "what", 0.5, 0.5);
  const auto text = render_category_table(r);
  CHECK(text.find("Noun") != std::string::npos);
  CHECK(text.find("60.0") != std::string::npos);  // coverage of noun
  const auto back = run_from_json(nlohmann::json::parse(run_to_json(r).dump()));
  CHECK(back.model == "m");
  CHECK(back.strict.accuracy == doctest::Approx(0.5));
  CHECK(back.relaxed.accuracy == doctest::Approx(0.6));
  CHECK(back.strict.per_category.at(ObjectCategory::url).n == 4);
  CHECK(render_full_report({}).find("no evaluated runs") != std::string::npos);
  CHECK(aggregate_json({r})["runs"].size() == 1);
}
