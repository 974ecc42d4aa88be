#include <doctest.h>

#include <set>

#include "question_gen.hpp"

using namespace kgqa;

TEST_CASE("template examples") {
  CHECK(make_question("approach name", QuestionVariant::what) == "What approach name?");
  CHECK(make_question("continent", QuestionVariant::none) == "Continent?");
  CHECK(make_question("sampling year", QuestionVariant::unchanged) == "sampling year");
  CHECK(make_question("type of nanocarrier", QuestionVariant::how) == "How type of nanocarrier?");
  CHECK(make_question("Approach name", QuestionVariant::which) == "Which approach name?");
}

TEST_CASE("template edge cases") {
  CHECK(make_question("HMM type", QuestionVariant::what) == "What HMM type?");
  CHECK(make_question("Is open source?", QuestionVariant::none) == "Is open source?");
  CHECK(make_question("Is open source?", QuestionVariant::what) == "What is open source?");
  CHECK(make_question("Has DOI", QuestionVariant::unchanged) == "Has DOI");
  CHECK(make_question("uses GPU cluster", QuestionVariant::which) == "Which uses GPU cluster?");
}

TEST_CASE("variant names round trip") {
  for (auto v : kAllVariants) CHECK(parse_variant(to_string(v)) == v);
  CHECK_FALSE(parse_variant("who"));
}

TEST_CASE("generate_all yields one aligned list per variant") {
  CleanCorpus c{
      {"P1", "C1", "material", "graphene", "graphene and silicon", {"graphene", 0, 8}},
      {"P1", "C1", "material", "silicon", "graphene and silicon", {"silicon", 13, 7}},
      {"P2", "C9", "has research problem", "transport", "charge transport", {"transport", 7, 9}},
  };
  const auto all = generate_all(c, default_tagger());
  REQUIRE(all.size() == 5);
  std::set<std::string> ids;
  for (const auto& [v, list] : all) {
    REQUIRE(list.size() == 3);
    CHECK(list[0].question == list[1].question);  // shared predicate
    for (std::size_t i = 0; i < list.size(); ++i) {
      CHECK(list[i].variant == v);
      CHECK(list[i].context == c[i].context);
      CHECK(list[i].answer == c[i].answer);
      CHECK(list[i].id.size() == 24);
      ids.insert(list[i].id);
    }
    CHECK(list[2].category == ObjectCategory::research_problem);
  }
  CHECK(ids.size() == 15);
  CHECK(all.at(QuestionVariant::unchanged)[0].question == "material");
  CHECK(generate_all(c, default_tagger()) == all);  // deterministic
}
