#include "dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <random>

#include "digest.hpp"
#include "error.hpp"
#include "text.hpp"

namespace kgqa {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

// std::shuffle and the standard distributions are implementation-defined;
// mt19937_64 output and seed_seq are not, so this split is identical across
// standard libraries.
void fisher_yates(std::vector<std::size_t>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(items[i - 1], items[j]);
  }
}

std::mt19937_64 predicate_rng(std::uint64_t seed, const std::string& predicate) {
  const std::string h = sha256_hex(predicate);
  std::vector<std::uint32_t> words{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  for (std::size_t i = 0; i < 4; ++i) words.push_back(static_cast<std::uint32_t>(std::stoul(h.substr(i * 8, 8), nullptr, 16)));
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

DatasetSplit split_by_predicate(const std::vector<QAInstance>& instances, int threshold, double train_fraction,
                                std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw Error(ErrorCode::invalid_argument, "train_fraction must lie strictly between 0 and 1");
  if (threshold < 1) throw Error(ErrorCode::invalid_argument, "threshold must be at least 1");

  std::map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < instances.size(); ++i) groups[instances[i].predicate_label].push_back(i);

  std::vector<char> to_train(instances.size(), 1);
  for (auto& [predicate, members] : groups) {
    if (members.size() < static_cast<std::size_t>(threshold)) continue;
    auto rng = predicate_rng(seed, predicate);
    fisher_yates(members, rng);
    const auto n_train =
        static_cast<std::size_t>(std::floor(static_cast<double>(members.size()) * train_fraction + 1e-9));
    for (std::size_t k = n_train; k < members.size(); ++k) to_train[members[k]] = 0;
  }

  DatasetSplit split;
  split.seed = seed;
  for (std::size_t i = 0; i < instances.size(); ++i)
    (to_train[i] ? split.train : split.eval).push_back(instances[i]);
  return split;
}

std::string to_squad_json(const std::vector<QAInstance>& instances, std::string_view title) {
  ordered_json paragraphs = ordered_json::array();
  std::map<std::string_view, std::size_t> paragraph_of;
  for (const auto& q : instances) {
    auto [it, inserted] = paragraph_of.try_emplace(q.context, paragraphs.size());
    if (inserted) {
      ordered_json p;
      p["context"] = q.context;
      p["qas"] = ordered_json::array();
      paragraphs.push_back(std::move(p));
    }
    ordered_json qa;
    qa["id"] = q.id;
    qa["question"] = q.question;
    qa["is_impossible"] = false;
    ordered_json answer;
    answer["text"] = q.answer.text;
    answer["answer_start"] = q.answer.start;
    qa["answers"] = ordered_json::array({std::move(answer)});
    paragraphs[it->second]["qas"].push_back(std::move(qa));
  }
  ordered_json article;
  article["title"] = std::string(title);
  article["paragraphs"] = std::move(paragraphs);
  ordered_json root;
  root["version"] = std::string(kSquadVersion);
  root["data"] = ordered_json::array({std::move(article)});
  return root.dump();
}

std::vector<SquadQuestion> parse_squad_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("squad file: ") + e.what());
  }
  std::vector<SquadQuestion> out;
  try {
    for (const auto& article : root.at("data")) {
      for (const auto& paragraph : article.at("paragraphs")) {
        const std::string context = paragraph.at("context").get<std::string>();
        for (const auto& qa : paragraph.at("qas")) {
          SquadQuestion q;
          q.id = qa.at("id").get<std::string>();
          q.question = qa.at("question").get<std::string>();
          q.context = context;
          const auto& answers = qa.at("answers");
          if (!answers.empty()) {
            q.answer.text = answers[0].at("text").get<std::string>();
            q.answer.start = answers[0].at("answer_start").get<std::size_t>();
            q.answer.length = utf8_length(q.answer.text);
            if (!span_matches(context, q.answer))
              throw Error(ErrorCode::schema, "squad file: answer span of " + q.id + " does not match its context");
          }
          out.push_back(std::move(q));
        }
      }
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::schema, std::string("squad file: ") + e.what());
  }
  return out;
}

std::string to_meta_json(const std::vector<QAInstance>& instances) {
  ordered_json root = ordered_json::object();
  for (const auto& q : instances) {
    ordered_json m;
    m["predicate_label"] = q.predicate_label;
    m["category"] = to_string(q.category);
    m["variant"] = to_string(q.variant);
    root[q.id] = std::move(m);
  }
  return root.dump(1) + "\n";
}

std::map<std::string, InstanceMeta> parse_meta_json(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::parse, std::string("meta file: ") + e.what());
  }
  if (!root.is_object()) throw Error(ErrorCode::schema, "meta file: expected a JSON object");
  std::map<std::string, InstanceMeta> out;
  for (const auto& [id, m] : root.items()) {
    try {
      InstanceMeta meta;
      meta.predicate_label = m.at("predicate_label").get<std::string>();
      const auto cat = m.at("category").get<std::string>();
      const auto parsed_cat = parse_category(cat);
      if (!parsed_cat) throw Error(ErrorCode::schema, "meta file: unknown category '" + cat + "' for " + id);
      meta.category = *parsed_cat;
      const auto var = m.value("variant", std::string("unchanged"));
      const auto parsed_var = parse_variant(var);
      if (!parsed_var) throw Error(ErrorCode::schema, "meta file: unknown variant '" + var + "' for " + id);
      meta.variant = *parsed_var;
      out.emplace(id, std::move(meta));
    } catch (const json::exception& e) {
      throw Error(ErrorCode::schema, "meta file: entry " + id + ": " + e.what());
    }
  }
  return out;
}

std::vector<QAInstance> join_with_meta(const std::vector<SquadQuestion>& questions,
                                       const std::map<std::string, InstanceMeta>& meta) {
  std::vector<QAInstance> out;
  out.reserve(questions.size());
  for (const auto& q : questions) {
    auto it = meta.find(q.id);
    if (it == meta.end()) throw Error(ErrorCode::unknown_id, "no sidecar metadata for qa id " + q.id);
    out.push_back({q.id, it->second.variant, q.question, q.context, q.answer, it->second.predicate_label,
                   it->second.category});
  }
  return out;
}

}  // namespace kgqa
