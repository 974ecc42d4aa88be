#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "question_gen.hpp"

namespace kgqa {

inline constexpr std::string_view kSquadVersion = "prompt-orkg-1.0";

struct DatasetSplit {
  std::vector<QAInstance> train;
  std::vector<QAInstance> eval;
  std::uint64_t seed = 0;
};

/// Predicates with at least `threshold` instances send
/// floor(count * train_fraction) of them (after a seeded shuffle) to train
/// and the rest to eval; rarer predicates go entirely to train. Each
/// predicate's shuffle depends only on (seed, predicate) and the order of
/// its instances, so every variant of the same corpus splits identically.
DatasetSplit split_by_predicate(const std::vector<QAInstance>& instances, int threshold = 10,
                                double train_fraction = 0.75, std::uint64_t seed = 42);

/// SQuAD 2.0-shaped JSON: one article, instances sharing a context grouped
/// under one paragraph in first-appearance order.
std::string to_squad_json(const std::vector<QAInstance>& instances, std::string_view title);

struct SquadQuestion {
  std::string id;
  std::string question;
  std::string context;
  AnchoredAnswer answer;
};

std::vector<SquadQuestion> parse_squad_json(std::string_view text);

struct InstanceMeta {
  std::string predicate_label;
  ObjectCategory category = ObjectCategory::sentence;
  QuestionVariant variant = QuestionVariant::unchanged;
};

/// Sidecar: {"<qa id>": {"predicate_label", "category", "variant"}}.
std::string to_meta_json(const std::vector<QAInstance>& instances);
std::map<std::string, InstanceMeta> parse_meta_json(std::string_view text);

/// Rebuilds full instances from a SQuAD file plus its sidecar.
std::vector<QAInstance> join_with_meta(const std::vector<SquadQuestion>& questions,
                                       const std::map<std::string, InstanceMeta>& meta);

}  // namespace kgqa
